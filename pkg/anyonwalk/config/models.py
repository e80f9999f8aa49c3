"""
Pydantic Configuration Models for anyonwalk

Every simulation is described by a RunConfig. The same object is validated
from CLI flags or a YAML file and serialized into the header of every artifact.
"""

from __future__ import annotations

import math
from enum import Enum
from pathlib import Path
from typing import Any, Dict, List, Optional, Union

import yaml
from pydantic import (
    BaseModel,
    ConfigDict,
    Field,
    field_serializer,
    field_validator,
    model_validator,
)

from anyonwalk.engine.anyon_model import format_level, parse_level
from anyonwalk.engine.moment_table import MomentMode
from anyonwalk.engine.reference_models import OccupationLaw
from anyonwalk.exceptions import AnyonWalkError, ConfigurationError

# =============================================================================
# Enumerations
# =============================================================================


class SimulationMode(str, Enum):
    """Evolution engines selectable from the CLI."""

    EXACT = "exact"
    CIRCULANT = "circulant"
    CLOSED_FORM = "closed-form"
    RW = "rw"
    QW = "qw"
    DISORDER = "disorder"


class ProviderKind(str, Enum):
    """Where exact and circulant runs take their braid moments from."""

    TABLE = "table"
    ORACLE = "oracle"


# =============================================================================
# Nested settings
# =============================================================================


class DisorderSettings(BaseModel):
    """Abelian random-filling experiment."""

    model_config = ConfigDict(extra="forbid")

    phase: float = Field(default=math.pi / 2, description="Exchange phase φ in radians")
    occupation: OccupationLaw = Field(
        default=OccupationLaw.BERNOULLI, description="How islands are filled"
    )
    fill_p: float = Field(default=0.5, ge=0.0, le=1.0, description="Bernoulli filling probability")
    fixed_filling: int = Field(default=1, ge=0, description="Anyons per island for fixed filling")
    seeds: int = Field(default=1, ge=1, description="Number of disorder realizations")
    seed: int = Field(default=0, ge=0, description="Base seed of the ensemble")


# =============================================================================
# Main Configuration Model
# =============================================================================


class RunConfig(BaseModel):
    """
    Complete description of one simulation run.

    Can be loaded from a YAML file or constructed from CLI flags; ``to_dict``
    gives the JSON-safe form embedded in artifact headers.
    """

    model_config = ConfigDict(extra="forbid")

    mode: SimulationMode = Field(default=SimulationMode.EXACT, description="Evolution engine")
    level: Union[int, float] = Field(default=2, description="SU(2)_k level, integer or 'inf'")
    steps: int = Field(default=100, ge=0, description="Superoperator iterations t")
    s0: Optional[int] = Field(default=None, ge=0, description="Start site, ring centre if unset")
    n_sites: Optional[int] = Field(default=None, ge=1, description="Ring size N, 4t+1 if unset")
    moment_mode: MomentMode = Field(
        default=MomentMode.ASYMPTOTIC, description="Averaging of moments in circulant mode"
    )
    provider: ProviderKind = Field(default=ProviderKind.TABLE, description="Moment source")
    regularize: Optional[float] = Field(
        default=None, gt=0.0, description="Tikhonov ε for a singular normalization"
    )
    check_positivity: bool = Field(
        default=False, description="Validate the density matrix after every exact iteration"
    )
    output_dir: str = Field(default=".", description="Directory for CSV artifacts")
    emit_distributions: bool = Field(default=False, description="Write dist_t<t>.csv files")
    distributions_dir: Optional[str] = Field(
        default=None, description="Directory for dist_t<t>.csv files, output_dir if unset"
    )
    distribution_times: List[int] = Field(
        default_factory=list, description="Iterations to dump, the final one if empty"
    )
    workers: Optional[int] = Field(default=None, ge=1, description="Worker processes")
    disorder: DisorderSettings = Field(default_factory=DisorderSettings)

    @field_validator("level", mode="before")
    @classmethod
    def validate_level(cls, v: Any) -> Union[int, float]:
        try:
            return parse_level(v)
        except AnyonWalkError as e:
            raise ValueError(e.message) from None

    @field_serializer("level")
    def serialize_level(self, level: Union[int, float]) -> Union[int, str]:
        return "inf" if math.isinf(level) else int(level)

    @model_validator(mode="after")
    def validate_ring(self) -> "RunConfig":
        required = 4 * self.steps + 1
        if self.n_sites is not None and self.n_sites < required:
            raise ValueError(f"n_sites must be at least 4*steps+1 = {required}")
        if self.s0 is not None and self.s0 >= self.ring_size:
            raise ValueError(f"s0={self.s0} is off a ring of {self.ring_size} sites")
        if self.mode is SimulationMode.CLOSED_FORM and self.level != 2:
            raise ValueError("closed-form mode exists only for level 2")
        return self

    @property
    def ring_size(self) -> int:
        """N actually used: the explicit value, or 4t+1 (at least 9 for circulant runs)."""
        if self.n_sites is not None:
            return self.n_sites
        minimum = 9 if self.mode is SimulationMode.CIRCULANT else 1
        return max(4 * self.steps + 1, minimum)

    @property
    def level_label(self) -> str:
        return format_level(self.level)

    @classmethod
    def from_yaml(cls, path: Union[str, Path]) -> "RunConfig":
        """Load configuration from a YAML file."""
        with open(path, "r") as f:
            data = yaml.safe_load(f) or {}
        return cls(**data)

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "RunConfig":
        """Create configuration from a dictionary."""
        return cls(**data)

    def to_dict(self) -> Dict[str, Any]:
        """JSON-safe dictionary of all settings."""
        return self.model_dump(mode="json")

    def merge_with(self, overrides: Dict[str, Any]) -> "RunConfig":
        """Return a copy with ``overrides`` deep-merged on top."""
        merged = _deep_merge(self.to_dict(), overrides)
        return RunConfig(**merged)


# =============================================================================
# Utility Functions
# =============================================================================


def _deep_merge(base: Dict[str, Any], override: Dict[str, Any]) -> Dict[str, Any]:
    """Deep merge two dictionaries, with override taking precedence."""
    result = base.copy()
    for key, value in override.items():
        if key in result and isinstance(result[key], dict) and isinstance(value, dict):
            result[key] = _deep_merge(result[key], value)
        else:
            result[key] = value
    return result


def parse_levels(text: Union[str, List[Any]]) -> List[Union[int, float]]:
    """
    Parse a level list such as "1,2,3,inf".

    Raises:
        ConfigurationError: for an empty list or an invalid level
    """
    items = text.split(",") if isinstance(text, str) else list(text)
    tokens = [item for item in items if str(item).strip()]
    if not tokens:
        raise ConfigurationError(
            "Level list is empty", invalid_key="levels", suggestion="Pass e.g. --levels 1,2,inf"
        )
    return [parse_level(token) for token in tokens]


def get_default_config() -> RunConfig:
    """Get the default run configuration."""
    return RunConfig()
