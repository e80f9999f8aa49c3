"""
SU(2)_k anyon model parameters.

A level k fixes the Kauffman variable A = i·exp(-iπ/(2(k+2))) and the quantum
dimension d = 2cos(π/(k+2)) = -(A² + A⁻²). The k → ∞ limit is a first-class
value (``INFINITY``) with A = i and d = 2 substituted directly.
"""

from __future__ import annotations

import math
import numbers
from dataclasses import dataclass
from typing import Any, Union

import numpy as np

from anyonwalk.exceptions import InvalidLevelError

INFINITY: float = math.inf

Level = Union[int, float]

_INFINITY_TOKENS = frozenset({"inf", "infinity", "∞"})


@dataclass(frozen=True)
class AnyonModel:
    """Parameters of the spin-1/2 anyons of SU(2)_k."""

    level: Level
    A: complex
    d: float

    @property
    def is_infinite(self) -> bool:
        return math.isinf(self.level)

    @property
    def is_abelian(self) -> bool:
        """k=1 anyons only pick up phases under exchange."""
        return self.level == 1

    @property
    def label(self) -> str:
        return format_level(self.level)

    @property
    def loop_value(self) -> complex:
        """Weight -(A² + A⁻²) of a closed loop in the bracket."""
        return -(self.A**2 + self.A**-2)

    def __str__(self) -> str:
        return f"SU(2)_{self.label} (d={self.d:.12g})"


def make_model(level: Any) -> AnyonModel:
    """
    Build the model for a level.

    Args:
        level: positive integer, ``INFINITY`` or one of the strings accepted by
            :func:`parse_level`

    Raises:
        InvalidLevelError: for levels below 1 and non-integer finite levels
    """
    k = parse_level(level)
    if math.isinf(k):
        return AnyonModel(level=INFINITY, A=1j, d=2.0)
    A = 1j * np.exp(-1j * math.pi / (2 * (k + 2)))
    d = 2.0 * math.cos(math.pi / (k + 2))
    return AnyonModel(level=k, A=complex(A), d=d)


def parse_level(value: Any) -> Level:
    """Normalize a level given as int, float infinity or string ('3', 'inf')."""
    if isinstance(value, bool):
        raise InvalidLevelError(value)
    if isinstance(value, str):
        token = value.strip().lower()
        if token in _INFINITY_TOKENS:
            return INFINITY
        try:
            value = int(token)
        except ValueError:
            raise InvalidLevelError(value) from None
    if isinstance(value, numbers.Integral):
        if value < 1:
            raise InvalidLevelError(value)
        return int(value)
    if isinstance(value, numbers.Real):
        if math.isinf(value) and value > 0:
            return INFINITY
        if float(value).is_integer() and value >= 1:
            return int(value)
    raise InvalidLevelError(value)


def format_level(level: Level) -> str:
    """Inverse of :func:`parse_level` for file names and headers."""
    return "inf" if math.isinf(level) else str(int(level))
