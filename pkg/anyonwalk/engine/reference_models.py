"""
Reference walks for comparison with the anyonic walk.

- classical_rw: the binomial random walk in double-site units.
- coherent_hadamard_qw: the ordinary coined Hadamard walk on the line.
- trivial_v2: the V² protocol without braiding, built from explicit Kraus
  operators rather than the moment machinery.
- abelian_disorder_evolve / disorder_ensemble: V² walks through islands holding
  random numbers of Abelian anyons.
"""

from __future__ import annotations

import logging
import time
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, List, Optional

import numpy as np
from scipy.linalg import hadamard
from scipy.stats import binom

from anyonwalk.engine.analysis import raw_variance
from anyonwalk.engine.exact_evolution import (
    WalkTrace,
    coin_coefficients,
    evolve,
    localized_state,
    resolve_ring,
)
from anyonwalk.engine.moment_table import AbelianPhaseProvider, WalkPath
from anyonwalk.engine.runner import map_parallel
from anyonwalk.exceptions import InvalidConfigValueError

logger = logging.getLogger(__name__)


@dataclass
class SiteDistribution:
    """Probabilities on integer positions measured from the start."""

    positions: np.ndarray
    probabilities: np.ndarray

    @property
    def variance(self) -> float:
        return raw_variance(self.probabilities, sites=self.positions)

    def probability_at(self, position: int) -> float:
        hits = np.nonzero(self.positions == position)[0]
        return float(self.probabilities[hits[0]]) if hits.size else 0.0


# =============================================================================
# Classical and coherent walks
# =============================================================================


def classical_rw(t: int) -> SiteDistribution:
    """Unit ±1 random walk after ``t`` steps, positions in ŝ units; variance t."""
    j = np.arange(t + 1)
    return SiteDistribution(positions=2 * j - t, probabilities=binom.pmf(j, t, 0.5))


def coherent_hadamard_qw(t_steps: int, coin0: int = 0) -> SiteDistribution:
    """
    Coined Hadamard walk: coin flip, then coin 0 moves left and coin 1 right.

    Amplitudes live on positions -t..t; the returned distribution covers them all.
    """
    size = 2 * t_steps + 1
    H = hadamard(2) / np.sqrt(2.0)
    psi = np.zeros((size, 2), dtype=complex)
    psi[t_steps, coin0] = 1.0
    for _ in range(t_steps):
        psi = psi @ H.T
        moved = np.zeros_like(psi)
        moved[:-1, 0] = psi[1:, 0]
        moved[1:, 1] = psi[:-1, 1]
        psi = moved
    probabilities = np.sum(np.abs(psi) ** 2, axis=1)
    return SiteDistribution(positions=np.arange(-t_steps, t_steps + 1), probabilities=probabilities)


# =============================================================================
# V² walks without braiding
# =============================================================================


def _shift(rho: np.ndarray, displacement: int, axis: int) -> np.ndarray:
    return np.roll(rho, displacement, axis=axis)


def trivial_v2(t: int, s0: Optional[int] = None, n_sites: Optional[int] = None) -> WalkTrace:
    """
    V² walk with trivial statistics, ρ -> Σ_c E_c ρ E_c†.

    E_c = Σ_P C_c^P S_P with S_P the shift by the path displacement. This
    applies the Kraus operators directly and shares no code with the
    superoperator bands, so it serves as an independent check of the k=1 walk.
    """
    n, start = resolve_ring(t, n_sites, s0)
    coins = coin_coefficients()
    rho = localized_state(start, n)
    trace = WalkTrace(s0=start, n_sites=n, mode="trivial", label="trivial")
    trace.record(0, np.real(np.diag(rho)))
    began = time.perf_counter()

    for step in range(1, t + 1):
        out = np.zeros_like(rho)
        for coin in (0, 1):
            left = sum(
                coins.amplitude(coin, path) * _shift(rho, path.displacement, 0)
                for path in WalkPath
            )
            out += sum(
                np.conj(coins.amplitude(coin, path)) * _shift(left, path.displacement, 1)
                for path in WalkPath
            )
        rho = out
        trace.record(step, np.real(np.diag(rho)))

    trace.duration_s = time.perf_counter() - began
    return trace


# =============================================================================
# Abelian disorder
# =============================================================================


class OccupationLaw(str, Enum):
    BERNOULLI = "bernoulli"
    FIXED = "fixed"


@dataclass
class DisorderConfig:
    """
    Random filling of the islands with Abelian anyons.

    Island s holds n_s anyons and contributes θ_s = n_s·φ/2 per exchange.
    """

    phase: float = np.pi / 2
    occupation: OccupationLaw = OccupationLaw.BERNOULLI
    fill_p: float = 0.5
    fixed_filling: int = 1
    seed: int = 0

    def __post_init__(self) -> None:
        self.occupation = OccupationLaw(self.occupation)
        if not 0.0 <= self.fill_p <= 1.0:
            raise InvalidConfigValueError(
                "fill_p", self.fill_p, expected_type="probability in [0, 1]"
            )
        if self.fixed_filling < 0:
            raise InvalidConfigValueError(
                "fixed_filling", self.fixed_filling, expected_type="nonnegative integer"
            )

    def fillings(self, n_sites: int, seed: Optional[int] = None) -> np.ndarray:
        if self.occupation is OccupationLaw.FIXED:
            return np.full(n_sites, self.fixed_filling, dtype=int)
        rng = np.random.default_rng(self.seed if seed is None else seed)
        return rng.binomial(1, self.fill_p, size=n_sites)

    def island_phases(self, n_sites: int, seed: Optional[int] = None) -> np.ndarray:
        return self.fillings(n_sites, seed) * self.phase / 2.0

    def to_dict(self) -> Dict[str, Any]:
        return {
            "phase": self.phase,
            "occupation": self.occupation.value,
            "fill_p": self.fill_p,
            "fixed_filling": self.fixed_filling,
            "seed": self.seed,
        }


def abelian_disorder_evolve(
    t: int,
    config: DisorderConfig,
    s0: Optional[int] = None,
    n_sites: Optional[int] = None,
    seed: Optional[int] = None,
) -> WalkTrace:
    """Exact walk with the phases of one random filling."""
    n, start = resolve_ring(t, n_sites, s0)
    run_seed = config.seed if seed is None else seed
    provider = AbelianPhaseProvider(config.island_phases(n, run_seed))
    trace = evolve(provider, t, s0=start, n_sites=n, label="disorder")
    trace.mode = "disorder"
    trace.metadata.update({"seed": run_seed, "disorder": config.to_dict()})
    return trace


def _disorder_run(task: Dict[str, Any]) -> WalkTrace:
    return abelian_disorder_evolve(
        task["t"], task["config"], s0=task["s0"], n_sites=task["n_sites"], seed=task["seed"]
    )


@dataclass
class DisorderEnsemble:
    """Seed ensemble of disorder runs and its averages."""

    traces: List[WalkTrace]
    seeds: List[int]
    mean_distribution: np.ndarray = field(init=False)
    mean_variance: np.ndarray = field(init=False)
    variance_stderr: np.ndarray = field(init=False)
    mean_displacement: float = field(init=False)
    displacement_stderr: float = field(init=False)

    def __post_init__(self) -> None:
        variances = np.array([trace.figure_series()[1] for trace in self.traces])
        finals = np.array([trace.final.distribution for trace in self.traces])
        displacements = np.array([trace.final.mean for trace in self.traces])
        count = len(self.traces)

        self.mean_distribution = finals.mean(axis=0)
        self.mean_variance = variances.mean(axis=0)
        self.variance_stderr = _stderr(variances)
        self.mean_displacement = float(displacements.mean())
        self.displacement_stderr = float(_stderr(displacements)) if count > 1 else 0.0

    @property
    def steps(self) -> np.ndarray:
        return self.traces[0].figure_series()[0]

    def averaged_trace(self) -> WalkTrace:
        """Seed-averaged variance series packed as a trace (final distribution averaged)."""
        first = self.traces[0]
        trace = WalkTrace(s0=first.s0, n_sites=first.n_sites, mode="disorder", label="ensemble")
        for t in first.iterations:
            distribution = np.mean([tr.at(int(t)).distribution for tr in self.traces], axis=0)
            trace.record(int(t), distribution)
        trace.metadata.update({"seeds": len(self.seeds), "disorder": first.metadata["disorder"]})
        return trace


def _stderr(values: np.ndarray) -> np.ndarray:
    count = values.shape[0]
    if count < 2:
        return np.zeros(values.shape[1:])
    return values.std(axis=0, ddof=1) / np.sqrt(count)


def ensemble_seeds(base_seed: int, count: int) -> List[int]:
    """Independent, reproducible child seeds of ``base_seed``."""
    children = np.random.SeedSequence(base_seed).spawn(count)
    return [int(child.generate_state(1, dtype=np.uint64)[0]) for child in children]


def disorder_ensemble(
    t: int,
    config: DisorderConfig,
    seeds: int = 32,
    s0: Optional[int] = None,
    n_sites: Optional[int] = None,
    workers: Optional[int] = None,
) -> DisorderEnsemble:
    """Run ``seeds`` disorder realizations in parallel and average them."""
    if seeds < 1:
        raise InvalidConfigValueError("seeds", seeds, expected_type="integer >= 1")
    n, start = resolve_ring(t, n_sites, s0)
    seed_list = ensemble_seeds(config.seed, seeds)
    tasks = [
        {"t": t, "config": config, "s0": start, "n_sites": n, "seed": seed} for seed in seed_list
    ]
    logger.info("Disorder ensemble: %d seeds, t=%d, N=%d", seeds, t, n)
    traces = map_parallel(_disorder_run, tasks, workers=workers)
    return DisorderEnsemble(traces=traces, seeds=seed_list)
