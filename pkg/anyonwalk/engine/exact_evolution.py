"""
Exact V² walk on the spatial density matrix.

One iteration runs two coined steps, then traces out the coin and the fusion
space. On the walker alone this is the seven-band map

    |s><s'|  ->  Σ_{P,Q} coin(P,Q) · F_PQ(s, s') · |s+δ_P><s'+δ_Q|

where P, Q range over the coin paths, coin(P,Q) = Σ_c C_c^P conj(C_c^Q) and
F_PQ is the braid moment of the two paths. The eight nonzero (P,Q) terms land
on seven (δ_P, δ_Q) bands; the two (0, 0) terms share one.
"""

from __future__ import annotations

import logging
import time
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Any, Dict, Iterator, List, Optional, Tuple

import numpy as np
from scipy.linalg import hadamard
from scipy.stats import binom

from anyonwalk.engine.analysis import mean_position, raw_variance
from anyonwalk.engine.moment_table import MomentFamily, MomentProvider, WalkPath
from anyonwalk.exceptions import RingSizeError, SimulationError, TraceDriftError

logger = logging.getLogger(__name__)

TRACE_TOLERANCE = 1e-9
POSITIVITY_TOLERANCE = 1e-8
EIGENVALUE_CHECK_LIMIT = 64

Shift = Tuple[int, int]


# =============================================================================
# Coin
# =============================================================================


@dataclass(frozen=True)
class CoinCoefficients:
    """
    Coin amplitudes C_c^{ab} = <c|P_a H P_b H|c0> and their c-summed products.

    ``amplitudes[c, i]`` belongs to the i-th path of :class:`WalkPath`;
    ``products[i, j]`` = Σ_c amplitudes[c, i]·conj(amplitudes[c, j]).
    """

    amplitudes: np.ndarray
    products: np.ndarray
    initial_coin: int = 0

    def amplitude(self, coin: int, path: WalkPath) -> complex:
        return complex(self.amplitudes[coin, _PATH_INDEX[path]])

    def product(self, forward: WalkPath, backward: WalkPath) -> complex:
        return complex(self.products[_PATH_INDEX[forward], _PATH_INDEX[backward]])


_PATH_INDEX = {path: i for i, path in enumerate(WalkPath)}


@lru_cache(maxsize=2)
def coin_coefficients(initial_coin: int = 0) -> CoinCoefficients:
    """Derive all coin amplitudes from the Hadamard coin and the two projectors."""
    H = hadamard(2) / np.sqrt(2.0)
    projectors = [np.diag([1.0, 0.0]), np.diag([0.0, 1.0])]
    start = np.zeros(2)
    start[initial_coin] = 1.0

    amplitudes = np.zeros((2, len(WalkPath)), dtype=complex)
    for i, path in enumerate(WalkPath):
        a, b = path.coins
        amplitudes[:, i] = projectors[a] @ H @ projectors[b] @ H @ start

    products = np.einsum("ci,cj->ij", amplitudes, amplitudes.conj())
    return CoinCoefficients(amplitudes, products, initial_coin)


# =============================================================================
# Density matrices
# =============================================================================


def localized_state(s0: int, n_sites: int) -> np.ndarray:
    """|s0><s0| on a ring of ``n_sites``."""
    rho = np.zeros((n_sites, n_sites), dtype=complex)
    rho[s0, s0] = 1.0
    return rho


@dataclass
class DensityCheck:
    """Diagnostics of a spatial density matrix."""

    trace: complex
    hermiticity_defect: float
    min_eigenvalue: Optional[float] = None

    def is_valid(self, tolerance: float = 1e-10) -> bool:
        positive = self.min_eigenvalue is None or self.min_eigenvalue >= -POSITIVITY_TOLERANCE
        normalized = abs(self.trace - 1.0) <= tolerance
        return normalized and self.hermiticity_defect <= tolerance and positive


def check_density_matrix(
    rho: np.ndarray, eigenvalue_limit: int = EIGENVALUE_CHECK_LIMIT
) -> DensityCheck:
    """Trace and largest |ρ - ρ†| entry of ``rho``.

    The smallest eigenvalue is added for rings of at most ``eigenvalue_limit`` sites.
    """
    trace = complex(np.trace(rho))
    defect = float(np.max(np.abs(rho - rho.conj().T))) if rho.size else 0.0
    min_eig = None
    if rho.shape[0] <= eigenvalue_limit:
        min_eig = float(np.linalg.eigvalsh(0.5 * (rho + rho.conj().T))[0])
    else:
        logger.debug("Skipping eigenvalue check for N=%d", rho.shape[0])
    return DensityCheck(trace, defect, min_eig)


# =============================================================================
# Traces
# =============================================================================


@dataclass
class WalkSnapshot:
    """Site distribution after ``t`` superoperator iterations."""

    t: int
    distribution: np.ndarray
    sigma2_raw: float
    mean: float = 0.0

    @property
    def steps(self) -> int:
        return 2 * self.t

    @property
    def sigma2_scaled(self) -> float:
        return self.sigma2_raw / 4.0


@dataclass
class WalkTrace:
    """Per-iteration distributions and variances of one run."""

    s0: int
    n_sites: int
    mode: str
    label: str = ""
    snapshots: List[WalkSnapshot] = field(default_factory=list)
    metadata: Dict[str, Any] = field(default_factory=dict)
    duration_s: float = 0.0

    def record(self, t: int, distribution: np.ndarray) -> WalkSnapshot:
        p = np.clip(np.asarray(distribution, dtype=float), 0.0, None)
        snapshot = WalkSnapshot(
            t=t,
            distribution=p,
            sigma2_raw=raw_variance(p, self.s0),
            mean=mean_position(p, self.s0),
        )
        self.snapshots.append(snapshot)
        return snapshot

    def __iter__(self) -> Iterator[WalkSnapshot]:
        return iter(self.snapshots)

    def __len__(self) -> int:
        return len(self.snapshots)

    @property
    def final(self) -> WalkSnapshot:
        return self.snapshots[-1]

    @property
    def iterations(self) -> np.ndarray:
        return np.array([snap.t for snap in self.snapshots])

    @property
    def sites(self) -> np.ndarray:
        return np.arange(self.n_sites)

    def at(self, t: int) -> WalkSnapshot:
        for snap in self.snapshots:
            if snap.t == t:
                return snap
        raise KeyError(t)

    def figure_series(self) -> Tuple[np.ndarray, np.ndarray]:
        """(walk steps, raw σ²)."""
        return (
            np.array([snap.steps for snap in self.snapshots], dtype=float),
            np.array([snap.sigma2_raw for snap in self.snapshots]),
        )

    def scaled_series(self) -> Tuple[np.ndarray, np.ndarray]:
        """(iterations, σ² of ŝ)."""
        return (
            self.iterations.astype(float),
            np.array([snap.sigma2_scaled for snap in self.snapshots]),
        )

    def to_dict(self) -> Dict[str, Any]:
        return {
            "mode": self.mode,
            "label": self.label,
            "s0": self.s0,
            "n_sites": self.n_sites,
            "iterations": len(self.snapshots),
            "final_sigma2_raw": self.final.sigma2_raw if self.snapshots else None,
            "duration_s": self.duration_s,
            **self.metadata,
        }


# =============================================================================
# Superoperator
# =============================================================================


class Superoperator:
    """
    The seven-band map for one provider on a ring of ``n_sites``.

    Band weights coin(P,Q)·F_PQ(s, s') are tabulated once as N×N matrices.
    """

    def __init__(
        self,
        provider: MomentProvider,
        n_sites: int,
        coins: Optional[CoinCoefficients] = None,
    ) -> None:
        self.provider = provider
        self.n_sites = n_sites
        self.coins = coins or coin_coefficients()
        self.bands: Dict[Shift, np.ndarray] = {}

        for family in MomentFamily:
            forward, backward = family.paths
            weight = self.coins.product(forward, backward)
            if weight == 0:
                continue
            shift = (forward.displacement, backward.displacement)
            band = weight * provider.moment_matrix(family, n_sites)
            if shift in self.bands:
                self.bands[shift] = self.bands[shift] + band
            else:
                self.bands[shift] = band

    def __call__(self, rho: np.ndarray) -> np.ndarray:
        out = np.zeros_like(rho)
        for shift, band in self.bands.items():
            out += np.roll(band * rho, shift, axis=(0, 1))
        return out


def apply_step(
    rho: np.ndarray,
    provider: MomentProvider,
    coins: Optional[CoinCoefficients] = None,
    step: int = 1,
    superoperator: Optional[Superoperator] = None,
) -> np.ndarray:
    """
    One iteration of the walk.

    Raises:
        TraceDriftError: if the trace moves by more than 1e-9
    """
    op = superoperator or Superoperator(provider, rho.shape[0], coins)
    out = op(rho)
    before = complex(np.trace(rho))
    after = complex(np.trace(out))
    if abs(after - before) > TRACE_TOLERANCE:
        raise TraceDriftError(step, after, TRACE_TOLERANCE)
    return out


def minimum_ring(t: int) -> int:
    """Smallest ring on which t iterations never wrap."""
    return 4 * t + 1


def resolve_ring(t: int, n_sites: Optional[int], s0: Optional[int]) -> Tuple[int, int]:
    """Ring size and start site, defaulting to 4t+1 sites and the centre."""
    if t < 0:
        raise RingSizeError(t, 0, reason="iteration count must be nonnegative")
    required = minimum_ring(t)
    n = required if n_sites is None else n_sites
    if n < required:
        raise RingSizeError(n, required, reason=f"{t} iterations would wrap around the ring")
    start = n // 2 if s0 is None else s0
    if not 0 <= start < n:
        raise RingSizeError(n, start + 1, reason=f"start site {start} is off the ring")
    return n, start


def evolve(
    provider: MomentProvider,
    t: int,
    s0: Optional[int] = None,
    n_sites: Optional[int] = None,
    coins: Optional[CoinCoefficients] = None,
    check_positivity: bool = False,
    label: str = "",
) -> WalkTrace:
    """
    Iterate the walk ``t`` times from |s0><s0|.

    The trace holds the localized start at t=0 and one snapshot per iteration.

    Args:
        provider: source of the braid moments
        t: number of superoperator iterations (two walk steps each)
        s0: start site, the ring centre by default
        n_sites: ring size, at least 4t+1 (the default)
        coins: coin coefficients, derived for |c0> = |0> by default
        check_positivity: validate ρ after every iteration

    Raises:
        RingSizeError: if the ring is too small for ``t``
        TraceDriftError: if an iteration fails to preserve the trace
    """
    n, start = resolve_ring(t, n_sites, s0)
    began = time.perf_counter()
    logger.info("Exact evolution: %s, N=%d, t=%d", provider, n, t)

    op = Superoperator(provider, n, coins)
    rho = localized_state(start, n)
    trace = WalkTrace(s0=start, n_sites=n, mode="exact", label=label)
    trace.metadata["provider"] = provider.name
    trace.record(0, np.real(np.diag(rho)))

    for step in range(1, t + 1):
        rho = apply_step(rho, provider, step=step, superoperator=op)
        if check_positivity:
            _validate(rho, step)
        snap = trace.record(step, np.real(np.diag(rho)))
        logger.debug("t=%d trace=%.15f sigma2_raw=%.12g", step, np.trace(rho).real, snap.sigma2_raw)

    trace.duration_s = time.perf_counter() - began
    return trace


def evolve_density(
    provider: MomentProvider, t: int, s0: Optional[int] = None, n_sites: Optional[int] = None
) -> np.ndarray:
    """Density matrix after ``t`` iterations, for inspection and tests."""
    n, start = resolve_ring(t, n_sites, s0)
    op = Superoperator(provider, n)
    rho = localized_state(start, n)
    for step in range(1, t + 1):
        rho = apply_step(rho, provider, step=step, superoperator=op)
    return rho


def _validate(rho: np.ndarray, step: int) -> None:
    check = check_density_matrix(rho)
    if check.min_eigenvalue is not None and check.min_eigenvalue < -POSITIVITY_TOLERANCE:
        raise SimulationError(
            f"Density matrix has eigenvalue {check.min_eigenvalue:.3e} after step {step}",
            mode="exact",
            details={"step": step},
        )
    if check.hermiticity_defect > TRACE_TOLERANCE:
        raise SimulationError(
            f"Density matrix lost Hermiticity after step {step}",
            mode="exact",
            details={"step": step, "defect": check.hermiticity_defect},
        )


def exact_ising_distribution(s: Any, t: int, s0: int = 0) -> np.ndarray:
    """
    Site distribution of the exact k=2 walk.

    The F2, F3, F6 and F7 moments vanish on the diagonal at k=2, so ρ stays
    diagonal and each iteration moves by -2, 0, +2 with weights ¼, ½, ¼:
    p(s, t) = C(2t, t + (s - s0)/2) / 4^t for even s - s0.
    """
    offset = np.asarray(s) - s0
    even = offset % 2 == 0
    p = binom.pmf(t + offset // 2, 2 * t, 0.5)
    return np.where(even, p, 0.0)
