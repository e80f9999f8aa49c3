"""
Variance analysis for walk outputs.

Two views of the same series are used throughout:

- walk-step view: raw site variance against walk steps (two per superoperator
  iteration). Fits and slopes default to this view.
- double-site view: variance of ŝ = (s - s0)/2 against iterations, i.e. the raw
  variance divided by four.

Going from the first view to the second halves time and quarters variance, so
K2 is unchanged and K3 halves.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Any, Dict, Optional, Sequence, Tuple

import numpy as np

from anyonwalk.exceptions import DistributionError, FitError, InvalidConfigValueError

logger = logging.getLogger(__name__)

DISTRIBUTION_TOLERANCE = 1e-8
MIN_FIT_POINTS = 3

Window = Tuple[Optional[float], Optional[float]]


# =============================================================================
# Moments of distributions
# =============================================================================


def _normalized(distribution: Sequence[float]) -> np.ndarray:
    p = np.asarray(distribution, dtype=float)
    total = float(p.sum())
    if abs(total - 1.0) > DISTRIBUTION_TOLERANCE:
        raise DistributionError(total, DISTRIBUTION_TOLERANCE)
    return p


def _positions(p: np.ndarray, sites: Optional[Sequence[float]]) -> np.ndarray:
    return np.arange(p.size, dtype=float) if sites is None else np.asarray(sites, dtype=float)


def mean_position(
    distribution: Sequence[float], s0: float = 0.0, sites: Optional[Sequence[float]] = None
) -> float:
    """<s - s0> in site units."""
    p = _normalized(distribution)
    return float(np.dot(p, _positions(p, sites) - s0))


def raw_variance(
    distribution: Sequence[float], s0: float = 0.0, sites: Optional[Sequence[float]] = None
) -> float:
    """
    <s²> - <s>² in site units.

    Args:
        distribution: probabilities, indexed by site unless ``sites`` is given
        s0: origin; the variance does not depend on it but the moments are
            taken about it for numerical stability
        sites: positions of the entries of ``distribution``

    Raises:
        DistributionError: if the distribution does not sum to 1 within 1e-8
    """
    p = _normalized(distribution)
    x = _positions(p, sites) - s0
    mean = np.dot(p, x)
    return float(np.dot(p, x * x) - mean * mean)


def scaled_variance(
    distribution: Sequence[float], s0: float = 0.0, sites: Optional[Sequence[float]] = None
) -> float:
    """Variance in double-site units ŝ = (s - s0)/2."""
    return raw_variance(distribution, s0, sites) / 4.0


def total_variation(p: Sequence[float], q: Sequence[float]) -> float:
    """½·Σ|p - q| between two distributions on the same sites."""
    a = np.asarray(p, dtype=float)
    b = np.asarray(q, dtype=float)
    if a.shape != b.shape:
        raise InvalidConfigValueError(
            "distribution",
            f"{a.shape} vs {b.shape}",
            reason="distributions live on different sites",
        )
    return 0.5 * float(np.abs(a - b).sum())


def check_monotone_spreading(variances: Sequence[float], tolerance: float = 1e-12) -> bool:
    """True when the variance series never decreases; a decrease is logged, not raised."""
    v = np.asarray(variances, dtype=float)
    drops = np.nonzero(np.diff(v) < -tolerance)[0]
    if drops.size:
        logger.warning(
            "Variance decreases at %d iteration(s), first after index %d", drops.size, drops[0]
        )
        return False
    return True


# =============================================================================
# Fits
# =============================================================================


@dataclass
class VarianceFit:
    """Least-squares fit σ² = K2·t² + K3·t (+ offset)."""

    K2: float
    K3: float
    offset: float
    window: Window
    residual: float
    points: int

    def to_dict(self) -> Dict[str, Any]:
        return {
            "K2": self.K2,
            "K3": self.K3,
            "offset": self.offset,
            "residual": self.residual,
            "window": list(self.window),
            "points": self.points,
        }

    def __str__(self) -> str:
        return (
            f"σ² = {self.K2:.6g}·t² + {self.K3:.6g}·t + {self.offset:.3g} "
            f"(rms {self.residual:.3g}, {self.points} points)"
        )


def parse_window(text: Optional[str]) -> Window:
    """
    Parse "a:b" into an inclusive window on x values; either side may be empty.

    Raises:
        InvalidConfigValueError: if the text is not of that form
    """
    if text is None or text.strip() in ("", ":"):
        return (None, None)
    parts = text.split(":")
    if len(parts) != 2:
        raise InvalidConfigValueError("window", text, expected_type="'start:stop'")
    try:
        bounds = tuple(float(part) if part.strip() else None for part in parts)
    except ValueError:
        raise InvalidConfigValueError("window", text, expected_type="'start:stop'") from None
    lo, hi = bounds
    if lo is not None and hi is not None and lo > hi:
        raise InvalidConfigValueError("window", text, reason="start exceeds stop")
    return (lo, hi)


def trailing_window(x: Sequence[float], count: Optional[int] = None) -> Window:
    """Window covering the last ``count`` x values, by default the last half."""
    values = np.asarray(x, dtype=float)
    if values.size == 0:
        return (None, None)
    count = values.size // 2 if count is None else count
    count = max(1, min(count, values.size))
    return (float(values[-count]), float(values[-1]))


def select_window(
    x: Sequence[float], y: Sequence[float], window: Optional[Window] = None
) -> Tuple[np.ndarray, np.ndarray]:
    xs = np.asarray(x, dtype=float)
    ys = np.asarray(y, dtype=float)
    if window is None:
        return xs, ys
    lo, hi = window
    mask = np.ones(xs.shape, dtype=bool)
    if lo is not None:
        mask &= xs >= lo
    if hi is not None:
        mask &= xs <= hi
    return xs[mask], ys[mask]


def _lstsq(
    columns: Sequence[np.ndarray], x: np.ndarray, y: np.ndarray, window: Optional[Window]
) -> Tuple[np.ndarray, float]:
    distinct = np.unique(x).size
    if distinct < MIN_FIT_POINTS:
        raise FitError(distinct, MIN_FIT_POINTS, window)
    design = np.column_stack(columns)
    coeffs, *_ = np.linalg.lstsq(design, y, rcond=None)
    residual = float(np.sqrt(np.mean((design @ coeffs - y) ** 2)))
    return coeffs, residual


def fit_quadratic(
    x: Sequence[float],
    y: Sequence[float],
    window: Optional[Window] = None,
    with_offset: bool = False,
) -> VarianceFit:
    """
    Fit σ² = K2·t² + K3·t, without a constant term unless ``with_offset``.

    Raises:
        FitError: if the window holds fewer than three distinct t values
    """
    xs, ys = select_window(x, y, window)
    columns = [xs**2, xs] + ([np.ones_like(xs)] if with_offset else [])
    coeffs, residual = _lstsq(columns, xs, ys, window)
    offset = float(coeffs[2]) if with_offset else 0.0
    return VarianceFit(
        K2=float(coeffs[0]),
        K3=float(coeffs[1]),
        offset=offset,
        window=window or (None, None),
        residual=residual,
        points=int(xs.size),
    )


def fit_slope(
    x: Sequence[float], y: Sequence[float], window: Optional[Window] = None
) -> VarianceFit:
    """Straight-line fit σ² = K3·t + offset, reported with K2 = 0."""
    xs, ys = select_window(x, y, window)
    coeffs, residual = _lstsq([xs, np.ones_like(xs)], xs, ys, window)
    return VarianceFit(
        K2=0.0,
        K3=float(coeffs[0]),
        offset=float(coeffs[1]),
        window=window or (None, None),
        residual=residual,
        points=int(xs.size),
    )


def to_double_site_view(x: Sequence[float], y: Sequence[float]) -> Tuple[np.ndarray, np.ndarray]:
    """Convert a walk-step series (steps, raw σ²) to (iterations, scaled σ²)."""
    return np.asarray(x, dtype=float) / 2.0, np.asarray(y, dtype=float) / 4.0
