"""
Circulant approximation of the walk.

Replacing every site-dependent moment by its ring average makes the effective
Kraus generators circulant, so the whole channel is diagonal in the Fourier
basis f_r(s) = ω^{rs}/√N, ω = e^{2πi/N}. After normalizing by
Λ = M^{-1/2}, M = Σ E†E, one iteration multiplies each Fourier element of the
density matrix by

    G(r, l) = (ν(r)·ν(l))^{-1/2} · Σ_{x,y} μ_xy · ω^{φ_x·r - φ_y·l}

with band phases φ_a = +2, φ_d = 0, φ_b = -2 and ν(m) the eigenvalues of M.
"""

from __future__ import annotations

import logging
import math
import time
from dataclasses import dataclass
from typing import Any, Dict, List, Optional

import numpy as np
from scipy.linalg import circulant, dft, fractional_matrix_power
from scipy.stats import binom

from anyonwalk.engine.anyon_model import AnyonModel
from anyonwalk.engine.braid_oracle import markov_expectation
from anyonwalk.engine.exact_evolution import (
    WalkTrace,
    coin_coefficients,
    resolve_ring,
)
from anyonwalk.engine.moment_table import (
    MIN_AVERAGING_SITES,
    KappaPair,
    MomentMode,
    TranslationInvariantProvider,
    WalkPath,
    band_coefficients,
    kappas,
    path_word,
)
from anyonwalk.exceptions import RingSizeError, SingularNormalizationError

logger = logging.getLogger(__name__)

SINGULAR_THRESHOLD = 1e-9
DEFAULT_REGULARIZATION = 1e-8
EXPLICIT_CHANNEL_LIMIT = 32

BAND_PHASES: Dict[str, int] = {"a": 2, "d": 0, "b": -2}


# =============================================================================
# Fourier factor
# =============================================================================


@dataclass(frozen=True, eq=False)
class FourierFactor:
    """One-iteration multiplier of the Fourier-transformed density matrix."""

    n_sites: int
    mu: Dict[str, complex]
    nu: np.ndarray
    kappa: KappaPair
    mode: MomentMode
    regularization: Optional[float] = None
    label: str = ""

    def _band_vectors(self, modes: np.ndarray) -> Dict[str, np.ndarray]:
        return {
            band: np.exp(2j * math.pi * phase * modes / self.n_sites)
            for band, phase in BAND_PHASES.items()
        }

    def matrix(self) -> np.ndarray:
        """G(r, l) for all r, l as an N×N array."""
        modes = np.arange(self.n_sites)
        vectors = self._band_vectors(modes)
        numerator = np.zeros((self.n_sites, self.n_sites), dtype=complex)
        for pair, weight in self.mu.items():
            if weight == 0:
                continue
            x, y = pair
            numerator += weight * np.outer(vectors[x], vectors[y].conj())
        scale = 1.0 / np.sqrt(self.nu)
        return scale[:, None] * numerator * scale[None, :]

    def G(self, r: int, l: int) -> complex:
        return complex(self.matrix()[r % self.n_sites, l % self.n_sites])

    def to_dict(self) -> Dict[str, Any]:
        return {
            "n_sites": self.n_sites,
            "mode": self.mode.value,
            "kappa": self.kappa.to_dict(),
            "min_nu": float(self.nu.min()),
            "regularization": self.regularization,
        }


def normalization_spectrum(
    kappa: KappaPair, n_sites: int, regularize: Optional[float] = None
) -> np.ndarray:
    """
    Fourier eigenvalues ν(m) of M, optionally shifted by a Tikhonov ε.

    Raises:
        SingularNormalizationError: if min ν < 1e-9 and no ε is given
    """
    nu = kappa.nu(n_sites)
    worst = int(np.argmin(nu))
    if nu[worst] < SINGULAR_THRESHOLD:
        if regularize is None:
            raise SingularNormalizationError(float(nu[worst]), worst, n_sites)
        logger.warning(
            "Normalization eigenvalue %.3e at mode %d regularized with eps=%g",
            nu[worst],
            worst,
            regularize,
        )
        nu = nu + regularize
    return nu


def build_fourier_factor(
    model: AnyonModel,
    n_sites: int,
    mode: MomentMode = MomentMode.ASYMPTOTIC,
    regularize: Optional[float] = None,
    provider: Optional[TranslationInvariantProvider] = None,
) -> FourierFactor:
    """
    Assemble G from the averaged band coefficients and the κ spectrum.

    Raises:
        RingSizeError: if ``n_sites`` < 9
        SingularNormalizationError: see :func:`normalization_spectrum`
    """
    if n_sites < MIN_AVERAGING_SITES:
        raise RingSizeError(
            n_sites, MIN_AVERAGING_SITES, reason="circulant averaging needs N >= 9"
        )
    mu = band_coefficients(model, mode, n_sites, provider)
    kappa = kappas(model, mode, n_sites, provider)
    raw_nu = kappa.nu(n_sites)
    nu = normalization_spectrum(kappa, n_sites, regularize)
    logger.debug(
        "Fourier factor %s N=%d: kappa1=%.12g kappa2=%s",
        model.label,
        n_sites,
        kappa.kappa1,
        kappa.kappa2,
    )
    return FourierFactor(
        n_sites=n_sites,
        mu=mu,
        nu=nu,
        kappa=kappa,
        mode=mode,
        regularization=None if np.array_equal(raw_nu, nu) else regularize,
        label=model.label,
    )


# =============================================================================
# Propagation
# =============================================================================


def evolve_circulant(factor: FourierFactor, t: int, s0: Optional[int] = None) -> WalkTrace:
    """
    Iterate the circulant channel ``t`` times from |s0><s0|.

    With ρ̂(r, l, 0) = ω^{-s0(r-l)}/N the diagonal after t iterations is
    p(s) = (1/N²)·Σ_u ω^{(s-s0)u}·H(u), H(u) = Σ_r G(r, r-u)^t, which one
    inverse FFT evaluates for all s.

    A regularized factor does not preserve the trace. Its distributions are
    renormalized every iteration and the largest |Σp - 1| seen is kept in
    ``trace.metadata["trace_deficit"]``.
    """
    n, start = resolve_ring(t, factor.n_sites, s0)
    began = time.perf_counter()
    logger.info(
        "Circulant evolution: level %s, N=%d, t=%d, %s", factor.label, n, t, factor.mode.value
    )

    G = factor.matrix()
    r = np.arange(n)
    partner = (r[:, None] - r[None, :]) % n  # partner[r, u] = r - u
    trace = WalkTrace(s0=start, n_sites=n, mode="circulant", label=factor.label)
    trace.metadata["moment_mode"] = factor.mode.value
    regularized = factor.regularization is not None
    deficit = 0.0

    power = np.ones_like(G)
    for step in range(t + 1):
        if step:
            power = power * G
        H = power[r[:, None], partner].sum(axis=0)
        centred = np.fft.ifft(H).real / n
        if regularized:
            centred = np.clip(centred, 0.0, None)
            total = float(centred.sum())
            deficit = max(deficit, abs(total - 1.0))
            centred = centred / total
        trace.record(step, np.roll(centred, start))
        logger.debug("t=%d sigma2_raw=%.12g", step, trace.final.sigma2_raw)

    if regularized:
        trace.metadata["trace_deficit"] = deficit
        logger.warning(
            "Regularized channel (eps=%g) lost up to %.3e of the trace; renormalized",
            factor.regularization,
            deficit,
        )
    trace.duration_s = time.perf_counter() - began
    return trace


def ising_closed_form(s: Any, t: int, s0: int = 0) -> np.ndarray:
    """
    Binomial distribution of the k=2 circulant walk.

    p(s, t) = C(t, j)/2^t with j = (2t - (s - s0))/4 when j is an integer in
    [0, t], else 0. In double-site units ŝ = (s - s0)/2 the variance is t.
    """
    offset = 2 * t - (np.asarray(s) - s0)
    whole = offset % 4 == 0
    return np.where(whole, binom.pmf(offset // 4, t, 0.5), 0.0)


# =============================================================================
# Explicit small-N channel
# =============================================================================


def shift_operator(n_sites: int) -> np.ndarray:
    """ĥ = Σ_s |s><s+1| on the ring."""
    return circulant(np.eye(n_sites)[-1])


def fourier_matrix(n_sites: int) -> np.ndarray:
    """Unitary F with columns f_r(s) = ω^{rs}/√N, so F†ĥF = diag(ω^r)."""
    return dft(n_sites, scale="sqrtn").conj()


@dataclass
class ExplicitChannel:
    """Dense matrices of the normalized circulant channel."""

    n_sites: int
    kraus: List[np.ndarray]
    M: np.ndarray
    Lambda: np.ndarray
    F: np.ndarray

    def normalization_residual(self) -> float:
        """‖Λ²M - 1‖ in the spectral norm."""
        identity = np.eye(self.n_sites)
        return float(np.linalg.norm(self.Lambda @ self.Lambda @ self.M - identity, 2))

    def propagate(self, rho: np.ndarray, t: int = 1) -> np.ndarray:
        """Apply ρ -> Σ_c (E_c Λ) ρ (E_c Λ)† ``t`` times."""
        normalized = [K @ self.Lambda for K in self.kraus]
        for _ in range(t):
            rho = sum(K @ rho @ K.conj().T for K in normalized)
        return rho


def explicit_circulant_channel(model: AnyonModel, n_sites: int) -> ExplicitChannel:
    """
    Build the circulant Kraus generators as N×N matrices.

    E_c = Σ_P C_c^P <Φ0|W_P|Φ0> ĥ^{-δ_P}, with the single-word expectations
    taken from the bracket state sum. On disjoint strands pair moments
    factorize into these expectations, so the channel reproduces the
    ASYMPTOTIC Fourier factor.

    Raises:
        RingSizeError: if ``n_sites`` exceeds 32 or is below 9
    """
    if not MIN_AVERAGING_SITES <= n_sites <= EXPLICIT_CHANNEL_LIMIT:
        raise RingSizeError(
            n_sites,
            MIN_AVERAGING_SITES,
            reason=f"explicit channel is built for 9 <= N <= {EXPLICIT_CHANNEL_LIMIT}",
        )
    coins = coin_coefficients()
    h = shift_operator(n_sites)
    kraus = []
    for coin in (0, 1):
        E = np.zeros((n_sites, n_sites), dtype=complex)
        for path in WalkPath:
            amplitude = coins.amplitude(coin, path)
            if amplitude == 0:
                continue
            weight = markov_expectation(path_word(path), model)
            E += amplitude * weight * np.linalg.matrix_power(h, (-path.displacement) % n_sites)
        kraus.append(E)

    M = sum(E.conj().T @ E for E in kraus)
    F = fourier_matrix(n_sites)
    Lambda = F @ fractional_matrix_power(F.conj().T @ M @ F, -0.5) @ F.conj().T
    return ExplicitChannel(n_sites=n_sites, kraus=kraus, M=M, Lambda=Lambda, F=F)
