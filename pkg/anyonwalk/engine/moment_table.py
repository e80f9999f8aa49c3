"""
Braid moments of the two-step walk.

Every coefficient of the superoperator is an expectation
<Φ0| W_Q(s')† W_P(s) |Φ0> of two-step braid words, one per pair of coin paths
(P, Q). Only eight pairs carry a nonzero coin weight; they are the moment
families F1..F8. This module holds

- the braid words of each path and family,
- the closed-form table of the family moments,
- providers that hand moments to the evolution engines (table, state-sum
  oracle, Abelian phases),
- ring-averaged moments and the κ coefficients of the circulant normalization.

The fusion space is never represented: completeness of the fusion basis turns
every sum over fusion channels into one of these pairwise moments.
"""

from __future__ import annotations

import logging
import math
from abc import ABC, abstractmethod
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from anyonwalk.engine.anyon_model import AnyonModel
from anyonwalk.engine.braid_oracle import BraidWord, Letter, markov_expectation
from anyonwalk.exceptions import InvalidConfigValueError, RingSizeError

logger = logging.getLogger(__name__)

# Offsets |Δ| beyond this give words acting on disjoint strands.
DISJOINT_OFFSET = 5

# Smallest ring on which the special offsets -4..4 do not wrap onto each other.
MIN_AVERAGING_SITES = 9


# =============================================================================
# Paths and families
# =============================================================================


class WalkPath(str, Enum):
    """
    Coin path of one superoperator iteration.

    Path "ab" is read like the coin operator P_a H P_b H: b is the coin of the
    first step and a the coin of the second.
    """

    P00 = "00"
    P01 = "01"
    P10 = "10"
    P11 = "11"

    @property
    def coins(self) -> Tuple[int, int]:
        """(a, b) as in P_a H P_b H."""
        return int(self.value[0]), int(self.value[1])

    @property
    def displacement(self) -> int:
        """Net site shift: coin 0 moves left, coin 1 moves right."""
        return sum(2 * coin - 1 for coin in self.coins)

    @property
    def band(self) -> str:
        """Band label of the circulant construction: a (left), d (stay), b (right)."""
        return {-2: "a", 0: "d", 2: "b"}[self.displacement]


# Generator offsets relative to the starting site, in operator order.
_PATH_LETTERS: Dict[WalkPath, Tuple[Letter, ...]] = {
    WalkPath.P00: ((-2, 1), (-1, 1)),
    WalkPath.P01: ((0, 1), (0, 1)),
    WalkPath.P10: ((-1, 1), (-1, 1)),
    WalkPath.P11: ((1, 1), (0, 1)),
}


def path_letters(path: WalkPath) -> Tuple[Letter, ...]:
    """Letters of W_P(s) as (offset from s, sign)."""
    return _PATH_LETTERS[path]


class MomentFamily(str, Enum):
    """The eight moment families with nonzero coin weight."""

    F1 = "F1"
    F2 = "F2"
    F3 = "F3"
    F4 = "F4"
    F5 = "F5"
    F6 = "F6"
    F7 = "F7"
    F8 = "F8"

    @property
    def paths(self) -> Tuple[WalkPath, WalkPath]:
        """(forward path P at s, backward path Q at s')."""
        return _FAMILY_PATHS[self]


_FAMILY_PATHS: Dict[MomentFamily, Tuple[WalkPath, WalkPath]] = {
    MomentFamily.F1: (WalkPath.P00, WalkPath.P00),
    MomentFamily.F2: (WalkPath.P00, WalkPath.P01),
    MomentFamily.F3: (WalkPath.P01, WalkPath.P00),
    MomentFamily.F4: (WalkPath.P01, WalkPath.P01),
    MomentFamily.F5: (WalkPath.P10, WalkPath.P10),
    MomentFamily.F6: (WalkPath.P10, WalkPath.P11),
    MomentFamily.F7: (WalkPath.P11, WalkPath.P10),
    MomentFamily.F8: (WalkPath.P11, WalkPath.P11),
}

BAND_PAIRS = ("aa", "dd", "bb", "ad", "da", "db", "bd", "ab", "ba")


def path_word(path: WalkPath, s: int = 3) -> BraidWord:
    """W_P(s) on its own, the two letters of one iteration."""
    letters = tuple((s + offset, sign) for offset, sign in path_letters(path))
    return BraidWord(max(index for index, _ in letters) + 1, letters)


def family_for_paths(forward: WalkPath, backward: WalkPath) -> Optional[MomentFamily]:
    for family, paths in _FAMILY_PATHS.items():
        if paths == (forward, backward):
            return family
    return None


def family_letters(
    forward: WalkPath, backward: WalkPath, s: int, s_prime: int
) -> Tuple[Letter, ...]:
    """Letters of W_Q(s')† W_P(s) with absolute generator indices."""
    backward_word = [(s_prime + offset, sign) for offset, sign in path_letters(backward)]
    dagger = tuple((index, -sign) for index, sign in reversed(backward_word))
    return dagger + tuple((s + offset, sign) for offset, sign in path_letters(forward))


def _placement(offset: int) -> Tuple[int, int]:
    """Smallest positions (s, s') with s' - s = offset keeping every generator index >= 1."""
    s = 3 + max(0, -offset)
    return s, s + offset


def paths_word(forward: WalkPath, backward: WalkPath, offset: int) -> BraidWord:
    s, s_prime = _placement(offset)
    letters = family_letters(forward, backward, s, s_prime)
    strands = max(index for index, _ in letters) + 1
    return BraidWord(strands, letters)


def family_word(family: MomentFamily, offset: int) -> BraidWord:
    """Braid word of a family with Δ = s' - s = ``offset``."""
    return paths_word(*family.paths, offset)


def band_pair_word(pair: str, offset: int) -> BraidWord:
    """
    Braid word for a band pair label.

    The pure-band pairs use the path of that band, ``dd`` takes the 01 path and
    the mixed pairs take the path pair that carries their coin weight. The
    cross pairs ``ab``/``ba`` have no coin weight and no family.
    """
    forward, backward = _BAND_PAIR_PATHS[_check_pair(pair)]
    return paths_word(forward, backward, offset)


_BAND_PAIR_PATHS: Dict[str, Tuple[WalkPath, WalkPath]] = {
    "aa": (WalkPath.P00, WalkPath.P00),
    "dd": (WalkPath.P01, WalkPath.P01),
    "bb": (WalkPath.P11, WalkPath.P11),
    "ad": (WalkPath.P00, WalkPath.P01),
    "da": (WalkPath.P01, WalkPath.P00),
    "db": (WalkPath.P10, WalkPath.P11),
    "bd": (WalkPath.P11, WalkPath.P10),
    "ab": (WalkPath.P00, WalkPath.P11),
    "ba": (WalkPath.P11, WalkPath.P00),
}


def _check_pair(pair: str) -> str:
    if pair not in _BAND_PAIR_PATHS:
        raise InvalidConfigValueError("pair", pair, allowed_values=list(BAND_PAIRS))
    return pair


# =============================================================================
# Closed-form table
# =============================================================================


def _disjoint_f2(model: AnyonModel) -> complex:
    A = model.A
    return complex(-(A**6) * (A**4 + A**-4) / model.d**3)


def _disjoint_f6(model: AnyonModel) -> complex:
    A = model.A
    return complex(-(A**-6) * (A**4 + A**-4) / model.d**3)


def table_moment(family: MomentFamily, offset: int, model: AnyonModel) -> complex:
    """
    Closed-form moment of ``family`` at Δ = s' - s.

    Every integer offset is valid; offsets outside the near-diagonal band give
    the disjoint-link value.
    """
    if model.is_abelian:
        return 1.0 + 0.0j

    d = model.d
    A = model.A

    if family in (MomentFamily.F1, MomentFamily.F8):
        if offset == 0:
            return 1.0 + 0.0j
        if abs(offset) == 1:
            return complex(d**-2)
        return complex(d**-4)

    if family in (MomentFamily.F4, MomentFamily.F5):
        if offset == 0:
            return 1.0 + 0.0j
        return complex((A**4 + A**-4) ** 2 / d**2)

    if family is MomentFamily.F2:
        return complex(d**-2) if offset in (-2, -1) else _disjoint_f2(model)

    if family is MomentFamily.F6:
        return complex(d**-2) if offset in (-2, -1) else _disjoint_f6(model)

    if family is MomentFamily.F3:
        return table_moment(MomentFamily.F2, -offset, model).conjugate()

    return table_moment(MomentFamily.F6, -offset, model).conjugate()


def disjoint_moment(family: MomentFamily, model: AnyonModel) -> complex:
    """Value of a family once its two words act on separate strands."""
    return table_moment(family, DISJOINT_OFFSET, model)


# =============================================================================
# Providers
# =============================================================================


def minimal_offset(offset: int, n_sites: int) -> int:
    """Signed representative of ``offset`` modulo ``n_sites`` in (-N/2, N/2]."""
    wrapped = offset % n_sites
    return wrapped - n_sites if wrapped > n_sites // 2 else wrapped


class MomentProvider(ABC):
    """Source of family moments for the evolution engines."""

    name = "provider"

    @abstractmethod
    def moment_at(self, family: MomentFamily, s: int, s_prime: int) -> complex:
        """Moment of ``family`` for forward site ``s`` and backward site ``s_prime``."""

    def moment_matrix(self, family: MomentFamily, n_sites: int) -> np.ndarray:
        """Matrix of moments indexed by (s, s') on a ring of ``n_sites``."""
        out = np.empty((n_sites, n_sites), dtype=complex)
        for s in range(n_sites):
            for s_prime in range(n_sites):
                out[s, s_prime] = self.moment_at(family, s, s_prime)
        return out


class TranslationInvariantProvider(MomentProvider):
    """Moments that depend only on Δ = s' - s."""

    @abstractmethod
    def moment(self, family: MomentFamily, offset: int) -> complex:
        """Moment of ``family`` at Δ = ``offset``."""

    def moment_at(self, family: MomentFamily, s: int, s_prime: int) -> complex:
        return self.moment(family, s_prime - s)

    def moment_matrix(self, family: MomentFamily, n_sites: int) -> np.ndarray:
        values = np.array(
            [self.moment(family, minimal_offset(o, n_sites)) for o in range(n_sites)],
            dtype=complex,
        )
        sites = np.arange(n_sites)
        return values[(sites[None, :] - sites[:, None]) % n_sites]


class TableProvider(TranslationInvariantProvider):
    """Closed-form moments for an SU(2)_k model."""

    name = "table"

    def __init__(self, model: AnyonModel) -> None:
        self.model = model

    def moment(self, family: MomentFamily, offset: int) -> complex:
        return table_moment(family, offset, self.model)

    def __repr__(self) -> str:
        return f"TableProvider({self.model})"


class OracleProvider(TranslationInvariantProvider):
    """Moments evaluated by the bracket state sum of each family word."""

    name = "oracle"

    def __init__(self, model: AnyonModel) -> None:
        self.model = model
        self._cache: Dict[Tuple[MomentFamily, int], complex] = {}

    def moment(self, family: MomentFamily, offset: int) -> complex:
        if abs(offset) > DISJOINT_OFFSET:
            offset = int(math.copysign(DISJOINT_OFFSET, offset))
        key = (family, offset)
        if key not in self._cache:
            self._cache[key] = markov_expectation(family_word(family, offset), self.model)
        return self._cache[key]

    def __repr__(self) -> str:
        return f"OracleProvider({self.model})"


class AbelianPhaseProvider(MomentProvider):
    """
    Moments of Abelian anyons with a phase per island.

    Generator b_s contributes exp(iθ_s) and b_s† contributes exp(-iθ_s), so a
    family moment is the product of its four letter phases. Island indices are
    taken modulo the number of phases.
    """

    name = "abelian"

    def __init__(self, phases: Sequence[float]) -> None:
        self.phases = np.asarray(phases, dtype=float)
        if self.phases.ndim != 1 or self.phases.size == 0:
            raise InvalidConfigValueError(
                "phases", list(np.ravel(self.phases)), expected_type="nonempty 1-d sequence"
            )

    def _theta(self, index: np.ndarray) -> np.ndarray:
        return self.phases[np.mod(index, self.phases.size)]

    def _path_phase(self, path: WalkPath, sites: np.ndarray) -> np.ndarray:
        total = np.zeros(sites.shape, dtype=float)
        for offset, sign in path_letters(path):
            total += sign * self._theta(sites + offset)
        return total

    def moment_at(self, family: MomentFamily, s: int, s_prime: int) -> complex:
        forward, backward = family.paths
        phase = self._path_phase(forward, np.array([s]))[0]
        phase -= self._path_phase(backward, np.array([s_prime]))[0]
        return complex(np.exp(1j * phase))

    def moment_matrix(self, family: MomentFamily, n_sites: int) -> np.ndarray:
        sites = np.arange(n_sites)
        forward, backward = family.paths
        outgoing = self._path_phase(forward, sites)[:, None]
        returning = self._path_phase(backward, sites)[None, :]
        return np.exp(1j * (outgoing - returning))

    @classmethod
    def uniform(cls, phase: float, n_sites: int) -> "AbelianPhaseProvider":
        return cls(np.full(n_sites, phase))


# =============================================================================
# Ring averages and κ coefficients
# =============================================================================


class MomentMode(str, Enum):
    """How the circulant construction averages moments over the ring."""

    FINITE = "finite"
    ASYMPTOTIC = "asymptotic"


@dataclass(frozen=True)
class KappaPair:
    """
    Coefficients of the normalization matrix M.

    M is the circulant band matrix κ1·1 + κ2·ĥ² + conj(κ2)·ĥ⁻², with Fourier
    eigenvalues ν(m) = κ1 + 2·Re(κ2·ω^{2m}).
    """

    kappa1: float
    kappa2: complex
    mode: MomentMode = MomentMode.ASYMPTOTIC
    n_sites: Optional[int] = None

    def nu(self, n_sites: int) -> np.ndarray:
        m = np.arange(n_sites)
        omega2m = np.exp(4j * math.pi * m / n_sites)
        return self.kappa1 + 2.0 * np.real(self.kappa2 * omega2m)

    def to_dict(self) -> Dict[str, object]:
        return {
            "kappa1": self.kappa1,
            "kappa2": [self.kappa2.real, self.kappa2.imag],
            "mode": self.mode.value,
            "n_sites": self.n_sites,
        }


def _ring_average(moment: Callable[[int], complex], n_sites: Optional[int]) -> complex:
    """(1/N)·Σ_Δ F(Δ): offsets -4..4 summed explicitly, the other N - 9 take the Δ=5 value."""
    if n_sites is None or n_sites < MIN_AVERAGING_SITES:
        raise RingSizeError(
            n_sites if n_sites is not None else 0,
            MIN_AVERAGING_SITES,
            reason="special offsets would wrap onto each other",
        )
    half = MIN_AVERAGING_SITES // 2
    special = sum(moment(offset) for offset in range(-half, half + 1))
    disjoint = moment(DISJOINT_OFFSET)
    return complex((special + (n_sites - MIN_AVERAGING_SITES) * disjoint) / n_sites)


def _pair_moment(pair: str, offset: int, model: AnyonModel) -> complex:
    family = family_for_paths(*_BAND_PAIR_PATHS[pair])
    if family is not None:
        return table_moment(family, offset, model)
    return _cross_pair_moment(pair, offset, model)


@lru_cache(maxsize=1024)
def _cross_pair_moment(pair: str, offset: int, model: AnyonModel) -> complex:
    offset = int(math.copysign(min(abs(offset), DISJOINT_OFFSET), offset))
    return markov_expectation(band_pair_word(pair, offset), model)


def averaged_moment(pair: str, n_sites: int, model: AnyonModel) -> complex:
    """
    Average of a band-pair moment over all N² site pairs of the ring.

    Moments depend on Δ only, so the N² terms collapse to a sum over offsets.

    Raises:
        RingSizeError: if ``n_sites`` < 9
    """
    _check_pair(pair)
    return _ring_average(lambda offset: _pair_moment(pair, offset, model), n_sites)


def asymptotic_moment(pair: str, model: AnyonModel) -> complex:
    """The N → ∞ limit of :func:`averaged_moment`, the disjoint-link value."""
    return _pair_moment(_check_pair(pair), DISJOINT_OFFSET, model)


def band_coefficients(
    model: AnyonModel,
    mode: MomentMode = MomentMode.ASYMPTOTIC,
    n_sites: Optional[int] = None,
    provider: Optional[TranslationInvariantProvider] = None,
) -> Dict[str, complex]:
    """
    μ_xy for every band pair: coin weight times averaged moment.

    A band pair collects every path pair whose paths lie in those bands, so
    ``dd`` sums the F4 and F5 contributions. Moments come from ``provider``
    when given, from the closed-form table otherwise.
    """
    from anyonwalk.engine.exact_evolution import coin_coefficients

    source = provider or TableProvider(model)
    coins = coin_coefficients()
    mu: Dict[str, complex] = {pair: 0.0j for pair in BAND_PAIRS}
    for family in MomentFamily:
        forward, backward = family.paths
        if mode is MomentMode.FINITE:
            moment = _ring_average(lambda offset: source.moment(family, offset), n_sites)
        else:
            moment = source.moment(family, DISJOINT_OFFSET)
        mu[forward.band + backward.band] += coins.product(forward, backward) * moment
    return mu


def kappas(
    model: AnyonModel,
    mode: MomentMode = MomentMode.ASYMPTOTIC,
    n_sites: Optional[int] = None,
    provider: Optional[TranslationInvariantProvider] = None,
) -> KappaPair:
    """
    κ coefficients of M = Σ E†E.

    κ1 collects the same-band coefficients and κ2 the coefficients one band
    apart: κ1 = ¼(F̄1 + 2F̄4 + F̄8), κ2 = ¼(F̄2 - F̄6), bars denoting ring
    averages (FINITE) or disjoint values (ASYMPTOTIC). Table-backed
    ASYMPTOTIC values come from their closed trigonometric forms.

    Raises:
        RingSizeError: in FINITE mode when ``n_sites`` < 9
    """
    if mode is MomentMode.ASYMPTOTIC and provider is None:
        if model.is_abelian:
            return KappaPair(1.0, 0.0j, mode)
        theta = 0.0 if model.is_infinite else math.pi / (model.level + 2)
        sec = 1.0 / math.cos(theta)
        kappa1 = (
            (6 * math.cos(2 * theta) + 4 * math.cos(4 * theta) + 2 * math.cos(6 * theta) + 5)
            * sec**4
            / 32
        )
        kappa2 = -1j * math.cos(2 * theta) * math.sin(3 * theta) * sec**3 / 8
        return KappaPair(kappa1, complex(kappa2), mode)

    mu = band_coefficients(model, mode, n_sites, provider)
    kappa1 = (mu["aa"] + mu["dd"] + mu["bb"]).real
    kappa2 = mu["ad"] + mu["db"]
    logger.debug("kappas(%s, N=%s) = %.12g, %s", model.label, n_sites, kappa1, kappa2)
    return KappaPair(float(kappa1), complex(kappa2), mode, n_sites)


def all_family_moments(
    provider: TranslationInvariantProvider, offsets: Sequence[int]
) -> Dict[str, List[complex]]:
    """Moments of every family over ``offsets``, keyed by family name."""
    return {
        family.value: [provider.moment(family, offset) for offset in offsets]
        for family in MomentFamily
    }
