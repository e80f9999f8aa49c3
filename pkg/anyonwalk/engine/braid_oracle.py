"""
Kauffman bracket oracle for braid closures.

Evaluates the bracket of the Markov closure of a braid word by summing over all
2^c smoothing states and counting the loops of each state with a disjoint-set
structure. The normalized expectation

    <Φ0|B|Φ0> = <L>(A) / d^(n-1)

with n the number of closed strands is the ground truth every moment table is
checked against.

Smoothing convention: b_s = A·1 + A⁻¹·e_s, so the A-smoothing of b_s keeps the
strands vertical and the A⁻¹-smoothing joins them with a cap and a cup. For
b_s† the two weights swap.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, List, Sequence, Tuple

import numpy as np
from scipy.cluster.hierarchy import DisjointSet

from anyonwalk.engine.anyon_model import AnyonModel
from anyonwalk.exceptions import BraidWordError, LetterBudgetError

logger = logging.getLogger(__name__)

LETTER_BUDGET = 24

Letter = Tuple[int, int]


@dataclass(frozen=True)
class BraidWord:
    """
    Ordered product of signed generators.

    ``letters`` are read left to right as the operator product is written, so
    the rightmost letter acts first. ``(s, +1)`` is b_s, ``(s, -1)`` is b_s†;
    b_s exchanges strands s and s+1 (strands are numbered from 1).
    """

    strand_count: int
    letters: Tuple[Letter, ...] = ()

    def __post_init__(self) -> None:
        if self.strand_count < 1:
            raise BraidWordError("A braid needs at least one strand", self.strand_count)
        normalized = tuple((int(s), int(sign)) for s, sign in self.letters)
        for index, sign in normalized:
            if not 1 <= index < self.strand_count:
                raise BraidWordError(
                    f"Generator b_{index} does not act on {self.strand_count} strands",
                    self.strand_count,
                    details={"index": index},
                )
            if sign not in (1, -1):
                raise BraidWordError(
                    f"Generator sign must be +1 or -1, got {sign}", self.strand_count
                )
        object.__setattr__(self, "letters", normalized)

    @classmethod
    def from_generators(cls, strand_count: int, generators: Iterable[int]) -> "BraidWord":
        """Build a word from signed integers, e.g. ``[1, 1, -2]`` for b_1 b_1 b_2†."""
        letters = []
        for g in generators:
            if g == 0:
                raise BraidWordError("Generator 0 does not exist", strand_count)
            letters.append((abs(g), 1 if g > 0 else -1))
        return cls(strand_count, tuple(letters))

    def __len__(self) -> int:
        return len(self.letters)

    def __mul__(self, other: "BraidWord") -> "BraidWord":
        strands = max(self.strand_count, other.strand_count)
        return BraidWord(strands, self.letters + other.letters)

    def inverse(self) -> "BraidWord":
        """The adjoint word: reversed order, flipped signs."""
        return BraidWord(self.strand_count, tuple((s, -sign) for s, sign in reversed(self.letters)))

    def permutation(self) -> Tuple[int, ...]:
        """Image of each strand position (0-based) after the braid acts."""
        perm = list(range(self.strand_count))
        for index, _ in reversed(self.letters):
            perm[index - 1], perm[index] = perm[index], perm[index - 1]
        return tuple(perm)

    def component_count(self) -> int:
        """Number of link components of the closure (cycles of the permutation)."""
        perm = self.permutation()
        seen = [False] * len(perm)
        cycles = 0
        for start in range(len(perm)):
            if seen[start]:
                continue
            cycles += 1
            j = start
            while not seen[j]:
                seen[j] = True
                j = perm[j]
        return cycles

    def touched_strands(self) -> List[int]:
        strands = set()
        for index, _ in self.letters:
            strands.update((index, index + 1))
        return sorted(strands)

    def restricted(self) -> "BraidWord":
        """
        The same word on only the strands it touches.

        Every dropped strand closes into an unlinked loop, which multiplies the
        bracket by d and adds one strand, so the normalized expectation is unchanged.
        """
        touched = self.touched_strands()
        if not touched:
            return BraidWord(1, ())
        relabel = {strand: position + 1 for position, strand in enumerate(touched)}
        letters = tuple((relabel[index], sign) for index, sign in self.letters)
        return BraidWord(len(touched), letters)

    def __str__(self) -> str:
        if not self.letters:
            return f"1[{self.strand_count}]"
        parts = [f"b{s}" if sign > 0 else f"b{s}†" for s, sign in self.letters]
        return " ".join(parts) + f" [{self.strand_count}]"


@dataclass(frozen=True)
class SmoothingState:
    """One term of the state sum."""

    assignment: Tuple[bool, ...]  # True where the letter takes its A-smoothing
    loop_count: int

    @property
    def exponent(self) -> int:
        """Power of A carried by the state, a - b."""
        a = sum(self.assignment)
        return a - (len(self.assignment) - a)


def _node(level: int, position: int, strands: int) -> int:
    return level * strands + position


def count_loops(word: BraidWord, assignment: Sequence[bool]) -> int:
    """
    Loops of the closed diagram in which every crossing has been smoothed.

    Segment endpoints sit on ``len(word) + 1`` horizontal levels with one point
    per strand. Each letter connects level j to level j+1; the Markov closure
    joins the top level to the bottom one strand by strand.
    """
    m = word.strand_count
    levels = len(word)
    endpoints = DisjointSet(range((levels + 1) * m))

    for level, ((index, sign), a_smoothing) in enumerate(zip(word.letters, assignment)):
        left, right = index - 1, index
        vertical = a_smoothing == (sign > 0)
        for position in range(m):
            if position in (left, right) and not vertical:
                continue
            endpoints.merge(_node(level, position, m), _node(level + 1, position, m))
        if not vertical:
            endpoints.merge(_node(level, left, m), _node(level, right, m))
            endpoints.merge(_node(level + 1, left, m), _node(level + 1, right, m))

    for position in range(m):
        endpoints.merge(_node(0, position, m), _node(levels, position, m))

    return int(endpoints.n_subsets)


@lru_cache(maxsize=8192)
def smoothing_states(word: BraidWord) -> Tuple[SmoothingState, ...]:
    """All 2^c smoothing states of ``word`` in a fixed enumeration order."""
    if len(word) > LETTER_BUDGET:
        raise LetterBudgetError(len(word), LETTER_BUDGET)
    states = tuple(
        SmoothingState(assignment, count_loops(word, assignment))
        for assignment in itertools.product((True, False), repeat=len(word))
    )
    logger.debug("Enumerated %d smoothing states for %s", len(states), word)
    return states


def state_sum_bracket(word: BraidWord, A: complex) -> complex:
    """
    Kauffman bracket of the Markov closure of ``word`` at the value ``A``.

    Raises:
        LetterBudgetError: if the word has more than ``LETTER_BUDGET`` letters
    """
    states = smoothing_states(word)
    exponents = np.array([state.exponent for state in states])
    loops = np.array([state.loop_count for state in states])
    delta = -(A**2) - A**-2
    return complex(np.sum(np.power(A, exponents) * np.power(delta, loops - 1)))


def markov_expectation(word: BraidWord, model: AnyonModel) -> complex:
    """
    Expectation of the braid in the pair-created vacuum, <L>(A) / d^(n-1).

    The word is first restricted to the strands it touches.
    """
    restricted = word.restricted()
    bracket = state_sum_bracket(restricted, model.A)
    return bracket / model.d ** (restricted.strand_count - 1)
