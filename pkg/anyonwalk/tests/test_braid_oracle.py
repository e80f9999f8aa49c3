"""
Kauffman bracket oracle tests.

Closed forms used below: with δ = -(A² + A⁻²) the closure of b_1ⁿ on two
strands has bracket Aⁿ·δ + ((-A⁻³)ⁿ - Aⁿ)/δ, which gives -A³ for the kink and
-A⁴ - A⁻⁴ for the Hopf link.
"""

import pytest

from anyonwalk.engine.anyon_model import make_model
from anyonwalk.engine.braid_oracle import (
    LETTER_BUDGET,
    BraidWord,
    SmoothingState,
    count_loops,
    markov_expectation,
    smoothing_states,
    state_sum_bracket,
)
from anyonwalk.exceptions import BraidWordError, LetterBudgetError

# A generic point off the unit circle, so no accidental cancellation hides a sign.
GENERIC_A = 0.7 + 0.4j


def delta(A: complex) -> complex:
    return -(A**2) - A**-2


def power_bracket(A: complex, n: int) -> complex:
    return A**n * delta(A) + ((-(A**-3)) ** n - A**n) / delta(A)


class TestBraidWord:
    def test_index_out_of_range(self):
        with pytest.raises(BraidWordError):
            BraidWord(3, ((3, 1),))
        with pytest.raises(BraidWordError):
            BraidWord(3, ((0, 1),))

    def test_bad_sign(self):
        with pytest.raises(BraidWordError):
            BraidWord(3, ((1, 2),))

    def test_needs_a_strand(self):
        with pytest.raises(BraidWordError):
            BraidWord(0)

    def test_from_generators(self):
        word = BraidWord.from_generators(3, [1, 1, -2])
        assert word.letters == ((1, 1), (1, 1), (2, -1))
        assert len(word) == 3
        with pytest.raises(BraidWordError):
            BraidWord.from_generators(3, [0])

    def test_inverse_reverses_and_flips(self):
        word = BraidWord.from_generators(4, [1, -2, 3])
        assert word.inverse().letters == ((3, -1), (2, 1), (1, -1))
        assert word.inverse().inverse() == word

    def test_concatenation_takes_wider_strand_count(self):
        product = BraidWord.from_generators(2, [1]) * BraidWord.from_generators(4, [3])
        assert product.strand_count == 4
        assert product.letters == ((1, 1), (3, 1))

    def test_components(self):
        assert BraidWord(2, ((1, 1),)).component_count() == 1
        assert BraidWord(2, ((1, 1), (1, 1))).component_count() == 2
        assert BraidWord(3, ((1, 1), (2, 1))).component_count() == 1
        assert BraidWord(3).component_count() == 3

    def test_restricted_relabels_touched_strands(self):
        word = BraidWord(8, ((4, 1), (5, -1)))
        restricted = word.restricted()
        assert restricted.strand_count == 3
        assert restricted.letters == ((1, 1), (2, -1))

    def test_restricted_empty_word(self):
        assert BraidWord(5).restricted() == BraidWord(1)

    def test_str(self):
        assert str(BraidWord.from_generators(3, [1, -2])) == "b1 b2† [3]"
        assert str(BraidWord(2)) == "1[2]"


class TestStateSum:
    def test_empty_word_counts_open_strands(self):
        """Two parallel strands close into two loops."""
        assert state_sum_bracket(BraidWord(2), GENERIC_A) == pytest.approx(delta(GENERIC_A))

    def test_kink(self):
        A = GENERIC_A
        assert state_sum_bracket(BraidWord(2, ((1, 1),)), A) == pytest.approx(-(A**3))
        assert state_sum_bracket(BraidWord(2, ((1, -1),)), A) == pytest.approx(-(A**-3))

    def test_hopf_link(self):
        A = GENERIC_A
        hopf = BraidWord.from_generators(2, [1, 1])
        assert state_sum_bracket(hopf, A) == pytest.approx(-(A**4) - A**-4)

    @pytest.mark.parametrize("n", [1, 2, 3, 4, 5, 6])
    def test_powers_of_one_generator(self, n):
        word = BraidWord.from_generators(2, [1] * n)
        assert state_sum_bracket(word, GENERIC_A) == pytest.approx(power_bracket(GENERIC_A, n))

    def test_state_count(self):
        word = BraidWord.from_generators(3, [1, 2, -1])
        states = smoothing_states(word)
        assert len(states) == 8
        assert all(isinstance(state, SmoothingState) for state in states)

    def test_exponent(self):
        assert SmoothingState((True, True, False), 1).exponent == 1
        assert SmoothingState((False, False), 2).exponent == -2

    def test_all_a_smoothing_of_positive_word_is_identity(self):
        word = BraidWord.from_generators(3, [1, 2, 1])
        assert count_loops(word, (True, True, True)) == 3

    def test_letter_budget(self):
        word = BraidWord.from_generators(2, [1] * (LETTER_BUDGET + 1))
        with pytest.raises(LetterBudgetError):
            state_sum_bracket(word, GENERIC_A)


class TestMarkovExpectation:
    def test_empty_word_is_one(self, any_model):
        assert markov_expectation(BraidWord(4), any_model) == pytest.approx(1.0)

    def test_word_times_inverse_is_one(self, any_model):
        word = BraidWord.from_generators(4, [1, -2, 3, 2, 2])
        assert markov_expectation(word * word.inverse(), any_model) == pytest.approx(1.0, abs=1e-12)

    def test_untouched_strands_do_not_matter(self, fibonacci_level):
        narrow = BraidWord.from_generators(3, [1, -2, 1])
        wide = BraidWord(9, tuple((index + 4, sign) for index, sign in narrow.letters))
        assert markov_expectation(wide, fibonacci_level) == pytest.approx(
            markov_expectation(narrow, fibonacci_level), abs=1e-13
        )

    def test_markov_stabilization(self, fibonacci_level):
        """Appending b_m on a new strand multiplies the expectation by -A³/d."""
        model = fibonacci_level
        word = BraidWord.from_generators(2, [1, 1, 1])
        stabilized = BraidWord(3, word.letters + ((2, 1),))
        factor = -(model.A**3) / model.d
        assert markov_expectation(stabilized, model) == pytest.approx(
            markov_expectation(word, model) * factor, abs=1e-13
        )

    def test_inverse_is_conjugate(self, fibonacci_level):
        word = BraidWord.from_generators(3, [1, 1, -2, 1])
        value = markov_expectation(word, fibonacci_level)
        assert markov_expectation(word.inverse(), fibonacci_level) == pytest.approx(
            value.conjugate(), abs=1e-13
        )

    def test_abelian_level_is_a_phase(self, abelian):
        word = BraidWord.from_generators(3, [1, 2, 2, -1])
        assert abs(markov_expectation(word, abelian)) == pytest.approx(1.0, abs=1e-12)

    def test_ising_kink(self):
        model = make_model(2)
        kink = BraidWord(2, ((1, 1),))
        assert markov_expectation(kink, model) == pytest.approx(-(model.A**3) / model.d)
