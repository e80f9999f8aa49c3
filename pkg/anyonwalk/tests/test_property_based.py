"""
Property-Based Tests for anyonwalk using Hypothesis

Random braid words, offsets and variance series check identities that must
hold for every input, not just the hand-picked cases of the unit tests.
"""

from __future__ import annotations

import numpy as np
import pytest

hypothesis = pytest.importorskip("hypothesis")

from hypothesis import given, settings  # noqa: E402
from hypothesis import strategies as st  # noqa: E402

from anyonwalk.engine.analysis import fit_quadratic, total_variation  # noqa: E402
from anyonwalk.engine.anyon_model import format_level, make_model, parse_level  # noqa: E402
from anyonwalk.engine.braid_oracle import BraidWord, markov_expectation  # noqa: E402
from anyonwalk.engine.moment_table import MomentFamily, minimal_offset, table_moment  # noqa: E402

FIBONACCI = make_model(3)
ABELIAN = make_model(1)


@st.composite
def braid_words(draw, max_strands: int = 4, max_letters: int = 5) -> BraidWord:
    strands = draw(st.integers(min_value=2, max_value=max_strands))
    letters = draw(
        st.lists(
            st.tuples(st.integers(min_value=1, max_value=strands - 1), st.sampled_from([1, -1])),
            max_size=max_letters,
        )
    )
    return BraidWord(strands, tuple(letters))


class TestBraidProperties:
    @given(braid_words())
    @settings(max_examples=30, deadline=None)
    def test_word_times_inverse_is_trivial(self, word):
        assert markov_expectation(word * word.inverse(), FIBONACCI) == pytest.approx(1.0, abs=1e-10)

    @given(braid_words())
    @settings(max_examples=30, deadline=None)
    def test_inverse_conjugates(self, word):
        value = markov_expectation(word, FIBONACCI)
        assert markov_expectation(word.inverse(), FIBONACCI) == pytest.approx(
            value.conjugate(), abs=1e-10
        )

    @given(braid_words(max_strands=3), st.integers(min_value=1, max_value=6))
    @settings(max_examples=30, deadline=None)
    def test_shifting_strands_changes_nothing(self, word, shift):
        moved = BraidWord(
            word.strand_count + shift, tuple((i + shift, s) for i, s in word.letters)
        )
        assert markov_expectation(moved, FIBONACCI) == pytest.approx(
            markov_expectation(word, FIBONACCI), abs=1e-10
        )

    @given(braid_words())
    @settings(max_examples=30, deadline=None)
    def test_abelian_expectations_are_phases(self, word):
        assert abs(markov_expectation(word, ABELIAN)) == pytest.approx(1.0, abs=1e-10)


class TestMomentProperties:
    @given(st.sampled_from(list(MomentFamily)), st.integers(min_value=-200, max_value=200))
    def test_abelian_moments_are_one(self, family, offset):
        assert table_moment(family, offset, ABELIAN) == 1.0

    @given(st.sampled_from(list(MomentFamily)), st.integers(min_value=-200, max_value=200))
    def test_moments_bounded(self, family, offset):
        assert abs(table_moment(family, offset, FIBONACCI)) <= 1.0 + 1e-12

    @given(st.integers(min_value=-1000, max_value=1000), st.integers(min_value=1, max_value=500))
    def test_minimal_offset(self, offset, n_sites):
        wrapped = minimal_offset(offset, n_sites)
        assert -n_sites / 2 < wrapped <= n_sites / 2
        assert (wrapped - offset) % n_sites == 0


class TestAnalysisProperties:
    @given(
        st.floats(min_value=-1.0, max_value=1.0, allow_nan=False),
        st.floats(min_value=-5.0, max_value=5.0, allow_nan=False),
    )
    def test_fit_recovers_coefficients(self, K2, K3):
        t = np.arange(0, 60, 2, dtype=float)
        fit = fit_quadratic(t, K2 * t**2 + K3 * t)
        assert fit.K2 == pytest.approx(K2, abs=1e-8)
        assert fit.K3 == pytest.approx(K3, abs=1e-7)

    @given(st.lists(st.floats(min_value=0.0, max_value=1.0), min_size=2, max_size=20))
    def test_total_variation_bounds(self, weights):
        p = np.asarray(weights) + 1e-3
        p /= p.sum()
        q = p[::-1]
        tv = total_variation(p, q)
        assert 0.0 <= tv <= 1.0
        assert tv == pytest.approx(total_variation(q, p))


class TestLevelProperties:
    @given(st.integers(min_value=1, max_value=10**6))
    def test_round_trip(self, level):
        assert parse_level(format_level(level)) == level
