"""
Moment table, providers and κ coefficient tests.
"""

import math

import numpy as np
import pytest

from anyonwalk.engine.anyon_model import INFINITY, make_model
from anyonwalk.engine.braid_oracle import markov_expectation
from anyonwalk.engine.moment_table import (
    BAND_PAIRS,
    DISJOINT_OFFSET,
    AbelianPhaseProvider,
    KappaPair,
    MomentFamily,
    MomentMode,
    OracleProvider,
    TableProvider,
    WalkPath,
    all_family_moments,
    asymptotic_moment,
    averaged_moment,
    band_coefficients,
    band_pair_word,
    disjoint_moment,
    family_for_paths,
    family_word,
    kappas,
    minimal_offset,
    path_word,
    table_moment,
)
from anyonwalk.exceptions import InvalidConfigValueError, RingSizeError

OFFSETS = range(-6, 7)


class TestPaths:
    @pytest.mark.parametrize(
        "path, displacement, band",
        [
            (WalkPath.P00, -2, "a"),
            (WalkPath.P01, 0, "d"),
            (WalkPath.P10, 0, "d"),
            (WalkPath.P11, 2, "b"),
        ],
    )
    def test_displacement_and_band(self, path, displacement, band):
        assert path.displacement == displacement
        assert path.band == band

    def test_coins_read_second_step_first(self):
        assert WalkPath.P01.coins == (0, 1)

    def test_path_words_have_two_letters(self):
        for path in WalkPath:
            assert len(path_word(path)) == 2

    def test_family_paths(self):
        assert MomentFamily.F2.paths == (WalkPath.P00, WalkPath.P01)
        assert family_for_paths(WalkPath.P11, WalkPath.P10) is MomentFamily.F7
        assert family_for_paths(WalkPath.P00, WalkPath.P11) is None

    def test_family_word_indices_stay_positive(self):
        for family in MomentFamily:
            for offset in OFFSETS:
                word = family_word(family, offset)
                assert len(word) == 4
                assert min(index for index, _ in word.letters) >= 1

    def test_family_word_is_dagger_then_forward(self):
        word = family_word(MomentFamily.F4, 0)
        assert [sign for _, sign in word.letters] == [-1, -1, 1, 1]

    def test_unknown_band_pair(self):
        with pytest.raises(InvalidConfigValueError):
            band_pair_word("xy", 0)


class TestTable:
    def test_abelian_moments_are_one(self, abelian):
        for family in MomentFamily:
            for offset in OFFSETS:
                assert table_moment(family, offset, abelian) == 1.0

    def test_diagonal_families_on_the_diagonal(self, any_model):
        for family in (MomentFamily.F1, MomentFamily.F4, MomentFamily.F5, MomentFamily.F8):
            assert table_moment(family, 0, any_model) == pytest.approx(1.0)

    def test_f1_values(self, fibonacci_level):
        d = fibonacci_level.d
        assert table_moment(MomentFamily.F1, 1, fibonacci_level) == pytest.approx(d**-2)
        assert table_moment(MomentFamily.F1, -1, fibonacci_level) == pytest.approx(d**-2)
        assert table_moment(MomentFamily.F1, 3, fibonacci_level) == pytest.approx(d**-4)

    def test_f4_values(self, fibonacci_level):
        A, d = fibonacci_level.A, fibonacci_level.d
        expected = (A**4 + A**-4) ** 2 / d**2
        for offset in (-6, -1, 1, 2, 6):
            assert table_moment(MomentFamily.F4, offset, fibonacci_level) == pytest.approx(expected)

    def test_f2_near_and_far(self, fibonacci_level):
        A, d = fibonacci_level.A, fibonacci_level.d
        assert table_moment(MomentFamily.F2, -2, fibonacci_level) == pytest.approx(d**-2)
        assert table_moment(MomentFamily.F2, -1, fibonacci_level) == pytest.approx(d**-2)
        far = -(A**6) * (A**4 + A**-4) / d**3
        assert table_moment(MomentFamily.F2, 4, fibonacci_level) == pytest.approx(far)

    @pytest.mark.parametrize("pair", [("F3", "F2"), ("F7", "F6")])
    def test_conjugate_families_mirror_offsets(self, any_model, pair):
        mirrored, source = (MomentFamily(name) for name in pair)
        for offset in OFFSETS:
            assert table_moment(mirrored, offset, any_model) == pytest.approx(
                table_moment(source, -offset, any_model).conjugate()
            )

    def test_ising_cross_families_vanish_far_apart(self, ising):
        """A⁴ + A⁻⁴ = 0 at k=2."""
        for family in (MomentFamily.F2, MomentFamily.F4, MomentFamily.F6):
            assert abs(disjoint_moment(family, ising)) < 1e-12

    def test_disjoint_f2_matches_oracle_at_k3(self, fibonacci_level):
        oracle = markov_expectation(family_word(MomentFamily.F2, DISJOINT_OFFSET), fibonacci_level)
        assert oracle == pytest.approx(disjoint_moment(MomentFamily.F2, fibonacci_level), abs=1e-12)


class TestOracleEquivalence:
    @pytest.mark.parametrize("level", [2, 3, 4, INFINITY], ids=lambda k: f"k={k}")
    def test_every_family_and_offset(self, level):
        model = make_model(level)
        for family in MomentFamily:
            for offset in OFFSETS:
                oracle = markov_expectation(family_word(family, offset), model)
                assert abs(oracle - table_moment(family, offset, model)) <= 1e-10, (
                    family,
                    offset,
                )


class TestProviders:
    def test_minimal_offset(self):
        assert minimal_offset(7, 10) == -3
        assert minimal_offset(5, 10) == 5
        assert minimal_offset(-1, 10) == -1
        assert minimal_offset(12, 9) == 3

    def test_moment_matrix_is_translation_invariant(self, fibonacci_level):
        provider = TableProvider(fibonacci_level)
        matrix = provider.moment_matrix(MomentFamily.F2, 11)
        for s in range(11):
            for s_prime in range(11):
                expected = provider.moment(MomentFamily.F2, minimal_offset(s_prime - s, 11))
                assert matrix[s, s_prime] == expected

    def test_oracle_provider_matches_table(self, fibonacci_level):
        table, oracle = TableProvider(fibonacci_level), OracleProvider(fibonacci_level)
        for family in MomentFamily:
            np.testing.assert_allclose(
                oracle.moment_matrix(family, 13), table.moment_matrix(family, 13), atol=1e-12
            )

    def test_oracle_provider_clamps_far_offsets(self, fibonacci_level):
        oracle = OracleProvider(fibonacci_level)
        assert oracle.moment(MomentFamily.F1, 40) == oracle.moment(MomentFamily.F1, DISJOINT_OFFSET)

    def test_uniform_abelian_phases_cancel(self):
        provider = AbelianPhaseProvider.uniform(math.pi / 3, 9)
        for family in MomentFamily:
            np.testing.assert_allclose(provider.moment_matrix(family, 9), 1.0, atol=1e-14)

    def test_abelian_matrix_matches_pointwise(self):
        rng = np.random.default_rng(3)
        provider = AbelianPhaseProvider(rng.uniform(0, 2 * math.pi, size=10))
        for family in MomentFamily:
            matrix = provider.moment_matrix(family, 10)
            for s, s_prime in [(0, 0), (2, 7), (9, 1), (5, 5)]:
                assert matrix[s, s_prime] == pytest.approx(provider.moment_at(family, s, s_prime))

    def test_abelian_provider_rejects_empty(self):
        with pytest.raises(InvalidConfigValueError):
            AbelianPhaseProvider([])

    def test_all_family_moments(self, ising):
        moments = all_family_moments(TableProvider(ising), [-1, 0, 1])
        assert sorted(moments) == [family.value for family in MomentFamily]
        assert all(len(values) == 3 for values in moments.values())


class TestKappas:
    def test_closed_forms(self):
        k2 = kappas(make_model(2))
        assert k2.kappa1 == pytest.approx(0.125, abs=1e-12)
        assert abs(k2.kappa2) < 1e-12

        kinf = kappas(make_model(INFINITY))
        assert kinf.kappa1 == pytest.approx(0.53125, abs=1e-12)
        assert abs(kinf.kappa2) < 1e-12

        k1 = kappas(make_model(1))
        assert k1.kappa1 == pytest.approx(1.0)
        assert k1.kappa2 == 0

    def test_level_four_coherence(self):
        k4 = kappas(make_model(4))
        assert k4.kappa2 == pytest.approx(-1j / (6 * math.sqrt(3)), abs=1e-12)

    @pytest.mark.parametrize("level", [3, 4, 5, 10, INFINITY], ids=lambda k: f"k={k}")
    def test_closed_form_matches_band_coefficients(self, level):
        model = make_model(level)
        closed = kappas(model)
        derived = kappas(model, provider=TableProvider(model))
        assert derived.kappa1 == pytest.approx(closed.kappa1, abs=1e-12)
        assert derived.kappa2 == pytest.approx(closed.kappa2, abs=1e-12)

    def test_finite_mode_converges_as_one_over_n(self, fibonacci_level):
        asymptotic = kappas(fibonacci_level)
        scaled = []
        for n in (64, 128, 256, 512):
            finite = kappas(fibonacci_level, MomentMode.FINITE, n)
            scaled.append(n * (finite.kappa1 - asymptotic.kappa1))
        assert scaled[0] != pytest.approx(0.0)
        assert np.allclose(scaled, scaled[0], atol=1e-10)

    def test_finite_mode_needs_nine_sites(self, fibonacci_level):
        with pytest.raises(RingSizeError):
            kappas(fibonacci_level, MomentMode.FINITE, 8)
        with pytest.raises(RingSizeError):
            kappas(fibonacci_level, MomentMode.FINITE, None)

    def test_nu_spectrum(self):
        pair = KappaPair(1.0, 0.5 + 0j)
        nu = pair.nu(16)
        assert nu[0] == pytest.approx(2.0)
        assert nu[4] == pytest.approx(0.0, abs=1e-12)

    def test_to_dict(self):
        assert KappaPair(0.5, 0.25j).to_dict()["kappa2"] == [0.0, 0.25]


class TestAveragedMoments:
    def test_ring_average_formula(self, fibonacci_level):
        n = 20
        direct = sum(
            table_moment(MomentFamily.F1, minimal_offset(offset, n), fibonacci_level)
            for offset in range(n)
        ) / n
        assert averaged_moment("aa", n, fibonacci_level) == pytest.approx(direct)

    def test_every_label(self, fibonacci_level):
        for pair in BAND_PAIRS:
            finite = averaged_moment(pair, 4096, fibonacci_level)
            assert finite == pytest.approx(asymptotic_moment(pair, fibonacci_level), abs=1e-2)

    def test_cross_pairs_come_from_the_oracle(self, fibonacci_level):
        word = band_pair_word("ab", DISJOINT_OFFSET)
        expected = markov_expectation(word, fibonacci_level)
        assert asymptotic_moment("ab", fibonacci_level) == pytest.approx(expected)

    def test_small_ring_rejected(self, fibonacci_level):
        with pytest.raises(RingSizeError):
            averaged_moment("aa", 8, fibonacci_level)

    def test_abelian_band_coefficients(self, abelian):
        mu = band_coefficients(abelian)
        assert (mu["aa"] + mu["dd"] + mu["bb"]).real == pytest.approx(1.0)
        assert mu["ab"] == 0
