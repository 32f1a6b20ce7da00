import cmath

import numpy as np
import pytest
from hypothesis import given, strategies as st

from charsum import (
    PRINCIPAL,
    CharacterIndex,
    all_short_sums,
    character_values_at,
    conjugate_index,
    decay_scan,
    dlog2,
    dlog_exp,
    dlog_table,
    enumerate_characters,
    eval_char,
    group_transform,
    max_nonprincipal_sum,
    orthogonality_check,
    orthogonality_direct,
    prime_character_sums,
    prime_sum_energy,
    short_sum_direct,
    summarize_short_sums,
)
from errors import CeilingExceededError, ParameterError
from primes import enumerate_primes, make_rng, random_below
from settings import configure


@st.composite
def residue_pairs(draw, max_n=10):
    n = draw(st.integers(min_value=3, max_value=max_n))
    u = 2 * draw(st.integers(0, (1 << (n - 1)) - 1)) + 1
    v = 2 * draw(st.integers(0, (1 << (n - 1)) - 1)) + 1
    alpha = draw(st.integers(0, 1))
    beta = draw(st.integers(0, (1 << (n - 2)) - 1))
    return n, u, v, CharacterIndex(alpha, beta)


class TestDiscreteLog:
    def test_generators(self):
        for n in range(3, 20):
            assert dlog2(5, n) == (0, 1)
            assert dlog2((1 << n) - 1, n) == (1, 0)
            assert dlog2(1, n) == (0, 0)

    def test_hand_example(self):
        # 7 = -9 = -(5^2) modulo 16
        assert dlog2(7, 4) == (1, 2)
        assert dlog2(3, 3) == (1, 1)

    def test_round_trip_modulo_2_16(self):
        n = 16
        for u in range(1, 1 << n, 2):
            assert dlog_exp(dlog2(u, n), n) == u

    @pytest.mark.parametrize("n", [3, 4, 9, 12])
    def test_table_matches_bit_lifting(self, n):
        table = dlog_table(n)
        half = 1 << (n - 2)
        for u in range(1, 1 << n, 2):
            a, b = dlog2(u, n)
            assert table[(u - 1) // 2] == a * half + b

    def test_table_is_a_permutation(self):
        table = dlog_table(14)
        assert sorted(table.tolist()) == list(range(1 << 13))

    def test_rejects_even_residue(self):
        with pytest.raises(ParameterError):
            dlog2(6, 5)
        with pytest.raises(ParameterError):
            dlog2(3, 2)


class TestCharacters:
    def test_enumeration(self):
        indices = list(enumerate_characters(6))
        assert len(indices) == 32
        assert indices[0] == PRINCIPAL
        assert len(set(indices)) == 32

    def test_principal_and_units(self):
        n = 6
        for chi in enumerate_characters(n):
            assert eval_char(chi, 1, n) == pytest.approx(1)
            assert eval_char(chi, 0, n) == 0
            assert eval_char(chi, 10, n) == 0
        for u in range(1, 1 << n, 2):
            assert eval_char(PRINCIPAL, u, n) == pytest.approx(1)

    def test_sign_character(self):
        assert eval_char(CharacterIndex(1, 0), 15, 4) == pytest.approx(-1)
        assert eval_char(CharacterIndex(1, 0), 5, 4) == pytest.approx(1)

    @given(residue_pairs())
    def test_multiplicative(self, case):
        n, u, v, chi = case
        product = (u * v) % (1 << n)
        assert eval_char(chi, product, n) == pytest.approx(eval_char(chi, u, n) * eval_char(chi, v, n))

    @given(residue_pairs())
    def test_unit_modulus_and_conjugate(self, case):
        n, u, _, chi = case
        value = eval_char(chi, u, n)
        assert abs(value) == pytest.approx(1)
        assert eval_char(conjugate_index(chi, n), u, n) == pytest.approx(value.conjugate())

    def test_vectorised_values(self):
        n, u = 8, 77
        values = character_values_at(u, n)
        for chi in enumerate_characters(n):
            assert values[chi.alpha, chi.beta] == pytest.approx(eval_char(chi, u, n))

    def test_rejects_bad_index(self):
        with pytest.raises(ParameterError):
            eval_char(CharacterIndex(2, 0), 1, 5)
        with pytest.raises(ParameterError):
            eval_char(CharacterIndex(0, 8), 1, 5)


class TestOrthogonality:
    def test_closed_form(self):
        assert orthogonality_check(1, 8) == 128
        assert orthogonality_check(1 + 256, 8) == 128
        assert orthogonality_check(3, 8) == 0
        assert orthogonality_check(255, 8) == 0

    @pytest.mark.parametrize("n", range(3, 11))
    def test_direct_sum(self, n):
        for u in range(1, 1 << n, 2):
            expected = (1 << (n - 1)) if u == 1 else 0
            assert abs(orthogonality_direct(u, n) - expected) <= 1e-6
            assert orthogonality_check(u, n) == expected

    def test_rejects_even(self):
        with pytest.raises(ParameterError):
            orthogonality_check(4, 6)


class TestShortSums:
    def test_full_period(self):
        table = all_short_sums(0, 8, 3)
        assert table[PRINCIPAL] == pytest.approx(4)
        for chi in list(enumerate_characters(3))[1:]:
            assert abs(table[chi]) <= 1e-9

    def test_empty_interval(self):
        table = all_short_sums(5, 0, 6)
        assert np.allclose(table.sums, 0)
        assert short_sum_direct(CharacterIndex(1, 3), 5, 0, 6) == 0

    def test_principal_counts_odd_points(self):
        n = 10
        assert short_sum_direct(PRINCIPAL, 1, 256, n) == pytest.approx(128)
        assert short_sum_direct(PRINCIPAL, 1, 7, n) == pytest.approx(4)
        assert all_short_sums(3, 101, n).odd_count == 51

    def test_wraps_around(self):
        n = 5
        chi = CharacterIndex(1, 3)
        wrapped = short_sum_direct(chi, 30, 6, n)
        expected = sum(eval_char(chi, t % 32, n) for t in range(30, 36))
        assert wrapped == pytest.approx(expected)

    def test_longer_than_modulus(self):
        n = 6
        chi = CharacterIndex(0, 5)
        assert short_sum_direct(chi, 3, 64 * 3 + 10, n) == pytest.approx(short_sum_direct(chi, 3, 10, n))
        assert all_short_sums(3, 64 * 3 + 10, n)[PRINCIPAL] == pytest.approx(32 * 3 + 5)

    def test_transform_matches_direct_for_every_character(self):
        n = 10
        rng = make_rng(99)
        for _ in range(10):
            t0 = random_below(rng, 1 << n)
            L = 1 + random_below(rng, 1 << n)
            table = all_short_sums(t0, L, n)
            for chi in enumerate_characters(n):
                assert abs(table[chi] - short_sum_direct(chi, t0, L, n)) / L <= 1e-9

    def test_transform_matches_direct_on_sampled_characters(self):
        n = 14
        rng = make_rng(100)
        for _ in range(5):
            t0 = random_below(rng, 1 << n)
            L = 1 + random_below(rng, 1 << n)
            table = all_short_sums(t0, L, n)
            for _ in range(32):
                chi = CharacterIndex(random_below(rng, 2), random_below(rng, 1 << (n - 2)))
                assert abs(table[chi] - short_sum_direct(chi, t0, L, n)) / L <= 1e-9

    @given(st.integers(3, 12).flatmap(lambda n: st.tuples(
        st.just(n), st.integers(0, (1 << n) - 1), st.integers(0, 1 << n))))
    def test_parseval_and_trivial_bound(self, case):
        n, t0, L = case
        table = all_short_sums(t0, L, n)
        odd = table.odd_count
        assert table.energy() == pytest.approx((1 << (n - 1)) * odd, rel=1e-9, abs=1e-6)
        assert np.all(np.abs(table.sums) <= odd + 1e-9)

    @given(st.integers(3, 12).flatmap(lambda n: st.tuples(
        st.just(n), st.integers(0, (1 << n) - 1), st.integers(0, 1 << n))))
    def test_conjugate_symmetry(self, case):
        n, t0, L = case
        table = all_short_sums(t0, L, n)
        half = 1 << (n - 2)
        for alpha in (0, 1):
            flipped = table.sums[alpha, (-np.arange(half)) % half]
            assert np.allclose(flipped, np.conj(table.sums[alpha]), atol=1e-9)

    @pytest.mark.parametrize("chi", [(2, 0), (0, -1), (0, 256), (-1, 3)])
    def test_table_lookup_rejects_bad_index(self, chi):
        table = all_short_sums(0, 5, 10)
        with pytest.raises(ParameterError):
            table[chi]

    def test_group_transform_of_point_mass(self):
        n = 9
        weights = np.zeros(1 << (n - 1))
        weights[0] = 1.0  # u = 1
        assert np.allclose(group_transform(weights, n), 1.0)

    def test_ceiling(self):
        with pytest.raises(CeilingExceededError):
            all_short_sums(0, 1, 23)
        configure(charsum_ceiling=8)
        with pytest.raises(CeilingExceededError):
            all_short_sums(0, 1, 9)


class TestMaxAndSummary:
    def test_full_period_has_no_bias(self):
        magnitude, chi = max_nonprincipal_sum(0, 1 << 10, 10)
        assert magnitude <= 1e-9
        assert chi != PRINCIPAL

    def test_single_point(self):
        magnitude, chi = max_nonprincipal_sum(1, 1, 8)
        assert magnitude == pytest.approx(1)

    def test_argmax_is_a_witness(self):
        n, t0, L = 10, 1, 256
        magnitude, chi = max_nonprincipal_sum(t0, L, n)
        assert chi != PRINCIPAL
        assert abs(short_sum_direct(chi, t0, L, n)) == pytest.approx(magnitude)

    def test_summary_parseval(self):
        summary = summarize_short_sums(7, 300, 11)
        assert summary.odd_count == 150
        assert summary.energy == pytest.approx(summary.expected_energy)
        assert summary.ratio == pytest.approx(summary.max_magnitude / 300)


class TestPrimeSums:
    @pytest.mark.parametrize("n", [6, 10, 12])
    def test_energy_is_diagonal(self, n):
        assert prime_sum_energy(n) == pytest.approx((1 << (n - 1)) * len(enumerate_primes(n)))

    def test_principal_counts_primes(self):
        sums = prime_character_sums(10)
        assert sums[0, 0] == pytest.approx(75)

    def test_matches_termwise_sum(self):
        n = 7
        sums = prime_character_sums(n)
        primes = enumerate_primes(n).to_list()
        for chi in enumerate_characters(n):
            assert sums[chi.alpha, chi.beta] == pytest.approx(sum(eval_char(chi, p, n) for p in primes))


class TestDecayScan:
    def test_rows(self):
        rows = decay_scan(range(6, 9))
        assert [row.n for row in rows] == [6, 7, 8]
        assert [row.L for row in rows] == [16, 32, 64]
        assert all(row.t0 == 1 for row in rows)
        assert all(row.ratio == pytest.approx(row.max_magnitude / row.L) for row in rows)

    def test_rejects_negative_shift(self):
        with pytest.raises(ParameterError):
            decay_scan([8], length_shift=-1)

    @pytest.mark.slow
    def test_ratio_decreases_with_n(self):
        rows = decay_scan(range(12, 21), length_shift=2)
        assert rows[0].ratio > rows[-1].ratio
