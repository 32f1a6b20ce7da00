import math

import pytest
from hypothesis import given, strategies as st

from bitnum import BitString, extract_bits, mul_mod_pow2, popcount, value_to_bitstring
from errors import ParameterError, RoundsExhaustedError
from generator import (
    corollary_m,
    in_proven_regime,
    round_stats,
    rsa_modulus,
    solve_step2,
    sparse_modulus,
    sparse_stats,
    theorem_m,
    verify,
)
from oracle import CountingMode, count_nk
from primes import enumerate_primes, is_prime, make_rng, random_bits


def random_pattern(seed, m):
    return value_to_bitstring(random_bits(make_rng(seed), m), m)


class TestParameterHelpers:
    def test_small_n_has_no_proven_pattern(self):
        assert theorem_m(2) is None
        assert theorem_m(1024) is None
        assert corollary_m(1024) is None
        assert not in_proven_regime(32, 8)

    def test_large_n(self):
        n = 6000
        expected = n - n ** 0.75 * math.log(n)
        assert theorem_m(n) == math.floor(expected) > 0
        assert corollary_m(n) == math.ceil(expected)
        assert in_proven_regime(n, theorem_m(n))
        assert not in_proven_regime(n, theorem_m(n) + 1)


class TestSolveStep2:
    def test_hand_example(self):
        # 37 * 15 = 555 = 8*64 + 43 and 43 = 0b101011
        assert solve_step2(37, 5, 3, 6, 3) == 15

    def test_k_equal_to_p(self):
        # target k = p with s = 0 gives r = 1
        assert solve_step2(5, 0, 5, 6, 3) == 1

    @given(st.integers(min_value=3, max_value=128).flatmap(
        lambda n: st.tuples(st.just(n), st.integers(min_value=1, max_value=n - 1))).flatmap(
        lambda nm: st.tuples(
            st.just(nm[0]), st.just(nm[1]),
            st.integers(0, (1 << (nm[0] - 1)) - 1),
            st.integers(0, (1 << nm[1]) - 1),
            st.integers(0, (1 << (nm[0] - nm[1] - 1)) - 1),
        )))
    def test_congruence_holds(self, case):
        n, m, half_p, s, half_k = case
        p, k = 2 * half_p + 1, 2 * half_k + 1
        r = solve_step2(p, s, k, n, m)
        assert 0 < r < (1 << n) and r % 2 == 1
        assert mul_mod_pow2(p, r, n) == (s << (n - m)) + k

    @pytest.mark.parametrize("p, s, k", [(4, 0, 1), (5, 0, 2), (5, 8, 1), (5, 0, 9)])
    def test_rejects_bad_arguments(self, p, s, k):
        with pytest.raises(ParameterError):
            solve_step2(p, s, k, 6, 3)


class TestRSAModulus:
    @pytest.mark.parametrize("n, m", [(16, 4), (24, 6), (32, 8), (64, 16), (128, 32)])
    def test_output_invariants(self, n, m):
        sigma = random_pattern(n, m)
        record = rsa_modulus(n, m, sigma, seed=n)
        assert record.is_consistent()
        assert extract_bits(record.M, n - 1, n - m) == sigma
        assert record.p != record.l
        assert is_prime(record.p) and is_prime(record.l)
        assert record.rounds >= 1

    def test_accepted_offset_is_odd_and_matches_congruence(self):
        n, m = 32, 8
        sigma = BitString.parse("10110011")
        record = rsa_modulus(n, m, sigma, seed=7)
        assert record.accepted_k % 2 == 1
        assert (record.p * record.l) % (1 << n) == (sigma.value << (n - m)) + record.accepted_k

    def test_reproducible(self):
        sigma = BitString.parse("10110011")
        first = rsa_modulus(32, 8, sigma, seed=7).to_record()
        second = rsa_modulus(32, 8, sigma, seed=7).to_record()
        assert first == second
        assert first["seed"] == "7"
        assert set(first) == {"p", "l", "M", "n", "m", "sigma", "rounds", "seed"}

    def test_hex_record(self):
        record = rsa_modulus(16, 4, BitString.parse("1011"), seed=3)
        rendered = record.to_record(hex_output=True)
        assert rendered["M"] == hex(record.M)
        assert rendered["n"] == 16

    def test_extreme_patterns(self):
        for sigma in (BitString.zeros(10), BitString.parse("1" * 10)):
            assert rsa_modulus(40, 10, sigma, seed=1).is_consistent()

    def test_infeasible_pattern_exhausts_rounds(self):
        # P_2 = {3}: the only pair is (3, 3), excluded since p != l
        with pytest.raises(RoundsExhaustedError) as info:
            rsa_modulus(2, 1, BitString.parse("1"), max_rounds=10)
        assert info.value.rounds == 10

    def test_pattern_without_distinct_pairs(self):
        # Only 23 * 23 reaches 17 modulo 32, so no distinct pair exists
        n, m, sigma = 5, 4, BitString.parse("1000")
        assert count_nk(n, m, sigma, 1, CountingMode.ORDERED) == 1
        assert count_nk(n, m, sigma, 1, CountingMode.DISTINCT) == 0
        with pytest.raises(RoundsExhaustedError):
            rsa_modulus(n, m, sigma, max_rounds=50)

    @pytest.mark.parametrize("n, m, text", [(8, 0, ""), (8, 8, "0" * 8), (8, 3, "10"), (1, 1, "1")])
    def test_rejects_bad_parameters(self, n, m, text):
        with pytest.raises(ParameterError):
            rsa_modulus(n, m, BitString.parse(text))

    @pytest.mark.parametrize("seed", range(6))
    def test_agrees_with_oracle(self, seed):
        n, m = 12, 3
        sigma = random_pattern(seed, m)
        record = rsa_modulus(n, m, sigma, seed=seed)
        assert count_nk(n, m, sigma, record.accepted_k, CountingMode.DISTINCT) >= 1
        prime_set = enumerate_primes(n)
        assert record.p in prime_set and record.l in prime_set


class TestSparse:
    def test_zero_window_and_weight(self):
        n, m = 64, 16
        record = sparse_modulus(n, m, seed=5)
        assert str(extract_bits(record.M, n - 1, n - m)) == "0" * m
        assert popcount(record.M) <= 2 * n - m

    def test_popcount_report(self):
        report = sparse_stats(32, 8, runs=20, seed=11)
        assert report.successes == 20
        assert report.all_patterns_zero
        assert report.max_popcount <= report.popcount_ceiling == 56
        assert sum(report.distribution.values()) == 20
        assert set(report.to_record()["distribution"]) == {str(k) for k in report.distribution}


class TestVerify:
    def test_hand_example(self):
        assert verify(43, 6, 3, BitString.parse("101"))
        assert not verify(43, 6, 3, BitString.parse("011"))

    def test_length_mismatch_is_false(self):
        assert not verify(43, 6, 2, BitString.parse("101"))

    @given(st.integers(min_value=0, max_value=1 << 200))
    def test_high_bits_ignored(self, t):
        assert verify(43 + (t << 6), 6, 3, BitString.parse("101"))


class TestRoundStats:
    def test_all_trials_succeed(self):
        n, m = 32, 8
        stats = round_stats(n, m, random_pattern(3, m), trials=20, seed=3)
        assert stats.success_rate == 1.0
        assert stats.failures == 0
        assert stats.heuristic_mean == pytest.approx(n * math.log(2))
        assert 1 <= stats.mean_rounds <= stats.max_rounds_used <= stats.max_rounds

    def test_failures_are_counted(self):
        stats = round_stats(2, 1, BitString.parse("1"), trials=5, max_rounds=4)
        assert stats.successes == 0
        assert stats.failures == 5
        assert stats.mean_rounds is None

    def test_reproducible(self):
        sigma = BitString.parse("0110")
        assert round_stats(24, 4, sigma, trials=10, seed=1) == round_stats(24, 4, sigma, trials=10, seed=1)

    @pytest.mark.slow
    def test_mean_rounds_near_heuristic(self):
        n, m = 32, 8
        stats = round_stats(n, m, random_pattern(20240601, m), trials=200, seed=20240601)
        assert stats.success_rate == 1.0
        assert 0.2 * n <= stats.mean_rounds <= 3 * n

    def test_rejects_bad_trials(self):
        with pytest.raises(ParameterError):
            round_stats(16, 4, BitString.parse("0000"), trials=0)
