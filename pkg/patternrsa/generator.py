"""
Pattern moduli: M = p*l whose bits at positions n-1 ... n-m spell a
prescribed pattern, plus the sparse (all-zero) variant and round-count
statistics.

Round structure:
  1. draw an odd k in [1, 2^(n-m)) and a prime p from P_n, uniformly
  2. solve p*r = 2^(n-m)*s + k (mod 2^n) for 0 < r < 2^n
  3. accept when 2^(n-1) < r, r != p and r is prime; otherwise restart at 1
"""

import logging
import math
from collections import Counter
from typing import Dict, List, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict

from bitnum import BitString, check_exponent, extract_bits, inv_mod_pow2, popcount
from errors import ParameterError, RoundsExhaustedError, SamplingExhaustedError
from primes import check_seed, derive_rng, is_prime, make_rng, random_below, sample_prime
from settings import settings
from utils import render_int

logger = logging.getLogger(__name__)


class GeneratedModulus(BaseModel):
    model_config = ConfigDict(frozen=True)

    p: int
    l: int
    M: int
    n: int
    m: int
    sigma: BitString
    rounds: int
    seed: int
    stream: Optional[int] = None

    @property
    def accepted_k(self) -> int:
        """k of the accepting round: the low n-m bits of M"""
        return self.M & ((1 << (self.n - self.m)) - 1)

    def is_consistent(self) -> bool:
        """Check every output invariant, recomputing primality independently"""
        low, high = 1 << (self.n - 1), 1 << self.n
        return (
            self.M == self.p * self.l
            and self.p != self.l
            and low < self.p < high
            and low < self.l < high
            and is_prime(self.p)
            and is_prime(self.l)
            and self.M.bit_length() in (2 * self.n - 1, 2 * self.n)
            and verify(self.M, self.n, self.m, self.sigma)
        )

    def to_record(self, hex_output: bool = False) -> Dict:
        record = {
            "p": render_int(self.p, hex_output),
            "l": render_int(self.l, hex_output),
            "M": render_int(self.M, hex_output),
            "n": self.n,
            "m": self.m,
            "sigma": str(self.sigma),
            "rounds": self.rounds,
            "seed": render_int(self.seed),
        }
        if self.stream is not None:
            record["stream"] = self.stream
        return record


class RoundStats(BaseModel):
    n: int
    m: int
    sigma: BitString
    trials: int
    successes: int
    failures: int
    success_rate: float
    mean_rounds: Optional[float]
    median_rounds: Optional[float]
    max_rounds_used: Optional[int]
    max_rounds: int
    heuristic_mean: float
    seed: int

    def to_record(self, hex_output: bool = False) -> Dict:
        record = self.model_dump()
        record["sigma"] = str(self.sigma)
        record["seed"] = render_int(self.seed)
        return record


class PopcountReport(BaseModel):
    n: int
    m: int
    runs: int
    successes: int
    popcount_ceiling: int
    max_popcount: Optional[int]
    mean_popcount: Optional[float]
    mean_zero_bits: Optional[float]
    distribution: Dict[int, int]
    all_patterns_zero: bool
    seed: int

    def to_record(self, hex_output: bool = False) -> Dict:
        record = self.model_dump()
        record["distribution"] = {str(k): v for k, v in sorted(self.distribution.items())}
        record["seed"] = render_int(self.seed)
        return record


# ---------------------------------------------------------------------------
# Parameter helpers
# ---------------------------------------------------------------------------

def _theorem_expression(n: int) -> float:
    check_exponent(n, 2)
    return n - n ** 0.75 * math.log(n)


def theorem_m(n: int) -> Optional[int]:
    """
    floor(n - n^(3/4) ln n), the pattern length covered by the running-time
    guarantee; None when it is not positive (every n below roughly 5500)
    """
    value = math.floor(_theorem_expression(n))
    return value if value >= 1 else None


def corollary_m(n: int) -> Optional[int]:
    """ceil(n - n^(3/4) ln n) for the sparse variant; None when not positive"""
    value = math.ceil(_theorem_expression(n))
    return value if value >= 1 else None


def in_proven_regime(n: int, m: int) -> bool:
    bound = theorem_m(n)
    return bound is not None and m <= bound


def _check_pattern(n: int, m: int, sigma: BitString) -> None:
    check_exponent(n, 2)
    if not (1 <= m <= n - 1):
        raise ParameterError(f"need 1 <= m <= n-1 so an odd k < 2^(n-m) exists, got n={n}, m={m}")
    if len(sigma) != m:
        raise ParameterError(f"pattern length {len(sigma)} does not match m={m}")


# ---------------------------------------------------------------------------
# Algorithm
# ---------------------------------------------------------------------------

def solve_step2(p: int, s: int, k: int, n: int, m: int) -> int:
    """
    Solve the round congruence: r = (2^(n-m)*s + k) * p^(-1) mod 2^n

    Args:
        p: Odd (prime) multiplier
        s: Pattern value, 0 <= s < 2^m
        k: Odd offset, 1 <= k < 2^(n-m)
        n: Exponent
        m: Pattern length, m >= 1

    Returns:
        Odd r in (0, 2^n) with p*r = 2^(n-m)*s + k (mod 2^n)
    """
    check_exponent(n, 2)
    if not (1 <= m <= n - 1):
        raise ParameterError(f"need 1 <= m <= n-1, got m={m}")
    if p % 2 == 0:
        raise ParameterError(f"p must be odd, got {p}")
    if k % 2 == 0:
        raise ParameterError(f"k must be odd (N(k) = 0 for even k), got {k}")
    if not (1 <= k < (1 << (n - m))):
        raise ParameterError(f"k must lie in [1, 2^{n - m}), got {k}")
    if not (0 <= s < (1 << m)):
        raise ParameterError(f"s must lie in [0, 2^{m}), got {s}")

    mask = (1 << n) - 1
    target = (s << (n - m)) + k
    return (target * inv_mod_pow2(p & mask, n)) & mask


def rsa_modulus(
    n: int,
    m: int,
    sigma: BitString,
    seed: int = 0,
    max_rounds: Optional[int] = None,
    rng: Optional[np.random.Generator] = None,
    stream: Optional[int] = None,
) -> GeneratedModulus:
    """
    Run rounds until one is accepted

    Args:
        n: Bit length of both primes
        m: Pattern length, 1 <= m <= n-1
        sigma: Pattern for bits n-1 ... n-m of M
        seed: 64-bit seed, recorded in the output
        max_rounds: Round cap (default: settings.round_factor * n)
        rng: Explicit stream; by default make_rng(seed)
        stream: Index of a derived stream, recorded in the output

    Returns:
        GeneratedModulus in M_{n,m}(sigma)
    """
    _check_pattern(n, m, sigma)
    check_seed(seed)
    if max_rounds is None:
        max_rounds = settings.max_rounds(n)
    if rng is None:
        rng = make_rng(seed)

    s = sigma.value
    low = 1 << (n - 1)
    odd_offsets = 1 << (n - m - 1)

    for round_number in range(1, max_rounds + 1):
        k = 2 * random_below(rng, odd_offsets) + 1
        p = sample_prime(n, rng)
        r = solve_step2(p, s, k, n, m)

        if r <= low or r == p or not is_prime(r):
            continue

        logger.debug("✅ Round %d accepted k=%d, p=%d, l=%d", round_number, k, p, r)
        return GeneratedModulus(
            p=p, l=r, M=p * r, n=n, m=m, sigma=sigma,
            rounds=round_number, seed=seed, stream=stream,
        )

    logger.warning("⚠️ Pattern search exhausted %d rounds (n=%d, m=%d)", max_rounds, n, m)
    raise RoundsExhaustedError(max_rounds, n, m)


def sparse_modulus(
    n: int,
    m: int,
    seed: int = 0,
    max_rounds: Optional[int] = None,
    rng: Optional[np.random.Generator] = None,
    stream: Optional[int] = None,
) -> GeneratedModulus:
    """rsa_modulus with the all-zero pattern: at most 2n - m nonzero bits"""
    return rsa_modulus(n, m, BitString.zeros(m), seed=seed, max_rounds=max_rounds, rng=rng, stream=stream)


def verify(M: int, n: int, m: int, sigma: BitString) -> bool:
    """
    True iff bits n-1 ... n-m of M spell sigma

    Membership in the pattern class only: M is neither factored nor
    checked against M_n.
    """
    if M < 0 or m != len(sigma) or m < 0 or n - m < 0:
        return False
    if m == 0:
        return True
    return extract_bits(M, n - 1, n - m) == sigma


# ---------------------------------------------------------------------------
# Statistics
# ---------------------------------------------------------------------------

def _run_trials(n: int, m: int, sigma: BitString, trials: int, seed: int, max_rounds: Optional[int]):
    """Yield (index, record or None); trial i draws from derive_rng(seed, i)"""
    for index in range(trials):
        try:
            record = rsa_modulus(
                n, m, sigma, seed=seed, max_rounds=max_rounds,
                rng=derive_rng(seed, index), stream=index,
            )
        except (RoundsExhaustedError, SamplingExhaustedError) as e:
            logger.info("❌ Trial %d failed: %s", index, e)
            record = None
        yield index, record


def round_stats(
    n: int,
    m: int,
    sigma: BitString,
    trials: int,
    seed: int = 0,
    max_rounds: Optional[int] = None,
) -> RoundStats:
    """
    Repeat rsa_modulus on independent derived streams and summarize rounds

    Failures are recorded, never raised. The heuristic centre n*ln 2 comes
    from a per-round success chance of about #P_n / 2^(n-1).

    Args:
        n, m, sigma: Algorithm parameters
        trials: Number of independent runs
        seed: Parent seed; trial i uses derive_rng(seed, i)
        max_rounds: Per-trial round cap

    Returns:
        RoundStats
    """
    _check_pattern(n, m, sigma)
    check_seed(seed)
    if trials < 1:
        raise ParameterError(f"trials must be positive, got {trials}")
    cap = settings.max_rounds(n) if max_rounds is None else max_rounds

    rounds: List[int] = [
        record.rounds for _, record in _run_trials(n, m, sigma, trials, seed, cap) if record is not None
    ]
    successes = len(rounds)
    logger.info("🔍 %d/%d trials succeeded for n=%d, m=%d", successes, trials, n, m)

    return RoundStats(
        n=n,
        m=m,
        sigma=sigma,
        trials=trials,
        successes=successes,
        failures=trials - successes,
        success_rate=successes / trials,
        mean_rounds=float(np.mean(rounds)) if rounds else None,
        median_rounds=float(np.median(rounds)) if rounds else None,
        max_rounds_used=int(max(rounds)) if rounds else None,
        max_rounds=cap,
        heuristic_mean=n * math.log(2),
        seed=seed,
    )


def sparse_stats(
    n: int,
    m: int,
    runs: int,
    seed: int = 0,
    max_rounds: Optional[int] = None,
) -> PopcountReport:
    """
    Popcount distribution of sparse moduli over independent runs

    Args:
        n, m: Algorithm parameters (pattern is 0^m)
        runs: Number of independent runs
        seed: Parent seed; run i uses derive_rng(seed, i)
        max_rounds: Per-run round cap

    Returns:
        PopcountReport
    """
    zeros = BitString.zeros(m)
    _check_pattern(n, m, zeros)
    check_seed(seed)
    if runs < 1:
        raise ParameterError(f"runs must be positive, got {runs}")

    records = [record for _, record in _run_trials(n, m, zeros, runs, seed, max_rounds) if record is not None]
    weights = [popcount(record.M) for record in records]
    zero_bits = [record.M.bit_length() - weight for record, weight in zip(records, weights)]

    return PopcountReport(
        n=n,
        m=m,
        runs=runs,
        successes=len(records),
        popcount_ceiling=2 * n - m,
        max_popcount=max(weights) if weights else None,
        mean_popcount=float(np.mean(weights)) if weights else None,
        mean_zero_bits=float(np.mean(zero_bits)) if zero_bits else None,
        distribution=dict(Counter(weights)),
        all_patterns_zero=all(verify(record.M, n, m, zeros) for record in records),
        seed=seed,
    )
