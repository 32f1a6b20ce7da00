"""
Exact brute-force counts N(k) and the averaged identity

    sum_k N(k) = (#P_n)^2 / 2^m + Delta

N(k) counts prime pairs (p, l) from P_n with p*l = 2^(n-m)*s + k (mod 2^n).
All counts come from exhaustive products of P_n; the character-side
reconstruction of Delta is checked against them.
"""

import logging
from enum import Enum
from fractions import Fraction
from functools import lru_cache
from typing import Dict, List, Optional, Sequence

import numpy as np
from pydantic import BaseModel, ConfigDict

from bitnum import BitString, check_exponent
from charsum import character_values_at, all_short_sums, prime_character_sums
from errors import ParameterError
from primes import enumerate_primes
from settings import settings
from utils import render_int

logger = logging.getLogger(__name__)

# Pair products are bucketed in blocks of at least this many entries
_BLOCK_ENTRIES = 1 << 22
_MAX_BLOCK_ENTRIES = 1 << 24


class CountingMode(str, Enum):
    # every (p, l) in P_n x P_n, diagonal included
    ORDERED = "ordered"
    # p != l, matching the "two distinct primes" definition of M_n
    DISTINCT = "distinct"


class CountReport(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True)

    n: int
    m: int
    sigma: BitString
    mode: CountingMode
    prime_count: int
    counts: Optional[List[int]]
    total: int
    main_term: Fraction
    delta: Fraction
    bound_ratio: Optional[float]

    def to_record(self, hex_output: bool = False) -> Dict:
        record = {
            "n": self.n,
            "m": self.m,
            "sigma": str(self.sigma),
            "mode": self.mode.value,
            "prime_count": self.prime_count,
            "total": render_int(self.total, hex_output),
            "main_term": str(self.main_term),
            "delta": str(self.delta),
            "bound_ratio": self.bound_ratio,
        }
        if self.counts is not None:
            record["counts"] = self.counts
        return record


def _check_counting(n: int, m: int, sigma: BitString) -> None:
    check_exponent(n, 2)
    if not (0 <= m <= n):
        raise ParameterError(f"need 0 <= m <= n, got n={n}, m={m}")
    if len(sigma) != m:
        raise ParameterError(f"pattern length {len(sigma)} does not match m={m}")


@lru_cache(maxsize=4)
def _ordered_histogram(n: int) -> np.ndarray:
    # int64 is exact: primes stay below 2^26, so products stay below 2^52
    primes = enumerate_primes(n).primes.astype(np.int64)
    modulus = 1 << n
    mask = modulus - 1
    # products of odd primes are odd; slot u >> 1 holds residue u
    odd_counts = np.zeros(modulus >> 1, dtype=np.int64)

    # A block spans several times 2^(n-1) products, so the bincount's
    # minlength never dominates its work
    entries = min(max(_BLOCK_ENTRIES, 4 * modulus), _MAX_BLOCK_ENTRIES)
    rows = max(1, entries // max(1, primes.size))
    for start in range(0, primes.size, rows):
        chunk = primes[start:start + rows]
        # chunk x primes[start:] counts each unordered pair once, weighted 2.
        # Its leading square holds every pair inside the chunk in both
        # orders, so subtracting it once leaves exact ordered counts.
        products = np.multiply.outer(chunk, primes[start:])
        products &= mask
        products >>= 1
        odd_counts += 2 * np.bincount(products.ravel(), minlength=odd_counts.size)
        np.subtract.at(odd_counts, products[:, :chunk.size].ravel(), 1)

    histogram = np.zeros(modulus, dtype=np.int64)
    histogram[1::2] = odd_counts
    histogram.flags.writeable = False
    return histogram


@lru_cache(maxsize=4)
def _pair_histogram(n: int, mode: CountingMode) -> np.ndarray:
    histogram = _ordered_histogram(n)
    if mode is CountingMode.DISTINCT:
        primes = enumerate_primes(n).primes.astype(np.int64)
        squares = (primes * primes) & ((1 << n) - 1)
        histogram = histogram - np.bincount(squares, minlength=1 << n)
        histogram.flags.writeable = False
    logger.debug("✅ Pair histogram for n=%d (%s): %d pairs", n, mode.value, int(histogram.sum()))
    return histogram


def pair_product_histogram(n: int, mode: CountingMode = CountingMode.ORDERED) -> np.ndarray:
    """
    Number of prime pairs from P_n per residue of p*l mod 2^n

    Args:
        n: Exponent, within the sieve ceiling
        mode: Counting convention

    Returns:
        Read-only int64 array of length 2^n
    """
    enumerate_primes(n)  # enforces the ceiling before the cache
    return _pair_histogram(n, CountingMode(mode))


def count_nk(n: int, m: int, sigma: BitString, k: int, mode: CountingMode = CountingMode.ORDERED) -> int:
    """
    N(k): prime pairs with p*l = 2^(n-m)*s + k (mod 2^n)

    Args:
        n, m, sigma: Pattern parameters
        k: Offset, 0 <= k < 2^(n-m)
        mode: ORDERED admits p = l, DISTINCT drops it

    Returns:
        Exact count (zero for every even k)
    """
    _check_counting(n, m, sigma)
    if not (0 <= k < (1 << (n - m))):
        raise ParameterError(f"k must lie in [0, 2^{n - m}), got {k}")
    target = (sigma.value << (n - m)) + k
    return int(pair_product_histogram(n, mode)[target])


def _pattern_slice(n: int, m: int, sigma: BitString, mode: CountingMode) -> np.ndarray:
    width = 1 << (n - m)
    start = sigma.value << (n - m)
    return pair_product_histogram(n, mode)[start:start + width]


def count_report(
    n: int,
    m: int,
    sigma: BitString,
    mode: CountingMode = CountingMode.ORDERED,
    include_counts: Optional[bool] = None,
) -> CountReport:
    """
    Full N(k) table with the main term (#P_n)^2 / 2^m and the exact Delta

    Args:
        n, m, sigma: Pattern parameters
        mode: Counting convention
        include_counts: Keep the N(k) array; by default only when it has at
            most settings.counts_summary_threshold entries

    Returns:
        CountReport; bound_ratio = |Delta| / (2^(n-m) * #P_n / n^2)
    """
    _check_counting(n, m, sigma)
    mode = CountingMode(mode)
    counts = _pattern_slice(n, m, sigma, mode)
    size = int(counts.size)
    if include_counts is None:
        include_counts = size <= settings.counts_summary_threshold

    prime_count = len(enumerate_primes(n))
    total = int(counts.sum())
    main_term = Fraction(prime_count * prime_count, 1 << m)
    delta = total - main_term
    scale = (1 << (n - m)) * prime_count / (n * n)
    bound_ratio = float(abs(delta)) / scale if prime_count else None

    return CountReport(
        n=n,
        m=m,
        sigma=sigma,
        mode=mode,
        prime_count=prime_count,
        counts=[int(c) for c in counts] if include_counts else None,
        total=total,
        main_term=main_term,
        delta=delta,
        bound_ratio=bound_ratio,
    )


def pattern_totals(n: int, m: int, mode: CountingMode = CountingMode.ORDERED) -> np.ndarray:
    """
    Sum of N(k) over k for every pattern of length m

    Every pair lands in exactly one pattern class, so in ORDERED mode the
    entries add up to (#P_n)^2.

    Returns:
        int64 array of length 2^m indexed by the pattern value
    """
    check_exponent(n, 2)
    if not (0 <= m <= n):
        raise ParameterError(f"need 0 <= m <= n, got n={n}, m={m}")
    histogram = pair_product_histogram(n, mode)
    return histogram.reshape(1 << m, 1 << (n - m)).sum(axis=1)


def bound_scan(n_values: Sequence[int], m: int, sigma: BitString,
               mode: CountingMode = CountingMode.ORDERED) -> List[CountReport]:
    """Count reports (counts suppressed) for each n at a fixed pattern"""
    reports = []
    for n in n_values:
        report = count_report(n, m, sigma, mode, include_counts=False)
        logger.info("🔍 n=%d delta=%s bound_ratio=%.4f", n, report.delta, report.bound_ratio or 0.0)
        reports.append(report)
    return reports


# ---------------------------------------------------------------------------
# Character side
# ---------------------------------------------------------------------------

def _character_terms(n: int, m: int, sigma: BitString):
    """Interval sums S_chi and prime sums T_chi = sum_p chi(p) for the pattern"""
    _check_counting(n, m, sigma)
    if m > n - 1:
        raise ParameterError(f"character side needs m <= n-1, got m={m}")
    enumerate_primes(n)
    table = all_short_sums(sigma.value << (n - m), 1 << (n - m), n)
    return table.sums, prime_character_sums(n)


def delta_via_characters(n: int, m: int, sigma: BitString) -> complex:
    """
    Delta = 2^(-n+1) * sum over nonprincipal chi of
            S_chi * (sum_p chi(p^-1))^2

    with S_chi the sum of chi over the pattern interval
    [2^(n-m)*s, 2^(n-m)*(s+1)). chi(p^-1) is the conjugate of chi(p).
    Matches count_report's ORDERED Delta up to floating error.
    """
    interval_sums, prime_sums = _character_terms(n, m, sigma)
    terms = interval_sums * np.conj(prime_sums) ** 2
    terms[0, 0] = 0
    return complex(terms.sum() / (1 << (n - 1)))


def delta_triangle_bound(n: int, m: int, sigma: BitString) -> float:
    """
    2^(-n+1) * sum over nonprincipal chi of |S_chi| * |sum_p chi(p)|^2

    An explicit upper bound on |Delta| by the triangle inequality.
    """
    interval_sums, prime_sums = _character_terms(n, m, sigma)
    terms = np.abs(interval_sums) * np.abs(prime_sums) ** 2
    terms[0, 0] = 0
    return float(terms.sum() / (1 << (n - 1)))


def nk_via_characters(n: int, m: int, sigma: BitString, k: int) -> complex:
    """
    N(k) from characters (ORDERED mode):

        (#P_n)^2 2^(-n+1) + 2^(-n+1) * sum over nonprincipal chi of
        chi(2^(n-m)*s + k) * (sum_p chi(p^-1))^2

    Zero for even k, where every chi vanishes.
    """
    _check_counting(n, m, sigma)
    if not (0 <= k < (1 << (n - m))):
        raise ParameterError(f"k must lie in [0, 2^{n - m}), got {k}")
    if k % 2 == 0:
        return 0j
    prime_sums = prime_character_sums(n)
    target = (sigma.value << (n - m)) + k
    values = character_values_at(target, n)
    return complex(np.sum(values * np.conj(prime_sums) ** 2) / (1 << (n - 1)))
