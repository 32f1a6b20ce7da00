"""
Primality testing, exhaustive enumeration of P_n and uniform prime sampling

P_n is the set of primes p with 2^(n-1) < p < 2^n.
"""

import logging
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Optional

import numpy as np

from bitnum import check_exponent
from errors import CeilingExceededError, ParameterError, SamplingExhaustedError
from settings import settings

logger = logging.getLogger(__name__)

SEED_BOUND = 1 << 64

SMALL_PRIMES = (
    2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47,
    53, 59, 61, 67, 71, 73, 79, 83, 89, 97,
)

# Exact for every odd x < 2^64 (first twelve primes as strong-pseudoprime witnesses)
DETERMINISTIC_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


@dataclass(frozen=True)
class PrimeSet:
    """Sorted, complete P_n"""

    n: int
    primes: np.ndarray

    def __len__(self) -> int:
        return int(self.primes.size)

    def __contains__(self, x: int) -> bool:
        i = int(np.searchsorted(self.primes, x))
        return i < self.primes.size and int(self.primes[i]) == x

    def to_list(self) -> list:
        return [int(p) for p in self.primes]

    def export_text(self) -> str:
        """Newline-separated decimal integers, one prime per line"""
        return "".join(f"{int(p)}\n" for p in self.primes)


# ---------------------------------------------------------------------------
# Randomness
# ---------------------------------------------------------------------------

def check_seed(seed: int) -> int:
    if not (0 <= seed < SEED_BOUND):
        raise ParameterError(f"seed must be a 64-bit unsigned integer, got {seed}")
    return seed


def make_rng(seed: int) -> np.random.Generator:
    """Deterministic PCG64 stream selected by a 64-bit seed"""
    return np.random.Generator(np.random.PCG64(check_seed(seed)))


def derive_rng(seed: int, index: int) -> np.random.Generator:
    """
    Independent stream number `index` under `seed`

    Depends only on (seed, index), never on scheduling, so batches can be
    split across workers and still reproduce bit-for-bit.
    """
    if index < 0:
        raise ParameterError(f"stream index must be nonnegative, got {index}")
    sequence = np.random.SeedSequence(check_seed(seed), spawn_key=(index,))
    return np.random.Generator(np.random.PCG64(sequence))


def random_bits(rng: np.random.Generator, bits: int) -> int:
    """Uniform integer in [0, 2^bits)"""
    if bits <= 0:
        return 0
    nbytes = (bits + 7) // 8
    value = int.from_bytes(rng.bytes(nbytes), "little")
    return value & ((1 << bits) - 1)


def random_below(rng: np.random.Generator, bound: int) -> int:
    """
    Uniform integer in [0, bound) for arbitrarily large bound

    Draws bound.bit_length() random bits and rejects values >= bound, so
    fewer than two draws are needed on average.
    """
    if bound <= 0:
        raise ParameterError(f"bound must be positive, got {bound}")
    if bound == 1:
        return 0
    bits = (bound - 1).bit_length()
    while True:
        value = random_bits(rng, bits)
        if value < bound:
            return value


# ---------------------------------------------------------------------------
# Primality
# ---------------------------------------------------------------------------

def _strong_probable_prime(x: int, base: int, d: int, r: int) -> bool:
    y = pow(base, d, x)
    if y == 1 or y == x - 1:
        return True
    for _ in range(r - 1):
        y = pow(y, 2, x)
        if y == x - 1:
            return True
    return False


def is_prime(x: int, rounds: Optional[int] = None, rng: Optional[np.random.Generator] = None) -> bool:
    """
    Miller-Rabin primality test

    Below 2^64 the fixed witness set makes the answer exact. Above it,
    `rounds` random bases bound the error by 4^(-rounds).

    Args:
        x: Integer to test (x >= 0)
        rounds: Random bases for x >= 2^64 (default: settings.miller_rabin_rounds)
        rng: Source of bases; by default a stream seeded by x itself, so the
            verdict for a given x is reproducible

    Returns:
        True if x is (probably) prime
    """
    if x < 0:
        raise ParameterError(f"primality is defined here for x >= 0, got {x}")
    if x < 2:
        return False
    for p in SMALL_PRIMES:
        if x == p:
            return True
        if x % p == 0:
            return False

    d = x - 1
    r = 0
    while d % 2 == 0:
        d //= 2
        r += 1

    if x < SEED_BOUND:
        return all(_strong_probable_prime(x, a, d, r) for a in DETERMINISTIC_BASES)

    rounds = settings.miller_rabin_rounds if rounds is None else rounds
    if rng is None:
        rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence(x)))
    for _ in range(rounds):
        base = 2 + random_below(rng, x - 3)
        if not _strong_probable_prime(x, base, d, r):
            return False
    return True


# ---------------------------------------------------------------------------
# Enumeration
# ---------------------------------------------------------------------------

def _base_primes(limit: int) -> np.ndarray:
    """All primes <= limit by a plain boolean sieve"""
    if limit < 2:
        return np.array([], dtype=np.int64)
    flags = np.ones(limit + 1, dtype=bool)
    flags[:2] = False
    for p in range(2, math.isqrt(limit) + 1):
        if flags[p]:
            flags[p * p::p] = False
    return np.flatnonzero(flags).astype(np.int64)


@lru_cache(maxsize=8)
def _sieve_interval(n: int) -> np.ndarray:
    low = (1 << (n - 1)) + 1
    high = 1 << n  # exclusive
    odd_count = (high - low + 1) // 2
    # flags[i] stands for low + 2*i
    flags = np.ones(odd_count, dtype=bool)

    for p in _base_primes(math.isqrt(high)):
        p = int(p)
        if p == 2:
            continue
        start = max(p * p, ((low + p - 1) // p) * p)
        if start % 2 == 0:
            start += p
        if start >= high:
            continue
        flags[(start - low) // 2::p] = False

    primes = low + 2 * np.flatnonzero(flags).astype(np.int64)
    primes.flags.writeable = False
    return primes


def enumerate_primes(n: int, ceiling: Optional[int] = None) -> PrimeSet:
    """
    Exhaustive P_n by an odd-only sieve of (2^(n-1), 2^n)

    Args:
        n: Exponent, 2 <= n <= ceiling
        ceiling: Largest admissible n (default: settings.sieve_ceiling)

    Returns:
        PrimeSet with sorted primes
    """
    check_exponent(n, 2)
    ceiling = settings.sieve_ceiling if ceiling is None else ceiling
    if n > ceiling:
        raise CeilingExceededError("sieve", n, ceiling)
    return PrimeSet(n=n, primes=_sieve_interval(n))


def prime_count(n: int) -> int:
    """#P_n"""
    return len(enumerate_primes(n))


# ---------------------------------------------------------------------------
# Sampling
# ---------------------------------------------------------------------------

def sample_prime(n: int, rng: np.random.Generator, max_attempts: Optional[int] = None) -> int:
    """
    Uniform random element of P_n by rejection

    Draws uniform odd integers in (2^(n-1), 2^n) and keeps the first prime,
    which is exactly uniform on P_n.

    Args:
        n: Exponent (n >= 2)
        rng: numpy Generator, advanced in place
        max_attempts: Cap on draws (default: settings.sample_attempt_factor * n^2)

    Returns:
        A prime p with 2^(n-1) < p < 2^n
    """
    check_exponent(n, 2)
    if max_attempts is None:
        max_attempts = settings.sample_attempt_cap(n)

    low = (1 << (n - 1)) + 1
    odd_count = 1 << (n - 2)
    for _ in range(max_attempts):
        candidate = low + 2 * random_below(rng, odd_count)
        if is_prime(candidate):
            return candidate

    logger.warning("⚠️ Prime sampling for n=%d gave up after %d attempts", n, max_attempts)
    raise SamplingExhaustedError(max_attempts, n)
