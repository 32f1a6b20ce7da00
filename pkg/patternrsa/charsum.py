"""
Multiplicative characters modulo 2^n

Every odd u is uniquely (-1)^a * 5^b (mod 2^n) with a in Z/2, b in Z/2^(n-2).
The character with index (alpha, beta) is

    chi(u) = (-1)^(a*alpha) * e(b*beta / 2^(n-2)),   e(x) = exp(2*pi*i*x)

and vanishes on even u. Index (0, 0) is the principal character. Group
tables use the flat layout a*2^(n-2) + b, so a weight vector over odd
residues transforms to all 2^(n-1) character sums with one butterfly along
the Z/2 axis and one length-2^(n-2) FFT.
"""

import cmath
import logging
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator, List, NamedTuple, Optional, Sequence, Tuple

import numpy as np
from pydantic import BaseModel

from bitnum import check_exponent, check_odd_residue
from errors import CeilingExceededError, ParameterError
from primes import enumerate_primes
from settings import settings

logger = logging.getLogger(__name__)


class DlogCoords(NamedTuple):
    a: int
    b: int


class CharacterIndex(NamedTuple):
    alpha: int
    beta: int


PRINCIPAL = CharacterIndex(0, 0)


def _check_character_exponent(n: int, ceiling: Optional[int] = None) -> int:
    check_exponent(n, 3)
    ceiling = settings.charsum_ceiling if ceiling is None else ceiling
    if n > ceiling:
        raise CeilingExceededError("charsum", n, ceiling)
    return n


def _check_index(chi: CharacterIndex, n: int) -> CharacterIndex:
    alpha, beta = chi
    if alpha not in (0, 1) or not (0 <= beta < (1 << (n - 2))):
        raise ParameterError(f"character index {tuple(chi)} is outside Z/2 x Z/2^{n - 2}")
    return CharacterIndex(alpha, beta)


# ---------------------------------------------------------------------------
# Coordinates
# ---------------------------------------------------------------------------

def dlog2(u: int, n: int) -> DlogCoords:
    """
    Coordinates (a, b) with u = (-1)^a * 5^b (mod 2^n)

    a = 0 iff u = 1 (mod 4). b is lifted bit by bit: once 5^b matches +-u
    modulo 2^(j-1), it either matches modulo 2^j already or after
    multiplying by 5^(2^(j-3)) = 1 + 2^(j-1) (mod 2^j).

    Args:
        u: Odd residue, 0 < u < 2^n
        n: Exponent, n >= 3

    Returns:
        DlogCoords
    """
    check_exponent(n, 3)
    check_odd_residue(u, n)
    modulus = 1 << n
    a = 0 if u % 4 == 1 else 1
    w = u if a == 0 else modulus - u

    b = 0
    for j in range(3, n + 1):
        mod_j = 1 << j
        if pow(5, b, mod_j) != w % mod_j:
            b += 1 << (j - 3)
    return DlogCoords(a, b)


def dlog_exp(coords: DlogCoords, n: int) -> int:
    """(-1)^a * 5^b mod 2^n"""
    check_exponent(n, 3)
    modulus = 1 << n
    value = pow(5, coords.b, modulus)
    return (modulus - value) % modulus if coords.a else value


@lru_cache(maxsize=4)
def _dlog_table(n: int) -> np.ndarray:
    half = 1 << (n - 2)
    modulus = 1 << n
    mask = np.uint64(modulus - 1)

    # powers[b] = 5^b mod 2^n, filled by doubling blocks
    powers = np.empty(half, dtype=np.uint64)
    powers[0] = 1
    size, multiplier = 1, 5
    while size < half:
        powers[size:2 * size] = (powers[:size] * np.uint64(multiplier)) & mask
        multiplier = multiplier * multiplier % modulus
        size *= 2

    exponents = np.arange(half, dtype=np.int64)
    table = np.empty(2 * half, dtype=np.int64)
    table[((powers - np.uint64(1)) >> np.uint64(1)).astype(np.int64)] = exponents
    negatives = np.uint64(modulus) - powers
    table[((negatives - np.uint64(1)) >> np.uint64(1)).astype(np.int64)] = half + exponents
    table.flags.writeable = False
    return table


def dlog_table(n: int) -> np.ndarray:
    """
    Flat coordinates of every odd residue

    Returns:
        Array T of length 2^(n-1) with T[(u-1)//2] = a*2^(n-2) + b
    """
    _check_character_exponent(n)
    return _dlog_table(n)


def flat_coordinates(residues: np.ndarray, n: int) -> np.ndarray:
    """Flat (a, b) index of each odd residue in an integer array"""
    residues = np.asarray(residues, dtype=np.int64)
    if residues.size and np.any(residues % 2 == 0):
        raise ParameterError("flat coordinates exist only for odd residues")
    return dlog_table(n)[(residues & ((1 << n) - 1)) >> 1]


# ---------------------------------------------------------------------------
# Characters
# ---------------------------------------------------------------------------

def enumerate_characters(n: int) -> Iterator[CharacterIndex]:
    """All 2^(n-1) indices, principal first"""
    check_exponent(n, 3)
    for alpha in (0, 1):
        for beta in range(1 << (n - 2)):
            yield CharacterIndex(alpha, beta)


def conjugate_index(chi: CharacterIndex, n: int) -> CharacterIndex:
    """Index of the complex-conjugate character: (alpha, -beta)"""
    alpha, beta = _check_index(chi, n)
    return CharacterIndex(alpha, (-beta) % (1 << (n - 2)))


def eval_char(chi: CharacterIndex, u: int, n: int) -> complex:
    """
    chi(u) for 0 <= u < 2^n; zero on even u

    Args:
        chi: Character index
        u: Residue
        n: Exponent, n >= 3

    Returns:
        Complex value of unit modulus on odd u
    """
    check_exponent(n, 3)
    alpha, beta = _check_index(chi, n)
    if not (0 <= u < (1 << n)):
        raise ParameterError(f"residue must lie in [0, 2^{n}), got {u}")
    if u % 2 == 0:
        return 0j
    a, b = dlog2(u, n)
    half = 1 << (n - 2)
    sign = -1 if (a * alpha) % 2 else 1
    return sign * cmath.exp(2j * math.pi * ((b * beta) % half) / half)


def _values_at(flat: np.ndarray, chi: CharacterIndex, n: int) -> np.ndarray:
    half = 1 << (n - 2)
    a, b = np.divmod(flat, half)
    signs = np.where((a * chi.alpha) % 2 == 1, -1.0, 1.0)
    return signs * np.exp(2j * np.pi * ((b * chi.beta) % half) / half)


def character_values_at(u: int, n: int) -> np.ndarray:
    """chi(u) for every chi, shaped (2, 2^(n-2)); u odd"""
    half = 1 << (n - 2)
    a, b = dlog2(u, n)
    betas = np.arange(half, dtype=np.int64)
    row = np.exp(2j * np.pi * ((b * betas) % half) / half)
    return np.stack([row, -row if a else row])


def orthogonality_check(u: int, n: int) -> int:
    """
    Exact sum of chi(u) over all characters: 2^(n-1) if u = 1 (mod 2^n), else 0

    Closed form over coordinates: summing (-1)^(a*alpha) over alpha gives
    2*[a = 0], summing e(b*beta/2^(n-2)) over beta gives 2^(n-2)*[b = 0].
    """
    check_exponent(n, 3)
    if u % 2 == 0:
        raise ParameterError(f"u must be odd, got {u}")
    a, b = dlog2(u % (1 << n), n)
    return (1 << (n - 1)) if a == 0 and b == 0 else 0


def orthogonality_direct(u: int, n: int) -> complex:
    """Sum of chi(u) over all 2^(n-1) characters, by direct floating summation"""
    _check_character_exponent(n)
    if u % 2 == 0:
        raise ParameterError(f"u must be odd, got {u}")
    return complex(character_values_at(u % (1 << n), n).sum())


# ---------------------------------------------------------------------------
# Short sums
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ShortSumTable:
    """Sums of chi over t0 <= t < t0 + L for every chi, shaped (2, 2^(n-2))"""

    n: int
    t0: int
    L: int
    sums: np.ndarray

    def __getitem__(self, chi) -> complex:
        alpha, beta = _check_index(CharacterIndex(*chi), self.n)
        return complex(self.sums[alpha, beta])

    @property
    def odd_count(self) -> int:
        return int(round(self.sums[0, 0].real))

    def energy(self) -> float:
        """Sum of |S_chi|^2 over all characters"""
        return float(np.sum(np.abs(self.sums) ** 2))

    def nonprincipal_magnitudes(self) -> np.ndarray:
        magnitudes = np.abs(self.sums)
        magnitudes[0, 0] = -1.0
        return magnitudes


def _interval_points(t0: int, L: int, n: int) -> Tuple[np.ndarray, int]:
    """Odd residues hit by t0 .. t0+L-1 in one partial period, plus full periods"""
    if t0 < 0 or L < 0:
        raise ParameterError(f"need t0 >= 0 and L >= 0, got t0={t0}, L={L}")
    modulus = 1 << n
    periods, rest = divmod(L, modulus)
    start = t0 % modulus
    points = (start + np.arange(rest, dtype=np.int64)) % modulus
    return points[points % 2 == 1], periods


def _interval_weights(t0: int, L: int, n: int) -> np.ndarray:
    points, periods = _interval_points(t0, L, n)
    weights = np.bincount(flat_coordinates(points, n), minlength=1 << (n - 1)).astype(np.float64)
    return weights + periods


def short_sum_direct(chi: CharacterIndex, t0: int, L: int, n: int) -> complex:
    """
    Sum of chi((t0 + k) mod 2^n) over 0 <= k < L, term by term

    Args:
        chi: Character index
        t0: Interval start (>= 0)
        L: Interval length (>= 0)
        n: Exponent

    Returns:
        Complex sum
    """
    _check_character_exponent(n)
    chi = _check_index(chi, n)
    points, periods = _interval_points(t0, L, n)
    total = complex(_values_at(flat_coordinates(points, n), chi, n).sum())
    if periods:
        full = 1 << (n - 1) if chi == PRINCIPAL else 0
        total += periods * full
    return total


def group_transform(weights: np.ndarray, n: int) -> np.ndarray:
    """
    Character transform of a weight vector on odd residues

    Args:
        weights: Length 2^(n-1), flat (a, b) layout
        n: Exponent

    Returns:
        Array (2, 2^(n-2)) with entry [alpha, beta] = sum_u w(u) chi_(alpha,beta)(u)
    """
    _check_character_exponent(n)
    half = 1 << (n - 2)
    grid = np.asarray(weights, dtype=np.float64).reshape(2, half)
    # Z/2 axis: butterfly
    rows = np.stack([grid[0] + grid[1], grid[0] - grid[1]])
    # Z/2^(n-2) axis: sum_b y[b] e(+b*beta/half) = half * ifft(y)[beta]
    return np.fft.ifft(rows, axis=1) * half


def all_short_sums(t0: int, L: int, n: int) -> ShortSumTable:
    """
    Every character's sum over t0 .. t0+L-1 at once

    The indicator of the odd points is laid out in (a, b) coordinates and
    transformed over Z/2 x Z/2^(n-2).
    """
    _check_character_exponent(n)
    sums = group_transform(_interval_weights(t0, L, n), n)
    return ShortSumTable(n=n, t0=t0, L=L, sums=sums)


def max_nonprincipal_sum(t0: int, L: int, n: int) -> Tuple[float, CharacterIndex]:
    """
    Largest |sum| over nonprincipal characters, with a witnessing index

    Returns:
        (magnitude, argmax index)
    """
    table = all_short_sums(t0, L, n)
    magnitudes = table.nonprincipal_magnitudes()
    alpha, beta = np.unravel_index(int(np.argmax(magnitudes)), magnitudes.shape)
    return float(magnitudes[alpha, beta]), CharacterIndex(int(alpha), int(beta))


class ScanRow(BaseModel):
    n: int
    L: int
    t0: int
    max_magnitude: float
    argmax_alpha: int
    argmax_beta: int
    ratio: float

    def as_row(self) -> list:
        return [self.n, self.L, self.t0, repr(self.max_magnitude),
                self.argmax_alpha, self.argmax_beta, repr(self.ratio)]


SCAN_HEADER = ("n", "L", "t0", "max_magnitude", "argmax_alpha", "argmax_beta", "ratio")


def decay_scan(n_values: Sequence[int], length_shift: int = 2, t0: Optional[int] = None) -> List[ScanRow]:
    """
    max |nonprincipal sum| / L for L = 2^(n - length_shift) across n

    Args:
        n_values: Exponents to scan
        length_shift: L = 2^(n - length_shift), fixing L / 2^n
        t0: Interval start; defaults to 1

    Returns:
        One ScanRow per n
    """
    if length_shift < 0:
        raise ParameterError(f"length shift must be nonnegative, got {length_shift}")
    rows = []
    for n in n_values:
        L = 1 << max(n - length_shift, 0)
        start = 1 if t0 is None else t0
        magnitude, chi = max_nonprincipal_sum(start, L, n)
        logger.info("🔍 n=%d L=%d max|S|/L=%.6f", n, L, magnitude / L)
        rows.append(ScanRow(
            n=n, L=L, t0=start, max_magnitude=magnitude,
            argmax_alpha=chi.alpha, argmax_beta=chi.beta, ratio=magnitude / L,
        ))
    return rows


# ---------------------------------------------------------------------------
# Prime sums
# ---------------------------------------------------------------------------

def prime_character_sums(n: int) -> np.ndarray:
    """
    Sum of chi(p) over p in P_n for every chi

    Returns:
        Array (2, 2^(n-2)); the sum of chi(p^-1) is its complex conjugate
    """
    _check_character_exponent(n)
    primes = enumerate_primes(n).primes
    weights = np.bincount(flat_coordinates(primes, n), minlength=1 << (n - 1))
    return group_transform(weights, n)


def prime_sum_energy(n: int) -> float:
    """
    Sum over chi of |sum_p chi(p)|^2

    Expanding the square gives pairs (p, l) weighted by sum_chi chi(p/l),
    which vanishes unless p = l, so the result is 2^(n-1) * #P_n.
    """
    return float(np.sum(np.abs(prime_character_sums(n)) ** 2))


class CharsumSummary(BaseModel):
    n: int
    t0: int
    L: int
    odd_count: int
    max_magnitude: float
    argmax_alpha: int
    argmax_beta: int
    ratio: Optional[float]
    energy: float
    expected_energy: int

    def to_record(self, hex_output: bool = False) -> dict:
        return self.model_dump()


def summarize_short_sums(t0: int, L: int, n: int) -> CharsumSummary:
    """
    Principal count, largest nonprincipal sum and the Parseval check

    The energy sum_chi |S_chi|^2 equals 2^(n-1) times the sum of squared
    multiplicities of the interval's odd points (the odd count when L <= 2^n).
    """
    table = all_short_sums(t0, L, n)
    magnitudes = table.nonprincipal_magnitudes()
    alpha, beta = np.unravel_index(int(np.argmax(magnitudes)), magnitudes.shape)
    magnitude = float(magnitudes[alpha, beta])
    weights = _interval_weights(t0, L, n)
    return CharsumSummary(
        n=n,
        t0=t0,
        L=L,
        odd_count=table.odd_count,
        max_magnitude=magnitude,
        argmax_alpha=int(alpha),
        argmax_beta=int(beta),
        ratio=magnitude / L if L else None,
        energy=table.energy(),
        expected_energy=(1 << (n - 1)) * int(np.sum(weights ** 2)),
    )
