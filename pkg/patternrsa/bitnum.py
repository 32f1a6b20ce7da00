"""
Arithmetic on odd residues modulo 2^n and bit-pattern handling

Bit positions are counted from 0 at the least significant bit ("from the
right to the left"); every API below states positions in that convention.
"""

from typing import Tuple

from pydantic import BaseModel, ConfigDict, field_validator, model_validator

from errors import ParameterError


class BitString(BaseModel):
    """MSB-first bit pattern; canonical text is '0'/'1' without separators"""

    model_config = ConfigDict(frozen=True)

    bits: Tuple[int, ...] = ()

    @field_validator("bits")
    @classmethod
    def _only_binary(cls, bits):
        for bit in bits:
            if bit not in (0, 1):
                raise ValueError(f"bit strings hold only 0 and 1, got {bit!r}")
        return bits

    @classmethod
    def parse(cls, text: str) -> "BitString":
        """
        Parse canonical text form

        Args:
            text: String over '0'/'1'; the empty string is the length-0 pattern

        Returns:
            BitString
        """
        text = text.strip()
        if any(ch not in "01" for ch in text):
            raise ParameterError(f"bit string must contain only 0 and 1: {text!r}")
        return cls(bits=tuple(int(ch) for ch in text))

    @classmethod
    def zeros(cls, m: int) -> "BitString":
        if m < 0:
            raise ParameterError(f"pattern length must be nonnegative, got {m}")
        return cls(bits=(0,) * m)

    @property
    def length(self) -> int:
        return len(self.bits)

    @property
    def value(self) -> int:
        return bitstring_value(self)

    def __len__(self) -> int:
        return len(self.bits)

    def __str__(self) -> str:
        return "".join(str(bit) for bit in self.bits)


class OddResidue(BaseModel):
    """Odd u with 0 < u < 2^n, tied to its modulus exponent n"""

    model_config = ConfigDict(frozen=True)

    value: int
    exponent: int

    @model_validator(mode="after")
    def _check(self):
        if self.exponent < 1:
            raise ValueError(f"exponent must be positive, got {self.exponent}")
        if not (0 < self.value < (1 << self.exponent)):
            raise ValueError(f"{self.value} is outside (0, 2^{self.exponent})")
        if self.value % 2 == 0:
            raise ValueError(f"{self.value} is even, hence not a unit modulo 2^{self.exponent}")
        return self


def check_exponent(n: int, minimum: int = 2) -> int:
    if n < minimum:
        raise ParameterError(f"modulus exponent must be at least {minimum}, got {n}")
    return n


def check_odd_residue(u: int, n: int) -> OddResidue:
    """
    Validate an odd residue modulo 2^n

    Args:
        u: Candidate residue
        n: Modulus exponent

    Returns:
        OddResidue wrapping u
    """
    try:
        return OddResidue(value=u, exponent=n)
    except ValueError as e:
        raise ParameterError(str(e)) from None


def inv_mod_pow2(u: int, n: int) -> int:
    """
    Inverse of an odd residue modulo 2^n by Hensel (Newton) lifting

    Starts from the inverse modulo 2 and doubles the precision each step:
    v <- v * (2 - u*v) mod 2^(2j).

    Args:
        u: Odd residue with 0 < u < 2^n
        n: Modulus exponent

    Returns:
        Odd v in (0, 2^n) with u*v = 1 (mod 2^n)
    """
    check_odd_residue(u, n)
    v = 1
    precision = 1
    while precision < n:
        precision = min(2 * precision, n)
        mask = (1 << precision) - 1
        v = (v * (2 - u * v)) & mask
    return v & ((1 << n) - 1)


def mul_mod_pow2(u: int, v: int, n: int) -> int:
    """Product u*v mod 2^n for 0 <= u, v < 2^n"""
    check_exponent(n, 1)
    bound = 1 << n
    if not (0 <= u < bound and 0 <= v < bound):
        raise ParameterError(f"factors must lie in [0, 2^{n}), got {u}, {v}")
    return (u * v) & (bound - 1)


def extract_bits(M: int, hi: int, lo: int) -> BitString:
    """
    Bits hi..lo of M as an MSB-first string (bit hi leftmost)

    Args:
        M: Nonnegative integer
        hi: Highest position, counted from 0 at the least significant bit
        lo: Lowest position

    Returns:
        BitString of length hi - lo + 1
    """
    if not (hi >= lo >= 0):
        raise ParameterError(f"need hi >= lo >= 0, got hi={hi}, lo={lo}")
    if M < 0:
        raise ParameterError(f"bit extraction needs a nonnegative integer, got {M}")
    width = hi - lo + 1
    return value_to_bitstring((M >> lo) & ((1 << width) - 1), width)


def bitstring_value(sigma: BitString) -> int:
    """Integer whose binary representation is sigma"""
    value = 0
    for bit in sigma.bits:
        value = (value << 1) | bit
    return value


def value_to_bitstring(s: int, m: int) -> BitString:
    """
    Length-m pattern of an integer in [0, 2^m)

    Args:
        s: Pattern value
        m: Pattern length

    Returns:
        BitString with value s
    """
    if m < 0:
        raise ParameterError(f"pattern length must be nonnegative, got {m}")
    if not (0 <= s < (1 << m)):
        raise ParameterError(f"value {s} does not fit in {m} bits")
    return BitString(bits=tuple((s >> (m - 1 - i)) & 1 for i in range(m)))


def popcount(M: int) -> int:
    if M < 0:
        raise ParameterError(f"popcount needs a nonnegative integer, got {M}")
    return bin(M).count("1")
