"""
Exceptions raised by the pattern-modulus toolkit
"""


class PatternRSAError(Exception):
    """Base class for every error raised by this package"""


class ParameterError(PatternRSAError, ValueError):
    """Invalid input: wrong parity, out of range, mismatched pattern length"""


class CeilingExceededError(ParameterError):
    """Requested size is above a configured sieve or character ceiling"""

    def __init__(self, what: str, value: int, ceiling: int):
        self.what = what
        self.value = value
        self.ceiling = ceiling
        super().__init__(
            f"{what} n={value} exceeds the configured ceiling {ceiling} "
            f"(raise it with --{what}-ceiling or the config file)"
        )


class RoundsExhaustedError(PatternRSAError, RuntimeError):
    """rsa_modulus ran out of rounds without accepting a candidate"""

    def __init__(self, rounds: int, n: int, m: int):
        self.rounds = rounds
        self.n = n
        self.m = m
        super().__init__(
            f"no modulus found in {rounds} rounds for n={n}, m={m} "
            "(unlucky run or infeasible parameters)"
        )


class SamplingExhaustedError(PatternRSAError, RuntimeError):
    """Rejection sampling of a prime gave up after its attempt cap"""

    def __init__(self, attempts: int, n: int):
        self.attempts = attempts
        self.n = n
        super().__init__(f"no prime drawn from P_{n} in {attempts} attempts")
