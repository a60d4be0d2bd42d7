import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Union

import numpy as np
from sympy import isprime

from src.tools.ErrorAndStatus import FieldErrorCode, FieldMismatchError, PreconditionError
from src.tools.utils import DEFAULT_PRIME

logger = logging.getLogger(__name__)

Scalar = Union[int, Fraction]

MIN_RECOMMENDED_PRIME = 101
# Random rational coefficients are drawn from [-bound, bound].
RATIONAL_SAMPLE_BOUND = 1000


@dataclass(frozen=True)
class Field:
    """
    Coefficient field: the prime field F_p (elements are ints in [0, p))
    or the rationals (elements are `Fraction`). `p is None` means rationals.
    """

    p: Optional[int] = DEFAULT_PRIME

    def __post_init__(self):
        if self.p is not None:
            if not isprime(self.p):
                raise PreconditionError(f"Modulus {self.p} is not prime", FieldErrorCode.NOT_PRIME)
            if self.p < MIN_RECOMMENDED_PRIME:
                logger.warning(f"Prime {self.p} is small; random degeneracies become likely")

    @classmethod
    def prime(cls, p: int = DEFAULT_PRIME) -> "Field":
        return cls(p)

    @classmethod
    def rationals(cls) -> "Field":
        return cls(None)

    @property
    def is_prime(self) -> bool:
        return self.p is not None

    @property
    def tag(self) -> str:
        return "prime" if self.is_prime else "rational"

    def describe(self) -> dict:
        return {"type": "prime", "p": self.p} if self.is_prime else {"type": "rational"}

    def __str__(self) -> str:
        return f"F_{self.p}" if self.is_prime else "Q"

    def __call__(self, x) -> Scalar:
        if self.is_prime:
            if isinstance(x, Fraction):
                return (x.numerator % self.p) * pow(x.denominator % self.p, -1, self.p) % self.p
            return int(x) % self.p
        return Fraction(x)

    @property
    def zero(self) -> Scalar:
        return self(0)

    @property
    def one(self) -> Scalar:
        return self(1)

    def add(self, x: Scalar, y: Scalar) -> Scalar:
        return (x + y) % self.p if self.is_prime else x + y

    def sub(self, x: Scalar, y: Scalar) -> Scalar:
        return (x - y) % self.p if self.is_prime else x - y

    def mul(self, x: Scalar, y: Scalar) -> Scalar:
        return (x * y) % self.p if self.is_prime else x * y

    def neg(self, x: Scalar) -> Scalar:
        return (-x) % self.p if self.is_prime else -x

    def inv(self, x: Scalar) -> Scalar:
        if x == 0:
            raise ZeroDivisionError("inverse of zero")
        return pow(int(x), -1, self.p) if self.is_prime else 1 / Fraction(x)

    def div(self, x: Scalar, y: Scalar) -> Scalar:
        return self.mul(x, self.inv(y))

    def power(self, x: Scalar, e: int) -> Scalar:
        return pow(int(x), e, self.p) if self.is_prime else Fraction(x) ** e

    def random(self, rng: np.random.Generator) -> Scalar:
        if self.is_prime:
            return int(rng.integers(0, self.p))
        return Fraction(int(rng.integers(-RATIONAL_SAMPLE_BOUND, RATIONAL_SAMPLE_BOUND + 1)))

    def random_nonzero(self, rng: np.random.Generator) -> Scalar:
        while True:
            x = self.random(rng)
            if x != 0:
                return x

    def to_str(self, x: Scalar) -> str:
        if self.is_prime:
            return str(int(x))
        x = Fraction(x)
        return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"

    def parse(self, text: str) -> Scalar:
        if not isinstance(text, str):
            raise ValueError(f"coefficient must be a string, got {type(text).__name__}")
        if self.is_prime:
            if "/" in text:
                raise ValueError(f"fraction '{text}' in a prime-field document")
            return int(text) % self.p
        return Fraction(text)

    def check_same(self, other: "Field") -> None:
        if self != other:
            raise FieldMismatchError(f"Field mismatch: {self} vs {other}")
