"""Closed-form cohomology of line bundles on products of projective lines."""
import logging
from dataclasses import dataclass
from itertools import product
from typing import Iterable, List, Sequence, Tuple

from src.algebra.chow import DivisorClass
from src.algebra.multipoly import Exponent, monomial_basis
from src.schema import CohVector

logger = logging.getLogger(__name__)


def h_p1(a: int, i: int) -> int:
    if i == 0:
        return a + 1 if a >= 0 else 0
    if i == 1:
        return -a - 1 if a <= -2 else 0
    return 0


def h_product(twist: Sequence[int], i: int) -> int:
    """h^i of O(a_1, ..., a_n) on (P^1)^n by Kunneth."""
    total = 0
    for degrees in product((0, 1), repeat=len(twist)):
        if sum(degrees) != i:
            continue
        term = 1
        for a, q in zip(twist, degrees):
            term *= h_p1(a, q)
            if not term:
                break
        total += term
    return total


def h_X(D: DivisorClass, i: int) -> int:
    return h_product(D.as_tuple(), i)


def h_quadric(bidegree: Tuple[int, int], i: int) -> int:
    return h_product(bidegree, i)


def coh_vector(D: DivisorClass) -> CohVector:
    return CohVector.of(h_X(D, i) for i in range(4))


def h0_basis(D: DivisorClass) -> List[Exponent]:
    return monomial_basis(D.as_tuple())


def laurent_range(a: int) -> range:
    """
    Weights w (power of x_0 in x_0^w x_1^(a-w)) carrying cohomology of O_{P^1}(a):
    H^0 for 0 <= w <= a, H^1 for a < w < 0.
    """
    if a >= 0:
        return range(0, a + 1)
    return range(a + 1, 0)


def cohomology_weights(twist: Sequence[int]) -> List[Tuple[int, ...]]:
    return list(product(*(laurent_range(a) for a in twist)))


@dataclass(frozen=True)
class LineBundleSum:
    """Direct sum of line bundles O_X(D)^m, kept in the given order."""

    terms: Tuple[Tuple[DivisorClass, int], ...] = ()

    @classmethod
    def of(cls, terms: Iterable[Tuple[DivisorClass, int]]) -> "LineBundleSum":
        return cls(tuple((DivisorClass.of(d), int(m)) for d, m in terms if m > 0))

    @property
    def rank(self) -> int:
        return sum(m for _, m in self.terms)

    def summands(self) -> List[DivisorClass]:
        """One twist per rank-one summand."""
        return [d for d, m in self.terms for _ in range(m)]

    def twisted(self, D: DivisorClass) -> "LineBundleSum":
        return LineBundleSum(tuple((d + D, m) for d, m in self.terms))

    def h(self, i: int) -> int:
        return sum(m * h_X(d, i) for d, m in self.terms)

    def coh_vector(self) -> CohVector:
        return CohVector.of(self.h(i) for i in range(4))

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        return " + ".join(f"O{d}^{m}" for d, m in self.terms)
