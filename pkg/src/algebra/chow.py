"""
Arithmetic in the Chow ring A(X) = Z[h1, h2, h3]/(h1^2, h2^2, h3^2) of X = P^1 x P^1 x P^1.

Basis order: 1, h1, h2, h3, e1 = h2h3, e2 = h1h3, e3 = h1h2, pt.
"""
import logging
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from math import isqrt
from typing import Iterable, List, Optional, Sequence, Tuple

import sympy as sp

from src.tools.ErrorAndStatus import ChernDataError, ChowErrorCode

logger = logging.getLogger(__name__)

# Each basis element as a bitmask of the h_i it contains.
_MASKS = (0b000, 0b001, 0b010, 0b100, 0b110, 0b101, 0b011, 0b111)
_INDEX = {m: i for i, m in enumerate(_MASKS)}
_WORD_LIMIT = 2 ** 62

T = sp.Symbol("t")


class ShapeTag(str, Enum):
    KERNEL = "kernel"
    GLOBAL = "global"


def _checked(x: int) -> int:
    if abs(x) >= _WORD_LIMIT:
        raise ChernDataError(f"Chow coefficient {x} overflows a machine word", ChowErrorCode.NON_INTEGRAL)
    return x


@dataclass(frozen=True, order=True)
class DivisorClass:
    a1: int = 0
    a2: int = 0
    a3: int = 0

    @classmethod
    def of(cls, values: Sequence[int]) -> "DivisorClass":
        return cls(*(int(v) for v in values))

    @classmethod
    def basis(cls, i: int) -> "DivisorClass":
        return cls.of([1 if j == i else 0 for j in (1, 2, 3)])

    def as_tuple(self) -> Tuple[int, int, int]:
        return (self.a1, self.a2, self.a3)

    def __getitem__(self, i: int) -> int:
        return self.as_tuple()[i]

    def __iter__(self):
        return iter(self.as_tuple())

    def __add__(self, other: "DivisorClass") -> "DivisorClass":
        return DivisorClass(self.a1 + other.a1, self.a2 + other.a2, self.a3 + other.a3)

    def __sub__(self, other: "DivisorClass") -> "DivisorClass":
        return self + (-other)

    def __neg__(self) -> "DivisorClass":
        return DivisorClass(-self.a1, -self.a2, -self.a3)

    def __mul__(self, n: int) -> "DivisorClass":
        return DivisorClass(n * self.a1, n * self.a2, n * self.a3)

    __rmul__ = __mul__

    @property
    def degree(self) -> int:
        """delta(D) = D.h^2 = 2(a1 + a2 + a3)."""
        return 2 * (self.a1 + self.a2 + self.a3)

    @property
    def is_effective(self) -> bool:
        return min(self.as_tuple()) >= 0

    def to_chow(self) -> "ChowElement":
        return ChowElement(div=self)

    def __str__(self) -> str:
        return f"({self.a1},{self.a2},{self.a3})"


@dataclass(frozen=True, order=True)
class CurveClass:
    k1: int = 0
    k2: int = 0
    k3: int = 0

    @classmethod
    def of(cls, values: Sequence[int]) -> "CurveClass":
        return cls(*(int(v) for v in values))

    def as_tuple(self) -> Tuple[int, int, int]:
        return (self.k1, self.k2, self.k3)

    def __getitem__(self, i: int) -> int:
        return self.as_tuple()[i]

    def __iter__(self):
        return iter(self.as_tuple())

    def __add__(self, other: "CurveClass") -> "CurveClass":
        return CurveClass(self.k1 + other.k1, self.k2 + other.k2, self.k3 + other.k3)

    def __neg__(self) -> "CurveClass":
        return CurveClass(-self.k1, -self.k2, -self.k3)

    @property
    def charge(self) -> int:
        return self.k1 + self.k2 + self.k3

    def to_chow(self) -> "ChowElement":
        return ChowElement(curve=self)

    def __str__(self) -> str:
        return f"({self.k1},{self.k2},{self.k3})"


H = DivisorClass(1, 1, 1)
CANONICAL_TWIST = DivisorClass(2, 2, 2)


@dataclass(frozen=True)
class ChowElement:
    c0: int = 0
    div: DivisorClass = DivisorClass()
    curve: CurveClass = CurveClass()
    pt: int = 0

    @classmethod
    def from_coeffs(cls, coeffs: Sequence[int]) -> "ChowElement":
        c = [_checked(int(x)) for x in coeffs]
        return cls(c[0], DivisorClass(c[1], c[2], c[3]), CurveClass(c[4], c[5], c[6]), c[7])

    @classmethod
    def one(cls) -> "ChowElement":
        return cls(c0=1)

    @property
    def coeffs(self) -> Tuple[int, ...]:
        return (self.c0, *self.div.as_tuple(), *self.curve.as_tuple(), self.pt)

    def graded(self, degree: int):
        """Graded piece: int, DivisorClass, CurveClass or int for degree 0..3."""
        return (self.c0, self.div, self.curve, self.pt)[degree]

    def __add__(self, other: "ChowElement") -> "ChowElement":
        return ChowElement.from_coeffs([x + y for x, y in zip(self.coeffs, other.coeffs)])

    def __sub__(self, other: "ChowElement") -> "ChowElement":
        return self + (-other)

    def __neg__(self) -> "ChowElement":
        return ChowElement.from_coeffs([-x for x in self.coeffs])

    def scale(self, n: int) -> "ChowElement":
        return ChowElement.from_coeffs([n * x for x in self.coeffs])

    def __mul__(self, other: "ChowElement") -> "ChowElement":
        return chow_mul(self, other)

    def __pow__(self, n: int) -> "ChowElement":
        result = ChowElement.one()
        for _ in range(n):
            result = chow_mul(result, self)
        return result


def chow_mul(x: ChowElement, y: ChowElement) -> ChowElement:
    """Graded product with h_i^2 = 0."""
    out = [0] * 8
    for i, xi in enumerate(x.coeffs):
        if not xi:
            continue
        for j, yj in enumerate(y.coeffs):
            if not yj or _MASKS[i] & _MASKS[j]:
                continue
            k = _INDEX[_MASKS[i] | _MASKS[j]]
            out[k] = _checked(out[k] + xi * yj)
    return ChowElement.from_coeffs(out)


def degree_of(x: ChowElement) -> int:
    """The point-class coefficient, i.e. the degree of the top-dimensional part."""
    return x.pt


def chow_inverse(x: ChowElement) -> ChowElement:
    """Inverse of a unit 1 + n with n nilpotent: 1 - n + n^2 - n^3."""
    if x.c0 != 1:
        raise ChernDataError(f"{x} is not a unit with constant term 1", ChowErrorCode.NON_INTEGRAL)
    n = x - ChowElement.one()
    return ChowElement.one() - n + n * n - n * n * n


def chern_twist(c1: DivisorClass, c2: CurveClass, s: DivisorClass) -> Tuple[DivisorClass, CurveClass]:
    """Chern data of E(s) for a rank-2 bundle E."""
    correction = c1.to_chow() * s.to_chow() + s.to_chow() * s.to_chow()
    return c1 + s * 2, c2 + correction.curve


def chi_rank2(c1: DivisorClass, c2: CurveClass) -> int:
    """Riemann-Roch for a rank-2 bundle with c3 = 0."""
    a = c1.as_tuple()
    k = c2.as_tuple()
    dot = sum(x * y for x, y in zip(a, k))
    correction = dot + 2 * c2.charge
    if correction % 2:
        raise ChernDataError(f"a.k + 2k = {correction} is odd for c1={c1}, c2={c2}", ChowErrorCode.ODD_CHERN_DATA)
    return (a[0] + 1) * (a[1] + 1) * (a[2] + 1) + 1 - correction // 2


def chi_twist(c2: CurveClass, D: DivisorClass) -> int:
    """chi(E(D)) for rank 2 and c1(E) = 0."""
    d = D.to_chow()
    h = H.to_chow()
    c = c2.to_chow()
    cubic = 2 * degree_of(d * d * d) - 6 * degree_of(c * d)
    if cubic % 6:
        raise ChernDataError(f"chi_twist is not integral for c2={c2}, D={D}", ChowErrorCode.NON_INTEGRAL)
    return cubic // 6 + degree_of(h * (d * d - c)) + degree_of(d * h * h) + 2


def chi_line_bundle(D: DivisorClass) -> int:
    return (D.a1 + 1) * (D.a2 + 1) * (D.a3 + 1)


def total_chern_class(summands: Iterable[Tuple[DivisorClass, int]]) -> ChowElement:
    result = ChowElement.one()
    for twist, mult in summands:
        if mult < 0:
            raise ChernDataError(f"negative multiplicity {mult} for O{twist}", ChowErrorCode.NEGATIVE_MULTIPLICITY)
        result = result * (ChowElement.one() + twist.to_chow()) ** mult
    return result


def chern_of_complex(columns: Sequence[Sequence[Tuple[DivisorClass, int]]], start: int) -> ChowElement:
    """Total Chern class of a bounded complex of split bundles, column j in degree start + j."""
    result = ChowElement.one()
    for j, column in enumerate(columns):
        c = total_chern_class(column)
        result = result * (c if (start + j) % 2 == 0 else chow_inverse(c))
    return result


def shape_terms(shape: ShapeTag, c2: CurveClass):
    """
    The terms (A, B, C) of a monad of the given shape as lists of (twist, multiplicity).

    Raises:
        ChernDataError: if a multiplicity would be negative.
    """
    shape = ShapeTag(shape)
    k1, k2, k3 = c2.as_tuple()
    k = c2.charge
    if min(k1, k2, k3) < 0:
        raise ChernDataError(f"c2={c2} has a negative component", ChowErrorCode.NEGATIVE_MULTIPLICITY)
    h1, h2, h3 = (DivisorClass.basis(i) for i in (1, 2, 3))
    a_terms = [(-h1 - h2, k3), (-h1 - h3, k2), (-h2 - h3, k1)]
    if shape == ShapeTag.KERNEL:
        if k < 2:
            raise ChernDataError(f"kernel shape needs charge >= 2, got {k}", ChowErrorCode.NEGATIVE_MULTIPLICITY)
        b_terms = [(-h1, k2 + k3), (-h2, k1 + k3), (-h3, k1 + k2)]
        c_terms = [(DivisorClass(), k - 2)]
    else:
        if k < 1:
            raise ChernDataError(f"global shape needs charge >= 1, got {k}", ChowErrorCode.NEGATIVE_MULTIPLICITY)
        b_terms = [(DivisorClass(), 3 * k + 2)]
        c_terms = [(h1, k2 + k3), (h2, k1 + k3), (h3, k1 + k2)]
    return a_terms, b_terms, c_terms


def chern_of_monad(shape: ShapeTag, c2: CurveClass) -> Tuple[DivisorClass, CurveClass, int]:
    """(c1, c2, c3) of the cohomology of a monad of the given shape, c(B)/(c(A)c(C))."""
    a_terms, b_terms, c_terms = shape_terms(shape, c2)
    c = chern_of_complex([a_terms, b_terms, c_terms], start=-1)
    logger.debug(f"chern_of_monad({ShapeTag(shape).value}, {c2}) = {c.coeffs}")
    return c.div, c.curve, c.pt


def slope(c1: DivisorClass, rank: int) -> Fraction:
    if rank <= 0:
        raise ChernDataError(f"slope needs positive rank, got {rank}", ChowErrorCode.BAD_RANK)
    return Fraction(c1.degree, rank)


def reduced_hilbert_poly(c1: DivisorClass, c2: CurveClass, rank: int) -> sp.Poly:
    """P(t) = chi(F(th))/rk(F) as a polynomial in t."""
    if rank == 1:
        if c2 != CurveClass():
            raise ChernDataError(f"a line bundle has c2 = 0, got {c2}", ChowErrorCode.BAD_RANK)
        expr = (c1.a1 + T + 1) * (c1.a2 + T + 1) * (c1.a3 + T + 1)
        return sp.Poly(sp.expand(expr), T)
    if rank == 2:
        samples = [(t, sp.Rational(chi_rank2(*chern_twist(c1, c2, H * t)), 2)) for t in range(4)]
        return sp.Poly(sp.expand(sp.interpolate(samples, T)), T)
    raise ChernDataError(f"unsupported rank {rank}", ChowErrorCode.BAD_RANK)


def hilbert_difference(a: int, b: int) -> sp.Expr:
    """P_{O(2a,2b,-2a-2b)}(t) - P_{O}(t)."""
    twist = DivisorClass(2 * a, 2 * b, -2 * a - 2 * b)
    diff = reduced_hilbert_poly(twist, CurveClass(), 1) - reduced_hilbert_poly(DivisorClass(), CurveClass(), 1)
    return sp.expand(diff.as_expr())


@dataclass(frozen=True)
class SemistableClass:
    a: int
    b: int
    admissible: bool
    c2: CurveClass
    l: Optional[int] = None
    index: Optional[int] = None
    reason: str = ""


def classify_strictly_semistable(a: int, b: int) -> SemistableClass:
    """
    Numerical type of a strictly semistable extension with destabilizing class
    a h1 + b h2 - (a + b) h3: c2 = 2b(a+b) e1 + 2a(a+b) e2 - 2ab e3.
    """
    c2 = CurveClass(2 * b * (a + b), 2 * a * (a + b), -2 * a * b)
    if a == 0 and b == 0:
        return SemistableClass(a, b, False, c2, reason="rejected, charge 0")
    if min(c2.as_tuple()) < 0:
        return SemistableClass(a, b, False, c2, reason="negative component of c2")
    k = c2.charge
    if k < 2:
        return SemistableClass(a, b, False, c2, reason=f"charge {k} < 2")
    l = isqrt(k // 2)
    index = next(i + 1 for i, x in enumerate(c2.as_tuple()) if x)
    return SemistableClass(a, b, True, c2, l=l, index=index, reason=f"k = 2*{l}^2")


def admissible_semistable_classes(bound: int) -> List[SemistableClass]:
    return [
        result
        for a in range(-bound, bound + 1)
        for b in range(-bound, bound + 1)
        if (result := classify_strictly_semistable(a, b)).admissible
    ]


def semistable_witness_pattern(index: int, l: int) -> Tuple[DivisorClass, DivisorClass]:
    """The two degree-zero twists +-(l h_j - l h_m) carrying sections of a strictly semistable E
    with c2 = 2l^2 e_index."""
    j, m = [x for x in (1, 2, 3) if x != index]
    w = DivisorClass.basis(j) * l - DivisorClass.basis(m) * l
    return w, -w


def chern_character6(rank: int, c1: DivisorClass, c2: CurveClass, c3: int = 0) -> ChowElement:
    """6 ch(F) = 6 rk + 6 c1 + 3(c1^2 - 2 c2) + (c1^3 - 3 c1 c2 + 3 c3)."""
    d = c1.to_chow()
    c = c2.to_chow()
    top = d * d * d - (d * c).scale(3) + ChowElement(pt=3 * c3)
    return ChowElement(c0=6 * rank) + d.scale(6) + (d * d - c.scale(2)).scale(3) + top


def dual_character(ch: ChowElement) -> ChowElement:
    return ChowElement(ch.c0, -ch.div, ch.curve, -ch.pt)


TODD = (ChowElement.one() + DivisorClass(1, 0, 0).to_chow()) \
    * (ChowElement.one() + DivisorClass(0, 1, 0).to_chow()) \
    * (ChowElement.one() + DivisorClass(0, 0, 1).to_chow())


def hrr_chi(ch_scaled: ChowElement, scale: int = 6) -> int:
    """Hirzebruch-Riemann-Roch from a scaled Chern character `scale * ch`."""
    value = degree_of(ch_scaled * TODD)
    if value % scale:
        raise ChernDataError(f"HRR value {value}/{scale} is not integral", ChowErrorCode.NON_INTEGRAL)
    return value // scale


def chi_end(c2: CurveClass) -> int:
    """chi(E, E) for rank 2, c1 = 0, c3 = 0 (equals 4 - 4k)."""
    ch = chern_character6(2, DivisorClass(), c2)
    return hrr_chi(ch * dual_character(ch), scale=36)


def line_structure_chern(family: int) -> ChowElement:
    """Total Chern class of O_l for a line of class e_family, from its Koszul resolution."""
    j, m = [x for x in (1, 2, 3) if x != family]
    hj, hm = DivisorClass.basis(j), DivisorClass.basis(m)
    columns = [[(-hj - hm, 1)], [(-hj, 1), (-hm, 1)], [(DivisorClass(), 1)]]
    return chern_of_complex(columns, start=-2)


def elementary_modification_c2(c2: CurveClass, family: int) -> CurveClass:
    """c2 of the kernel G of E -> O_l for a line of class e_family."""
    bump = [1 if i == family else 0 for i in (1, 2, 3)]
    return c2 + CurveClass.of(bump)
