"""
Multihomogeneous forms in n pairs of variables x_{i,0}, x_{i,1} over a `Field`.

A term's exponent tuple is (u1, v1, ..., un, vn) for x_{1,0}^u1 x_{1,1}^v1 ...;
every term of a form of degree (d1, ..., dn) has u_i + v_i = d_i.
"""
import logging
from dataclasses import dataclass
from itertools import product
from typing import Callable, Dict, Iterable, List, Mapping, Sequence, Tuple

import numpy as np
import sympy as sp
from sympy.polys.domains import ZZ
from sympy.polys.galoistools import gf_factor, gf_from_int_poly, gf_gcd

from src.algebra import linalg
from src.algebra.field import Field, Scalar
from src.tools.ErrorAndStatus import DegreeError, FieldErrorCode, InterpolationError
from src.tools.utils import make_rng

logger = logging.getLogger(__name__)

Exponent = Tuple[int, ...]
Pair = Tuple[Scalar, Scalar]
Point = Tuple[Pair, ...]


def monomial_basis(degree: Sequence[int]) -> List[Exponent]:
    """All exponent tuples of the given multidegree, x_{i,0} powers descending (graded-lex)."""
    if any(d < 0 for d in degree):
        return []
    per_factor = [[(u, d - u) for u in range(d, -1, -1)] for d in degree]
    return [tuple(x for pair in combo for x in pair) for combo in product(*per_factor)]


@dataclass(frozen=True)
class MultiForm:
    field: Field
    degree: Tuple[int, ...]
    terms: Tuple[Tuple[Exponent, Scalar], ...] = ()

    @classmethod
    def from_dict(cls, field: Field, degree: Sequence[int], terms: Mapping[Exponent, Scalar]) -> "MultiForm":
        degree = tuple(int(d) for d in degree)
        clean = {}
        for e, c in terms.items():
            c = field(c)
            if c == 0:
                continue
            e = tuple(int(x) for x in e)
            if len(e) != 2 * len(degree) or any(
                    e[2 * i] < 0 or e[2 * i + 1] < 0 or e[2 * i] + e[2 * i + 1] != d for i, d in enumerate(degree)):
                raise DegreeError(f"exponent {e} does not have multidegree {degree}")
            clean[e] = c
        return cls(field, degree, tuple(sorted(clean.items(), reverse=True)))

    @classmethod
    def zero(cls, field: Field, degree: Sequence[int]) -> "MultiForm":
        return cls(field, tuple(degree))

    @classmethod
    def constant(cls, field: Field, c: Scalar, n: int = 3) -> "MultiForm":
        return cls.from_dict(field, (0,) * n, {(0,) * (2 * n): c})

    @classmethod
    def variable(cls, field: Field, factor: int, which: int, n: int = 3) -> "MultiForm":
        """x_{factor, which}, factor counted from 1."""
        e = [0] * (2 * n)
        e[2 * (factor - 1) + which] = 1
        degree = [1 if i == factor - 1 else 0 for i in range(n)]
        return cls.from_dict(field, degree, {tuple(e): 1})

    @property
    def n(self) -> int:
        return len(self.degree)

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def as_dict(self) -> Dict[Exponent, Scalar]:
        return dict(self.terms)

    def __add__(self, other: "MultiForm") -> "MultiForm":
        return _combine(self, other, 1)

    def __sub__(self, other: "MultiForm") -> "MultiForm":
        return _combine(self, other, -1)

    def __neg__(self) -> "MultiForm":
        return self.scale(self.field(-1))

    def scale(self, c: Scalar) -> "MultiForm":
        return MultiForm.from_dict(self.field, self.degree, {e: self.field.mul(v, c) for e, v in self.terms})

    def __mul__(self, other: "MultiForm") -> "MultiForm":
        return form_mul(self, other)

    def coefficient(self, e: Exponent) -> Scalar:
        return self.as_dict().get(tuple(e), self.field.zero)

    def render(self) -> List[dict]:
        return [{"e": list(e), "c": self.field.to_str(c)} for e, c in self.terms]

    def __str__(self) -> str:
        if self.is_zero:
            return "0"
        parts = []
        for e, c in self.terms:
            mono = "*".join(
                f"x{i // 2 + 1}{i % 2}" + (f"^{x}" if x > 1 else "") for i, x in enumerate(e) if x)
            parts.append(f"{self.field.to_str(c)}" + (f"*{mono}" if mono else ""))
        return " + ".join(parts)


def _combine(f: MultiForm, g: MultiForm, sign: int) -> MultiForm:
    f.field.check_same(g.field)
    if f.is_zero and f.degree != g.degree:
        return g if sign == 1 else -g
    if g.is_zero:
        return f
    if f.degree != g.degree:
        raise DegreeError(f"cannot add forms of degrees {f.degree} and {g.degree}")
    field = f.field
    out = f.as_dict()
    for e, c in g.terms:
        out[e] = field.add(out.get(e, field.zero), c if sign == 1 else field.neg(c))
    return MultiForm.from_dict(field, f.degree, out)


def form_mul(f: MultiForm, g: MultiForm) -> MultiForm:
    f.field.check_same(g.field)
    field = f.field
    degree = tuple(x + y for x, y in zip(f.degree, g.degree))
    out: Dict[Exponent, Scalar] = {}
    for e1, c1 in f.terms:
        for e2, c2 in g.terms:
            e = tuple(x + y for x, y in zip(e1, e2))
            out[e] = field.add(out.get(e, field.zero), field.mul(c1, c2))
    return MultiForm.from_dict(field, degree, out)


def random_form(degree: Sequence[int], field: Field, seed=None) -> MultiForm:
    """Uniformly random coefficients on the full monomial basis; deterministic per seed."""
    if any(d < 0 for d in degree):
        raise DegreeError(f"negative degree {tuple(degree)}")
    rng = make_rng(seed)
    return MultiForm.from_dict(field, degree, {e: field.random(rng) for e in monomial_basis(degree)})


def from_vector(field: Field, degree: Sequence[int], coeffs: Sequence[Scalar]) -> MultiForm:
    """Form whose coefficients on `monomial_basis(degree)` are `coeffs`."""
    return MultiForm.from_dict(field, degree, dict(zip(monomial_basis(degree), coeffs)))


def to_vector(f: MultiForm) -> List[Scalar]:
    d = f.as_dict()
    return [d.get(e, f.field.zero) for e in monomial_basis(f.degree)]


def evaluate(f: MultiForm, point: Point) -> Scalar:
    field = f.field
    acc = field.zero
    for e, c in f.terms:
        value = c
        for i, (x0, x1) in enumerate(point):
            value = field.mul(value, field.mul(field.power(x0, e[2 * i]), field.power(x1, e[2 * i + 1])))
        acc = field.add(acc, value)
    return acc


def vanishes_at(f: MultiForm, point: Point) -> bool:
    return evaluate(f, point) == 0


def specialize(f: MultiForm, fixed: Mapping[int, Pair]) -> MultiForm:
    """
    Substitute points for some factors.

    Args:
        f: The form.
        fixed: Map from factor index (counted from 1) to the pair substituted there.

    Returns:
        Form in the remaining pairs, in their original order.
    """
    field = f.field
    keep = [i for i in range(f.n) if i + 1 not in fixed]
    degree = tuple(f.degree[i] for i in keep)
    out: Dict[Exponent, Scalar] = {}
    for e, c in f.terms:
        value = c
        for factor, (x0, x1) in fixed.items():
            i = factor - 1
            value = field.mul(value, field.mul(field.power(x0, e[2 * i]), field.power(x1, e[2 * i + 1])))
        if value == 0:
            continue
        key = tuple(x for i in keep for x in (e[2 * i], e[2 * i + 1]))
        out[key] = field.add(out.get(key, field.zero), value)
    return MultiForm.from_dict(field, degree, out)


def parse_terms(field: Field, degree: Sequence[int], data: Iterable[Mapping]) -> MultiForm:
    """Inverse of `MultiForm.render`."""
    terms: Dict[Exponent, Scalar] = {}
    for item in data:
        e = tuple(int(x) for x in item["e"])
        terms[e] = field.add(terms.get(e, field.zero), field.parse(item["c"]))
    return MultiForm.from_dict(field, degree, terms)


def random_pair(field: Field, rng: np.random.Generator, affine: bool = False) -> Pair:
    """A random point of P^1; with `affine`, of the form [1 : s] with s nonzero."""
    if affine:
        return (field.one, field.random_nonzero(rng))
    while True:
        pair = (field.random(rng), field.random(rng))
        if pair != (0, 0):
            return pair


def random_point(field: Field, seed=None, n: int = 3) -> Point:
    rng = make_rng(seed)
    return tuple(random_pair(field, rng) for _ in range(n))


def roots_in_field(coeffs: Sequence[Scalar], field: Field) -> List[Scalar]:
    """
    Roots in the field of a univariate polynomial given constant-term first.

    The zero polynomial has no well-defined root list and raises ValueError.
    """
    coeffs = [field(c) for c in coeffs]
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    if not coeffs:
        raise ValueError("the zero polynomial vanishes everywhere")
    if len(coeffs) == 1:
        return []
    if field.is_prime:
        poly = gf_from_int_poly([int(c) for c in reversed(coeffs)], field.p)
        _, factors = gf_factor(poly, field.p, ZZ)
        roots = [(-int(fac[1])) % field.p * pow(int(fac[0]), -1, field.p) % field.p
                 for fac, _ in factors if len(fac) == 2]
        return sorted(set(roots))
    roots = _rational_poly(coeffs).ground_roots()
    return sorted(field(sp.Rational(r).p) / field(sp.Rational(r).q) for r in roots)


def common_root_exists(f: Sequence[Scalar], g: Sequence[Scalar], field: Field) -> bool:
    """Whether two univariate polynomials (constant first) share a root over the algebraic closure."""
    f = [field(c) for c in f]
    g = [field(c) for c in g]
    if all(c == 0 for c in f) or all(c == 0 for c in g):
        return True
    if field.is_prime:
        common = gf_gcd(gf_from_int_poly([int(c) for c in reversed(f)], field.p),
                        gf_from_int_poly([int(c) for c in reversed(g)], field.p), field.p, ZZ)
        return len(common) > 1
    return sp.gcd(_rational_poly(f), _rational_poly(g)).degree() > 0


def _rational_poly(coeffs: Sequence[Scalar]) -> sp.Poly:
    return sp.Poly([sp.Rational(c.numerator, c.denominator) for c in reversed(coeffs)], sp.Symbol("x"),
                   domain=sp.QQ)


def polynomial_det(matrix_at: Callable[[Scalar], Sequence[Sequence[Scalar]]], degree_bound: int,
                   field: Field) -> List[Scalar]:
    """Coefficients (constant first) of t -> det(matrix_at(t)), given a bound on its degree."""
    nodes = [field(i) for i in range(degree_bound + 1)]
    values = [linalg.det(matrix_at(t), field) for t in nodes]
    return linalg.interpolate_univariate(nodes, values, field)


@dataclass(frozen=True)
class BihomogeneousPolynomial:
    """A form on P^1 x P^1 (n = 2) together with its bidegree."""

    form: MultiForm

    @property
    def bidegree(self) -> Tuple[int, int]:
        return self.form.degree

    @property
    def observed_bidegree(self) -> Tuple[int, int]:
        """Largest powers of s and t present in the affine chart [1:s] x [1:t]."""
        if self.form.is_zero:
            return (0, 0)
        return (max(e[1] for e, _ in self.form.terms), max(e[3] for e, _ in self.form.terms))

    def affine_coefficients(self) -> Dict[Tuple[int, int], Scalar]:
        return {(e[1], e[3]): c for e, c in self.form.terms}

    def at(self, s: Scalar, t: Scalar) -> Scalar:
        field = self.form.field
        return evaluate(self.form, ((field.one, s), (field.one, t)))

    def vanishes(self, s: Scalar, t: Scalar) -> bool:
        field = self.form.field
        return vanishes_at(self.form, ((field.one, s), (field.one, t)))

    def homogenized_at(self, degree: Tuple[int, int]) -> "BihomogeneousPolynomial":
        """Same affine polynomial viewed in a (smaller or larger) bidegree."""
        field = self.form.field
        terms = {(degree[0] - a, a, degree[1] - b, b): c for (a, b), c in self.affine_coefficients().items()}
        return BihomogeneousPolynomial(MultiForm.from_dict(field, degree, terms))


def interpolate_bihomogeneous(values: Sequence[Sequence[Scalar]], s_values: Sequence[Scalar],
                              t_values: Sequence[Scalar], bidegree: Tuple[int, int], field: Field,
                              normalize: bool = True) -> BihomogeneousPolynomial:
    """
    Fit a bidegree (d, e) form to samples on the affine grid [1:s] x [1:t].

    Args:
        values: values[a][b] is the sample at (s_values[a], t_values[b]).
        s_values: Distinct field elements for the first factor.
        t_values: Distinct field elements for the second factor.
        bidegree: Target bidegree (d, e).
        field: Coefficient field.
        normalize: Scale so the leading coefficient (graded-lex) is 1.

    Returns:
        The fitted polynomial.

    Raises:
        InterpolationError: if the grid cannot determine the fit or the samples
            do not come from a form of this bidegree.
    """
    d, e = bidegree
    basis = monomial_basis((d, e))
    rows, rhs = [], []
    for a, s in enumerate(s_values):
        for b, t in enumerate(t_values):
            rows.append([field.mul(field.power(s, m[1]), field.power(t, m[3])) for m in basis])
            rhs.append(field(values[a][b]))
    if len(set(s_values)) < d + 1 or len(set(t_values)) < e + 1:
        raise InterpolationError(
            f"grid {len(s_values)}x{len(t_values)} cannot determine bidegree {bidegree}",
            FieldErrorCode.UNDERDETERMINED)
    coeffs = linalg.solve(rows, rhs, field, len(basis))
    if coeffs is None:
        raise InterpolationError(f"samples are inconsistent with bidegree {bidegree}", FieldErrorCode.INCONSISTENT,
                                 data={"grid": [len(s_values), len(t_values)], "bidegree": list(bidegree)})
    form = from_vector(field, (d, e), coeffs)
    if normalize and not form.is_zero:
        form = form.scale(field.inv(form.terms[0][1]))
    logger.debug(f"Interpolated bidegree {bidegree} from {len(rows)} samples: {len(form.terms)} terms")
    return BihomogeneousPolynomial(form)
