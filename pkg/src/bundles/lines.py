"""
Lines of the three rulings of X and the restriction of monad bundles to them.

A line of family i is P^1 in factor i times a point p of factor j and a
point q of factor l, where j < l are the two other factors; (p, q) is a point
of the parameter quadric P^1 x P^1.
"""
import logging
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from src.algebra import linalg
from src.algebra.chow import DivisorClass, ShapeTag
from src.algebra.field import Field, Scalar
from src.algebra.multipoly import (BihomogeneousPolynomial, MultiForm, Pair, common_root_exists, evaluate,
                                   from_vector, interpolate_bihomogeneous, polynomial_det, random_pair,
                                   roots_in_field, specialize, to_vector)
from src.bundles.hyperext import context_for
from src.bundles.monad import Monad
from src.schema import HoldoutResult, JumpingDivisor, SplittingType
from src.sheaves.cech import CechContext, LineComplex
from src.tools.ErrorAndStatus import (DegenerateRestrictionError, InterpolationError, LinesErrorCode,
                                      PreconditionError)
from src.tools.utils import make_rng, parallel_map

logger = logging.getLogger(__name__)

HOLDOUT_POINTS = 20
MAX_SPLITTING_ORDER = 64


def other_factors(family: int) -> Tuple[int, int]:
    if family not in (1, 2, 3):
        raise PreconditionError(f"line family must be 1, 2 or 3, got {family}")
    j, l = [x for x in (1, 2, 3) if x != family]
    return j, l


@dataclass(frozen=True)
class Line:
    family: int
    p: Pair
    q: Pair

    @property
    def fixed(self) -> Dict[int, Pair]:
        j, l = other_factors(self.family)
        return {j: self.p, l: self.q}

    def describe(self, field: Field) -> List[str]:
        return [f"family {self.family}", ":".join(field.to_str(x) for x in self.p),
                ":".join(field.to_str(x) for x in self.q)]


def affine_line(family: int, s: Scalar, t: Scalar, field: Field) -> Line:
    return Line(family, (field.one, field(s)), (field.one, field(t)))


def restrict_twist(D: DivisorClass, family: int) -> int:
    return D[family - 1]


def restrict_monad(m: Monad, line: Line) -> LineComplex:
    """The monad restricted to the line, as a complex on P^1 with E|_L in degree 0."""
    fixed = line.fixed
    columns = tuple(tuple((restrict_twist(tw, line.family),) for tw in col) for col in m.shape.summands())
    maps = []
    for matrix in (m.alpha, m.beta):
        entries = {}
        for r, row in enumerate(matrix):
            for c, f in enumerate(row):
                if f.is_zero:
                    continue
                g = specialize(f, fixed)
                if not g.is_zero:
                    entries[(r, c)] = g
        maps.append(entries)
    return LineComplex(m.field, columns, -1, tuple(maps))


def _affine_matrix(K: LineComplex, j: int, t: Scalar) -> List[List[Scalar]]:
    field = K.field
    rows, cols = len(K.columns[j + 1]), len(K.columns[j])
    out = [[field.zero] * cols for _ in range(rows)]
    for (r, c), f in K.maps[j].items():
        out[r][c] = evaluate(f, ((field.one, t),))
    return out


def _minor_combinations(K: LineComplex, j: int, rng: np.random.Generator) -> Tuple[List[Scalar], List[Scalar]]:
    """Two random combinations of the maximal minors of map j, as polynomials on the chart [1:t]."""
    field = K.field
    rows, cols = len(K.columns[j + 1]), len(K.columns[j])
    degree_of = {key: f.degree[0] for key, f in K.maps[j].items()}
    combos = []
    for _ in range(2):
        if j == 0:
            # alpha is injective: minors of size cols, combined by R (cols x rows) on the left
            proj = linalg.random_matrix(cols, rows, field, rng)
            bound = sum(max([d for (r, c), d in degree_of.items() if c == col], default=0) for col in range(cols))
            combos.append(polynomial_det(lambda t: linalg.mat_mul(proj, _affine_matrix(K, j, t), field, cols),
                                         bound, field))
        else:
            proj = linalg.random_matrix(cols, rows, field, rng)
            bound = sum(max([d for (r, c), d in degree_of.items() if r == row], default=0) for row in range(rows))
            combos.append(polynomial_det(lambda t: linalg.mat_mul(_affine_matrix(K, j, t), proj, field, rows),
                                         bound, field))
    return combos[0], combos[1]


def restriction_is_degenerate(m: Monad, line: Line, seed: int = 0) -> bool:
    """Whether alpha|_L or beta|_L drops rank at some point of L (over the algebraic closure)."""
    K = restrict_monad(m, line)
    field = m.field
    rng = make_rng(seed)
    infinity = ((field.zero, field.one),)
    for j, full in ((0, len(K.columns[0])), (1, len(K.columns[2]))):
        if full == 0:
            continue
        at_infinity = [[field.zero] * len(K.columns[j]) for _ in K.columns[j + 1]]
        for (r, c), f in K.maps[j].items():
            at_infinity[r][c] = evaluate(f, infinity)
        if linalg.rank(at_infinity, field, len(K.columns[j])) < full:
            return True
        f1, f2 = _minor_combinations(K, j, rng)
        if common_root_exists(f1, f2, field):
            return True
    return False


def _h0_twisted(K: LineComplex, t: int, context: CechContext) -> int:
    return context.hypercohomology(K.twisted((t,))).h(0)


def splitting_type(m: Monad, line: Line, pad: Optional[int] = None, pad_check: Optional[bool] = None) -> SplittingType:
    """
    (r, -r) where r is the largest t with h^0(E|_L(-t)) > 0, or (0, 0).

    Raises:
        DegenerateRestrictionError: alpha or beta drops rank somewhere on L.
    """
    if restriction_is_degenerate(m, line):
        logger.warning(f"Degenerate restriction on line {line.describe(m.field)}")
        raise DegenerateRestrictionError(f"monad degenerates on line {line.describe(m.field)}")
    K = restrict_monad(m, line)
    context = context_for(m, pad, pad_check)
    r = 0
    for t in range(1, MAX_SPLITTING_ORDER + 1):
        if _h0_twisted(K, -t, context) == 0:
            break
        r = t
    return SplittingType(d1=r, d2=-r)


def jumping_status(m: Monad, line: Line, pad: Optional[int] = None,
                   pad_check: Optional[bool] = None) -> Tuple[bool, bool]:
    """(is_jumping, degenerate): degenerate lines count as jumping."""
    try:
        return not splitting_type(m, line, pad, pad_check).is_trivial, False
    except DegenerateRestrictionError:
        return True, True


def is_jumping(m: Monad, line: Line, pad: Optional[int] = None, pad_check: Optional[bool] = None) -> bool:
    """h^0(E|_L(-1)) > 0, or the restriction degenerates."""
    return jumping_status(m, line, pad, pad_check)[0]


def gamma_matrix(m: Monad, line: Line) -> List[List[Scalar]]:
    """
    Square matrix of size k - k_i whose corank is h^0(E|_L(-1)).

    Kernel shape: the constant entries of alpha|_L from the A-summands
    restricting to O(-1) into the B-summands O(-h_i). Global shape: the
    connecting map H^1(A|_L(-1)) -> H^0(C|_L(-1)) through B.
    """
    i = line.family
    field = m.field
    fixed = line.fixed
    h_i = DivisorClass.basis(i)
    cols = [c for c, tw in enumerate(m.a_twists) if tw[i - 1] == -1]
    if m.shape.tag == ShapeTag.KERNEL:
        rows = [b for b, tw in enumerate(m.b_twists) if tw == -h_i]
        return [[specialize(m.alpha[b][c], fixed).coefficient((0, 0)) for c in cols] for b in rows]
    rows = [r for r, tw in enumerate(m.c_twists) if tw == h_i]
    out = []
    for r in rows:
        row = []
        for c in cols:
            acc = field.zero
            for b in range(len(m.b_twists)):
                a0 = specialize(m.alpha[b][c], fixed).coefficient((1, 0))
                b1 = specialize(m.beta[r][b], fixed).coefficient((0, 1))
                acc = field.add(acc, field.mul(a0, b1))
            row.append(acc)
        out.append(row)
    return out


def gamma_det(m: Monad, line: Line) -> Scalar:
    return linalg.det(gamma_matrix(m, line), m.field)


def expected_bidegree(m: Monad, family: int) -> Tuple[int, int]:
    j, l = other_factors(family)
    return m.c2[l - 1], m.c2[j - 1]


def _distinct_nonzero(field: Field, count: int, rng: np.random.Generator) -> List[Scalar]:
    values: List[Scalar] = []
    while len(values) < count:
        x = field.random_nonzero(rng)
        if x not in values:
            values.append(x)
    return values


def _zero_set_points(poly: BihomogeneousPolynomial, count: int, rng: np.random.Generator,
                     field: Field) -> List[Tuple[Scalar, Scalar]]:
    d, e = poly.observed_bidegree
    coeffs = poly.affine_coefficients()
    points = []
    for _ in range(50 * count):
        if len(points) >= count or (d == 0 and e == 0):
            break
        fixed = field.random_nonzero(rng)
        if e > 0:
            uni = [field.zero] * (e + 1)
            for (a, b), c in coeffs.items():
                uni[b] = field.add(uni[b], field.mul(c, field.power(fixed, a)))
            roots = [x for x in roots_in_field(uni, field) if x != 0] if any(uni) else []
            points.extend((fixed, x) for x in roots[:1])
        else:
            uni = [field.zero] * (d + 1)
            for (a, b), c in coeffs.items():
                uni[a] = field.add(uni[a], field.mul(c, field.power(fixed, b)))
            roots = [x for x in roots_in_field(uni, field) if x != 0] if any(uni) else []
            points.extend((x, fixed) for x in roots[:1])
    return points[:count]


def _holdout(m: Monad, family: int, poly: BihomogeneousPolynomial, rng: np.random.Generator,
             pad: Optional[int], pad_check: Optional[bool], count: int = HOLDOUT_POINTS) -> HoldoutResult:
    field = m.field
    zeros = _zero_set_points(poly, count, rng, field)
    generic = []
    while len(generic) < count:
        s, t = field.random_nonzero(rng), field.random_nonzero(rng)
        if not poly.vanishes(s, t):
            generic.append((s, t))
    result = HoldoutResult(zero_set_points=len(zeros), generic_points=len(generic))
    for s, t in zeros + generic:
        line = affine_line(family, s, t, field)
        jumping = is_jumping(m, line, pad, pad_check)
        if jumping == poly.vanishes(s, t):
            result.consistent += 1
        else:
            result.inconsistent.append([field.to_str(s), field.to_str(t)])
    return result


def jumping_divisor(m: Monad, family: int, grid_size: int = 0, seed: int = 0, holdout: bool = True,
                    pad: Optional[int] = None, pad_check: Optional[bool] = None) -> JumpingDivisor:
    """
    The jumping divisor of one family: det(gamma) sampled on an affine grid of
    the parameter quadric and interpolated.

    The fit is made in bidegree (k - k_i, k - k_i), an upper bound on both
    degrees, so the observed bidegree is read off rather than imposed. The
    grid has one extra point per axis; since the entries of gamma have degree
    at most one in each parameter, the samples of a monad always fit, and an
    inconsistent fit means the gamma determinants themselves are wrong. The
    holdout is reported as data and never raises.

    Raises:
        InterpolationError: UNEXPECTED_BIDEGREE when the samples exceed the
            degree bound; IDENTICALLY_ZERO when det(gamma) vanishes on the grid.
    """
    logger.info(f"=== Starting jumping_divisor: family {family}, c2={m.c2} ===")
    field = m.field
    rng = make_rng(seed)
    j, l = other_factors(family)
    bound = m.c2.charge - m.c2[family - 1]
    size = max(grid_size, bound + 2)
    s_values = _distinct_nonzero(field, size, rng)
    t_values = _distinct_nonzero(field, size, rng)
    values = [[gamma_det(m, affine_line(family, s, t, field)) for t in t_values] for s in s_values]
    try:
        fitted = interpolate_bihomogeneous(values, s_values, t_values, (bound, bound), field)
    except InterpolationError as e:
        logger.error(f"non-generic instanton: divisor has unexpected bidegree ({e})")
        raise InterpolationError("non-generic instanton: divisor has unexpected bidegree",
                                 LinesErrorCode.UNEXPECTED_BIDEGREE, e.data) from e
    if fitted.form.is_zero:
        raise InterpolationError(f"every line of family {family} is jumping", LinesErrorCode.IDENTICALLY_ZERO)
    observed = fitted.observed_bidegree
    poly = fitted.homogenized_at(observed)
    expected = expected_bidegree(m, family)
    if observed == expected:
        convention = f"(k{l}, k{j}) in parameters (x{j}, x{l})"
    elif observed == expected[::-1]:
        convention = f"(k{j}, k{l}) in parameters (x{j}, x{l})"
    else:
        convention = "unexpected"
        logger.warning(f"Family {family}: observed bidegree {observed}, expected {expected}")
    result = JumpingDivisor(
        family=family,
        bidegree=list(observed),
        expected_bidegree=list(expected),
        coefficients=[field.to_str(c) for c in to_vector(poly.form)],
        convention=convention,
    )
    if holdout:
        result.holdout = _holdout(m, family, poly, rng, pad, pad_check)
        logger.info(f"Holdout consistency {result.holdout.consistent}/"
                    f"{result.holdout.zero_set_points + result.holdout.generic_points}")
    return result


def divisor_polynomial(result: JumpingDivisor, field: Field) -> BihomogeneousPolynomial:
    return BihomogeneousPolynomial(from_vector(field, tuple(result.bidegree),
                                               [field.parse(c) for c in result.coefficients]))


def divisor_grid_text(poly: BihomogeneousPolynomial, s_values: Sequence[Scalar], t_values: Sequence[Scalar]) -> str:
    """Vanishing pattern of the divisor on a grid: '0' where it vanishes, '*' elsewhere."""
    field = poly.form.field
    header = "s\\t " + " ".join(field.to_str(t) for t in t_values)
    lines = [header]
    for s in s_values:
        marks = " ".join("0" if poly.vanishes(s, t) else "*" for t in t_values)
        lines.append(f"{field.to_str(s)} {marks}")
    return "\n".join(lines) + "\n"


def sample_lines(family: int, count: int, field: Field, seed: int = 0) -> List[Line]:
    rng = make_rng(seed)
    return [Line(family, random_pair(field, rng), random_pair(field, rng)) for _ in range(count)]


def _splitting_task(args) -> Tuple[Optional[SplittingType], bool]:
    m, line, pad, pad_check = args
    try:
        return splitting_type(m, line, pad, pad_check), False
    except DegenerateRestrictionError:
        return None, True


def jumping_statistics(m: Monad, family: int, count: int, seed: int = 0, jobs: int = 1,
                       pad: Optional[int] = None, pad_check: Optional[bool] = None) -> Dict[str, int]:
    """Splitting types on random lines: trivial / jumping / degenerate counts and c1 conservation."""
    lines = sample_lines(family, count, m.field, seed)
    results = parallel_map(_splitting_task, [(m, line, pad, pad_check) for line in lines], jobs)
    stats = {"lines": count, "trivial": 0, "jumping": 0, "degenerate": 0, "sum_nonzero": 0}
    for split, degenerate in results:
        if degenerate:
            stats["degenerate"] += 1
        elif split.is_trivial:
            stats["trivial"] += 1
        else:
            stats["jumping"] += 1
        if split is not None and split.d1 + split.d2 != 0:
            stats["sum_nonzero"] += 1
    logger.info(f"Family {family} line statistics: {stats}")
    return stats


def line_koszul_complex(family: int, p: Pair, q: Pair, field: Field) -> LineComplex:
    """O(-h_j-h_l) -> O(-h_j) + O(-h_l) -> O, resolving O_L (degree 0 at the right)."""
    j, l = other_factors(family)
    ell_j = MultiForm.variable(field, j, 0).scale(field(p[1])) - MultiForm.variable(field, j, 1).scale(field(p[0]))
    ell_l = MultiForm.variable(field, l, 0).scale(field(q[1])) - MultiForm.variable(field, l, 1).scale(field(q[0]))
    hj, hl = DivisorClass.basis(j), DivisorClass.basis(l)
    columns = (((-hj - hl).as_tuple(),), ((-hj).as_tuple(), (-hl).as_tuple()), ((0, 0, 0),))
    maps = ({(0, 0): ell_l, (1, 0): -ell_j}, {(0, 0): ell_j, (0, 1): ell_l})
    return LineComplex(field, columns, -2, maps)


def structure_sheaf_cohomology(family: int, p: Pair, q: Pair, D: DivisorClass, context: CechContext) -> List[int]:
    """h^0, h^1 of O_L(D) computed on X through the Koszul resolution."""
    result = context.hypercohomology(line_koszul_complex(family, p, q, context.field).twisted(D.as_tuple()))
    return [result.h(0), result.h(1)]
