"""
Monads A --alpha--> B --beta--> C of split bundles on X, in the kernel shape
(C = O^(k-2)) and the global shape (B = O^(3k+2)).

alpha is stored as rows of B by columns of A; beta as rows of C by columns of B.
"""
import json
import logging
from dataclasses import dataclass, field as dc_field
from typing import Dict, List, Optional, Sequence, Set, Tuple

import numpy as np

from src.algebra import linalg
from src.algebra.chow import CurveClass, DivisorClass, ShapeTag, shape_terms
from src.algebra.field import Field, Scalar
from src.algebra.multipoly import (MultiForm, evaluate, monomial_basis, parse_terms,
                                   polynomial_det, random_form, random_point, roots_in_field)
from src.schema import GenerationStats, MonadValidity, PointVerdict
from src.sheaves.cech import LineComplex
from src.sheaves.kunneth import LineBundleSum
from src.tools.ErrorAndStatus import (ChernDataError, DegreeError, FieldMismatchError, GenerationExhaustedError,
                                      MonadErrorCode, MonadFileErrorCode, MonadFormatError, MonadShapeError,
                                      SegreError, VerdictStatus)
from src.tools.utils import DEFAULT_MAX_ATTEMPTS, DEFAULT_POINTS, make_rng

logger = logging.getLogger(__name__)

FORMAT_TAG = "segre-monad-v1"
LINE_SEARCH_TRIES = 8

Matrix = Tuple[Tuple[MultiForm, ...], ...]


def entry_degree(target: DivisorClass, source: DivisorClass) -> Tuple[int, int, int]:
    return (target - source).as_tuple()


def is_valid_degree(degree: Sequence[int]) -> bool:
    return min(degree) >= 0


@dataclass(frozen=True)
class MonadShape:
    tag: ShapeTag
    c2: CurveClass

    def __post_init__(self):
        object.__setattr__(self, "tag", ShapeTag(self.tag))
        try:
            shape_terms(self.tag, self.c2)
        except ChernDataError as e:
            raise MonadShapeError(str(e)) from e

    @property
    def charge(self) -> int:
        return self.c2.charge

    def terms(self) -> Tuple[LineBundleSum, LineBundleSum, LineBundleSum]:
        return tuple(LineBundleSum.of(t) for t in shape_terms(self.tag, self.c2))

    @property
    def ranks(self) -> Tuple[int, int, int]:
        return tuple(t.rank for t in self.terms())

    def summands(self) -> Tuple[List[DivisorClass], List[DivisorClass], List[DivisorClass]]:
        return tuple(t.summands() for t in self.terms())


@dataclass(frozen=True)
class Monad:
    shape: MonadShape
    field: Field
    alpha: Matrix
    beta: Matrix
    seed: Optional[int] = None
    stats: Optional[GenerationStats] = dc_field(default=None, compare=False)

    @property
    def a_twists(self) -> List[DivisorClass]:
        return self.shape.summands()[0]

    @property
    def b_twists(self) -> List[DivisorClass]:
        return self.shape.summands()[1]

    @property
    def c_twists(self) -> List[DivisorClass]:
        return self.shape.summands()[2]

    @property
    def c2(self) -> CurveClass:
        return self.shape.c2

    def complex(self, D: DivisorClass = DivisorClass()) -> LineComplex:
        """The monad twisted by D as a three-column complex, E(D) in degree 0."""
        a, b, c = self.shape.summands()
        columns = tuple(tuple((tw + D).as_tuple() for tw in col) for col in (a, b, c))
        alpha_map = {(i, j): f for i, row in enumerate(self.alpha) for j, f in enumerate(row) if not f.is_zero}
        beta_map = {(i, j): f for i, row in enumerate(self.beta) for j, f in enumerate(row) if not f.is_zero}
        return LineComplex(self.field, columns, -1, (alpha_map, beta_map))

    def composition(self) -> List[List[MultiForm]]:
        """beta . alpha as a matrix of forms (rows of C, columns of A)."""
        a, _, c = self.shape.summands()
        out = []
        for r, ct in enumerate(c):
            row = []
            for col, at in enumerate(a):
                acc = MultiForm.zero(self.field, entry_degree(ct, at))
                for m in range(len(self.b_twists)):
                    f, g = self.beta[r][m], self.alpha[m][col]
                    if not f.is_zero and not g.is_zero:
                        acc = acc + f * g
                row.append(acc)
            out.append(row)
        return out


def zero_matrix(field: Field, rows: Sequence[DivisorClass], cols: Sequence[DivisorClass]) -> List[List[MultiForm]]:
    return [[MultiForm.zero(field, entry_degree(r, c)) for c in cols] for r in rows]


def evaluate_matrix(matrix: Sequence[Sequence[MultiForm]], point, field: Field) -> List[List[Scalar]]:
    return [[field.zero if f.is_zero else evaluate(f, point) for f in row] for row in matrix]


class _DrawFailure(Exception):
    def __init__(self, mode: str):
        super().__init__(mode)
        self.mode = mode


@dataclass
class _Block:
    """A-columns sharing one twist; their alpha-columns solve the same linear system."""

    twist: DivisorClass
    columns: List[int]
    unknowns: List[Tuple[int, Tuple[int, ...]]]
    equations: Dict[Tuple[int, Tuple[int, ...]], int]
    depends_on: Set[Tuple]


def _blocks(a: List[DivisorClass], b: List[DivisorClass], c: List[DivisorClass],
            groups: Dict[Tuple, List[Tuple[int, int]]]) -> List[_Block]:
    blocks: Dict[DivisorClass, _Block] = {}
    for col, tw in enumerate(a):
        if tw in blocks:
            blocks[tw].columns.append(col)
            continue
        unknowns = [(m, mono) for m, bt in enumerate(b) for mono in monomial_basis(entry_degree(bt, tw))]
        equations = {}
        for r, ct in enumerate(c):
            for mono in monomial_basis(entry_degree(ct, tw)):
                equations[(r, mono)] = len(equations)
        connected = {m for m, _ in unknowns}
        deps = {key for key, entries in groups.items() if any(m in connected for _, m in entries)}
        blocks[tw] = _Block(tw, [col], unknowns, equations, deps)
    return list(blocks.values())


def _block_system(block: _Block, beta: List[List[MultiForm]], field: Field) -> List[List[Scalar]]:
    """Matrix of alpha_c -> beta . alpha_c on the block's unknowns."""
    matrix = [[field.zero] * len(block.unknowns) for _ in block.equations]
    for col, (m, mono) in enumerate(block.unknowns):
        for r in range(len(beta)):
            for e, coeff in beta[r][m].terms:
                row = block.equations[(r, tuple(x + y for x, y in zip(mono, e)))]
                matrix[row][col] = field.add(matrix[row][col], coeff)
    return matrix


def _kernel_dim(block: _Block, beta, field: Field) -> int:
    return len(block.unknowns) - linalg.rank(_block_system(block, beta, field), field, len(block.unknowns))


def _shifted(beta, delta, t: Scalar, field: Field) -> List[List[MultiForm]]:
    return [[f + g.scale(t) if not g.is_zero else f for f, g in zip(row, drow)] for row, drow in zip(beta, delta)]


def _line_search(block: _Block, beta, group: List[Tuple[int, int]], c: List[DivisorClass],
                 b: List[DivisorClass], field: Field, rng: np.random.Generator,
                 stats: GenerationStats) -> List[List[MultiForm]]:
    """Move beta along a random line inside one group until the block system drops rank."""
    size = len(block.unknowns)
    for _ in range(LINE_SEARCH_TRIES):
        stats.line_search_steps += 1
        delta = zero_matrix(field, c, b)
        for r, m in group:
            delta[r][m] = random_form(entry_degree(c[r], b[m]), field, rng)
        coeffs = polynomial_det(lambda t: _block_system(block, _shifted(beta, delta, t, field), field), size, field)
        if all(x == 0 for x in coeffs):
            raise _DrawFailure("block-identically-singular")
        roots = roots_in_field(coeffs, field)
        if not roots:
            logger.debug(f"No root along this line for block {block.twist}; retrying")
            continue
        t = roots[int(rng.integers(len(roots)))]
        return _shifted(beta, delta, t, field)
    raise _DrawFailure("no-root-on-search-lines")


def _draw(shape: MonadShape, field: Field, rng: np.random.Generator, stats: GenerationStats):
    a, b, c = shape.summands()
    beta = [[random_form(entry_degree(ct, bt), field, rng) if is_valid_degree(entry_degree(ct, bt))
             else MultiForm.zero(field, entry_degree(ct, bt)) for bt in b] for ct in c]
    groups: Dict[Tuple, List[Tuple[int, int]]] = {}
    for r, ct in enumerate(c):
        for m, bt in enumerate(b):
            if is_valid_degree(entry_degree(ct, bt)):
                groups.setdefault((ct.as_tuple(), bt.as_tuple()), []).append((r, m))
    blocks = _blocks(a, b, c, groups)

    deficient = []
    for block in blocks:
        kdim = _kernel_dim(block, beta, field)
        need = len(block.columns)
        if kdim >= need:
            continue
        square = len(block.unknowns) == len(block.equations)
        if kdim == need - 1 and square:
            deficient.append(block)
            continue
        raise GenerationExhaustedError(
            f"block {block.twist} has a {kdim}-dimensional solution space for {need} columns",
            stats, MonadErrorCode.KERNEL_TOO_SMALL)
    stats.deficient_blocks = sorted(len(blk.columns) for blk in deficient)

    frozen: Set[Tuple] = set()
    for block in deficient:
        if _kernel_dim(block, beta, field) < len(block.columns):
            candidates = sorted(block.depends_on - frozen)
            if not candidates:
                raise GenerationExhaustedError(
                    f"deficient blocks not separable for {shape.tag.value} shape c2={shape.c2}",
                    stats, MonadErrorCode.DEFICIENT_NOT_SEPARABLE)
            logger.debug(f"Line search for block {block.twist} inside beta group {candidates[0]}")
            beta = _line_search(block, beta, groups[candidates[0]], c, b, field, rng, stats)
        frozen |= block.depends_on

    alpha = zero_matrix(field, b, a)
    for block in blocks:
        kernel = linalg.nullspace(_block_system(block, beta, field), field, len(block.unknowns))
        if len(kernel) < len(block.columns):
            raise _DrawFailure("kernel-too-small")
        for col in block.columns:
            weights = [field.random(rng) for _ in kernel]
            vec = [field.zero] * len(block.unknowns)
            for wgt, basis_vec in zip(weights, kernel):
                vec = [field.add(x, field.mul(wgt, y)) for x, y in zip(vec, basis_vec)]
            per_row: Dict[int, Dict[Tuple[int, ...], Scalar]] = {}
            for (m, mono), value in zip(block.unknowns, vec):
                per_row.setdefault(m, {})[mono] = value
            for m, terms in per_row.items():
                alpha[m][col] = MultiForm.from_dict(field, entry_degree(b[m], a[col]), terms)
    return tuple(tuple(row) for row in alpha), tuple(tuple(row) for row in beta)


def random_monad(shape: MonadShape, field: Field, seed: int = 0, max_attempts: int = DEFAULT_MAX_ATTEMPTS,
                 n_points: int = DEFAULT_POINTS) -> Monad:
    """
    Draw a random monad of the given shape.

    beta is drawn first; each alpha-column is then a random element of the
    solution space of beta . alpha_c = 0. Blocks whose solution space is one
    short are repaired by moving beta to a root of the block determinant.

    Args:
        shape: Monad shape and c2.
        field: Coefficient field.
        seed: Seed; equal seeds give identical monads.
        max_attempts: Number of draws before giving up.
        n_points: Points used by the fiberwise validation of each draw.

    Returns:
        A monad that passed `validate_monad`.

    Raises:
        GenerationExhaustedError: after `max_attempts` failed draws, or at once
            when the shape's linear systems cannot be solved generically.
    """
    logger.info(f"=== Starting random_monad: {shape.tag.value} shape, c2={shape.c2}, {field}, seed={seed} ===")
    rng = make_rng(seed)
    stats = GenerationStats()
    last = "none"
    for attempt in range(1, max_attempts + 1):
        stats.attempts = attempt
        try:
            alpha, beta = _draw(shape, field, rng, stats)
        except _DrawFailure as e:
            last = e.mode
            stats.record(last)
            logger.warning(f"Attempt {attempt} failed: {last}")
            continue
        monad = Monad(shape, field, alpha, beta, seed, stats)
        validity = validate_monad(monad, n_points, int(rng.integers(2 ** 31)))
        if validity.valid:
            logger.info(f"Generated valid monad after {attempt} attempt(s); ranks {shape.ranks}")
            return monad
        if not validity.composition_zero:
            last = "composition-nonzero"
        elif validity.alpha_fiberwise_injective.status == VerdictStatus.FAILED:
            last = "alpha-not-injective"
        else:
            last = "beta-not-surjective"
        stats.record(last)
        logger.warning(f"Attempt {attempt} produced an invalid monad: {last}")
    logger.error(f"Generation exhausted after {max_attempts} attempts; last failure {last}")
    raise GenerationExhaustedError(f"no valid monad after {max_attempts} attempts (last failure: {last})", stats)


def validate_monad(m: Monad, n_points: int = DEFAULT_POINTS, seed: int = 0) -> MonadValidity:
    """Exact check of beta . alpha = 0, then fiberwise rank checks at random points."""
    composition_zero = all(f.is_zero for row in m.composition() for f in row)
    if not composition_zero:
        skipped = PointVerdict(status=VerdictStatus.SKIPPED)
        return MonadValidity(composition_zero=False, alpha_fiberwise_injective=skipped,
                             beta_fiberwise_surjective=skipped, points_tested=0)
    rank_a, _, rank_c = m.shape.ranks
    rng = make_rng(seed)
    alpha_verdict = beta_verdict = None
    for i in range(n_points):
        point = random_point(m.field, rng)
        if alpha_verdict is None and linalg.rank(evaluate_matrix(m.alpha, point, m.field), m.field, rank_a) < rank_a:
            alpha_verdict = PointVerdict(status=VerdictStatus.FAILED, points_tested=i + 1,
                                         witness=[[m.field.to_str(x) for x in pair] for pair in point])
        if rank_c and beta_verdict is None and linalg.rank(
                evaluate_matrix(m.beta, point, m.field), m.field, m.shape.ranks[1]) < rank_c:
            beta_verdict = PointVerdict(status=VerdictStatus.FAILED, points_tested=i + 1,
                                        witness=[[m.field.to_str(x) for x in pair] for pair in point])
        if alpha_verdict and (beta_verdict or not rank_c):
            break
    ok = PointVerdict(status=VerdictStatus.VERIFIED, points_tested=n_points)
    return MonadValidity(composition_zero=True, alpha_fiberwise_injective=alpha_verdict or ok,
                         beta_fiberwise_surjective=beta_verdict or ok, points_tested=n_points)


def to_document(m: Monad) -> dict:
    return {
        "format": FORMAT_TAG,
        "field": m.field.describe(),
        "shape": m.shape.tag.value,
        "c2": list(m.c2.as_tuple()),
        "seed": m.seed,
        "alpha": [[f.render() for f in row] for row in m.alpha],
        "beta": [[f.render() for f in row] for row in m.beta],
    }


def serialize(m: Monad) -> bytes:
    return (json.dumps(to_document(m), sort_keys=True, indent=2) + "\n").encode("utf-8")


def _parse_matrix(data, field: Field, rows: List[DivisorClass], cols: List[DivisorClass], name: str) -> Matrix:
    if not isinstance(data, list) or len(data) != len(rows):
        raise MonadFormatError(f"'{name}' must have {len(rows)} rows")
    out = []
    for i, (row, rt) in enumerate(zip(data, rows)):
        if not isinstance(row, list) or len(row) != len(cols):
            raise MonadFormatError(f"'{name}' row {i} must have {len(cols)} entries")
        parsed = []
        for j, (entry, ct) in enumerate(zip(row, cols)):
            degree = entry_degree(rt, ct)
            if entry and not is_valid_degree(degree):
                raise MonadFormatError(f"'{name}'[{i}][{j}] must be zero (degree {degree})")
            try:
                parsed.append(parse_terms(field, degree, entry) if entry else MultiForm.zero(field, degree))
            except (DegreeError, KeyError, TypeError, ValueError) as e:
                raise MonadFormatError(f"'{name}'[{i}][{j}]: {e}") from e
        out.append(tuple(parsed))
    return tuple(out)


def deserialize(data: bytes, expected_field: Optional[Field] = None) -> Monad:
    """
    Parse a segre-monad-v1 document.

    Raises:
        MonadFormatError: malformed input, with the byte offset for syntax errors.
        FieldMismatchError: the document's field differs from `expected_field`.
    """
    try:
        text = data.decode("utf-8")
    except UnicodeDecodeError as e:
        raise MonadFormatError("monad file is not UTF-8", e.start, MonadFileErrorCode.JSONDecodeError) from e
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        offset = len(text[:e.pos].encode("utf-8"))
        raise MonadFormatError(f"invalid JSON: {e.msg}", offset, MonadFileErrorCode.JSONDecodeError) from e
    if not isinstance(doc, dict) or doc.get("format") != FORMAT_TAG:
        raise MonadFormatError(f"not a {FORMAT_TAG} document")
    c2 = doc.get("c2")
    if not isinstance(c2, list) or len(c2) != 3 or not all(type(k) is int for k in c2):
        raise MonadFormatError(f"bad header: 'c2' must be three integers, got {c2!r}")
    try:
        desc = doc["field"]
        field = Field.prime(int(desc["p"])) if desc["type"] == "prime" else Field.rationals()
    except (KeyError, TypeError, ValueError, SegreError) as e:
        raise MonadFormatError(f"bad header: 'field' {doc.get('field')!r}: {e}") from e
    try:
        shape = MonadShape(ShapeTag(doc["shape"]), CurveClass.of(c2))
    except (KeyError, TypeError, ValueError, MonadShapeError) as e:
        raise MonadFormatError(f"bad header: {e}") from e
    if expected_field is not None and expected_field != field:
        raise FieldMismatchError(f"monad is over {field}, but {expected_field} was requested")
    a, b, c = shape.summands()
    alpha = _parse_matrix(doc.get("alpha"), field, b, a, "alpha")
    beta = _parse_matrix(doc.get("beta"), field, c, b, "beta")
    seed = doc.get("seed")
    return Monad(shape, field, alpha, beta, seed if isinstance(seed, int) else None)
