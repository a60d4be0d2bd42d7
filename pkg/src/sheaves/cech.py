"""
Cech hypercohomology of bounded complexes of split bundles on (P^1)^n.

Each factor is covered by the charts x_{i,0} != 0 and x_{i,1} != 0. On a
summand O(a), a Laurent monomial x_0^w x_1^(a-w) in one factor lives on
chart 0 when w <= a, on chart 1 when w >= 0, and always on the overlap.
Per factor the Cech position is 0 (chart 0), 1 (chart 1) or 2 (overlap).

The infinite Cech total complex is cut down per summand: each summand keeps
the weights carrying its own cohomology (widened by `pad`), closed forward
under the weight shifts of the maps leaving it. The kept part is a
subcomplex and the discarded quotient is acyclic column by column, so the
truncation computes the full hypercohomology.
"""
import logging
from dataclasses import dataclass, field as dc_field
from itertools import product
from typing import Dict, List, Mapping, Sequence, Set, Tuple

import numpy as np

from src.algebra.field import Field, Scalar
from src.algebra.linalg import SparseEliminator
from src.algebra.multipoly import MultiForm
from src.sheaves.kunneth import laurent_range
from src.tools.ErrorAndStatus import EngineError, PadInstabilityError
from src.tools.utils import DEFAULT_PAD, DEFAULT_PAD_CHECK

logger = logging.getLogger(__name__)

Twist = Tuple[int, ...]
Weight = Tuple[int, ...]
Position = Tuple[int, ...]
BasisKey = Tuple[int, int, Weight, Position]

SQUARE_CHECK_SEED = 20240229


@dataclass(frozen=True)
class LineComplex:
    """
    A complex of sums of line bundles on (P^1)^n.

    Column j sits in complex degree `start + j`; `maps[j]` sends column j to
    column j + 1 and maps (target summand, source summand) to a form of
    degree twist(target) - twist(source). Missing entries are zero.
    """

    field: Field
    columns: Tuple[Tuple[Twist, ...], ...]
    start: int
    maps: Tuple[Mapping[Tuple[int, int], MultiForm], ...] = dc_field(default=())

    @property
    def n(self) -> int:
        for column in self.columns:
            if column:
                return len(column[0])
        return 0

    @property
    def degrees(self) -> range:
        return range(self.start, self.start + len(self.columns))

    def twisted(self, shift: Sequence[int]) -> "LineComplex":
        columns = tuple(tuple(tuple(a + s for a, s in zip(tw, shift)) for tw in column) for column in self.columns)
        return LineComplex(self.field, columns, self.start, self.maps)

    def check(self) -> None:
        """Entry degrees must match twist differences."""
        for j, entries in enumerate(self.maps):
            for (t, s), f in entries.items():
                if f.is_zero:
                    continue
                expected = tuple(x - y for x, y in zip(self.columns[j + 1][t], self.columns[j][s]))
                if f.degree != expected:
                    raise EngineError(f"map {j} entry ({t},{s}) has degree {f.degree}, expected {expected}")


@dataclass(frozen=True)
class CechResult:
    dims: Dict[int, int]
    pad: int
    sizes: Dict[int, int]

    def h(self, degree: int) -> int:
        return self.dims.get(degree, 0)


def _seed_weights(twist: Twist, pad: int) -> Set[Weight]:
    ranges = []
    for a in twist:
        r = laurent_range(a)
        if len(r) == 0:
            return set()
        ranges.append(range(r.start - pad, r.stop + pad))
    return set(product(*ranges))


def _positions(twist: Twist, w: Weight) -> List[Position]:
    per_factor = []
    for a, x in zip(twist, w):
        options = [p for p, ok in ((0, x <= a), (1, x >= 0), (2, True)) if ok]
        per_factor.append(options)
    return list(product(*per_factor))


class _TotalComplex:
    def __init__(self, K: LineComplex, pad: int):
        self.K = K
        self.field = K.field
        self.windows = self._windows(pad)
        self.index: Dict[int, Dict[BasisKey, int]] = {}
        self.keys: Dict[int, List[BasisKey]] = {}
        for j, column in enumerate(K.columns):
            for s, twist in enumerate(column):
                for w in sorted(self.windows[j][s]):
                    for pos in _positions(twist, w):
                        deg = K.start + j + pos.count(2)
                        keys = self.keys.setdefault(deg, [])
                        self.index.setdefault(deg, {})[(j, s, w, pos)] = len(keys)
                        keys.append((j, s, w, pos))

    def _windows(self, pad: int) -> List[List[Set[Weight]]]:
        K = self.K
        windows = [[_seed_weights(tw, pad) for tw in column] for column in K.columns]
        for j, entries in enumerate(K.maps):
            for (t, s), f in sorted(entries.items()):
                shifts = {tuple(e[0::2]) for e, _ in f.terms}
                for w in windows[j][s]:
                    for u in shifts:
                        windows[j + 1][t].add(tuple(x + y for x, y in zip(w, u)))
        return windows

    def dim(self, degree: int) -> int:
        return len(self.keys.get(degree, ()))

    def image(self, degree: int, key: BasisKey) -> Dict[int, Scalar]:
        """Image of one basis element under the total differential."""
        field = self.field
        j, s, w, pos = key
        target = self.index.get(degree + 1, {})
        out: Dict[int, Scalar] = {}
        column_sign = -1 if (self.K.start + j) % 2 else 1
        overlaps = 0
        for i, p in enumerate(pos):
            if p != 2:
                sign = (-1 if p == 0 else 1) * (-1 if overlaps % 2 else 1) * column_sign
                new_pos = pos[:i] + (2,) + pos[i + 1:]
                idx = target[(j, s, w, new_pos)]
                out[idx] = field.add(out.get(idx, field.zero), field(sign))
            else:
                overlaps += 1
        if j < len(self.K.maps):
            for (t, src), f in self.K.maps[j].items():
                if src != s:
                    continue
                for e, c in f.terms:
                    w2 = tuple(x + y for x, y in zip(w, e[0::2]))
                    idx = target[(j + 1, t, w2, pos)]
                    out[idx] = field.add(out.get(idx, field.zero), c)
        return {k: v for k, v in out.items() if v != 0}

    def images(self, degree: int) -> List[Dict[int, Scalar]]:
        return [self.image(degree, key) for key in self.keys.get(degree, ())]

    def apply(self, degree: int, vec: Dict[int, Scalar],
              cache: Dict[int, List[Dict[int, Scalar]]]) -> Dict[int, Scalar]:
        field = self.field
        if degree not in cache:
            cache[degree] = self.images(degree)
        out: Dict[int, Scalar] = {}
        for idx, c in vec.items():
            for k, v in cache[degree][idx].items():
                out[k] = field.add(out.get(k, field.zero), field.mul(c, v))
        return {k: v for k, v in out.items() if v != 0}


def _compute(K: LineComplex, pad: int) -> CechResult:
    K.check()
    total = _TotalComplex(K, pad)
    field = K.field
    degrees = sorted(total.keys)
    cache: Dict[int, List[Dict[int, Scalar]]] = {}
    rng = np.random.default_rng(SQUARE_CHECK_SEED)
    ranks: Dict[int, int] = {}
    for deg in degrees:
        if deg not in cache:
            cache[deg] = total.images(deg)
        vector = {i: field.random(rng) for i in range(total.dim(deg))}
        if total.dim(deg + 1) and total.apply(deg + 1, total.apply(deg, vector, cache), cache):
            raise EngineError(f"total differential does not square to zero in degree {deg}")
        elim = SparseEliminator(field)
        for vec in cache[deg]:
            elim.add(vec)
        ranks[deg] = elim.rank
    dims = {}
    for deg in degrees:
        h = total.dim(deg) - ranks.get(deg, 0) - ranks.get(deg - 1, 0)
        if h:
            dims[deg] = h
    sizes = {deg: total.dim(deg) for deg in degrees}
    logger.debug(f"Cech pad={pad}: sizes {sizes}, ranks {ranks}, dims {dims}")
    return CechResult(dims=dims, pad=pad, sizes=sizes)


@dataclass(frozen=True)
class CechContext:
    field: Field
    pad: int = DEFAULT_PAD
    pad_check: bool = DEFAULT_PAD_CHECK

    def hypercohomology(self, K: LineComplex) -> CechResult:
        """
        Hypercohomology dimensions of K, keyed by total degree (zeros omitted).

        Raises:
            PadInstabilityError: if the result changes between pad and pad + 2.
            EngineError: if the assembled differential does not square to zero.
        """
        if K.field != self.field:
            K.field.check_same(self.field)
        result = _compute(K, self.pad)
        if self.pad_check:
            wider = _compute(K, self.pad + 2)
            if wider.dims != result.dims:
                logger.error(f"Pad instability: {result.dims} at pad {self.pad}, {wider.dims} at pad {self.pad + 2}")
                raise PadInstabilityError(
                    f"cohomology changed between pad {self.pad} and {self.pad + 2}", result.dims, wider.dims)
        return result


def line_bundle_complex(field: Field, twist: Sequence[int]) -> LineComplex:
    return LineComplex(field, ((tuple(twist),),), 0, ())


def cech_line_bundle(context: CechContext, twist: Sequence[int]) -> List[int]:
    """h^0..h^n of a single line bundle through the engine."""
    result = context.hypercohomology(line_bundle_complex(context.field, twist))
    return [result.h(i) for i in range(len(twist) + 1)]
