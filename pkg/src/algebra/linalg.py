"""Exact linear algebra over a `Field`: dense numpy elimination mod p, sympy over Q, sparse rank."""
import logging
from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
import sympy as sp

from src.algebra.field import Field, Scalar

logger = logging.getLogger(__name__)

# Residues below this bound keep every product inside int64.
INT64_SAFE_MODULUS = 2 ** 31

Rows = Sequence[Sequence[Scalar]]


@dataclass(frozen=True)
class RowReduceResult:
    rows: list
    pivots: Tuple[int, ...]

    @property
    def rank(self) -> int:
        return len(self.pivots)


def _as_mod_array(rows: Rows, ncols: int, p: int) -> np.ndarray:
    dtype = np.int64 if p < INT64_SAFE_MODULUS else object
    a = np.zeros((len(rows), ncols), dtype=dtype)
    for i, row in enumerate(rows):
        for j, x in enumerate(row):
            a[i, j] = int(x) % p
    return a


def _rref_mod_p(a: np.ndarray, p: int) -> Tuple[np.ndarray, List[int]]:
    a = a.copy()
    nrows, ncols = a.shape
    pivots: List[int] = []
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        nz = np.nonzero(a[r:, c])[0]
        if nz.size == 0:
            continue
        piv = r + int(nz[0])
        if piv != r:
            a[[r, piv]] = a[[piv, r]]
        a[r] = (a[r] * pow(int(a[r, c]), -1, p)) % p
        others = np.nonzero(a[:, c])[0]
        others = others[others != r]
        if others.size:
            factors = a[others, c].reshape(-1, 1)
            a[others] = (a[others] - factors * a[r]) % p
        pivots.append(c)
        r += 1
    return a, pivots


def _to_sympy(rows: Rows, ncols: int) -> sp.Matrix:
    return sp.Matrix(len(rows), ncols, lambda i, j: sp.Rational(Fraction(rows[i][j]).numerator,
                                                                Fraction(rows[i][j]).denominator))


def _from_sympy(x) -> Fraction:
    x = sp.Rational(x)
    return Fraction(int(x.p), int(x.q))


def _ncols(rows: Rows, ncols: Optional[int]) -> int:
    if ncols is not None:
        return ncols
    return len(rows[0]) if len(rows) else 0


def row_reduce(rows: Rows, field: Field, ncols: Optional[int] = None) -> RowReduceResult:
    """Reduced row echelon form and pivot columns."""
    n = _ncols(rows, ncols)
    if len(rows) == 0 or n == 0:
        return RowReduceResult(rows=[[field.zero] * n for _ in rows], pivots=())
    if field.is_prime:
        a, pivots = _rref_mod_p(_as_mod_array(rows, n, field.p), field.p)
        return RowReduceResult(rows=[[int(x) for x in row] for row in a], pivots=tuple(pivots))
    reduced, pivots = _to_sympy(rows, n).rref()
    out = [[_from_sympy(reduced[i, j]) for j in range(n)] for i in range(reduced.rows)]
    return RowReduceResult(rows=out, pivots=tuple(pivots))


def rank(rows: Rows, field: Field, ncols: Optional[int] = None) -> int:
    return row_reduce(rows, field, ncols).rank


def nullspace(rows: Rows, field: Field, ncols: Optional[int] = None) -> List[List[Scalar]]:
    """
    Basis of {x : rows · x = 0}.

    Args:
        rows: Matrix as a list of rows.
        field: Coefficient field.
        ncols: Number of unknowns; required when `rows` is empty.

    Returns:
        List of basis vectors, one per free column, in increasing free-column order.
    """
    n = _ncols(rows, ncols)
    reduced = row_reduce(rows, field, n)
    pivots = list(reduced.pivots)
    free = [c for c in range(n) if c not in set(pivots)]
    basis = []
    for f in free:
        v = [field.zero] * n
        v[f] = field.one
        for i, c in enumerate(pivots):
            v[c] = field.neg(reduced.rows[i][f])
        basis.append(v)
    return basis


def solve(rows: Rows, rhs: Sequence[Scalar], field: Field, ncols: Optional[int] = None) -> Optional[List[Scalar]]:
    """One solution of rows · x = rhs (free variables set to zero), or None if inconsistent."""
    n = _ncols(rows, ncols)
    augmented = [list(row) + [b] for row, b in zip(rows, rhs)]
    reduced = row_reduce(augmented, field, n + 1)
    if n in reduced.pivots:
        return None
    x = [field.zero] * n
    for i, c in enumerate(reduced.pivots):
        x[c] = reduced.rows[i][n]
    return x


def det(rows: Rows, field: Field) -> Scalar:
    n = len(rows)
    if n == 0:
        return field.one
    if field.is_prime:
        p = field.p
        a = _as_mod_array(rows, n, p)
        result = 1
        for c in range(n):
            nz = np.nonzero(a[c:, c])[0]
            if nz.size == 0:
                return 0
            piv = c + int(nz[0])
            if piv != c:
                a[[c, piv]] = a[[piv, c]]
                result = -result
            result = (result * int(a[c, c])) % p
            inv = pow(int(a[c, c]), -1, p)
            below = np.arange(c + 1, n)
            if below.size:
                factors = (a[below, c] * inv) % p
                a[below] = (a[below] - factors.reshape(-1, 1) * a[c]) % p
        return result % p
    return _from_sympy(_to_sympy(rows, n).det())


def mat_vec(rows: Rows, v: Sequence[Scalar], field: Field) -> List[Scalar]:
    out = []
    for row in rows:
        acc = field.zero
        for x, y in zip(row, v):
            if x and y:
                acc = field.add(acc, field.mul(x, y))
        out.append(acc)
    return out


def mat_mul(a: Rows, b: Rows, field: Field, ncols: Optional[int] = None) -> List[List[Scalar]]:
    ncols = _ncols(b, ncols)
    columns = [[b[k][j] for k in range(len(b))] for j in range(ncols)]
    return [[_dot(row, col, field) for col in columns] for row in a]


def _dot(x: Sequence[Scalar], y: Sequence[Scalar], field: Field) -> Scalar:
    acc = field.zero
    for s, t in zip(x, y):
        if s and t:
            acc = field.add(acc, field.mul(s, t))
    return acc


def random_matrix(nrows: int, ncols: int, field: Field, rng: np.random.Generator) -> List[List[Scalar]]:
    return [[field.random(rng) for _ in range(ncols)] for _ in range(nrows)]


def interpolate_univariate(xs: Sequence[Scalar], ys: Sequence[Scalar], field: Field) -> List[Scalar]:
    """Coefficients c[0..n-1] (constant first) of the polynomial through the n points."""
    vander = [[field.power(x, e) for e in range(len(xs))] for x in xs]
    coeffs = solve(vander, ys, field, len(xs))
    if coeffs is None:
        raise ValueError("interpolation nodes must be distinct")
    return coeffs


class SparseEliminator:
    """
    Incremental rank of sparse vectors given as {column: value} dicts.

    Each stored row is keyed by its smallest column. Over F_p rows are
    normalized; over Q they are primitive integer rows (fraction-free).
    """

    def __init__(self, field: Field):
        self.field = field
        self.pivots: Dict[int, Dict[int, int]] = {}

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def add(self, vec: Dict[int, Scalar]) -> bool:
        """Insert a vector; returns True when it was independent of the stored rows."""
        if self.field.is_prime:
            return self._add_mod_p({k: int(v) % self.field.p for k, v in vec.items() if v})
        return self._add_integral(_primitive(vec))

    def _add_mod_p(self, vec: Dict[int, int]) -> bool:
        p = self.field.p
        vec = {k: v for k, v in vec.items() if v}
        while vec:
            c = min(vec)
            row = self.pivots.get(c)
            if row is None:
                inv = pow(vec[c], -1, p)
                self.pivots[c] = {k: (v * inv) % p for k, v in vec.items()}
                return True
            f = vec[c]
            for k, v in row.items():
                nv = (vec.get(k, 0) - f * v) % p
                if nv:
                    vec[k] = nv
                else:
                    vec.pop(k, None)
        return False

    def _add_integral(self, vec: Dict[int, int]) -> bool:
        while vec:
            c = min(vec)
            row = self.pivots.get(c)
            if row is None:
                self.pivots[c] = vec
                return True
            lead, f = row[c], vec[c]
            merged: Dict[int, int] = {}
            for k in set(vec) | set(row):
                nv = lead * vec.get(k, 0) - f * row.get(k, 0)
                if nv:
                    merged[k] = nv
            vec = _primitive(merged)
        return False


def _primitive(vec: Dict[int, Scalar]) -> Dict[int, int]:
    vec = {k: Fraction(v) for k, v in vec.items() if v}
    if not vec:
        return {}
    denom = 1
    for v in vec.values():
        denom = denom * v.denominator // gcd(denom, v.denominator)
    ints = {k: int(v * denom) for k, v in vec.items()}
    content = 0
    for v in ints.values():
        content = gcd(content, abs(v))
    return {k: v // content for k, v in ints.items()}


def sparse_rank(vectors, field: Field) -> int:
    elim = SparseEliminator(field)
    for v in vectors:
        elim.add(v)
    return elim.rank
