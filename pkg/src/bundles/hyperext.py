"""
Cohomology of twists of monad bundles and Ext groups of monad bundles.

Two routes: dimension bookkeeping through the long exact sequences of the
monad's displays (when every connecting map is forced to vanish), and the
Cech engine applied to the monad complex or to its Hom complex.
"""
import logging
from itertools import product
from typing import List, Optional, Sequence, Tuple

from src.algebra.chow import CANONICAL_TWIST, DivisorClass, H, chi_end, chi_twist
from src.bundles.monad import Monad
from src.schema import BeilinsonRow, BeilinsonTable, CohomologyReport, CohVector, ExtReport
from src.sheaves.cech import CechContext, LineComplex
from src.tools.ErrorAndStatus import (CohomologyErrorCode, EngineError, EulerCharacteristicMismatch,
                                      PreconditionError)
from src.tools.utils import DEFAULT_PAD, DEFAULT_PAD_CHECK, EXT_MAX_CHARGE

logger = logging.getLogger(__name__)

Partial = List[Optional[int]]

SWEEP_LIMIT = 3

BEILINSON_TWISTS = (
    ("O(-h)", DivisorClass(-1, -1, -1)),
    ("O(-h2-h3)", DivisorClass(0, -1, -1)),
    ("O(-h1-h3)", DivisorClass(-1, 0, -1)),
    ("O(-h1-h2)", DivisorClass(-1, -1, 0)),
    ("O(-h3)", DivisorClass(0, 0, -1)),
    ("O(-h2)", DivisorClass(0, -1, 0)),
    ("O(-h1)", DivisorClass(-1, 0, 0)),
    ("O", DivisorClass(0, 0, 0)),
)


def context_for(m: Monad, pad: Optional[int] = None, pad_check: Optional[bool] = None) -> CechContext:
    return CechContext(m.field, DEFAULT_PAD if pad is None else pad,
                       DEFAULT_PAD_CHECK if pad_check is None else pad_check)


def serre_dual_twist(D: DivisorClass) -> DivisorClass:
    """h^i(E(D)) = h^(3-i)(E(-D-2h)) for E with E = E^dual."""
    return -D - CANONICAL_TWIST


def _get(values: Sequence[Optional[int]], i: int) -> Optional[int]:
    return values[i] if 0 <= i < len(values) else 0


def _kernel_display(hA: Sequence[int], hB: Sequence[int], hC: Sequence[int]) -> Partial:
    """Through G = ker(beta): 0 -> G -> B -> C -> 0 and 0 -> A -> G -> E -> 0."""
    r = [0 if hB[i] == 0 or hC[i] == 0 else None for i in range(4)]
    hG: Partial = []
    for i in range(4):
        if r[i] is None or _get(r, i - 1) is None:
            hG.append(None)
        else:
            hG.append(hB[i] - r[i] + _get(hC, i - 1) - _get(r, i - 1))
    s = [0 if hA[i] == 0 or hG[i] == 0 else None for i in range(4)]
    hE: Partial = []
    for i in range(4):
        parts = (hG[i], s[i], _get(hA, i + 1), _get(s, i + 1))
        hE.append(None if any(x is None for x in parts) else parts[0] - parts[1] + parts[2] - parts[3])
    return hE


def _cokernel_display(hA: Sequence[int], hB: Sequence[int], hC: Sequence[int]) -> Partial:
    """Through Q = coker(alpha): 0 -> A -> B -> Q -> 0 and 0 -> E -> Q -> C -> 0."""
    rho = [0 if hA[i] == 0 or hB[i] == 0 else None for i in range(4)]
    hQ: Partial = []
    for i in range(4):
        if rho[i] is None or _get(rho, i + 1) is None:
            hQ.append(None)
        else:
            hQ.append(hB[i] - rho[i] + _get(hA, i + 1) - _get(rho, i + 1))
    sigma = [0 if hQ[i] == 0 or hC[i] == 0 else None for i in range(4)]
    hE: Partial = []
    for i in range(4):
        parts = (hQ[i], sigma[i], _get(hC, i - 1), _get(sigma, i - 1))
        hE.append(None if any(x is None for x in parts) else parts[0] - parts[1] + parts[2] - parts[3])
    return hE


def les_dims(m: Monad, D: DivisorClass) -> Partial:
    """
    Per-degree h^i(E(D)) from the display sequences; None where a connecting
    map between nonzero groups would have to be known.
    """
    a, b, c = (t.twisted(D) for t in m.shape.terms())
    hA, hB, hC = (t.coh_vector().as_list() for t in (a, b, c))
    first = _kernel_display(hA, hB, hC)
    second = _cokernel_display(hA, hB, hC)
    merged: Partial = []
    for i, (x, y) in enumerate(zip(first, second)):
        if x is not None and y is not None and x != y:
            raise EngineError(f"display sequences disagree on h^{i}(E{D}): {x} vs {y}")
        merged.append(x if x is not None else y)
    return merged


def _cech_dims(m: Monad, D: DivisorClass, context: CechContext) -> Tuple[List[int], int]:
    result = context.hypercohomology(m.complex(D))
    stray = {deg: h for deg, h in result.dims.items() if deg < 0 or deg > 3}
    if stray:
        raise EngineError(f"monad complex twisted by {D} has cohomology in degrees {sorted(stray)}; "
                          f"the monad is not a bundle monad")
    return [result.h(i) for i in range(4)], result.pad


def coh_monad_twist(m: Monad, D: DivisorClass, pad: Optional[int] = None, pad_check: Optional[bool] = None,
                    force_cech: bool = False) -> CohomologyReport:
    """
    h^0..h^3 of E(D) for the monad bundle E.

    Raises:
        PadInstabilityError: the Cech dimensions changed when the box grew.
        EulerCharacteristicMismatch: the alternating sum differs from Riemann-Roch.
    """
    expected_chi = chi_twist(m.c2, D)
    dims = None if force_cech else les_dims(m, D)
    if dims is not None and all(x is not None for x in dims):
        engine, pad_used = "les-bookkeeping", None
    else:
        dims, pad_used = _cech_dims(m, D, context_for(m, pad, pad_check))
        engine = "cech"
    vector = CohVector.of(dims)
    if vector.euler != expected_chi:
        logger.error(f"chi mismatch for E{D}: dims {dims}, Riemann-Roch {expected_chi}")
        raise EulerCharacteristicMismatch(f"alternating sum {vector.euler} != chi(E{D}) = {expected_chi}",
                                          expected_chi, vector.euler)
    logger.debug(f"h^*(E{D}) = {dims} via {engine}")
    return CohomologyReport(twist=list(D.as_tuple()), dims=vector, engine=engine, pad_used=pad_used,
                            chi=expected_chi)


def h_monad(m: Monad, D: DivisorClass, i: int, pad: Optional[int] = None, pad_check: Optional[bool] = None) -> int:
    """A single h^i(E(D)): bookkeeping when that degree is conclusive, otherwise the full report."""
    known = les_dims(m, D)[i]
    if known is not None:
        return known
    return coh_monad_twist(m, D, pad, pad_check).dims[i]


def expected_beilinson_row(m: Monad, D: DivisorClass) -> CohVector:
    k = m.c2.charge
    negatives = [i for i, x in enumerate(D.as_tuple()) if x == -1]
    if len(negatives) == 2:
        opposite = ({0, 1, 2} - set(negatives)).pop()
        return CohVector(h1=m.c2[opposite])
    if len(negatives) == 1:
        return CohVector(h1=k - m.c2[negatives[0]])
    if not negatives:
        return CohVector(h1=k - 2)
    return CohVector()


def beilinson_table(m: Monad, pad: Optional[int] = None, pad_check: Optional[bool] = None) -> BeilinsonTable:
    logger.info(f"=== Starting beilinson_table for c2={m.c2} ===")
    rows = []
    for label, D in BEILINSON_TWISTS:
        report = coh_monad_twist(m, D, pad, pad_check)
        rows.append(BeilinsonRow(label=label, twist=list(D.as_tuple()), dims=report.dims,
                                 expected=expected_beilinson_row(m, D)))
    table = BeilinsonTable(c2=list(m.c2.as_tuple()), rows=rows)
    logger.info(f"Beilinson table matches expected values: {table.matches_expected}")
    return table


def vanishing_sweep(m: Monad, D: DivisorClass, limit: int = SWEEP_LIMIT, pad: Optional[int] = None,
                    pad_check: Optional[bool] = None) -> bool:
    """h^0(E(-h-D)) = h^1(E(-h-D)) = 0 for an effective D."""
    if not D.is_effective or max(D.as_tuple()) > limit:
        raise PreconditionError(f"D={D} must be effective with components <= {limit}")
    twist = -H - D
    h0 = h_monad(m, twist, 0, pad, pad_check)
    h1 = h_monad(m, twist, 1, pad, pad_check)
    if h0 or h1:
        logger.error(f"Vanishing fails for D={D}: h^0(E{twist})={h0}, h^1(E{twist})={h1}")
        return False
    return True


def first_vanishing_violation(m: Monad, limit: int = SWEEP_LIMIT, pad: Optional[int] = None,
                              pad_check: Optional[bool] = None) -> Optional[DivisorClass]:
    """The lexicographically first effective D with components <= limit violating the vanishing, if any."""
    for values in product(range(limit + 1), repeat=3):
        D = DivisorClass.of(values)
        if not vanishing_sweep(m, D, limit, pad, pad_check):
            return D
    return None


def hom_complex(m: Monad) -> LineComplex:
    """
    The Hom complex Hom^n(M, M) = sum_p Hom(M^p, M^(p+n)), n = -2..2, with
    d(phi) = d o phi - (-1)^n phi o d.

    Summand (p, t, s) is the line bundle Hom(M^p_s, M^(p+n)_t).
    """
    field = m.field
    terms = {-1: m.a_twists, 0: m.b_twists, 1: m.c_twists}
    diff = {-1: m.alpha, 0: m.beta}
    labels: List[List[Tuple[int, int, int]]] = []
    columns = []
    for n in range(-2, 3):
        summands = [(p, t, s) for p in (-1, 0, 1) if p + n in terms
                    for t in range(len(terms[p + n])) for s in range(len(terms[p]))]
        labels.append(summands)
        columns.append(tuple((terms[p + n][t] - terms[p][s]).as_tuple() for p, t, s in summands))
    maps = []
    for j in range(4):
        n = j - 2
        target = {key: i for i, key in enumerate(labels[j + 1])}
        entries = {}
        sign = -1 if n % 2 == 0 else 1
        for src, (p, t, s) in enumerate(labels[j]):
            if p + n in diff:
                for t2, row in enumerate(diff[p + n]):
                    f = row[t]
                    if not f.is_zero:
                        entries[(target[(p, t2, s)], src)] = f
            if p - 1 in diff:
                for s2, f in enumerate(diff[p - 1][s]):
                    if not f.is_zero:
                        entries[(target[(p - 1, t, s2)], src)] = f.scale(field(sign))
        maps.append(entries)
    return LineComplex(field, tuple(columns), -2, tuple(maps))


def ext_dims(m: Monad, pad: Optional[int] = None, pad_check: Optional[bool] = None,
             max_charge: int = EXT_MAX_CHARGE) -> ExtReport:
    """
    dim Ext^0..3(E, E) from the Hom complex of the monad.

    Raises:
        PreconditionError: the charge exceeds `max_charge`.
        EulerCharacteristicMismatch: the alternating sum is not 4 - 4k.
    """
    k = m.c2.charge
    if k > max_charge:
        raise PreconditionError(f"charge {k} exceeds the Ext bound {max_charge}", CohomologyErrorCode.CHARGE_TOO_LARGE)
    logger.info(f"=== Starting ext_dims for {m.shape.tag.value} monad, c2={m.c2} ===")
    context = context_for(m, pad, pad_check)
    result = context.hypercohomology(hom_complex(m))
    chi = sum((-1) ** deg * h for deg, h in result.dims.items())
    expected = chi_end(m.c2)
    extra = {deg: h for deg, h in result.dims.items() if deg < 0 or deg > 3}
    if extra:
        logger.warning(f"Hom complex has cohomology outside degrees 0..3: {extra}")
    if chi != expected:
        logger.error(f"chi(E,E) mismatch: {result.dims} sums to {chi}, expected {expected}")
        raise EulerCharacteristicMismatch(f"chi(E,E) = {chi}, expected {expected}", expected, chi)
    report = ExtReport(hom=result.h(0), ext1=result.h(1), ext2=result.h(2), ext3=result.h(3), chi=chi,
                       extra_degrees=extra, pad_used=result.pad, charge=k)
    logger.info(f"Ext dims {report.dims}, chi {chi}")
    return report
