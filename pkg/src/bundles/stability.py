"""
Section-vanishing stability checks over a window of twists, the instanton
verifier, and the Ulrich checks at charge 2.
"""
import logging
from itertools import product
from math import isqrt
from typing import Dict, List, Optional

import sympy as sp

from src.algebra.chow import (CurveClass, DivisorClass, H, ShapeTag, T, chern_of_monad, chern_twist, chi_rank2,
                              chi_twist, reduced_hilbert_poly, semistable_witness_pattern, slope)
from src.bundles.hyperext import beilinson_table, coh_monad_twist, h_monad
from src.bundles.monad import Monad, MonadShape, validate_monad
from src.schema import CheckResult, InstantonReport, StabilityVerdict, UlrichReport
from src.tools.ErrorAndStatus import PreconditionError, SegreError, StabilityErrorCode, StabilityLevel
from src.tools.utils import DEFAULT_JOBS, DEFAULT_POINTS, DEFAULT_WINDOW, parallel_map

logger = logging.getLogger(__name__)

ULRICH_CHARGE = 2
ULRICH_TWISTS = (0, -1, -2)

# Extension 0 -> O(-D) -> E -> I_l(D) -> 0 with D = h2 - 2h3 and l of class e1
REMARK_TWIST = DivisorClass(0, 1, -2)
REMARK_LINE_FAMILY = 1


def enumerate_window(W: int) -> List[DivisorClass]:
    """All B with |b_i| <= W and b1 + b2 + b3 <= 0, in lexicographic order."""
    if W < 0:
        raise PreconditionError(f"window must be non-negative, got {W}")
    return [DivisorClass.of(b) for b in product(range(-W, W + 1), repeat=3) if sum(b) <= 0]


def _h0_task(args) -> Optional[int]:
    m, B, pad, pad_check = args
    try:
        return h_monad(m, B, 0, pad, pad_check)
    except SegreError as e:
        logger.warning(f"h0(E{B}) could not be computed: {e}")
        return None


def hoppe_window_check(m: Monad, W: int = DEFAULT_WINDOW, pad: Optional[int] = None,
                       pad_check: Optional[bool] = None, jobs: int = DEFAULT_JOBS) -> StabilityVerdict:
    """
    h^0(E(B)) for every B in the window of non-positive degree.

    A section at negative degree is an instability witness; sections only at
    degree zero witness strict semistability. Witnesses are the first such B
    in lexicographic order, so the verdict does not depend on `jobs`.
    """
    logger.info(f"=== Starting hoppe_window_check: c2={m.c2}, W={W} ===")
    candidates = enumerate_window(W)
    logger.debug(f"{len(candidates)} candidate twists")
    counts = parallel_map(_h0_task, [(m, B, pad, pad_check) for B in candidates], jobs)
    sections = {str(B): h for B, h in zip(candidates, counts) if h}
    negative = [B for B, h in zip(candidates, counts) if h and B.degree < 0]
    flat = [B for B, h in zip(candidates, counts) if h and B.degree == 0]
    unknown = [B for B, h in zip(candidates, counts) if h is None]
    if negative:
        level, witness = StabilityLevel.UNSTABLE_WITNESS, negative[0]
    elif unknown:
        level, witness = StabilityLevel.UNDETERMINED, None
    elif flat:
        level, witness = StabilityLevel.STRICTLY_SEMISTABLE_WITNESS, flat[0]
    else:
        level, witness = StabilityLevel.STABLE_WITHIN_WINDOW, None
    logger.info(f"Window verdict: {level.value}" + (f", witness {witness}" if witness is not None else ""))
    return StabilityVerdict(
        level=level,
        window=W,
        checked=[list(B.as_tuple()) for B in candidates],
        witness=list(witness.as_tuple()) if witness is not None else None,
        sections=sections,
    )


def matches_semistable_pattern(c2: CurveClass, witness: DivisorClass) -> Optional[bool]:
    """
    For c2 = 2 l^2 e_i, whether the witness is one of +-(l h_j - l h_m).
    None when c2 is not of that form.
    """
    nonzero = [i for i, x in enumerate(c2.as_tuple(), start=1) if x]
    if len(nonzero) != 1:
        return None
    k = c2.charge
    l = isqrt(k // 2)
    if k % 2 or 2 * l * l != k:
        return None
    return witness in semistable_witness_pattern(nonzero[0], l)


def _check(name: str, passed: bool, detail: str = "") -> CheckResult:
    if not passed:
        logger.warning(f"Check {name} failed: {detail}")
    return CheckResult(name=name, passed=passed, detail=detail)


def verify_instanton(m: Monad, W: int = DEFAULT_WINDOW, pad: Optional[int] = None, pad_check: Optional[bool] = None,
                     n_points: int = DEFAULT_POINTS, seed: int = 0, jobs: int = DEFAULT_JOBS) -> InstantonReport:
    """
    Runs the instanton conditions in order: monad validity, Chern data,
    h^0(E) = 0, h^1(E(-h)) = 0, the Beilinson table and the window check.

    Failures are reported as data. An invalid monad stops the run after the
    first check since its cohomology is not that of a bundle.
    """
    logger.info(f"=== Starting verify_instanton: {m.shape.tag.value} monad, c2={m.c2}, W={W} ===")
    checks: List[CheckResult] = []
    validity = validate_monad(m, n_points, seed)
    checks.append(_check("monad-valid", validity.valid, f"{validity.points_tested} points"))
    if not validity.valid:
        return InstantonReport(passed=False, checks=checks)

    c1, c2, c3 = chern_of_monad(m.shape.tag, m.c2)
    checks.append(_check("chern-classes", c1 == DivisorClass() and c2 == m.c2 and c3 == 0,
                         f"c1={c1} c2={c2} c3={c3}"))

    table = None
    stability = None
    try:
        h0 = h_monad(m, DivisorClass(), 0, pad, pad_check)
        checks.append(_check("h0(E)=0", h0 == 0, f"h0={h0}"))
        h1 = h_monad(m, -H, 1, pad, pad_check)
        checks.append(_check("h1(E(-h))=0", h1 == 0, f"h1={h1}"))
        table = beilinson_table(m, pad, pad_check)
        checks.append(_check("beilinson-table", table.matches_expected))
        stability = hoppe_window_check(m, W, pad, pad_check, jobs)
        checks.append(_check("stability-window", stability.level == StabilityLevel.STABLE_WITHIN_WINDOW,
                             f"{stability.level.value} at W={W}"))
    except SegreError as e:
        logger.error(f"verify_instanton stopped: {e}")
        checks.append(_check("cohomology", False, f"{e.code.value}: {e}"))
    passed = all(c.passed for c in checks)
    logger.info(f"verify_instanton {'PASSED' if passed else 'FAILED'}")
    return InstantonReport(passed=passed, checks=checks, table=table, stability=stability)


def ulrich_report(m: Monad, pad: Optional[int] = None, pad_check: Optional[bool] = None) -> UlrichReport:
    """
    h^i(E(th)) for t = 0, -1, -2; every one must vanish for E(h) to be Ulrich.

    Raises:
        PreconditionError: the charge is not 2.
    """
    if m.c2.charge != ULRICH_CHARGE:
        logger.error(f"Ulrich check needs charge {ULRICH_CHARGE}, got {m.c2.charge}")
        raise PreconditionError(f"Ulrich check needs charge {ULRICH_CHARGE}, got {m.c2.charge}",
                                StabilityErrorCode.WRONG_CHARGE)
    report = UlrichReport(passed=True)
    for t in ULRICH_TWISTS:
        D = H * t
        coh = coh_monad_twist(m, D, pad, pad_check)
        report.chi[t] = coh.chi
        report.dims[t] = coh.dims
        report.failures.extend([i, t] for i, h in enumerate(coh.dims.as_list()) if h)
    report.passed = not report.failures
    logger.info(f"Ulrich check for c2={m.c2}: {'passed' if report.passed else report.failures}")
    return report


def ulrich_check(m: Monad, pad: Optional[int] = None, pad_check: Optional[bool] = None) -> bool:
    return ulrich_report(m, pad, pad_check).passed


def ulrich_chi_values(c2: CurveClass) -> Dict[int, int]:
    return {t: chi_twist(c2, H * t) for t in ULRICH_TWISTS}


def remark_counterexample() -> dict:
    """
    Numerical data of the rank-2 bundle with c2 = 5 e1 that satisfies the
    instanton vanishings but has a section of E(h2 - 2h3), a twist of degree -2.

    The bundle is an extension, not a generated monad; the monad shapes of
    its Chern data are reported for comparison.
    """
    D = REMARK_TWIST
    sub = -D
    line = CurveClass.of([1 if i == REMARK_LINE_FAMILY else 0 for i in (1, 2, 3)])
    c2 = (sub.to_chow() * D.to_chow()).curve + line
    twisted_c1, twisted_c2 = chern_twist(DivisorClass(), c2, D)
    sub_poly = reduced_hilbert_poly(sub, CurveClass(), 1)
    bundle_poly = reduced_hilbert_poly(DivisorClass(), c2, 2)
    excess = sp.Poly((sub_poly - bundle_poly).as_expr(), T)
    shapes = {}
    for tag in ShapeTag:
        shape = MonadShape(tag, c2)
        mc1, mc2, mc3 = chern_of_monad(tag, c2)
        shapes[tag.value] = {
            "ranks": list(shape.ranks),
            "terms": [str(t) for t in shape.terms()],
            "chern": {"c1": list(mc1.as_tuple()), "c2": list(mc2.as_tuple()), "c3": mc3},
        }
    data = {
        "c2": list(c2.as_tuple()),
        "destabilizing_twist": list(D.as_tuple()),
        "degree": D.degree,
        "sub_slope": str(slope(sub, 1)),
        "bundle_slope": str(slope(DivisorClass(), 2)),
        "chi_twist": chi_twist(c2, D),
        "chi_rank2_of_twist": chi_rank2(twisted_c1, twisted_c2),
        "hilbert_excess_leading": str(excess.LC()),
        "hilbert_excess_degree": excess.degree(),
        "shapes": shapes,
    }
    logger.debug(f"Remark counterexample data: {data}")
    return data
