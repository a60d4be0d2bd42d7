from itertools import product

import numpy as np
import pytest
import sympy as sp

from src.algebra.chow import (ChowElement, CurveClass, DivisorClass, H, ShapeTag, T, admissible_semistable_classes,
                              chern_character6, chern_of_monad, chern_twist, chi_end, chi_line_bundle, chi_rank2,
                              chi_twist, chow_inverse, classify_strictly_semistable, degree_of,
                              elementary_modification_c2, hilbert_difference, hrr_chi, line_structure_chern,
                              reduced_hilbert_poly, semistable_witness_pattern, shape_terms, slope,
                              total_chern_class)
from src.tools.ErrorAndStatus import ChernDataError, ChowErrorCode

h1, h2, h3 = (DivisorClass.basis(i) for i in (1, 2, 3))


def test_intersection_numbers():
    assert degree_of(h1.to_chow() * h2.to_chow() * h3.to_chow()) == 1
    assert degree_of(h1.to_chow() * h1.to_chow()) == 0
    assert degree_of(H.to_chow() ** 3) == 6
    assert (h2.to_chow() * h3.to_chow()).curve == CurveClass(1, 0, 0)


def test_inverse_of_total_class():
    x = ChowElement.one() + DivisorClass(1, -2, 3).to_chow()
    assert x * chow_inverse(x) == ChowElement.one()


def test_chi_of_twists_matches_cohomology_table():
    c2 = CurveClass(2, 1, 0)
    k = c2.charge
    assert chi_twist(c2, DivisorClass()) == 2 - k
    assert chi_twist(c2, -H) == 0
    assert chi_twist(c2, DivisorClass(0, -1, -1)) == -c2.k1
    assert chi_twist(c2, -h2) == -(k - c2.k2)


def test_chi_twist_agrees_with_rank2_formula_on_random_data():
    rng = np.random.default_rng(7)
    for _ in range(500):
        c2 = CurveClass.of(rng.integers(0, 6, size=3))
        D = DivisorClass.of(rng.integers(-5, 6, size=3))
        assert chi_twist(c2, D) == chi_rank2(*chern_twist(DivisorClass(), c2, D))


def test_chi_rank2_rejects_odd_data():
    with pytest.raises(ChernDataError) as info:
        chi_rank2(DivisorClass(1, 0, 0), CurveClass(1, 0, 0))
    assert info.value.code == ChowErrorCode.ODD_CHERN_DATA


def test_chi_line_bundle():
    assert chi_line_bundle(DivisorClass(1, 1, 1)) == 8
    assert chi_line_bundle(DivisorClass(-2, 0, 0)) == -1


@pytest.mark.parametrize("tag", list(ShapeTag))
def test_monad_chern_classes(tag):
    for c2 in product(range(4), repeat=3):
        c2 = CurveClass.of(c2)
        if c2.charge < (2 if tag == ShapeTag.KERNEL else 1):
            continue
        c1, c, c3 = chern_of_monad(tag, c2)
        assert c1 == DivisorClass()
        assert c == c2
        assert c3 == 0


def test_shape_terms_reject_small_charge():
    with pytest.raises(ChernDataError):
        shape_terms(ShapeTag.KERNEL, CurveClass(1, 0, 0))
    with pytest.raises(ChernDataError):
        shape_terms(ShapeTag.GLOBAL, CurveClass(0, 0, 0))
    with pytest.raises(ChernDataError):
        shape_terms(ShapeTag.GLOBAL, CurveClass(-1, 2, 0))


def test_global_shape_ranks():
    a, b, c = shape_terms(ShapeTag.GLOBAL, CurveClass(1, 1, 1))
    assert sum(m for _, m in a) == 3
    assert sum(m for _, m in b) == 11
    assert sum(m for _, m in c) == 6


def test_chi_end():
    for c2 in [(1, 1, 0), (2, 0, 0), (1, 1, 1), (2, 2, 1)]:
        c2 = CurveClass.of(c2)
        assert chi_end(c2) == 4 - 4 * c2.charge


def test_slope_and_hilbert_polynomials():
    assert slope(DivisorClass(1, 0, 0), 1) == 2
    poly = reduced_hilbert_poly(DivisorClass(), CurveClass(), 1)
    assert poly.as_expr() == sp.expand((T + 1) ** 3)
    with pytest.raises(ChernDataError):
        slope(DivisorClass(), 0)


def test_hilbert_difference_closed_form():
    for a, b in [(1, 0), (1, -1), (2, 3), (-2, 1)]:
        expected = -4 * (T + 1) * (a * a + a * b + b * b) - 8 * a * b * (a + b)
        assert sp.expand(hilbert_difference(a, b) - expected) == 0


def test_hilbert_polynomials_of_line_bundles_follow_slope():
    rng = np.random.default_rng(17)
    for _ in range(200):
        D1, D2 = (DivisorClass.of(rng.integers(-5, 6, size=3)) for _ in range(2))
        if D1.degree == D2.degree:
            continue
        if D1.degree > D2.degree:
            D1, D2 = D2, D1
        diff = reduced_hilbert_poly(D2, CurveClass(), 1) - reduced_hilbert_poly(D1, CurveClass(), 1)
        assert diff.degree() == 2
        assert diff.LC() == sp.Rational(D2.degree - D1.degree, 2)
        assert diff.eval(1000) > 0


def test_hilbert_polynomial_of_charge_two_instanton():
    c2 = CurveClass(1, 1, 0)
    poly = reduced_hilbert_poly(DivisorClass(), c2, 2)
    assert sp.expand(poly.as_expr() - ((T + 1) ** 3 - (T + 1))) == 0
    assert poly.eval(0) == 0
    assert poly.eval(0) == sp.Rational(chi_rank2(DivisorClass(), c2), 2)
    assert poly.LC() == 1
    for t in range(-3, 4):
        assert poly.eval(t) == sp.Rational(chi_twist(c2, H * t), 2)


def test_strictly_semistable_classification():
    classes = admissible_semistable_classes(10)
    assert len(classes) == 60
    for cls in classes:
        nonzero = [x for x in cls.c2.as_tuple() if x]
        assert len(nonzero) == 1
        assert nonzero[0] == 2 * cls.l ** 2
    assert not classify_strictly_semistable(0, 0).admissible
    assert not classify_strictly_semistable(1, 2).admissible


def test_semistable_witness_pattern():
    w, minus_w = semistable_witness_pattern(1, 2)
    assert w == DivisorClass(0, 2, -2)
    assert minus_w == -w
    assert w.degree == 0


def test_line_structure_chern():
    for family in (1, 2, 3):
        c = line_structure_chern(family)
        assert c.div == DivisorClass()
        assert c.curve == -CurveClass.of([1 if i == family else 0 for i in (1, 2, 3)])


def test_elementary_modification_raises_charge():
    assert elementary_modification_c2(CurveClass(1, 1, 0), 3) == CurveClass(1, 1, 1)


def test_hirzebruch_riemann_roch_cross_check():
    for D in [DivisorClass(1, 1, 1), DivisorClass(-2, 0, 3), DivisorClass(-1, -1, -1)]:
        assert hrr_chi(chern_character6(1, D, CurveClass())) == chi_line_bundle(D)
    for c2 in [CurveClass(1, 1, 0), CurveClass(2, 1, 3)]:
        assert hrr_chi(chern_character6(2, DivisorClass(), c2)) == chi_twist(c2, DivisorClass())


def test_total_chern_class():
    c = total_chern_class([(h1, 2)])
    assert c.div == DivisorClass(2, 0, 0)
    assert c.curve == CurveClass()
    with pytest.raises(ChernDataError) as info:
        total_chern_class([(h1, -1)])
    assert info.value.code == ChowErrorCode.NEGATIVE_MULTIPLICITY
