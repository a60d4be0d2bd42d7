from itertools import product

import pytest

from src.algebra.chow import DivisorClass, chi_line_bundle
from src.sheaves.kunneth import (LineBundleSum, coh_vector, cohomology_weights, h0_basis, h_p1, h_product,
                                 h_quadric, h_X, laurent_range)


def test_projective_line():
    assert [h_p1(2, 0), h_p1(2, 1)] == [3, 0]
    assert [h_p1(-1, 0), h_p1(-1, 1)] == [0, 0]
    assert [h_p1(-3, 0), h_p1(-3, 1)] == [0, 2]


def test_products():
    assert h_X(DivisorClass(-2, -2, -2), 3) == 1
    assert h_X(DivisorClass(-2, 0, 0), 1) == 1
    assert h_X(DivisorClass(1, 1, 1), 0) == 8
    assert h_quadric((1, 1), 0) == 4
    assert h_quadric((-2, 3), 1) == 4
    assert h_product((5,), 0) == 6


def test_euler_characteristic_of_line_bundles():
    for D in [DivisorClass(-3, 1, 0), DivisorClass(2, -2, -4), DivisorClass(-1, 5, 2)]:
        assert coh_vector(D).euler == chi_line_bundle(D)


def test_laurent_weights_count_cohomology():
    assert list(laurent_range(2)) == [0, 1, 2]
    assert list(laurent_range(-3)) == [-2, -1]
    assert len(laurent_range(-1)) == 0
    assert len(cohomology_weights((-3, 1, 0))) == h_X(DivisorClass(-3, 1, 0), 1)
    assert len(h0_basis(DivisorClass(1, 2, 0))) == 6


def test_line_bundle_sums():
    s = LineBundleSum.of([(DivisorClass(-1, 0, 0), 2), (DivisorClass(0, 0, 0), 0), (DivisorClass(), 3)])
    assert s.rank == 5
    assert len(s.terms) == 2
    assert s.summands()[:2] == [DivisorClass(-1, 0, 0)] * 2
    assert s.coh_vector().as_list() == [3, 0, 0, 0]
    twisted = s.twisted(DivisorClass(-1, 0, 0))
    assert twisted.coh_vector().as_list() == [0, 2, 0, 0]


@pytest.mark.parametrize("a", range(-6, 7))
def test_projective_line_riemann_roch_and_duality(a):
    assert h_p1(a, 0) - h_p1(a, 1) == a + 1
    for i in (0, 1):
        assert h_p1(a, i) == h_p1(-2 - a, 1 - i)


@pytest.mark.parametrize("a1", range(-6, 7))
def test_product_riemann_roch_and_serre_duality(a1):
    for a2, a3 in product(range(-6, 7), repeat=2):
        D = DivisorClass(a1, a2, a3)
        dual = DivisorClass(-a1 - 2, -a2 - 2, -a3 - 2)
        dims = [h_X(D, i) for i in range(4)]
        assert dims[0] - dims[1] + dims[2] - dims[3] == (a1 + 1) * (a2 + 1) * (a3 + 1)
        assert dims == [h_X(dual, 3 - i) for i in range(4)]
