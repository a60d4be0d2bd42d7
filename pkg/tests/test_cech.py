from itertools import product

import pytest

from src.algebra.field import Field
from src.algebra.multipoly import MultiForm
from src.bundles.lines import line_koszul_complex, structure_sheaf_cohomology
from src.sheaves.cech import CechContext, LineComplex, cech_line_bundle
from src.sheaves.kunneth import h_product, h_p1
from src.algebra.chow import DivisorClass
from src.tools.ErrorAndStatus import EngineError, FieldMismatchError

F = Field.prime(101)


def test_line_bundles_on_x_match_kunneth():
    context = CechContext(F, pad=0, pad_check=False)
    for twist in product(range(-2, 2), repeat=3):
        expected = [h_product(twist, i) for i in range(4)]
        assert cech_line_bundle(context, twist) == expected, twist


@pytest.mark.parametrize("twist", [(-4, 0, 1), (3, -3, 0), (-2, -2, -2), (2, 2, -4)])
def test_pad_check_passes_on_line_bundles(twist):
    context = CechContext(F, pad=0, pad_check=True)
    assert cech_line_bundle(context, twist) == [h_product(twist, i) for i in range(4)]


@pytest.mark.parametrize("twist", [(-5,), (0,), (4,), (-3, 2), (1, -1), (-2, -4)])
def test_fewer_factors(twist):
    context = CechContext(F, pad=1, pad_check=True)
    assert cech_line_bundle(context, twist) == [h_product(twist, i) for i in range(len(twist) + 1)]


def test_euler_sequence_on_p1():
    # 0 -> O(-1) -> O^2 -> O(1) -> 0 is exact, so the complex has no hypercohomology
    x0 = MultiForm.variable(F, 1, 0, n=1)
    x1 = MultiForm.variable(F, 1, 1, n=1)
    K = LineComplex(F, (((-1,),), ((0,), (0,)), ((1,),)), -1,
                    ({(0, 0): x1, (1, 0): -x0}, {(0, 0): x0, (0, 1): x1}))
    result = CechContext(F, pad=0, pad_check=True).hypercohomology(K)
    assert result.dims == {}


def test_map_cohomology_is_cokernel():
    # O(-1) --x0--> O on P^1: cone is the skyscraper at x0 = 0, with h^0 = 1
    x0 = MultiForm.variable(F, 1, 0, n=1)
    K = LineComplex(F, (((-1,),), ((0,),)), -1, ({(0, 0): x0},))
    result = CechContext(F, pad=0, pad_check=True).hypercohomology(K)
    assert result.dims == {0: 1}


def test_non_complex_is_rejected():
    x10 = MultiForm.variable(F, 1, 0)
    K = LineComplex(F, (((0, 0, 0),), ((1, 0, 0),), ((2, 0, 0),)), 0, ({(0, 0): x10}, {(0, 0): x10}))
    with pytest.raises(EngineError):
        CechContext(F, pad=0, pad_check=False).hypercohomology(K)


def test_wrong_entry_degree_is_rejected():
    K = LineComplex(F, (((0, 0, 0),), ((0, 1, 0),)), 0, ({(0, 0): MultiForm.variable(F, 1, 0)},))
    with pytest.raises(EngineError):
        CechContext(F, pad=0).hypercohomology(K)


def test_field_mismatch():
    K = LineComplex(Field.prime(103), (((0, 0, 0),),), 0, ())
    with pytest.raises(FieldMismatchError):
        CechContext(F, pad=0).hypercohomology(K)


@pytest.mark.parametrize("family", [1, 2, 3])
def test_structure_sheaf_of_a_line(family):
    context = CechContext(F, pad=0, pad_check=True)
    for D in [DivisorClass(0, 0, 0), DivisorClass(-3, 1, 2), DivisorClass(2, -1, -1), DivisorClass(-1, -2, 4)]:
        a = D[family - 1]
        assert structure_sheaf_cohomology(family, (1, 4), (3, 7), D, context) == [h_p1(a, 0), h_p1(a, 1)]


def test_koszul_complex_shape():
    K = line_koszul_complex(2, (1, 0), (0, 1), F)
    assert K.start == -2
    assert K.columns[1] == ((-1, 0, 0), (0, 0, -1))
    K.check()
