import pytest

from src.algebra.chow import DivisorClass, chi_twist
from src.bundles.hyperext import (BEILINSON_TWISTS, beilinson_table, coh_monad_twist, expected_beilinson_row,
                                  ext_dims, first_vanishing_violation, h_monad, hom_complex, les_dims,
                                  serre_dual_twist, vanishing_sweep)
from src.tools.ErrorAndStatus import CohomologyErrorCode, PreconditionError
from tests.conftest import PAD, PAD_CHECK


def test_expected_rows(kernel_110):
    rows = {label: expected_beilinson_row(kernel_110, D).as_list() for label, D in BEILINSON_TWISTS}
    assert rows["O(-h)"] == [0, 0, 0, 0]
    assert rows["O(-h2-h3)"] == [0, 1, 0, 0]
    assert rows["O(-h1-h2)"] == [0, 0, 0, 0]
    assert rows["O(-h3)"] == [0, 2, 0, 0]
    assert rows["O(-h1)"] == [0, 1, 0, 0]
    assert rows["O"] == [0, 0, 0, 0]


@pytest.mark.parametrize("name", ["kernel_110", "kernel_111", "global_110"])
def test_beilinson_table_matches(name, request):
    m = request.getfixturevalue(name)
    table = beilinson_table(m, pad=PAD, pad_check=PAD_CHECK)
    assert len(table.rows) == 8
    assert table.matches_expected
    for row in table.rows:
        assert row.dims.euler == chi_twist(m.c2, DivisorClass.of(row.twist))


@pytest.mark.parametrize("twist", [(0, -1, -1), (-1, 0, 0), (1, 0, 0), (-2, 0, 0), (0, 1, -2), (-1, -1, -1)])
def test_bookkeeping_agrees_with_cech(kernel_111, twist):
    D = DivisorClass.of(twist)
    cech = coh_monad_twist(kernel_111, D, pad=PAD, pad_check=PAD_CHECK, force_cech=True)
    assert cech.engine == "cech"
    assert cech.pad_used == PAD
    for i, x in enumerate(les_dims(kernel_111, D)):
        if x is not None:
            assert x == cech.dims[i]


def test_bookkeeping_is_used_when_conclusive(kernel_110):
    report = coh_monad_twist(kernel_110, DivisorClass(-1, -1, -1), pad=PAD)
    assert report.engine == "les-bookkeeping"
    assert report.pad_used is None
    assert report.dims.as_list() == [0, 0, 0, 0]


@pytest.mark.parametrize("twist", [(0, -1, -1), (1, 0, 0)])
def test_serre_duality(kernel_110, twist):
    D = DivisorClass.of(twist)
    assert serre_dual_twist(D) == -D - DivisorClass(2, 2, 2)
    here = coh_monad_twist(kernel_110, D, pad=PAD, pad_check=PAD_CHECK).dims.as_list()
    there = coh_monad_twist(kernel_110, serre_dual_twist(D), pad=PAD, pad_check=PAD_CHECK).dims.as_list()
    assert here == there[::-1]


def test_h_monad_single_degree(kernel_110):
    assert h_monad(kernel_110, DivisorClass(0, 0, -1), 1, pad=PAD) == 2
    assert h_monad(kernel_110, DivisorClass(), 0, pad=PAD) == 0


def test_vanishing(kernel_110):
    assert vanishing_sweep(kernel_110, DivisorClass(1, 0, 0), pad=PAD, pad_check=PAD_CHECK)
    assert first_vanishing_violation(kernel_110, limit=1, pad=PAD, pad_check=PAD_CHECK) is None
    with pytest.raises(PreconditionError):
        vanishing_sweep(kernel_110, DivisorClass(-1, 0, 0))
    with pytest.raises(PreconditionError):
        vanishing_sweep(kernel_110, DivisorClass(4, 0, 0), limit=3)


def test_hom_complex_shape(kernel_110):
    K = hom_complex(kernel_110)
    assert K.start == -2
    assert len(K.columns) == 5
    ranks = kernel_110.shape.ranks
    assert len(K.columns[0]) == ranks[0] * ranks[2]
    assert len(K.columns[2]) == sum(r * r for r in ranks)
    K.check()


def test_ext_dims(kernel_110):
    report = ext_dims(kernel_110, pad=PAD, pad_check=False)
    assert report.dims == [1, 5, 0, 0]
    assert report.chi == -4
    assert report.matches_expected


def test_ext_charge_bound(kernel_111):
    with pytest.raises(PreconditionError) as info:
        ext_dims(kernel_111, max_charge=2)
    assert info.value.code == CohomologyErrorCode.CHARGE_TOO_LARGE
