import json

import pytest

from src.algebra.chow import CurveClass, DivisorClass, ShapeTag
from src.algebra.field import Field
from src.bundles.monad import (Monad, MonadShape, deserialize, random_monad, serialize, to_document,
                               validate_monad, zero_matrix)
from src.tools.ErrorAndStatus import (FieldMismatchError, MonadFileErrorCode, MonadFormatError, MonadShapeError,
                                      StatusCodes, VerdictStatus)
from src.tools.FileLoadTool import load_monad_file, save_monad_file


def test_shape_ranks():
    assert MonadShape(ShapeTag.KERNEL, CurveClass(1, 1, 1)).ranks == (3, 6, 1)
    assert MonadShape(ShapeTag.GLOBAL, CurveClass(1, 1, 1)).ranks == (3, 11, 6)
    assert MonadShape("global", CurveClass(1, 0, 0)).tag == ShapeTag.GLOBAL


def test_kernel_shape_needs_charge_two():
    with pytest.raises(MonadShapeError):
        MonadShape(ShapeTag.KERNEL, CurveClass(1, 0, 0))


@pytest.mark.parametrize("tag", list(ShapeTag))
def test_random_monad_is_valid(tag):
    m = random_monad(MonadShape(tag, CurveClass(1, 1, 1)), Field.prime(), seed=3)
    assert all(f.is_zero for row in m.composition() for f in row)
    validity = validate_monad(m, n_points=16, seed=5)
    assert validity.valid
    assert validity.alpha_fiberwise_injective.status == VerdictStatus.VERIFIED
    assert m.stats.attempts >= 1


def test_entries_have_the_right_degrees(kernel_111):
    for row, bt in zip(kernel_111.alpha, kernel_111.b_twists):
        for f, at in zip(row, kernel_111.a_twists):
            assert f.degree == (bt - at).as_tuple()
    for row in kernel_111.beta:
        assert all(min(f.degree) >= 0 or f.is_zero for f in row)


def test_deficient_block_is_repaired():
    m = random_monad(MonadShape(ShapeTag.KERNEL, CurveClass(4, 1, 0)), Field.prime(), seed=2)
    assert m.stats.deficient_blocks == [1]
    assert m.stats.line_search_steps >= 1
    assert validate_monad(m, n_points=16).valid


def test_zero_alpha_is_not_injective(kernel_110):
    bad = Monad(kernel_110.shape, kernel_110.field,
                tuple(tuple(row) for row in zero_matrix(kernel_110.field, kernel_110.b_twists, kernel_110.a_twists)),
                kernel_110.beta)
    validity = validate_monad(bad, n_points=4)
    assert validity.composition_zero
    assert validity.alpha_fiberwise_injective.status == VerdictStatus.FAILED
    assert validity.alpha_fiberwise_injective.witness is not None
    assert not validity.valid


def test_nonzero_composition_skips_point_checks(kernel_111):
    beta = [list(row) for row in kernel_111.beta]
    r, m = next((r, m) for r, row in enumerate(beta) for m, f in enumerate(row) if not f.is_zero)
    beta[r][m] = beta[r][m] + beta[r][m]
    bad = Monad(kernel_111.shape, kernel_111.field, kernel_111.alpha, tuple(tuple(row) for row in beta))
    validity = validate_monad(bad)
    assert not validity.composition_zero
    assert validity.points_tested == 0


def test_complex_columns(global_110):
    K = global_110.complex(DivisorClass(-1, 0, 0))
    assert K.start == -1
    assert [len(c) for c in K.columns] == list(global_110.shape.ranks)
    assert K.columns[1][0] == (-1, 0, 0)
    K.check()


def test_serialization_round_trip(kernel_110):
    data = serialize(kernel_110)
    assert data.endswith(b"\n")
    assert deserialize(data) == kernel_110
    assert serialize(deserialize(data)) == data


def test_serialization_over_rationals():
    m = random_monad(MonadShape(ShapeTag.KERNEL, CurveClass(1, 1, 0)), Field.rationals(), seed=4)
    assert to_document(m)["field"] == {"type": "rational"}
    assert deserialize(serialize(m)) == m


def test_corrupted_file_reports_offset(kernel_110):
    data = serialize(kernel_110)
    broken = data[:1] + b"@" + data[1:]
    with pytest.raises(MonadFormatError) as info:
        deserialize(broken)
    assert info.value.code == MonadFileErrorCode.JSONDecodeError
    assert info.value.offset is not None
    assert info.value.offset == 1


def test_bad_documents_are_rejected(kernel_110):
    doc = to_document(kernel_110)
    for change in [{"format": "other"}, {"shape": "cokernel"}, {"c2": [1, 0, 0]}]:
        with pytest.raises(MonadFormatError):
            deserialize(json.dumps({**doc, **change}).encode())
    short = {**doc, "alpha": doc["alpha"][:-1]}
    with pytest.raises(MonadFormatError):
        deserialize(json.dumps(short).encode())


@pytest.mark.parametrize("c2", [[1, 1], [1, 1, 0, 0], [1, 1, "0"], [1.0, 1, 0], "1,1,0"])
def test_malformed_c2_is_rejected(kernel_110, c2):
    doc = {**to_document(kernel_110), "c2": c2}
    with pytest.raises(MonadFormatError) as info:
        deserialize(json.dumps(doc).encode())
    assert "c2" in str(info.value)


def test_non_prime_modulus_in_file(kernel_110):
    doc = {**to_document(kernel_110), "field": {"type": "prime", "p": 100}}
    with pytest.raises(MonadFormatError) as info:
        deserialize(json.dumps(doc).encode())
    assert info.value.code == MonadFileErrorCode.BAD_FORMAT
    assert "field" in str(info.value)


def test_entry_of_negative_degree_must_be_zero(kernel_110):
    doc = to_document(kernel_110)
    a, b, _ = kernel_110.shape.summands()
    i, j = next((i, j) for i, bt in enumerate(b) for j, at in enumerate(a) if min((bt - at).as_tuple()) < 0)
    doc["alpha"][i][j] = "1"
    with pytest.raises(MonadFormatError):
        deserialize(json.dumps(doc).encode())


def test_field_mismatch_on_load(kernel_110):
    with pytest.raises(FieldMismatchError):
        deserialize(serialize(kernel_110), Field.prime(101))


def test_file_tool(kernel_110, tmp_path):
    path = tmp_path / "m.json"
    assert save_monad_file(kernel_110, str(path))["status"] == StatusCodes.SUCCESS
    loaded = load_monad_file(str(path))
    assert loaded["status"] == StatusCodes.SUCCESS
    assert loaded["monad"] == kernel_110

    missing = load_monad_file(str(tmp_path / "missing.json"))
    assert missing["status"] == StatusCodes.ERROR
    assert missing["error_code"] == MonadFileErrorCode.FILE_NOT_FOUND

    path.write_bytes(b"{ not json")
    broken = load_monad_file(str(path))
    assert broken["error_code"] == MonadFileErrorCode.JSONDecodeError
    assert broken["offset"] == 2
