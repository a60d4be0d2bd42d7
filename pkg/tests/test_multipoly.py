from fractions import Fraction

import numpy as np
import pytest

from src.algebra.field import Field
from src.algebra.multipoly import (BihomogeneousPolynomial, MultiForm, common_root_exists, evaluate, from_vector,
                                   interpolate_bihomogeneous, monomial_basis, parse_terms, polynomial_det,
                                   random_form, random_point, roots_in_field, specialize, to_vector, vanishes_at)
from src.tools.ErrorAndStatus import DegreeError, FieldErrorCode, FieldMismatchError, InterpolationError

F = Field.prime(101)
Q = Field.rationals()


def test_monomial_basis_order_and_size():
    basis = monomial_basis((2, 1))
    assert len(basis) == 6
    assert basis[0] == (2, 0, 1, 0)
    assert basis[-1] == (0, 2, 0, 1)
    assert monomial_basis((-1, 0)) == []


def test_variables_multiply_and_evaluate():
    x10 = MultiForm.variable(F, 1, 0)
    x21 = MultiForm.variable(F, 2, 1)
    f = x10 * x21 + x10 * MultiForm.variable(F, 2, 0)
    assert f.degree == (1, 1, 0)
    point = ((3, 5), (2, 7), (1, 1))
    assert evaluate(f, point) == (3 * 7 + 3 * 2) % 101


def test_adding_forms_of_different_degrees_fails():
    with pytest.raises(DegreeError):
        MultiForm.variable(F, 1, 0) + MultiForm.variable(F, 2, 0)
    assert (MultiForm.zero(F, (0, 0, 0)) + MultiForm.variable(F, 2, 0)).degree == (0, 1, 0)


def test_from_dict_rejects_wrong_exponents():
    with pytest.raises(DegreeError):
        MultiForm.from_dict(F, (1, 0, 0), {(2, 0, 0, 0, 0, 0): 1})
    with pytest.raises(DegreeError):
        random_form((1, -1, 0), F, 0)


def test_fields_do_not_mix():
    with pytest.raises(FieldMismatchError):
        MultiForm.variable(F, 1, 0) * MultiForm.variable(Field.prime(103), 1, 0)


def test_vector_coordinates():
    f = random_form((1, 2, 0), F, seed=3)
    assert from_vector(F, (1, 2, 0), to_vector(f)) == f
    assert len(to_vector(f)) == 6


def test_random_form_is_seeded():
    assert random_form((2, 1, 1), F, seed=5) == random_form((2, 1, 1), F, seed=5)


def test_specialize_keeps_remaining_factor():
    f = random_form((1, 1, 2), F, seed=11)
    fixed = {2: (3, 4), 3: (1, 9)}
    g = specialize(f, fixed)
    assert g.degree == (1,)
    for pair in [(1, 0), (0, 1), (5, 17)]:
        assert evaluate(g, (pair,)) == evaluate(f, (pair, (3, 4), (1, 9)))


def test_parse_terms_reads_render_output():
    f = random_form((1, 0, 1), Q, seed=2).scale(Fraction(1, 3))
    assert parse_terms(Q, (1, 0, 1), f.render()) == f


def test_roots_in_prime_field():
    # (x - 2)(x - 5) = x^2 - 7x + 10
    assert roots_in_field([10, -7, 1], F) == [2, 5]
    assert roots_in_field([1, 0, 1], Field.prime(103)) == []
    with pytest.raises(ValueError):
        roots_in_field([0, 0], F)


def test_roots_over_rationals():
    assert roots_in_field([Fraction(-1, 4), 0, 1], Q) == [Fraction(-1, 2), Fraction(1, 2)]
    assert roots_in_field([-2, 0, 1], Q) == []


def test_common_roots():
    assert common_root_exists([10, -7, 1], [-2, 1], F)
    assert not common_root_exists([10, -7, 1], [-3, 1], F)
    # x^2 + 1 and x^3 + x share the roots +-i over the algebraic closure of Q
    assert common_root_exists([1, 0, 1], [0, 1, 0, 1], Q)
    assert not common_root_exists([1, 0, 1], [-1, 1], Q)


def test_polynomial_det():
    def matrix_at(t):
        return [[t, 0], [0, F.add(t, 1)]]

    assert polynomial_det(matrix_at, 2, F) == [0, 1, 1]


def test_interpolation_recovers_a_form():
    target = random_form((2, 1), F, seed=4)
    target = target.scale(F.inv(target.terms[0][1]))
    s_values, t_values = [1, 2, 3, 4], [5, 6, 7]
    values = [[evaluate(target, ((1, s), (1, t))) for t in t_values] for s in s_values]
    fitted = interpolate_bihomogeneous(values, s_values, t_values, (2, 1), F)
    assert fitted.form == target
    assert fitted.at(9, 10) == evaluate(target, ((1, 9), (1, 10)))


def test_interpolation_errors():
    with pytest.raises(InterpolationError) as info:
        interpolate_bihomogeneous([[1, 2]], [1], [1, 2], (1, 1), F)
    assert info.value.code == FieldErrorCode.UNDERDETERMINED
    values = [[1 if (s, t) == (3, 3) else 0 for t in (1, 2, 3)] for s in (1, 2, 3)]
    with pytest.raises(InterpolationError) as info:
        interpolate_bihomogeneous(values, [1, 2, 3], [1, 2, 3], (1, 1), F)
    assert info.value.code == FieldErrorCode.INCONSISTENT


def test_observed_bidegree_and_homogenization():
    # s * t^0 viewed in bidegree (2, 2)
    poly = BihomogeneousPolynomial(MultiForm.from_dict(F, (2, 2), {(1, 1, 2, 0): 1}))
    assert poly.observed_bidegree == (1, 0)
    smaller = poly.homogenized_at((1, 0))
    assert smaller.bidegree == (1, 0)
    assert smaller.at(7, 8) == poly.at(7, 8) == 7
    assert poly.vanishes(0, 5)
    assert not poly.vanishes(7, 8)


def _random_degree(rng):
    return tuple(int(d) for d in rng.integers(0, 3, size=3))


def test_multiplication_is_associative_and_commutative():
    rng = np.random.default_rng(23)
    for trial in range(100):
        f, g, h = (random_form(_random_degree(rng), F, seed=3 * trial + j) for j in range(3))
        assert f * g == g * f
        assert (f * g) * h == f * (g * h)
        assert (f * g).degree == tuple(x + y for x, y in zip(f.degree, g.degree))


def test_evaluation_is_multiplicative():
    big = Field.prime()
    rng = np.random.default_rng(29)
    for trial in range(50):
        f = random_form(_random_degree(rng), big, seed=2 * trial)
        g = random_form(_random_degree(rng), big, seed=2 * trial + 1)
        point = random_point(big, seed=trial)
        assert evaluate(f * g, point) == big.mul(evaluate(f, point), evaluate(g, point))
        assert vanishes_at(f * g, point) == (vanishes_at(f, point) or vanishes_at(g, point))


@pytest.mark.parametrize("d", range(5))
@pytest.mark.parametrize("e", range(5))
def test_interpolating_samples_recovers_the_form(d, e):
    big = Field.prime()
    target = random_form((d, e), big, seed=10 * d + e)
    target = target.scale(big.inv(target.terms[0][1]))
    s_values, t_values = list(range(1, d + 3)), list(range(1, e + 3))
    values = [[evaluate(target, ((1, s), (1, t))) for t in t_values] for s in s_values]
    assert interpolate_bihomogeneous(values, s_values, t_values, (d, e), big).form == target
