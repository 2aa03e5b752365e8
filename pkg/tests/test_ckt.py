from __future__ import annotations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from confsym.ckt import (
    CKParameters,
    ckv_from_parameters,
    conformal_killing_residual,
    expected_dimension,
    field_coordinates,
    solve_conformal_killing,
)
from confsym.exact.linalg import rank
from confsym.exact.poly import MultiPoly, coordinates
from confsym.exact.scalar import Q
from confsym.fields import TensorTagError, euclidean_tracefree_part, symmetric_tensor, vector_field
from confsym.symmetry import symmetric_tracefree_product

N = 3
x1, x2, x3 = coordinates(N)
ZERO = MultiPoly.zero(N)


def comps(V):
    return [V.comp((a,)) for a in range(V.n)]


def test_inversion_parameters():
    V = ckv_from_parameters(3, CKParameters.zero(3, r=(2, 0, 0)))
    assert comps(V) == [x1 * x1 - x2 * x2 - x3 * x3, (x1 * x2).scale(2), (x1 * x3).scale(2)]


def test_translation_sign():
    V = ckv_from_parameters(3, CKParameters.zero(3, s=(1, 0, 0)))
    assert comps(V) == [MultiPoly.const(N, -1), ZERO, ZERO]


@pytest.mark.parametrize("n", [2, 3, 5])
def test_dilation_parameter(n):
    V = ckv_from_parameters(n, CKParameters.zero(n, lam=1))
    assert comps(V) == coordinates(n)


def test_rotation_must_be_skew():
    with pytest.raises(ValueError):
        CKParameters.zero(2, m=((0, 1), (1, 0)))


@pytest.mark.parametrize("n", [3, 4, 6])
def test_euler_residual_zero(n):
    assert conformal_killing_residual(vector_field(coordinates(n)), 1).is_zero()


def test_rotation_residual_zero():
    assert conformal_killing_residual(vector_field([-x2, x1, ZERO]), 1).is_zero()


def test_non_killing_tensor_residual():
    entries = {(a, b): ZERO for a in range(N) for b in range(a, N)}
    entries[(0, 0)] = x1 * x1
    V = symmetric_tensor(euclidean_tracefree_part(entries, N), N)
    res = conformal_killing_residual(V, 2)
    assert not res.is_zero()
    # by hand: 3 d_1 V^11 - (6/5) div_1 with V^11 = 2/3 x1^2, div_1 = 4/3 x1
    assert res.comp((0, 0, 0)) == x1.scale(4) - x1.scale(Q(8, 5))


def test_residual_rejects_wrong_rank():
    with pytest.raises(TensorTagError):
        conformal_killing_residual(vector_field([x1, x2, x3]), 2)


def test_expected_dimension():
    assert expected_dimension(3, 2) == 35
    assert expected_dimension(3, 1) == 10
    assert expected_dimension(5, 2) == 168
    assert expected_dimension(4, 2) == 84
    with pytest.raises(ValueError):
        expected_dimension(2, 1)


@pytest.mark.parametrize("n,valence,deg,count", [(3, 1, 2, 10), (3, 2, 4, 35), (4, 2, 4, 84)])
def test_solver_counts(n, valence, deg, count):
    basis = solve_conformal_killing(n, valence, deg)
    assert len(basis) == count
    assert all(conformal_killing_residual(V, valence).is_zero() for V in basis)


def test_solver_saturates():
    assert len(solve_conformal_killing(3, 1, 3)) == 10
    assert len(solve_conformal_killing(3, 2, 5)) == 35


def test_solver_basis_independent():
    basis = solve_conformal_killing(3, 2, 4)
    assert rank([field_coordinates(V, 2, 4) for V in basis]) == 35


def test_solver_small_dimension_runs():
    # n = 2 is infinite dimensional; the solver just reports what it finds
    assert len(solve_conformal_killing(2, 1, 3)) > 6


params = st.builds(
    lambda s, m01, m02, m12, lam, r: CKParameters(
        s, ((0, m01, m02), (-m01, 0, m12), (-m02, -m12, 0)), lam, r),
    st.tuples(*[st.integers(-3, 3)] * 3), st.integers(-3, 3), st.integers(-3, 3), st.integers(-3, 3),
    st.integers(-3, 3), st.tuples(*[st.integers(-3, 3)] * 3))


@settings(max_examples=40)
@given(params)
def test_parametrized_fields_are_conformal_killing(p):
    assert conformal_killing_residual(ckv_from_parameters(3, p), 1).is_zero()


@settings(max_examples=40)
@given(params, params, st.integers(-4, 4))
def test_residual_is_linear(p, q, k):
    V, W = ckv_from_parameters(3, p), ckv_from_parameters(3, q)
    combo = vector_field([a + b.scale(k) for a, b in zip(comps(V), comps(W))])
    assert conformal_killing_residual(combo, 1).is_zero()


@settings(max_examples=25)
@given(params, params)
def test_product_of_fields_is_killing_tensor(p, q):
    V, W = ckv_from_parameters(3, p), ckv_from_parameters(3, q)
    assert conformal_killing_residual(symmetric_tracefree_product(V, W), 2).is_zero()
