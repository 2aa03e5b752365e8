from __future__ import annotations

import random
from itertools import product

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from confsym.ckt import solve_conformal_killing
from confsym.exact.poly import MultiPoly, coordinates
from confsym.exact.scalar import Q
from confsym.fields import TensorTagError, WeightedTensorField, symmetric_tensor, vector_field
from confsym.symmetry import (
    NotFound,
    algebra_ops,
    bracket_identity_residual,
    build_delta,
    build_first_order,
    build_second_order,
    check_intertwine,
    composition_identity_residual,
    eleven_generators_r3,
    find_delta,
    lie_derivative,
    symmetric_tracefree_product,
)
from confsym.weyl import DiffOp, euler_operator, laplacian

N = 3
x1, x2, x3 = coordinates(N)
ZERO = MultiPoly.zero(N)
ONE = MultiPoly.const(N, 1)
LAP = laplacian(N)
mul = DiffOp.multiplication

inversion = vector_field([x1 * x1 - x2 * x2 - x3 * x3, (x1 * x2).scale(2), (x1 * x3).scale(2)])
translation = vector_field([-ONE, ZERO, ZERO])
euler = vector_field([x1, x2, x3])
rotation = vector_field([-x2, x1, ZERO])


def test_first_order_examples():
    assert build_first_order(inversion, Q(-1, 2)) == DiffOp.vector_field(
        [inversion.comp((a,)) for a in range(3)]) + mul(x1)
    assert build_first_order(translation) == -DiffOp.partial(N, 0)
    assert build_first_order(euler, Q(-1, 2)) == euler_operator(N) + mul(MultiPoly.const(N, Q(1, 2)))


def test_delta_examples():
    assert build_delta(1, translation) == -DiffOp.partial(N, 0)
    assert build_delta(1, euler) == euler_operator(N) + mul(MultiPoly.const(N, Q(5, 2)))
    entries = {(a, b): ZERO for a in range(N) for b in range(a, N)}
    entries[(0, 1)] = ONE
    const = symmetric_tensor(entries, N)
    top = DiffOp(N, {(1, 1, 0): MultiPoly.const(N, 2)})
    assert build_delta(2, const) == top
    assert build_second_order(const) == top


def test_second_order_of_translations():
    e1 = vector_field([ONE, ZERO, ZERO])
    e2 = vector_field([ZERO, ONE, ZERO])
    D = build_second_order(symmetric_tracefree_product(e1, e2))
    assert all(c.degree <= 0 for c in D.terms.values())
    assert D.order == 2


def test_second_order_generic_has_all_terms():
    V2 = solve_conformal_killing(3, 2, 4)[-1]
    D = build_second_order(V2)
    assert {sum(b) for b in D.terms} == {0, 1, 2}


def test_second_order_needs_tracefree():
    comps = {(a, b): ZERO for a in range(N) for b in range(a, N)}
    comps[(0, 0)] = ONE
    V = WeightedTensorField(N, ("u", "u"), "sym", 0, comps)
    with pytest.raises(TensorTagError):
        build_second_order(V)


def test_intertwine_examples():
    d1 = DiffOp.partial(N, 0)
    assert check_intertwine(LAP, d1, d1).verified
    bad = check_intertwine(LAP, mul(x1), mul(x1))
    assert bad.residual == d1.scale(2)
    assert not bad.verified


def test_eleven_generators():
    gens = eleven_generators_r3()
    assert len(gens) == 11
    for _, D in gens:
        delta = find_delta(LAP, D, D.order, 2)
        assert check_intertwine(LAP, D, delta).verified


def test_find_delta_rotation():
    rot = mul(x1).compose(DiffOp.partial(N, 1)) - mul(x2).compose(DiffOp.partial(N, 0))
    assert find_delta(LAP, rot, 1, 1) == rot


def test_find_delta_inversion():
    D = build_first_order(inversion)
    div = x1.scale(6)
    expected = DiffOp.vector_field([inversion.comp((a,)) for a in range(3)]) + mul(div.scale(Q(5, 6)))
    assert find_delta(LAP, D, 1, 2) == expected
    assert find_delta(LAP, D, 1, 2) == build_delta(1, inversion)


def test_find_delta_not_found():
    with pytest.raises(NotFound):
        find_delta(LAP, mul(x1), 2, 3)


def test_theorem_one_flat_n3():
    for V in solve_conformal_killing(3, 1, 2):
        assert check_intertwine(LAP, build_first_order(V), build_delta(1, V)).verified


def test_second_order_sample_intertwines():
    basis = solve_conformal_killing(3, 2, 4)
    for V2 in random.Random(1).sample(basis, 5):
        D = build_second_order(V2)
        assert check_intertwine(LAP, D, build_delta(2, V2)).verified
        assert find_delta(LAP, D, 2, 4) == build_delta(2, V2)


def test_algebra_ops_translation():
    e1 = vector_field([ONE, ZERO, ZERO])
    ops = algebra_ops(e1, e1)
    assert ops.sym_product.comp((0, 0)) == MultiPoly.const(N, Q(2, 3))
    assert ops.sym_product.comp((1, 1)) == MultiPoly.const(N, Q(-1, 3))
    assert ops.sym_product.comp((0, 1)).is_zero()
    assert ops.bracket.is_zero()
    assert ops.inner.is_zero()


def test_algebra_ops_rotation_inner():
    assert algebra_ops(rotation, rotation).inner == MultiPoly.const(N, -6)


def test_bracket_euler_translation():
    e1 = vector_field([ONE, ZERO, ZERO])
    br = algebra_ops(euler, e1).bracket
    assert [br.comp((a,)) for a in range(3)] == [-ONE, ZERO, ZERO]


def test_composition_examples():
    assert composition_identity_residual(translation, translation).is_zero()
    assert composition_identity_residual(inversion, rotation).is_zero()
    x = coordinates(4)
    z4 = MultiPoly.zero(4)
    rot4 = vector_field([-x[1], x[0], z4, z4])
    assert composition_identity_residual(rot4, vector_field(x)).is_zero()


def test_composition_rejects_non_killing():
    with pytest.raises(ValueError):
        composition_identity_residual(vector_field([x1 * x2, ZERO, ZERO]), euler)


def test_bracket_examples():
    e1 = vector_field([ONE, ZERO, ZERO])
    e2 = vector_field([ZERO, ONE, ZERO])
    assert bracket_identity_residual(e1, e2).is_zero()
    assert bracket_identity_residual(euler, e1).is_zero()
    assert bracket_identity_residual(inversion, rotation).is_zero()


def delta_form(n):
    one, zero = MultiPoly.const(n, 1), MultiPoly.zero(n)
    comps = {(a, b): one if a == b else zero for a in range(n) for b in range(n)}
    return WeightedTensorField(n, ("d", "d"), "none", 0, comps)


def test_lie_derivative_examples():
    out = lie_derivative(euler, delta_form(3))
    assert out == delta_form(3).scale(2)
    assert lie_derivative(rotation, delta_form(3)).is_zero()


def test_lie_derivative_nform():
    h = MultiPoly(N, {(1, 2, 0): 3, (0, 0, 1): 1})
    out = lie_derivative(inversion, WeightedTensorField(N, (), "none", -N, {(): h}))
    grad = sum((inversion.comp((a,)) * h.diff(a) for a in range(N)), ZERO)
    div = sum((inversion.comp((a,)).diff(a) for a in range(N)), ZERO)
    assert out.comp(()) == grad + div * h


def test_lie_derivative_rejects_asymmetric_gamma():
    gamma = [[[ZERO] * N for _ in range(N)] for _ in range(N)]
    gamma[0][1][2] = x1
    with pytest.raises(ValueError):
        lie_derivative(euler, delta_form(3), gamma)


def test_lie_derivative_rejects_contravariant():
    with pytest.raises(TensorTagError):
        lie_derivative(euler, vector_field([x1, x2, x3]))


# properties

coeff = st.integers(-2, 2)


@st.composite
def small_polys(draw, n=2):
    terms = draw(st.dictionaries(st.tuples(st.integers(0, 2), st.integers(0, 2)), coeff, max_size=3))
    return MultiPoly(n, terms)


@st.composite
def gammas(draw, n=2):
    g = [[[None] * n for _ in range(n)] for _ in range(n)]
    for a in range(n):
        for b in range(a, n):
            for c in range(n):
                g[a][b][c] = g[b][a][c] = draw(small_polys(n))
    return g


@st.composite
def covariant(draw, n=2):
    k = draw(st.integers(0, 3))
    comps = {idx: draw(small_polys(n)) for idx in product(range(n), repeat=k)}
    w = draw(st.sampled_from([0, Q(1, 2), -2, 3]))
    return WeightedTensorField(n, ("d",) * k, "none", w, comps)


@settings(max_examples=40, deadline=None)
@given(st.tuples(small_polys(), small_polys()), covariant(), gammas())
def test_lie_derivative_independent_of_connection(v, phi, gamma):
    V = vector_field(list(v))
    assert lie_derivative(V, phi, gamma) == lie_derivative(V, phi)


basis3 = solve_conformal_killing(3, 1, 2)


@settings(max_examples=30, deadline=None)
@given(st.sampled_from(basis3), st.sampled_from(basis3))
def test_inner_product_symmetric(V, W):
    assert algebra_ops(V, W).inner == algebra_ops(W, V).inner


@settings(max_examples=20, deadline=None)
@given(st.lists(st.integers(-2, 2), min_size=10, max_size=10), st.sampled_from(basis3))
def test_bracket_identity_on_combinations(cs, W):
    comps = [sum((V.comp((a,)).scale(c) for V, c in zip(basis3, cs)), ZERO) for a in range(3)]
    assert bracket_identity_residual(vector_field(comps), W).is_zero()
