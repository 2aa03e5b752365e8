from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from confsym.exact.jet import Jet, JetDomainError, OrderExhausted, jet_arith
from confsym.exact.linalg import ExactMatrix, exact_nullspace, rank, sparse_nullspace
from confsym.exact.monomials import count_upto, graded_monomials
from confsym.exact.poly import DimensionError, MultiPoly, coordinates, poly_arith
from confsym.exact.scalar import Q, as_q, binomial_q, fmt_q

N = 3
x1, x2, x3 = coordinates(N)


def test_scalar_coercion():
    assert as_q("2/3") == Q(2, 3)
    assert as_q(Fraction(-1, 4)) == Q(-1, 4)
    assert fmt_q(Q(6, 4)) == "3/2"
    assert fmt_q(Q(-4, 2)) == "-2"
    with pytest.raises(TypeError):
        as_q(0.5)


def test_binomial_rational():
    assert binomial_q(Q(1, 2), 2) == Q(-1, 8)
    assert binomial_q(5, 2) == 10


# poly_arith


def test_difference_of_squares():
    assert poly_arith(x1 + x2, x1 - x2, "mul") == x1 * x1 - x2 * x2


def test_add_zero_identity():
    p = x1 * x2 + x3.scale(Q(1, 7))
    assert poly_arith(p, MultiPoly.zero(N), "add") == p


def test_scale_inverse():
    assert poly_arith(x1.scale(Q(1, 3)), 3, "scale") == x1


def test_dimension_mismatch():
    with pytest.raises(DimensionError):
        x1 + MultiPoly.var(2, 0)


# poly_diff


def test_poly_diff_examples():
    assert (x1 * x1 * x2).diff(0) == (x1 * x2).scale(2)
    assert x1.diff(1).is_zero()
    assert (x1 * x1 - x2 * x2 - x3 * x3).diff(0) == x1.scale(2)


def test_monomial_counts():
    assert len(graded_monomials(3, 2)) == count_upto(3, 2) == 10


# jets


def test_jet_from_poly_origin():
    j = Jet.from_poly(x1 * x1, 3)
    assert j.coefficient((2, 0, 0)) == 1
    assert sum(1 for e in graded_monomials(3, 3) if j.coefficient(e)) == 1


def test_jet_recentering():
    j = Jet.from_poly(x1, 1, base=(1, 0, 0))
    assert j.value == 1
    assert j.coefficient((1, 0, 0)) == 1
    assert j.coefficient((0, 1, 0)) == 0


def test_constant_jet():
    assert Jet.from_poly(MultiPoly.const(N, 5), 4) == Jet.const(N, 5, 4)


def test_jet_product_and_quotient():
    a = Jet.from_poly(1 + x1, 2)
    b = Jet.from_poly(1 - x1, 2)
    assert jet_arith(a, b, "mul") == Jet.from_poly(1 - x1 * x1, 2)
    assert jet_arith(Jet.const(N, 1, 2), a, "div") == Jet.from_poly(1 - x1 + x1 * x1, 2)


def test_jet_order_bookkeeping():
    a = Jet.from_poly(1 + x2, 5)
    b = Jet.from_poly(1 + x3, 3)
    assert (a * b).order == 3


def test_pow_rational():
    a = Jet.from_poly(1 + x1, 2)
    assert a.pow_rational(Q(1, 2)) == Jet.from_poly(1 + x1.scale(Q(1, 2)) - (x1 * x1).scale(Q(1, 8)), 2)
    assert a.pow_rational(-1) == 1 / a
    assert a.pow_rational(0) == Jet.const(N, 1, 2)


def test_pow_needs_nonzero_base():
    with pytest.raises(JetDomainError):
        Jet.from_poly(x1, 3).pow_rational(Q(1, 2))


def test_jet_diff():
    d = Jet.from_poly(1 + x1 + x1 * x1, 2).diff(0)
    assert d.order == 1
    assert d == Jet.from_poly(1 + x1.scale(2), 1)
    assert Jet.from_poly(x1, 3).diff(1).is_zero()
    dd = Jet.from_poly(x1 * x1 + x2, 2).diff(0).diff(0)
    assert dd.order == 0 and dd.value == 2


def test_diff_past_order_zero():
    with pytest.raises(OrderExhausted):
        Jet.const(N, 1, 0).diff(0)


# nullspace


def test_nullspace_examples():
    assert exact_nullspace([[1, 1]]) == [(Q(-1), Q(1))]
    assert exact_nullspace([[1, 0, 0], [0, 1, 0], [0, 0, 1]]) == []
    assert exact_nullspace([[1, 2], [2, 4]]) == [(Q(-2), Q(1))]


def test_sparse_matches_dense():
    M = [[1, 2, 0, -1], [0, 0, 3, 3], [2, 4, 3, 1]]
    cols = [{i: Q(M[i][j]) for i in range(3) if M[i][j]} for j in range(4)]
    dense = exact_nullspace(M)
    sparse = [tuple(v.get(j, 0) for j in range(4)) for v in sparse_nullspace(cols)]
    assert dense == sparse


# properties

rationals = st.fractions(min_value=-20, max_value=20, max_denominator=6)


@st.composite
def polys(draw, n=2, max_deg=3):
    terms = draw(st.dictionaries(
        st.tuples(*[st.integers(0, max_deg)] * n), rationals, max_size=5))
    return MultiPoly(n, {e: as_q(c) for e, c in terms.items()})


@given(polys(), polys(), polys())
def test_ring_axioms(a, b, c):
    assert a + b == b + a
    assert a * b == b * a
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a - a == MultiPoly.zero(2)


@given(polys(), polys(), st.integers(0, 1))
def test_leibniz(a, b, i):
    assert (a * b).diff(i) == a.diff(i) * b + a * b.diff(i)


@given(polys(), polys(), st.integers(1, 5))
def test_jet_from_poly_is_multiplicative(a, b, k):
    assert Jet.from_poly(a * b, k) == Jet.from_poly(a, k) * Jet.from_poly(b, k)


@given(polys(), st.integers(1, 5), st.integers(0, 1), st.integers(0, 1))
def test_jet_diff_commutes(a, k, i, j):
    assert Jet.from_poly(a, k).diff(i) == Jet.from_poly(a.diff(i), k - 1)
    if k >= 2:
        assert Jet.from_poly(a, k).diff(i).diff(j) == Jet.from_poly(a, k).diff(j).diff(i)


@given(polys(), st.fractions(min_value=-4, max_value=4, max_denominator=4),
       st.fractions(min_value=-4, max_value=4, max_denominator=4))
@settings(max_examples=40)
def test_pow_is_additive(p, u, v):
    j = Jet.from_poly(p, 4) + (1 - Jet.from_poly(p, 4).value)
    assert j.pow_rational(as_q(u)) * j.pow_rational(as_q(v)) == j.pow_rational(as_q(u + v))


@given(st.lists(st.lists(st.integers(-3, 3), min_size=4, max_size=4), min_size=1, max_size=4))
def test_nullspace_properties(rows):
    M = ExactMatrix(rows)
    basis = exact_nullspace(M)
    for v in basis:
        assert all(sum(Q(r[j]) * v[j] for j in range(4)) == 0 for r in rows)
    assert rank(M) + len(basis) == 4
    other = exact_nullspace(M, reverse=True)
    assert len(other) == len(basis)
    # same span: appending the reversed basis does not raise the rank
    if basis:
        assert rank(ExactMatrix([list(v) for v in basis + other])) == len(basis)
