from __future__ import annotations

from hypothesis import given, settings
from hypothesis import strategies as st

from confsym.exact.poly import MultiPoly, coordinates
from confsym.exact.scalar import as_q
from confsym.weyl import DiffOp, euler_operator, laplacian, op_apply, op_commutator, op_compose, op_is_zero

N = 3
x1, x2, x3 = coordinates(N)
d1, d2, d3 = (DiffOp.partial(N, i) for i in range(N))
mul = DiffOp.multiplication


def test_apply_examples():
    assert op_apply(laplacian(3), x1 * x1 + x2 * x2 + x3 * x3) == MultiPoly.const(N, 6)
    rot = mul(x1).compose(d2) - mul(x2).compose(d1)
    assert op_apply(rot, x1 * x2) == x1 * x1 - x2 * x2
    f = x1 * x3 + x2.scale(as_q("1/5"))
    assert op_apply(DiffOp.identity(N), f) == f


def test_compose_examples():
    assert op_compose(d1, mul(x1)) == mul(x1).compose(d1) + DiffOp.identity(N)
    lap = laplacian(N)
    expected = DiffOp(N, {})
    for i in range(N):
        for j in range(N):
            beta = [0] * N
            beta[i] += 2
            beta[j] += 2
            expected = expected + DiffOp(N, {tuple(beta): MultiPoly.const(N, 1)})
    assert op_compose(lap, lap) == expected
    e = mul(x1).compose(d1)
    assert op_compose(e, e) == DiffOp(N, {(2, 0, 0): x1 * x1, (1, 0, 0): x1})


def test_commutator_examples():
    assert op_commutator(d1, mul(x1)) == DiffOp.identity(N)
    assert op_commutator(laplacian(N), euler_operator(N)) == laplacian(N).scale(2)
    assert op_is_zero(op_commutator(d1, d2))
    assert op_is_zero(op_commutator(d1, mul(x1)) - DiffOp.identity(N))
    assert not op_is_zero(d1)


def test_laplacian_examples():
    assert laplacian(1) == DiffOp(1, {(2,): MultiPoly.const(1, 1)})
    assert laplacian(3) == d1.compose(d1) + d2.compose(d2) + d3.compose(d3)
    assert all(op_apply(laplacian(N), x).is_zero() for x in (x1, x2, x3))


def test_order():
    assert laplacian(N).order == 2
    assert DiffOp.zero(N).is_zero()


# properties

small = st.fractions(min_value=-3, max_value=3, max_denominator=3)


@st.composite
def polys(draw, n=2):
    terms = draw(st.dictionaries(st.tuples(st.integers(0, 2), st.integers(0, 2)), small, max_size=3))
    return MultiPoly(n, {e: as_q(c) for e, c in terms.items()})


@st.composite
def ops(draw, n=2):
    betas = draw(st.lists(st.tuples(st.integers(0, 2), st.integers(0, 2)), max_size=3, unique=True))
    return DiffOp(n, {b: draw(polys()) for b in betas})


@settings(max_examples=60)
@given(ops(), ops(), ops())
def test_associativity(a, b, c):
    assert a.compose(b).compose(c) == a.compose(b.compose(c))


@settings(max_examples=60)
@given(ops(), ops(), ops())
def test_jacobi(a, b, c):
    total = (op_commutator(a, op_commutator(b, c)) + op_commutator(b, op_commutator(c, a))
             + op_commutator(c, op_commutator(a, b)))
    assert op_is_zero(total)


@settings(max_examples=60)
@given(ops(), ops(), polys())
def test_apply_respects_composition(a, b, f):
    assert a.compose(b).apply(f) == a.apply(b.apply(f))


@given(polys(), polys())
def test_multiplications_commute(p, q):
    assert op_is_zero(op_commutator(mul(p), mul(q)))
