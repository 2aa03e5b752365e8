"""Flat-space symmetry operators of the Laplacian and their identities.

Every identity here is decided exactly: both sides are built as normal-ordered
``DiffOp`` values and their difference is tested with ``is_zero``.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product

from .exact.linalg import sparse_nullspace
from .exact.monomials import graded_monomials
from .exact.poly import MultiPoly
from .exact.scalar import as_q
from .fields import TensorTagError, WeightedTensorField, canonical_indices, vector_field
from .weyl import DiffOp, laplacian


def _components(V: WeightedTensorField) -> list[MultiPoly]:
    if V.rank != 1:
        raise TensorTagError("expected a vector field")
    return [V.comp((a,)) for a in range(V.n)]


def divergence(V: WeightedTensorField) -> MultiPoly:
    return sum((V.comp((a,)).diff(a) for a in range(V.n)), MultiPoly.zero(V.n))


def second_order_parts(V2: WeightedTensorField):
    """``(V^ab d_a d_b, (d_a V^ab) d_b, d_a d_b V^ab)`` on flat space."""
    if V2.rank != 2 or V2.symmetry not in ("stf", "sym"):
        raise TensorTagError("expected a symmetric valence-2 field")
    n = V2.n
    zero = MultiPoly.zero(n)
    top = {}
    for a, b in product(range(n), repeat=2):
        beta = [0] * n
        beta[a] += 1
        beta[b] += 1
        beta = tuple(beta)
        top[beta] = top.get(beta, zero) + V2.comp((a, b))
    div = [sum((V2.comp((a, b)).diff(a) for a in range(n)), zero) for b in range(n)]
    ddiv = sum((div[b].diff(b) for b in range(n)), zero)
    return DiffOp(n, top), DiffOp.vector_field(div), ddiv


def build_first_order(V: WeightedTensorField, w=None) -> DiffOp:
    """``f -> V^a d_a f - (w/n)(d_a V^a) f``; ``w`` defaults to ``1 - n/2``."""
    comps = _components(V)
    n = V.n
    w = as_q(1) - as_q(n) / 2 if w is None else as_q(w)
    return DiffOp.vector_field(comps) + DiffOp.multiplication(divergence(V).scale(-w / n))


def first_order_constant(n: int):
    """The zeroth-order coefficient ``(n-2)/(2n)`` of the first-order symmetry."""
    return as_q(n - 2) / (2 * n)


def build_second_order(V2: WeightedTensorField, coeffs=None) -> DiffOp:
    """Flat second-order symmetry built from a trace-free symmetric ``V^ab``.

    ``coeffs`` overrides the two lower-order coefficients (negative controls).
    """
    if V2.symmetry != "stf":
        raise TensorTagError("second-order symmetry needs a trace-free symmetric field")
    n = V2.n
    c1, c2 = coeffs if coeffs is not None else second_order_coefficients(n)
    top, first, ddiv = second_order_parts(V2)
    return top + first.scale(c1) + DiffOp.multiplication(ddiv.scale(c2))


def second_order_coefficients(n: int):
    return as_q(n) / (n + 2), as_q((n - 2) * n) / (4 * (n + 1) * (n + 2))


def build_delta(order: int, V: WeightedTensorField) -> DiffOp:
    """The partner operator on the target side of the Laplacian.

    Order 1: ``V^a d_a + (n+2)/(2n) div V``.  Order 2 (flat):
    ``V^ab d_a d_b + (n+4)/(n+2) (d_a V^ab) d_b + (n+4)/(4(n+1)) d_a d_b V^ab``.
    """
    n = V.n
    if order == 1:
        comps = _components(V)
        return DiffOp.vector_field(comps) + DiffOp.multiplication(
            divergence(V).scale(as_q(n + 2) / (2 * n))
        )
    if order == 2:
        top, first, ddiv = second_order_parts(V)
        return (
            top
            + first.scale(as_q(n + 4) / (n + 2))
            + DiffOp.multiplication(ddiv.scale(as_q(n + 4) / (4 * (n + 1))))
        )
    raise ValueError(f"unsupported order {order}")


@dataclass(frozen=True)
class SymmetryPair:
    """``L o D - delta o L`` as computed; ``verified`` is derived from it."""

    D: DiffOp
    delta: DiffOp
    residual: DiffOp

    @property
    def verified(self) -> bool:
        return self.residual.is_zero()


def check_intertwine(L: DiffOp, D: DiffOp, delta: DiffOp) -> SymmetryPair:
    return SymmetryPair(D, delta, L.compose(D) - delta.compose(L))


class NotFound(Exception):
    """No partner operator exists within the requested ansatz."""


def _derivative_indices(n: int, max_order: int):
    return graded_monomials(n, max_order)


def find_delta(L: DiffOp, D: DiffOp, max_order: int, max_degree: int) -> DiffOp:
    """Solve ``delta o L = L o D`` for ``delta`` by exact linear algebra.

    The unknowns are the coefficients of ``delta`` (derivatives up to
    ``max_order``, coefficient degree up to ``max_degree``).  The inhomogeneous
    side is appended as a last column; a solution exists exactly when that
    column is free in reduced-echelon form.  Raises :class:`NotFound`.
    """
    n = L.n
    unknowns = []
    columns = []
    for beta in _derivative_indices(n, max_order):
        for mono in graded_monomials(n, max_degree):
            basis_op = DiffOp(n, {beta: MultiPoly.monomial(n, mono)})
            prod_op = basis_op.compose(L)
            col = {}
            for b, c in prod_op.terms.items():
                for e, v in c.terms.items():
                    col[(b, e)] = v
            unknowns.append((beta, mono))
            columns.append(col)
    target = L.compose(D)
    rhs = {}
    for b, c in target.terms.items():
        for e, v in c.terms.items():
            rhs[(b, e)] = -v
    columns.append(rhs)
    last = len(columns) - 1
    for vec in sparse_nullspace(columns):
        if max(vec) == last:
            terms: dict = {}
            for j, v in vec.items():
                if j == last:
                    continue
                beta, mono = unknowns[j]
                terms[beta] = terms.get(beta, MultiPoly.zero(n)) + MultiPoly.monomial(n, mono, v)
            delta = DiffOp(n, terms)
            if not check_intertwine(L, D, delta).verified:
                raise ArithmeticError("solver returned a non-solution")
            return delta
    raise NotFound(f"no delta with order <= {max_order} and degree <= {max_degree}")


@dataclass(frozen=True)
class AlgebraOps:
    sym_product: WeightedTensorField
    bracket: WeightedTensorField
    inner: MultiPoly


def symmetric_tracefree_product(V: WeightedTensorField, W: WeightedTensorField) -> WeightedTensorField:
    """``(V.W)^ab = (V^a W^b + V^b W^a)/2 - (1/n) delta^ab V.W``."""
    n = V.n
    v, w = _components(V), _components(W)
    dot = sum((a * b for a, b in zip(v, w)), MultiPoly.zero(n))
    comps = {}
    for a, b in canonical_indices(n, 2, "stf"):
        c = (v[a] * w[b] + v[b] * w[a]).scale(as_q(1, ) / 2)
        if a == b:
            c = c - dot.scale(as_q(1) / n)
        comps[(a, b)] = c
    return WeightedTensorField(n, ("u", "u"), "stf", 0, comps)


def lie_bracket(V: WeightedTensorField, W: WeightedTensorField) -> WeightedTensorField:
    """``[V,W]^a = V^b d_b W^a - W^b d_b V^a``."""
    n = V.n
    v, w = _components(V), _components(W)
    zero = MultiPoly.zero(n)
    comps = []
    for a in range(n):
        c = sum((v[b] * w[a].diff(b) - w[b] * v[a].diff(b) for b in range(n)), zero)
        comps.append(c)
    return vector_field(comps)


def inner_product_flat(V: WeightedTensorField, W: WeightedTensorField) -> MultiPoly:
    """The flat pairing attached to the Killing form of the conformal algebra."""
    n = V.n
    v, w = _components(V), _components(W)
    zero = MultiPoly.zero(n)
    k = as_q(n + 2) / n
    divv, divw = divergence(V), divergence(W)
    out = sum((v[a].diff(b) * w[b].diff(a) for a in range(n) for b in range(n)), zero).scale(n + 2)
    out = out - (divv * divw).scale(k)
    out = out - sum((v[a] * divw.diff(a) for a in range(n)), zero).scale(k)
    out = out - sum((w[a] * divv.diff(a) for a in range(n)), zero).scale(k)
    dot = sum((a * b for a, b in zip(v, w)), zero)
    out = out + laplacian(n).apply(dot)
    return out


def algebra_ops(V: WeightedTensorField, W: WeightedTensorField) -> AlgebraOps:
    return AlgebraOps(symmetric_tracefree_product(V, W), lie_bracket(V, W), inner_product_flat(V, W))


def _require_ckv(V: WeightedTensorField):
    from .ckt import conformal_killing_residual

    if not conformal_killing_residual(V, 1).is_zero():
        raise ValueError("input is not a conformal Killing field")


def composition_identity_residual(V: WeightedTensorField, W: WeightedTensorField) -> DiffOp:
    """``D_V D_W - D_{V.W} - (1/2) D_[V,W] + c <V,W> - (1/n)(V.W) Laplacian``,

    with ``c = (n-2)/(4n(n+1))``; zero for conformal Killing ``V, W``.
    """
    _require_ckv(V)
    _require_ckv(W)
    n = V.n
    ops = algebra_ops(V, W)
    lhs = build_first_order(V).compose(build_first_order(W))
    dot = sum((a * b for a, b in zip(_components(V), _components(W))), MultiPoly.zero(n))
    c = as_q(n - 2) / (4 * n * (n + 1))
    return (
        lhs
        - build_second_order(ops.sym_product)
        - build_first_order(ops.bracket).scale(as_q(1) / 2)
        + DiffOp.multiplication(ops.inner.scale(c))
        - DiffOp.multiplication(dot.scale(as_q(1) / n)).compose(laplacian(n))
    )


def bracket_identity_residual(V: WeightedTensorField, W: WeightedTensorField, w=None) -> DiffOp:
    """``[D_V, D_W] - D_[V,W]`` at density weight ``w`` (default ``1 - n/2``)."""
    DV, DW = build_first_order(V, w), build_first_order(W, w)
    return DV.compose(DW) - DW.compose(DV) - build_first_order(lie_bracket(V, W), w)


def lie_derivative(V: WeightedTensorField, phi: WeightedTensorField, gamma=None) -> WeightedTensorField:
    """Lie derivative of a covariant (possibly density-weighted) tensor.

    The derivative is taken with the flat connection shifted by a symmetric
    difference tensor ``gamma[a][b][c]`` (lower ``a, b``, upper ``c``); the
    result does not depend on ``gamma``.  A weight ``w`` contributes
    ``-(w/n)(div V) phi``, so an n-form (weight ``-n``, no slots) gives
    ``V.grad h + (div V) h``.
    """
    n = V.n
    if any(v != "d" for v in phi.valence):
        raise TensorTagError("lie_derivative expects a covariant tensor")
    zero = MultiPoly.zero(n)
    if gamma is not None:
        for a, b, c in product(range(n), repeat=3):
            if gamma[a][b][c] != gamma[b][a][c]:
                raise ValueError("connection difference must be symmetric in its lower indices")
    else:
        gamma = [[[zero] * n for _ in range(n)] for _ in range(n)]
    v = _components(V)
    k = phi.rank
    w = phi.weight

    def grad_v(b, a):  # nabla_b V^a
        return v[a].diff(b) + sum((gamma[b][c][a] * v[c] for c in range(n)), zero)

    div = sum((grad_v(a, a) for a in range(n)), zero)

    def grad_phi(a, idx):
        out = phi.comp(idx).diff(a)
        for s in range(k):
            for d in range(n):
                g = gamma[a][idx[s]][d]
                if g:
                    out = out - g * phi.comp(idx[:s] + (d,) + idx[s + 1:])
        if w:
            trace = sum((gamma[a][d][d] for d in range(n)), zero)
            out = out + (trace * phi.comp(idx)).scale(w / n)
        return out

    comps = {}
    for idx in product(range(n), repeat=k):
        out = sum((v[a] * grad_phi(a, idx) for a in range(n)), zero)
        for s in range(k):
            for a in range(n):
                out = out + grad_v(idx[s], a) * phi.comp(idx[:s] + (a,) + idx[s + 1:])
        if w:
            out = out - (div * phi.comp(idx)).scale(w / n)
        comps[idx] = out
    return WeightedTensorField(n, phi.valence, "none", w, comps)


def eleven_generators_r3() -> list[tuple[str, DiffOp]]:
    """The first-order symmetries of the Laplacian on R^3 written out by hand."""
    n = 3
    x, y, z = (MultiPoly.var(n, i) for i in range(n))
    dx, dy, dz = (DiffOp.partial(n, i) for i in range(n))
    one = MultiPoly.const(n, 1)
    mul = DiffOp.multiplication
    vf = DiffOp.vector_field
    return [
        ("identity", mul(one)),
        ("d/dx", dx),
        ("d/dy", dy),
        ("d/dz", dz),
        ("dilation", vf([x, y, z])),
        ("rotation xy", vf([-y, x, MultiPoly.zero(n)])),
        ("inversion x", vf([x * x - y * y - z * z, (x * y).scale(2), (x * z).scale(2)]) + mul(x)),
        ("rotation yz", vf([MultiPoly.zero(n), -z, y])),
        ("inversion y", vf([(y * x).scale(2), y * y - z * z - x * x, (y * z).scale(2)]) + mul(y)),
        ("rotation zx", vf([z, MultiPoly.zero(n), -x])),
        ("inversion z", vf([(z * x).scale(2), (z * y).scale(2), z * z - x * x - y * y]) + mul(z)),
    ]
