"""Conformal Killing fields and valence-2 conformal Killing tensors on flat R^n.

Solutions are found by a bounded-degree polynomial ansatz: every unknown
coefficient becomes a column of the linear system obtained from the
residual of the defining equation, and the exact kernel of that system is
the solution space.  Valence-2 fields are parametrized by their
``n(n+1)/2 - 1`` independent entries; the last diagonal entry is minus the
sum of the others.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations_with_replacement

from .exact.linalg import sparse_nullspace
from .exact.monomials import graded_monomials, monomials_of_degree
from .exact.poly import MultiPoly
from .exact.scalar import as_q
from .fields import TensorTagError, WeightedTensorField, vector_field


@dataclass(frozen=True)
class CKParameters:
    """Translation ``s``, rotation ``m`` (skew), dilation ``lam``, special conformal ``r``."""

    s: tuple
    m: tuple
    lam: object
    r: tuple

    def __post_init__(self):
        n = len(self.s)
        object.__setattr__(self, "s", tuple(as_q(v) for v in self.s))
        object.__setattr__(self, "r", tuple(as_q(v) for v in self.r))
        object.__setattr__(self, "m", tuple(tuple(as_q(v) for v in row) for row in self.m))
        object.__setattr__(self, "lam", as_q(self.lam))
        if len(self.r) != n or len(self.m) != n or any(len(row) != n for row in self.m):
            raise ValueError("parameter shapes disagree")
        for a in range(n):
            for b in range(n):
                if self.m[a][b] != -self.m[b][a]:
                    raise ValueError("rotation parameter m must be skew-symmetric")

    @classmethod
    def zero(cls, n: int, **kw) -> CKParameters:
        args = dict(s=(0,) * n, m=((0,) * n,) * n, lam=0, r=(0,) * n)
        args.update(kw)
        return cls(**args)

    @property
    def n(self) -> int:
        return len(self.s)


def ckv_from_parameters(n: int, params: CKParameters) -> WeightedTensorField:
    """``V^a = -s^a - m^a_b x^b + lam x^a + (r.x) x^a - (1/2)|x|^2 r^a``."""
    if params.n != n:
        raise ValueError("parameter dimension disagrees with n")
    xs = [MultiPoly.var(n, i) for i in range(n)]
    r_dot_x = sum((x.scale(r) for x, r in zip(xs, params.r)), MultiPoly.zero(n))
    x_sq = sum((x * x for x in xs), MultiPoly.zero(n))
    comps = []
    for a in range(n):
        v = MultiPoly.const(n, -params.s[a])
        for b in range(n):
            v = v - xs[b].scale(params.m[a][b])
        v = v + xs[a].scale(params.lam) + r_dot_x * xs[a] - x_sq.scale(params.r[a] / 2)
        comps.append(v)
    return vector_field(comps)


def _divergence_v2(V: WeightedTensorField, c: int) -> MultiPoly:
    return sum((V.comp((c, d)).diff(d) for d in range(V.n)), MultiPoly.zero(V.n))


def conformal_killing_residual(V: WeightedTensorField, valence: int) -> WeightedTensorField:
    """Left minus right side of the conformal Killing equation of the given valence.

    Indices are Euclidean, so the position (up/down) of ``V``'s slots is
    immaterial.  The result is a symmetric field that vanishes exactly when
    ``V`` is a conformal Killing field (valence 1) or tensor (valence 2).
    """
    n = V.n
    if valence == 1:
        if V.rank != 1:
            raise TensorTagError("valence-1 residual needs a vector field")
        div = sum((V.comp((c,)).diff(c) for c in range(n)), MultiPoly.zero(n))
        comps = {}
        for a, b in combinations_with_replacement(range(n), 2):
            r = V.comp((b,)).diff(a) + V.comp((a,)).diff(b)
            if a == b:
                r = r - div.scale(as_q(2) / n)
            comps[(a, b)] = r
        return WeightedTensorField(n, ("d", "d"), "sym", 0, comps)
    if valence == 2:
        if V.rank != 2 or V.symmetry != "stf":
            raise TensorTagError("valence-2 residual needs a symmetric trace-free field")
        divs = [_divergence_v2(V, c) for c in range(n)]
        k = as_q(2) / (n + 2)
        comps = {}
        for a, b, c in combinations_with_replacement(range(n), 3):
            r = V.comp((b, c)).diff(a) + V.comp((c, a)).diff(b) + V.comp((a, b)).diff(c)
            trace = MultiPoly.zero(n)
            if a == b:
                trace = trace + divs[c]
            if b == c:
                trace = trace + divs[a]
            if c == a:
                trace = trace + divs[b]
            comps[(a, b, c)] = r - trace.scale(k)
        return WeightedTensorField(n, ("d", "d", "d"), "sym", 0, comps)
    raise TensorTagError(f"unsupported valence {valence}")


def expected_dimension(n: int, valence: int) -> int:
    """Dimension of the conformal Killing space on R^n (n >= 3)."""
    if n < 3:
        raise ValueError("dimension formulas apply for n >= 3")
    if valence == 1:
        return (n + 1) * (n + 2) // 2
    if valence == 2:
        return (n - 1) * (n + 2) * (n + 3) * (n + 4) // 12
    raise ValueError(f"unsupported valence {valence}")


def _unknown_slots(n: int, valence: int):
    if valence == 1:
        return [(a,) for a in range(n)]
    return [t for t in combinations_with_replacement(range(n), 2) if t != (n - 1, n - 1)]


def _field_from_slots(n: int, valence: int, slot_polys: dict) -> WeightedTensorField:
    zero = MultiPoly.zero(n)
    if valence == 1:
        return vector_field([slot_polys.get((a,), zero) for a in range(n)])
    comps = {t: slot_polys.get(t, zero) for t in combinations_with_replacement(range(n), 2)}
    last = (n - 1, n - 1)
    comps[last] = -sum((comps[(i, i)] for i in range(n - 1)), zero)
    return WeightedTensorField(n, ("u", "u"), "stf", 0, comps)


def _residual_columns(n: int, valence: int, degree: int):
    """One sparse column per unknown (monomial of exactly ``degree``, slot)."""
    unknowns = []
    columns = []
    for mono in monomials_of_degree(n, degree):
        for slot in _unknown_slots(n, valence):
            p = MultiPoly.monomial(n, mono)
            field = _field_from_slots(n, valence, {slot: p})
            res = conformal_killing_residual(field, valence)
            col = {}
            for idx, poly in res.components.items():
                for e, v in poly.terms.items():
                    col[(idx, e)] = v
            unknowns.append((mono, slot))
            columns.append(col)
    return unknowns, columns


def solve_conformal_killing(n: int, valence: int, max_degree: int) -> list[WeightedTensorField]:
    """Exact basis of polynomial solutions of degree <= ``max_degree``.

    Unknowns are ordered by monomial (graded order) then slot; the basis is
    the reduced-echelon kernel basis in that column order.  The equation
    has constant coefficients and lowers degree by one, so each polynomial
    degree is an independent block.
    """
    if valence not in (1, 2):
        raise ValueError(f"unsupported valence {valence}")
    basis = []
    for d in range(max_degree + 1):
        unknowns, columns = _residual_columns(n, valence, d)
        for vec in sparse_nullspace(columns):
            slot_polys: dict = {}
            for j, v in vec.items():
                mono, slot = unknowns[j]
                slot_polys[slot] = slot_polys.get(slot, MultiPoly.zero(n)) + MultiPoly.monomial(n, mono, v)
            basis.append(_field_from_slots(n, valence, slot_polys))
    return basis


def field_coordinates(field: WeightedTensorField, valence: int, max_degree: int) -> list:
    """Coefficient vector of a field in the solver's unknown ordering."""
    out = []
    for mono in graded_monomials(field.n, max_degree):
        for slot in _unknown_slots(field.n, valence):
            out.append(field.comp(slot).coeff(mono))
    return out


__all__ = [
    "CKParameters",
    "ckv_from_parameters",
    "conformal_killing_residual",
    "expected_dimension",
    "field_coordinates",
    "solve_conformal_killing",
]
