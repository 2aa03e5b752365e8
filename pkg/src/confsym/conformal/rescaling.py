"""Conformal rescalings ``g -> Omega^2 g`` and the transformation laws they induce."""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from itertools import product

from ..exact.jet import Jet, JetDomainError, add_product
from ..exact.scalar import ONE, Q, as_q
from ..fields import WeightedTensorField
from .geometry import GeometryCache, MetricJet


@dataclass(frozen=True)
class ConformalFactor:
    """A conformal factor normalized to 1 at the base point."""

    omega: Jet

    def __post_init__(self):
        if self.omega.value != ONE:
            raise JetDomainError(f"conformal factor must equal 1 at the base point, got {self.omega.value}")

    @property
    def n(self) -> int:
        return self.omega.n

    @cached_property
    def upsilon(self) -> list[Jet]:
        """``Upsilon_a = d_a log Omega``."""
        inv = self.omega.inverse()
        return [self.omega.diff(a) * inv for a in range(self.n)]

    def power(self, w) -> Jet:
        w = as_q(w)
        if w == 0:
            return self.omega.like(1)
        return self.omega.pow_rational(w)


def rescale(g: MetricJet, omega: ConformalFactor) -> MetricJet:
    return g.scaled(omega.omega * omega.omega)


def transform_field(T: WeightedTensorField, omega: ConformalFactor) -> WeightedTensorField:
    """Component-wise multiplication by ``Omega^w``; index structure untouched."""
    if T.weight == 0:
        return T
    factor = omega.power(T.weight)
    return T.map(lambda c: c * factor)


def as_full(T: WeightedTensorField) -> WeightedTensorField:
    """Same field with every index tuple stored explicitly."""
    if T.symmetry == "none":
        return T
    return WeightedTensorField(T.n, T.valence, "none", T.weight, {idx: T.comp(idx) for idx in T.all_indices()})


def cov_deriv(cache: GeometryCache, T: WeightedTensorField) -> WeightedTensorField:
    """Levi-Civita derivative; the new slot comes first.

    Density weight does not enter: components are taken in the metric's own
    trivialization, where the density connection is plain differentiation.
    """
    n = cache.n
    G = cache.christoffel
    k = T.rank
    out = {}
    for a in range(n):
        for idx in product(range(n), repeat=k):
            v = T.comp(idx).diff(a)
            for s, pos in enumerate(T.valence):
                for c in range(n):
                    coef = G[idx[s]][a][c] if pos == "u" else -G[c][a][idx[s]]
                    v = add_product(v, coef, T.comp(idx[:s] + (c,) + idx[s + 1:]))
            out[(a,) + idx] = v
    return WeightedTensorField(n, ("d",) + T.valence, "none", T.weight, out)


def difference_tensor(cache: GeometryCache, omega: ConformalFactor):
    """``Gamma_ab^c = Ups_a delta_b^c + Ups_b delta_a^c - g_ab Ups^c`` as ``[a][b][c]``."""
    n = cache.n
    ups = omega.upsilon
    ginv, g = cache.ginv, cache.g
    ups_up = [sum((ginv[c][d] * ups[d] for d in range(n)), cache.zero()) for c in range(n)]
    zero = cache.zero()
    out = [[[None] * n for _ in range(n)] for _ in range(n)]
    for a, b, c in product(range(n), repeat=3):
        v = zero - g[a][b] * ups_up[c]
        if b == c:
            v = v + ups[a]
        if a == c:
            v = v + ups[b]
        out[a][b][c] = v
    return out


def connection_change_residual(T: WeightedTensorField, g: MetricJet, omega: ConformalFactor,
                               cache: GeometryCache | None = None) -> WeightedTensorField:
    """Hatted derivative of the rescaled field minus the predicted change-of-connection rule."""
    n = g.n
    cache = cache or GeometryCache(g)
    hat = GeometryCache(rescale(g, omega))
    lhs = cov_deriv(hat, transform_field(T, omega))
    base = cov_deriv(cache, T)
    gam = difference_tensor(cache, omega)
    ups = omega.upsilon
    factor = omega.power(T.weight)
    out = {}
    for a in range(n):
        for idx in product(range(n), repeat=T.rank):
            v = base.comp((a,) + idx) + (ups[a] * T.comp(idx)).scale(T.weight)
            for s, pos in enumerate(T.valence):
                for c in range(n):
                    other = T.comp(idx[:s] + (c,) + idx[s + 1:])
                    if pos == "u":
                        v = v + gam[a][c][idx[s]] * other
                    else:
                        v = v - gam[a][idx[s]][c] * other
            out[(a,) + idx] = lhs.comp((a,) + idx) - factor * v
    return WeightedTensorField(n, ("d",) + T.valence, "none", T.weight, out)


def xi_tensor(cache: GeometryCache, omega: ConformalFactor):
    """``Xi_ab = nabla_a Ups_b - Ups_a Ups_b + (1/2) |Ups|^2 g_ab``."""
    n = cache.n
    ups = omega.upsilon
    ups_field = WeightedTensorField(n, ("d",), "none", 0, {(a,): ups[a] for a in range(n)})
    d_ups = cov_deriv(cache, ups_field)
    ginv = cache.ginv
    sq = sum((ginv[a][b] * ups[a] * ups[b] for a in range(n) for b in range(n)), cache.zero())
    return [
        [d_ups.comp((a, b)) - ups[a] * ups[b] + (sq * cache.g[a][b]).scale(Q(1, 2)) for b in range(n)]
        for a in range(n)
    ]


def curvature_transform_residual(g: MetricJet, omega: ConformalFactor,
                                 cache: GeometryCache | None = None) -> dict:
    """Residuals of the Riemann and scalar-curvature rescaling laws."""
    n = g.n
    cache = cache or GeometryCache(g)
    hat = GeometryCache(rescale(g, omega))
    xi = xi_tensor(cache, omega)
    gg = cache.g
    om2 = omega.omega * omega.omega
    riem = {}
    for a, b, c, d in product(range(n), repeat=4):
        if c >= d:
            continue
        pred = (
            cache.riemann[(a, b, c, d)]
            - xi[a][c] * gg[b][d]
            + xi[b][c] * gg[a][d]
            - xi[b][d] * gg[a][c]
            + xi[a][d] * gg[b][c]
        )
        riem[(a, b, c, d)] = hat.riemann[(a, b, c, d)] - om2 * pred
    ups = omega.upsilon
    ginv = cache.ginv
    ups_up = [sum((ginv[a][b] * ups[b] for b in range(n)), cache.zero()) for a in range(n)]
    ups_field = WeightedTensorField(n, ("u",), "none", 0, {(a,): ups_up[a] for a in range(n)})
    div_ups = sum((cov_deriv(cache, ups_field).comp((a, a)) for a in range(n)), cache.zero())
    sq = sum((ups[a] * ups_up[a] for a in range(n)), cache.zero())
    pred_R = (cache.scalar - (div_ups + sq.scale(Q(n, 2) - 1)).scale(2 * (n - 1))) * om2.inverse()
    return {"riemann_residual": riem, "scalar_residual": hat.scalar - pred_R}
