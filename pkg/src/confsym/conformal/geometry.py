"""Levi-Civita geometry of a metric given by jets at a point.

Curvature convention: ``R_abcd`` is the fully lowered tensor with
``R^a_bcd = d_c Gamma^a_db - d_d Gamma^a_cb + Gamma^a_ce Gamma^e_db
- Gamma^a_de Gamma^e_cb``, Ricci ``R_bd = g^ac R_abcd`` and scalar
``R = g^ac g^bd R_abcd``.  The round sphere has positive scalar curvature
and ``R_abcd = g_ac g_bd - g_ad g_bc``.
"""

from __future__ import annotations

import random
from functools import cached_property
from itertools import combinations_with_replacement

from ..exact.jet import Jet, add_product
from ..exact.monomials import graded_monomials
from ..exact.poly import MultiPoly
from ..exact.scalar import ONE, ZERO, Q, as_q


class SingularMetric(ValueError):
    """The metric is not invertible at the base point."""


def _rational_inverse(m: list[list]) -> list[list]:
    """Gauss-Jordan inverse of a small rational matrix."""
    n = len(m)
    aug = [[as_q(v) for v in row] + [ONE if i == j else ZERO for j in range(n)] for i, row in enumerate(m)]
    for col in range(n):
        piv = next((r for r in range(col, n) if aug[r][col]), None)
        if piv is None:
            raise SingularMetric("metric is singular at the base point")
        aug[col], aug[piv] = aug[piv], aug[col]
        p = aug[col][col]
        aug[col] = [v / p for v in aug[col]]
        for r in range(n):
            if r != col and aug[r][col]:
                k = aug[r][col]
                aug[r] = [a - k * b for a, b in zip(aug[r], aug[col])]
    return [row[n:] for row in aug]


class MetricJet:
    """Symmetric matrix of jets ``g_ab`` at a base point."""

    def __init__(self, components: list[list[Jet]]):
        n = len(components)
        if any(len(row) != n for row in components):
            raise ValueError("metric must be square")
        for a in range(n):
            for b in range(a + 1, n):
                if components[a][b] != components[b][a]:
                    raise ValueError("metric must be symmetric")
        self.n = n
        self.g = components
        self.order = min(c.order for row in components for c in row)
        self.base = components[0][0].base

    @classmethod
    def from_polys(cls, polys, order: int, base=None) -> MetricJet:
        n = len(polys)
        return cls([[Jet.from_poly(polys[a][b], order, base) for b in range(n)] for a in range(n)])

    @classmethod
    def flat(cls, n: int, order: int, base=None) -> MetricJet:
        return cls([[Jet.const(n, 1 if a == b else 0, order, base) for b in range(n)] for a in range(n)])

    @classmethod
    def conformally_flat(cls, omega: Jet) -> MetricJet:
        """``Omega^2 * delta``."""
        sq = omega * omega
        n = omega.n
        zero = omega.like(0).truncate(sq.order)
        return cls([[sq if a == b else zero for b in range(n)] for a in range(n)])

    @classmethod
    def random(cls, n: int, order: int, rng: random.Random, degree: int = 3) -> MetricJet:
        """``delta_ab`` plus random polynomial perturbations vanishing at the origin."""
        polys = [[None] * n for _ in range(n)]
        for a, b in combinations_with_replacement(range(n), 2):
            p = random_poly(n, degree, rng, constant=False)
            if a == b:
                p = p + 1
            polys[a][b] = polys[b][a] = p
        return cls.from_polys(polys, order)

    def __getitem__(self, ab):
        a, b = ab
        return self.g[a][b]

    @cached_property
    def inverse(self) -> list[list[Jet]]:
        """``g^ab`` by a Neumann series around the value at the base point."""
        n = self.n
        g0 = [[self.g[a][b].value for b in range(n)] for a in range(n)]
        g0inv = _rational_inverse(g0)
        h = [[self.g[a][b] - g0[a][b] for b in range(n)] for a in range(n)]
        # A = -g0^{-1} h, nilpotent modulo the truncation
        A = [[sum((h[c][b].scale(-g0inv[a][c]) for c in range(n) if g0inv[a][c]),
                  self.g[0][0].like(0)) for b in range(n)] for a in range(n)]
        total = [[self.g[0][0].like(1 if a == b else 0) for b in range(n)] for a in range(n)]
        power = [row[:] for row in total]
        for _ in range(self.order):
            power = _matmul(power, A)
            if all(c.is_zero() for row in power for c in row):
                break
            total = [[total[a][b] + power[a][b] for b in range(n)] for a in range(n)]
        return [
            [sum((total[a][c].scale(g0inv[c][b]) for c in range(n)), self.g[0][0].like(0)).truncate(self.order)
             for b in range(n)]
            for a in range(n)
        ]

    def scaled(self, factor) -> MetricJet:
        """Multiply by a constant or a jet."""
        return MetricJet([[c * factor for c in row] for row in self.g])


def _matmul(A, B):
    n = len(A)
    out = []
    for a in range(n):
        row = []
        for b in range(n):
            acc = None
            for c in range(n):
                if A[a][c].is_zero() or B[c][b].is_zero():
                    continue
                t = A[a][c] * B[c][b]
                acc = t if acc is None else acc + t
            row.append(acc if acc is not None else A[0][0].like(0).truncate(min(A[0][0].order, B[0][0].order)))
        out.append(row)
    return out


def random_rational(rng: random.Random):
    return Q(rng.randint(-3, 3), rng.randint(1, 3))


def random_poly(n: int, degree: int, rng: random.Random, constant: bool = True, density: float = 0.5) -> MultiPoly:
    """Random polynomial with coefficients in {-3..3}/{1..3}."""
    terms = {}
    for e in graded_monomials(n, degree):
        if not any(e) and not constant:
            continue
        if rng.random() < density:
            terms[e] = random_rational(rng)
    return MultiPoly(n, terms)


class GeometryCache:
    """Christoffel symbols and curvature of a :class:`MetricJet`, computed on demand.

    A metric of jet order K yields Christoffels of order K-1 and curvature
    of order K-2.
    """

    def __init__(self, metric: MetricJet):
        if metric.n < 3:
            raise ValueError("curvature pipeline needs n >= 3")
        self.metric = metric
        self.n = metric.n

    @property
    def g(self):
        return self.metric.g

    @property
    def ginv(self):
        return self.metric.inverse

    def zero(self, order: int | None = None) -> Jet:
        z = self.metric.g[0][0].like(0)
        return z if order is None else z.truncate(min(order, z.order))

    @cached_property
    def dg(self):
        """``dg[c][a][b] = d_c g_ab``."""
        n = self.n
        return [[[self.g[a][b].diff(c) for b in range(n)] for a in range(n)] for c in range(n)]

    @cached_property
    def christoffel(self):
        """``christoffel[c][a][b] = Gamma^c_ab``."""
        n = self.n
        dg = self.dg
        lower = [[[None] * n for _ in range(n)] for _ in range(n)]
        for d in range(n):
            for a in range(n):
                for b in range(a, n):
                    v = (dg[a][b][d] + dg[b][a][d] - dg[d][a][b]).scale(Q(1, 2))
                    lower[d][a][b] = lower[d][b][a] = v
        ginv = self.ginv
        out = [[[None] * n for _ in range(n)] for _ in range(n)]
        for c in range(n):
            for a in range(n):
                for b in range(a, n):
                    v = _dot([ginv[c][d] for d in range(n)], [lower[d][a][b] for d in range(n)])
                    out[c][a][b] = out[c][b][a] = v
        return out

    @cached_property
    def riemann_up(self):
        """``R^a_bcd`` stored for ``c < d`` via :meth:`riemann_mixed`."""
        n = self.n
        G = self.christoffel
        dG = {}

        def dgam(e, a, b, c):
            key = (e, a, b, c)
            if key not in dG:
                dG[key] = G[a][b][c].diff(e)
            return dG[key]

        out = {}
        for a in range(n):
            for b in range(n):
                for c in range(n):
                    for d in range(c + 1, n):
                        v = dgam(c, a, d, b) - dgam(d, a, c, b)
                        v = v + _dot([G[a][c][e] for e in range(n)], [G[e][d][b] for e in range(n)])
                        v = v - _dot([G[a][d][e] for e in range(n)], [G[e][c][b] for e in range(n)])
                        out[(a, b, c, d)] = v
        return out

    def riemann_mixed(self, a, b, c, d) -> Jet:
        if c == d:
            return self.zero(self.metric.order - 2)
        if c < d:
            return self.riemann_up[(a, b, c, d)]
        return -self.riemann_up[(a, b, d, c)]

    @cached_property
    def riemann(self):
        """Fully lowered ``R_abcd`` as a dict over all index tuples."""
        n = self.n
        g = self.g
        out = {}
        for a in range(n):
            for b in range(n):
                for c in range(n):
                    for d in range(c + 1, n):
                        v = _dot([g[a][e] for e in range(n)], [self.riemann_mixed(e, b, c, d) for e in range(n)])
                        out[(a, b, c, d)] = v
                        out[(a, b, d, c)] = -v
                    out[(a, b, c, c)] = self.zero(self.metric.order - 2)
        return out

    @cached_property
    def ricci(self):
        """``R_bd = d_a Gamma^a_db - d_d Gamma^a_ab + Gamma^a_ae Gamma^e_db - Gamma^a_de Gamma^e_ab``."""
        n = self.n
        G = self.christoffel
        trace = [sum((G[a][a][b] for a in range(1, n)), G[0][0][b]) for b in range(n)]
        out = [[None] * n for _ in range(n)]
        for b in range(n):
            for d in range(b, n):
                v = sum((G[a][d][b].diff(a) for a in range(1, n)), G[0][d][b].diff(0))
                v = v - trace[b].diff(d)
                v = v + _dot(trace, [G[e][d][b] for e in range(n)])
                v = v - sum(
                    (G[a][d][e] * G[e][a][b] for a in range(n) for e in range(n)),
                    self.zero(),
                )
                out[b][d] = out[d][b] = v
        return out

    @cached_property
    def scalar(self) -> Jet:
        n = self.n
        ginv = self.ginv
        return sum(
            (ginv[a][b] * self.ricci[a][b] for a in range(n) for b in range(n)),
            self.zero(),
        )

    @cached_property
    def phi(self):
        """``Phi_ab = (R_ab - R g_ab / n) / (n - 2)``."""
        n = self.n
        k = Q(1, n - 2)
        R = self.scalar
        return [
            [(self.ricci[a][b] - (R * self.g[a][b]).scale(Q(1, n))).scale(k) for b in range(n)]
            for a in range(n)
        ]

    def constant_rescaled(self, c) -> GeometryCache:
        """Cache for ``c^2 g`` with constant ``c``, derived without recomputation."""
        c = as_q(c)
        c2 = c * c
        new = GeometryCache(self.metric.scaled(c2))
        new.__dict__["dg"] = [[[x.scale(c2) for x in row] for row in blk] for blk in self.dg]
        new.metric.__dict__["inverse"] = [[x.scale(1 / c2) for x in row] for row in self.ginv]
        new.__dict__["christoffel"] = self.christoffel
        new.__dict__["ricci"] = self.ricci
        new.__dict__["scalar"] = self.scalar.scale(1 / c2)
        new.__dict__["phi"] = self.phi
        return new


def _dot(xs, ys) -> Jet:
    acc = xs[0].like(0)
    for x, y in zip(xs, ys):
        acc = add_product(acc, x, y)
    return acc


def geometry_cache(g: MetricJet) -> GeometryCache:
    return GeometryCache(g)
