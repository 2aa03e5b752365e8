"""Randomized conformal-invariance checks for curved operators and pairings.

A check compares ``P_hat(T_hat...)`` with ``Omega^lam * P(T...)`` as jets.
Because jets need ``Omega(p) = 1``, a second check with a constant factor
``c = 2^L`` is run on cached geometry, where ``L`` clears every weight
denominator so that all powers of ``c`` stay rational.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from math import lcm
from typing import Callable

from ..exact.jet import Jet
from ..exact.scalar import Q, as_q
from ..fields import WeightedTensorField
from .geometry import GeometryCache, MetricJet, random_poly
from .pairings import tracefree_part
from .rescaling import ConformalFactor, rescale, transform_field

VERIFIED = "verified-to-order"
NONZERO = "nonzero-residual"


@dataclass
class Background:
    """A metric, a conformal factor and both geometry caches."""

    g: MetricJet
    omega: ConformalFactor
    cache: GeometryCache
    hat: GeometryCache
    seed: int | None = None

    @classmethod
    def build(cls, g: MetricJet, omega: ConformalFactor, seed=None) -> Background:
        return cls(g, omega, GeometryCache(g), GeometryCache(rescale(g, omega)), seed)

    @property
    def n(self) -> int:
        return self.g.n

    @property
    def order(self) -> int:
        return self.g.order


def random_jet(n: int, order: int, rng: random.Random, degree: int = 3, value=None) -> Jet:
    p = random_poly(n, degree, rng, constant=value is None)
    j = Jet.from_poly(p, order)
    return j if value is None else j + value


def random_factor(n: int, order: int, rng: random.Random, degree: int = 3) -> ConformalFactor:
    return ConformalFactor(random_jet(n, order, rng, degree, value=1))


def random_background(n: int, order: int, seed: int, curved: bool = True) -> Background:
    rng = random.Random(seed)
    g = MetricJet.random(n, order, rng) if curved else MetricJet.flat(n, order)
    return Background.build(g, random_factor(n, order, rng), seed)


def random_density(bg: Background, rng: random.Random, weight, normalized: bool = False) -> WeightedTensorField:
    f = random_jet(bg.n, bg.order, rng, value=1 if normalized else None)
    return WeightedTensorField(bg.n, (), "none", weight, {(): f})


def random_vector(bg: Background, rng: random.Random, weight, valence: str = "u") -> WeightedTensorField:
    comps = {(a,): random_jet(bg.n, bg.order, rng) for a in range(bg.n)}
    return WeightedTensorField(bg.n, (valence,), "none", weight, comps)


def random_stf(bg: Background, rng: random.Random, weight) -> WeightedTensorField:
    """Random symmetric contravariant 2-tensor, trace-free for ``bg.g``."""
    n = bg.n
    raw = {(a, b): random_jet(n, bg.order, rng) for a in range(n) for b in range(a, n)}
    return WeightedTensorField(n, ("u", "u"), "stf", weight, tracefree_part(bg.cache, raw))


@dataclass
class InvarianceReport:
    pairing: str
    weights: tuple
    output_weight: object
    residual: dict = field(repr=False)
    valid_order: int
    verdict: str
    seed: int | None
    constant_scale_ok: bool | None = None

    @property
    def verified(self) -> bool:
        return self.verdict == VERIFIED and self.constant_scale_ok is not False

    def lowest_nonzero_degree(self):
        degs = [j.lowest_nonzero_degree() for j in self.residual.values()]
        degs = [d for d in degs if d is not None]
        return min(degs) if degs else None


def _residual(out_hat: WeightedTensorField, out: WeightedTensorField, factor) -> dict:
    return {
        idx: out_hat.comp(idx) - out.comp(idx) * factor
        for idx in sorted(out.components)
    }


def _weight_denominator(weights) -> int:
    return lcm(*(as_q(w).denominator for w in weights)) if weights else 1


def constant_rescaling_ok(pairing: Callable, cache: GeometryCache, inputs, output_weight,
                          out: WeightedTensorField | None = None) -> bool:
    """Exact check of the weight bookkeeping under ``g -> c^2 g`` with constant ``c``."""
    lam = as_q(output_weight)
    L = _weight_denominator([T.weight for T in inputs] + [lam])
    c = Q(2) ** L
    scaled = cache.constant_rescaled(c)

    def cpow(w):
        return Q(2) ** int(as_q(w) * L)

    hat_inputs = [T.map(lambda comp, k=cpow(T.weight): comp * k) for T in inputs]
    out = out if out is not None else pairing(cache, *inputs)
    out_hat = pairing(scaled, *hat_inputs)
    return all(j.is_zero() for j in _residual(out_hat, out, cpow(lam)).values())


def invariance_check(pairing: Callable, bg: Background, inputs, output_weight, name: str = "",
                     constant_check: bool = True) -> InvarianceReport:
    """``pairing(cache, *inputs)`` evaluated on both metrics and compared."""
    lam = as_q(output_weight)
    out = pairing(bg.cache, *inputs)
    hat_inputs = [transform_field(T, bg.omega) for T in inputs]
    out_hat = pairing(bg.hat, *hat_inputs)
    res = _residual(out_hat, out, bg.omega.power(lam))
    order = min(j.order for j in res.values())
    verdict = VERIFIED if all(j.is_zero() for j in res.values()) else NONZERO
    const = constant_rescaling_ok(pairing, bg.cache, inputs, lam, out) if constant_check else None
    return InvarianceReport(
        name or getattr(pairing, "__name__", "pairing"),
        tuple(T.weight for T in inputs),
        lam,
        res,
        order,
        verdict,
        bg.seed,
        const,
    )


def infer_output_weight(pairing: Callable, bg: Background, inputs, candidates) -> list:
    """Candidate output weights whose invariance residual vanishes."""
    out = pairing(bg.cache, *inputs)
    out_hat = pairing(bg.hat, *[transform_field(T, bg.omega) for T in inputs])
    found = []
    for lam in candidates:
        res = _residual(out_hat, out, bg.omega.power(lam))
        if all(j.is_zero() for j in res.values()):
            found.append(as_q(lam))
    return found


def half_integer_grid(lo: int, hi: int) -> list:
    return [Q(k, 2) for k in range(2 * lo, 2 * hi + 1)]
