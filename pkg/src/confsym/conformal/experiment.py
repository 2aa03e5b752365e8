"""Does the curved second-order operator intertwine the Yamabe operator?

On ``g_hat = Omega^2 * flat`` a flat conformal Killing tensor is carried over
with components ``Omega^u V^ab`` for a chosen weight ``u`` and the residual
``Y(D_V f) - delta_V(Y f)`` is computed as a jet.  Nothing is asserted about
curved outcomes; reports are tagged experimental.  On the flat background the
residual must vanish, and it is compared with the exact flat operator.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from ..exact.jet import Jet
from ..exact.poly import MultiPoly
from ..exact.scalar import Q, as_q
from ..fields import WeightedTensorField
from .geometry import GeometryCache, MetricJet
from .invariance import random_factor, random_jet
from .pairings import curved_delta, curved_second_symmetry, yamabe_apply


@dataclass
class ExperimentReport:
    label: str
    weight: object
    seed: int | None
    flat: bool
    residual: Jet = field(repr=False)
    status: str = "experimental"

    @property
    def valid_order(self) -> int:
        return self.residual.order

    @property
    def vanishes(self) -> bool:
        return self.residual.is_zero()

    @property
    def lowest_nonzero_degree(self):
        return self.residual.lowest_nonzero_degree()


def transport_tensor(V2: WeightedTensorField, omega: Jet, order: int, u) -> WeightedTensorField:
    """Jet components ``Omega^u V^ab`` of a polynomial symmetric tensor."""
    u = as_q(u)
    factor = omega.pow_rational(u) if u else omega.like(1)
    comps = {k: Jet.from_poly(c, order) * factor for k, c in V2.components.items()}
    return WeightedTensorField(V2.n, ("u", "u"), "stf", u, comps)


def yamabe_ckt_residual(omega: Jet, V2: WeightedTensorField, f: Jet, u=0) -> Jet:
    """``Y(D_V f) - delta_V(Y f)`` on the metric ``omega^2 * flat``."""
    n = V2.n
    cache = GeometryCache(MetricJet.conformally_flat(omega))
    order = omega.order
    V = transport_tensor(V2, omega, order, u)
    fd = WeightedTensorField(n, (), "none", Q(2 - n, 2), {(): f})
    Df = curved_second_symmetry(cache, V, fd)
    lhs = yamabe_apply(cache, Df, check_weight=False).comp(())
    rhs = curved_delta(cache, V, yamabe_apply(cache, fd)).comp(())
    return lhs - rhs


def yamabe_ckt_experiment(n: int, tensors: list[tuple[str, WeightedTensorField]], seed: int = 0,
                          order: int = 7, weights=(0,), flat: bool = False) -> list[ExperimentReport]:
    """Run the residual for each labelled tensor and weight on one random background."""
    rng = random.Random(seed)
    if flat:
        omega = Jet.const(n, 1, order)
    else:
        omega = random_factor(n, order, rng).omega
    f = random_jet(n, order, rng)
    out = []
    for label, V2 in tensors:
        for u in weights:
            res = yamabe_ckt_residual(omega, V2, f, u)
            out.append(ExperimentReport(label, as_q(u), seed, flat, res))
    return out


def flat_cross_check(V2: WeightedTensorField, f: MultiPoly, order: int = 6) -> bool:
    """The curved operator on the flat metric agrees with the Weyl-algebra operator."""
    from ..symmetry import build_second_order

    n = V2.n
    omega = Jet.const(n, 1, order)
    cache = GeometryCache(MetricJet.conformally_flat(omega))
    V = transport_tensor(V2, omega, order, 0)
    fd = WeightedTensorField(n, (), "none", Q(2 - n, 2), {(): Jet.from_poly(f, order)})
    jet = curved_second_symmetry(cache, V, fd).comp(())
    exact = Jet.from_poly(build_second_order(V2).apply(f), jet.order)
    return jet == exact
