"""Curved invariant operators and pairings evaluated in jet arithmetic.

Every function takes a :class:`GeometryCache` and fields whose components
are jets in the metric's own trivialization.  Outputs are
:class:`WeightedTensorField` objects tagged with the output weight the
invariance theory predicts; the checker in :mod:`.invariance` tests it.

Most pairings accept ``coeffs`` overriding their numeric constants, which is
how the negative controls perturb a single coefficient.
"""

from __future__ import annotations

from itertools import product

from ..exact.jet import Jet, JetDomainError, add_product
from ..exact.scalar import Q, as_q
from ..fields import TensorTagError, WeightedTensorField
from .geometry import GeometryCache
from .rescaling import cov_deriv


# -- tag checks --------------------------------------------------------------
def _expect(T: WeightedTensorField, valence: tuple, what: str, weight=None):
    if T.valence != valence:
        raise TensorTagError(f"{what}: expected valence {valence}, got {T.valence}")
    if weight is not None and T.weight != as_q(weight):
        raise TensorTagError(f"{what}: expected weight {as_q(weight)}, got {T.weight}")


def _expect_stf(V2: WeightedTensorField, what: str):
    _expect(V2, ("u", "u"), what)
    if V2.symmetry not in ("stf", "sym"):
        raise TensorTagError(f"{what}: expected a symmetric trace-free field")


def _density(cache: GeometryCache, value: Jet, weight) -> WeightedTensorField:
    return WeightedTensorField(cache.n, (), "none", weight, {(): value})


# -- building blocks -----------------------------------------------------------
def contract(cache: GeometryCache, xs, ys) -> Jet:
    """``sum_i xs[i] * ys[i]`` with honest order bookkeeping."""
    acc = cache.zero()
    for x, y in zip(xs, ys):
        acc = add_product(acc, x, y)
    return acc


def gradient(cache: GeometryCache, f: WeightedTensorField) -> list[Jet]:
    return [f.comp(()).diff(a) for a in range(cache.n)]


def hessian(cache: GeometryCache, f: WeightedTensorField) -> dict:
    """``nabla_a nabla_b f`` as ``{(a, b): jet}``."""
    n = cache.n
    G = cache.christoffel
    df = gradient(cache, f)
    out = {}
    for a in range(n):
        for b in range(a, n):
            v = df[b].diff(a)
            for c in range(n):
                v = add_product(v, -G[c][a][b], df[c])
            out[(a, b)] = out[(b, a)] = v
    return out


def laplacian_density(cache: GeometryCache, f: WeightedTensorField) -> Jet:
    """``Delta f = g^ab nabla_a nabla_b f``."""
    n = cache.n
    H = hessian(cache, f)
    ginv = cache.ginv
    return contract(cache, [ginv[a][b] for a in range(n) for b in range(n)],
                    [H[(a, b)] for a in range(n) for b in range(n)])


def divergence(cache: GeometryCache, V: WeightedTensorField) -> Jet:
    """``nabla_a V^a`` for a vector (weight ignored: see :func:`cov_deriv`)."""
    _expect(V, ("u",), "divergence")
    DV = cov_deriv(cache, V)
    return sum((DV.comp((a, a)) for a in range(1, cache.n)), DV.comp((0, 0)))


def divergence_v2(cache: GeometryCache, V2: WeightedTensorField) -> WeightedTensorField:
    """``nabla_a V^ab`` as a vector field carrying the weight of ``V2``."""
    _expect(V2, ("u", "u"), "divergence_v2")
    n = cache.n
    DV = cov_deriv(cache, V2)
    comps = {(b,): sum((DV.comp((a, a, b)) for a in range(1, n)), DV.comp((0, 0, b))) for b in range(n)}
    return WeightedTensorField(n, ("u",), "none", V2.weight, comps)


def double_divergence(cache: GeometryCache, V2: WeightedTensorField) -> Jet:
    """``nabla_a nabla_b V^ab``."""
    return divergence(cache, divergence_v2(cache, V2))


def _pair_sym(cache: GeometryCache, T: dict, V2: WeightedTensorField) -> Jet:
    n = cache.n
    idx = list(product(range(n), repeat=2))
    return contract(cache, [T[i] for i in idx], [V2.comp(i) for i in idx])


def phi_dict(cache: GeometryCache) -> dict:
    n = cache.n
    return {(a, b): cache.phi[a][b] for a in range(n) for b in range(n)}


def ricci_dict(cache: GeometryCache) -> dict:
    n = cache.n
    return {(a, b): cache.ricci[a][b] for a in range(n) for b in range(n)}


def lower(cache: GeometryCache, V: WeightedTensorField) -> list[Jet]:
    """``V_a = g_ab V^b``."""
    n = cache.n
    return [contract(cache, cache.g[a], [V.comp((b,)) for b in range(n)]) for a in range(n)]


def tracefree_part(cache: GeometryCache, entries: dict) -> dict:
    """Remove the ``g``-trace from a symmetric contravariant ``{(a, b): jet}``."""
    n = cache.n
    tr = contract(cache, [cache.g[a][b] for a in range(n) for b in range(n)],
                  [entries[(min(a, b), max(a, b))] for a in range(n) for b in range(n)])
    ginv = cache.ginv
    k = Q(1, n)
    return {(a, b): entries[(a, b)] - (tr * ginv[a][b]).scale(k) for a in range(n) for b in range(a, n)}


# -- Yamabe ---------------------------------------------------------------------
def yamabe_coefficient(n: int):
    return Q(n - 2, 4 * (n - 1))


def yamabe_apply(cache: GeometryCache, f: WeightedTensorField, coefficient=None,
                 check_weight: bool = True) -> WeightedTensorField:
    """``Y f = Delta f - (n-2)/(4(n-1)) R f`` on densities of weight ``1 - n/2``."""
    n = cache.n
    _expect(f, (), "yamabe_apply", Q(2 - n, 2) if check_weight else None)
    k = yamabe_coefficient(n) if coefficient is None else as_q(coefficient)
    out = laplacian_density(cache, f) - (cache.scalar * f.comp(())).scale(k)
    return _density(cache, out, f.weight - 2)


# -- the Proposition pairings --------------------------------------------------
def pairing_first_coefficients(n: int, v, w):
    return (as_q(v) + n, -as_q(w))


def pairing_first(cache: GeometryCache, V: WeightedTensorField, f: WeightedTensorField,
                  coeffs=None) -> WeightedTensorField:
    """``(v+n) V^a nabla_a f - w (nabla_a V^a) f``, output weight ``v + w``."""
    _expect(V, ("u",), "pairing_first")
    _expect(f, (), "pairing_first")
    n = cache.n
    c1, c2 = coeffs or pairing_first_coefficients(n, V.weight, f.weight)
    grad = gradient(cache, f)
    vdf = contract(cache, [V.comp((a,)) for a in range(n)], grad)
    out = vdf.scale(c1) + (divergence(cache, V) * f.comp(())).scale(c2)
    return _density(cache, out, V.weight + f.weight)


def pairing_second_coefficients(n: int, v, w):
    v, w = as_q(v), as_q(w)
    return (
        (n + v + 2) * (n + v + 1),
        -2 * (w - 1) * (n + v + 1),
        w * (w - 1),
        w * (n + v + w) * (n + v + 2),
    )


def _second_order_form(cache, V2, f, coeffs, curvature: dict) -> Jet:
    n = cache.n
    c1, c2, c3, c4 = coeffs
    fj = f.comp(())
    out = _pair_sym(cache, hessian(cache, f), V2).scale(c1)
    dv = divergence_v2(cache, V2)
    out = out + contract(cache, [dv.comp((b,)) for b in range(n)], gradient(cache, f)).scale(c2)
    out = out + (divergence(cache, dv) * fj).scale(c3)
    out = out + (_pair_sym(cache, curvature, V2) * fj).scale(c4)
    return out


def pairing_second(cache: GeometryCache, V2: WeightedTensorField, f: WeightedTensorField,
                   coeffs=None) -> WeightedTensorField:
    """The second-order pairing with ``Phi_ab V^ab`` correction, output weight ``v + w``."""
    _expect_stf(V2, "pairing_second")
    _expect(f, (), "pairing_second")
    coeffs = coeffs or pairing_second_coefficients(cache.n, V2.weight, f.weight)
    out = _second_order_form(cache, V2, f, coeffs, phi_dict(cache))
    return _density(cache, out, V2.weight + f.weight)


def first_example(cache: GeometryCache, V: WeightedTensorField, f: WeightedTensorField) -> Jet:
    """``V^a nabla_a f - (w/n)(nabla_a V^a) f``: the weight-0 pairing."""
    n = cache.n
    vdf = contract(cache, [V.comp((a,)) for a in range(n)], gradient(cache, f))
    return vdf - (divergence(cache, V) * f.comp(())).scale(f.weight / n)


def second_example(cache: GeometryCache, V2: WeightedTensorField, f: WeightedTensorField) -> Jet:
    """The weight-0 second-order pairing written with the Ricci tensor."""
    n = cache.n
    w = f.weight
    coeffs = (
        Q(1),
        -2 * (w - 1) / (n + 2),
        w * (w - 1) / ((n + 1) * (n + 2)),
        w * (n + w) / ((n + 1) * (n - 2)),
    )
    return _second_order_form(cache, V2, f, coeffs, ricci_dict(cache))


def oneform_pairing_coefficients(n: int, v, w):
    return (n + as_q(v) + 2, -(as_q(w) - 2))


def pairing_oneform(cache: GeometryCache, V2: WeightedTensorField, phi: WeightedTensorField,
                    coeffs=None) -> WeightedTensorField:
    """``(n+v+2) V^ab nabla_a phi_b - (w-2)(nabla_a V^ab) phi_b``, a density of weight ``v + w``."""
    _expect_stf(V2, "pairing_oneform")
    _expect(phi, ("d",), "pairing_oneform")
    n = cache.n
    c1, c2 = coeffs or oneform_pairing_coefficients(n, V2.weight, phi.weight)
    Dphi = cov_deriv(cache, phi)
    idx = list(product(range(n), repeat=2))
    out = contract(cache, [V2.comp(i) for i in idx], [Dphi.comp(i) for i in idx]).scale(c1)
    dv = divergence_v2(cache, V2)
    out = out + contract(cache, [dv.comp((b,)) for b in range(n)], [phi.comp((b,)) for b in range(n)]).scale(c2)
    return _density(cache, out, V2.weight + phi.weight)


# -- special weights -------------------------------------------------------------
def special_weights(n: int) -> dict:
    """``variant -> (input valence, input weight, output weight)``."""
    return {
        "a": ((), 0, 0),
        "b": (("u",), -n, -n),
        "c": ((), 1, 1),
        "d": (("u", "u"), -n - 1, -n - 1),
        "e": (("u", "u"), -n - 2, -n - 2),
    }


def special_weight_operators(cache: GeometryCache, variant: str, T: WeightedTensorField,
                             check_weight: bool = True) -> WeightedTensorField:
    """The five linear invariant operators at their special weights.

    (a) ``f -> nabla_a f``; (b) ``V -> nabla_a V^a``;
    (c) ``f -> nabla_a nabla_b f - (1/n)(Delta f) g_ab + Phi_ab f``;
    (d) ``V -> nabla_a nabla_b V^ab + Phi_ab V^ab``; (e) ``V -> nabla_b V^ab``.
    """
    n = cache.n
    table = special_weights(n)
    if variant not in table:
        raise ValueError(f"unknown special-weight variant {variant!r}")
    valence, weight, _ = table[variant]
    _expect(T, valence, f"special operator ({variant})", weight if check_weight else None)
    if variant == "a":
        comps = {(a,): d for a, d in enumerate(gradient(cache, T))}
        return WeightedTensorField(n, ("d",), "none", T.weight, comps)
    if variant == "b":
        return _density(cache, divergence(cache, T), T.weight)
    if variant == "c":
        H = hessian(cache, T)
        lap = laplacian_density(cache, T)
        fj = T.comp(())
        k = Q(1, n)
        comps = {
            (a, b): H[(a, b)] - (lap * cache.g[a][b]).scale(k) + cache.phi[a][b] * fj
            for a in range(n) for b in range(a, n)
        }
        return WeightedTensorField(n, ("d", "d"), "sym", T.weight, comps)
    if variant == "d":
        _expect_stf(T, "special operator (d)")
        out = double_divergence(cache, T) + _pair_sym(cache, phi_dict(cache), T)
        return _density(cache, out, T.weight)
    _expect_stf(T, "special operator (e)")
    return divergence_v2(cache, T)


# -- factorization ---------------------------------------------------------------
def factorization_identity_residual(cache: GeometryCache, V2: WeightedTensorField,
                                    f: WeightedTensorField) -> Jet:
    """Composite of special-weight operators on ``f``-power rescaled ``V2`` minus the pairing."""
    _expect_stf(V2, "factorization_identity_residual")
    n = cache.n
    v, w = V2.weight, f.weight
    if w == 0:
        raise ValueError("factorization needs a nonzero density weight w")
    fj = f.comp(())
    if fj.value != 1:
        raise JetDomainError("factorization needs f normalized to 1 at the base point")

    def fp(e):
        return fj.pow_rational(e)

    A = V2.map(lambda c: c * fp(-(n + v + 1) / w), weight=-n - 1)
    first = special_weight_operators(cache, "d", A).comp(())
    B = V2.map(lambda c: c * fp(-(n + v + 2) / w), weight=-n - 2)
    inner = special_weight_operators(cache, "e", B)
    f2 = fp(Q(2) / w)
    C = inner.map(lambda c: c * f2, weight=-n)
    second = special_weight_operators(cache, "b", C).comp(())
    composite = (
        (fp((n + v + 1 + w) / w) * first).scale(w * (n + v + 2) * (n + v + w))
        - (fp((n + v + w) / w) * second).scale(w * (n + v + 1) * (n + v + 1 + w))
    )
    return composite - pairing_second(cache, V2, f).comp(())


# -- curved second-order symmetry ------------------------------------------------
def curved_symmetry_coefficients(n: int):
    """Coefficients of ``D_V``: hessian, divergence, double divergence, ``R_ab V^ab``."""
    return (Q(1), Q(n, n + 2), Q((n - 2) * n, 4 * (n + 1) * (n + 2)), Q(-(n + 2), 4 * (n + 1)))


def curved_delta_coefficients(n: int):
    return (Q(1), Q(n + 4, n + 2), Q(n + 4, 4 * (n + 1)), Q(-(n + 2), 4 * (n + 1)))


def curved_second_symmetry(cache: GeometryCache, V2: WeightedTensorField, f: WeightedTensorField,
                           coeffs=None) -> WeightedTensorField:
    """``D_V f`` with the ``-(n+2)/(4(n+1)) R_ab V^ab f`` correction."""
    _expect_stf(V2, "curved_second_symmetry")
    _expect(f, (), "curved_second_symmetry")
    coeffs = coeffs or curved_symmetry_coefficients(cache.n)
    out = _second_order_form(cache, V2, f, coeffs, ricci_dict(cache))
    return _density(cache, out, V2.weight + f.weight)


def curved_delta(cache: GeometryCache, V2: WeightedTensorField, h: WeightedTensorField,
                 coeffs=None) -> WeightedTensorField:
    """``delta_V h`` on densities of weight ``-1 - n/2``."""
    _expect_stf(V2, "curved_delta")
    _expect(h, (), "curved_delta")
    coeffs = coeffs or curved_delta_coefficients(cache.n)
    out = _second_order_form(cache, V2, h, coeffs, ricci_dict(cache))
    return _density(cache, out, V2.weight + h.weight)


# -- curvature-corrected Killing-form pairing -----------------------------------
def inner_product_curved(cache: GeometryCache, V: WeightedTensorField, W: WeightedTensorField) -> WeightedTensorField:
    """Curvature-corrected ``<V, W>`` for vector fields; output tagged weight 0."""
    _expect(V, ("u",), "inner_product_curved")
    _expect(W, ("u",), "inner_product_curved")
    n = cache.n
    if n < 3:
        raise ValueError("curvature-corrected pairing needs n >= 3")
    DV, DW = cov_deriv(cache, V), cov_deriv(cache, W)
    k = Q(n + 2, n)
    cross = contract(cache, [DV.comp((b, a)) for a in range(n) for b in range(n)],
                     [DW.comp((a, b)) for a in range(n) for b in range(n)])
    divV, divW = divergence(cache, V), divergence(cache, W)
    Vc = [V.comp((a,)) for a in range(n)]
    Wc = [W.comp((a,)) for a in range(n)]
    v_ddw = contract(cache, Vc, [divW.diff(a) for a in range(n)])
    w_ddv = contract(cache, Wc, [divV.diff(a) for a in range(n)])
    vw = contract(cache, lower(cache, V), Wc)
    lap = laplacian_density(cache, _density(cache, vw, 0))
    ric = contract(cache, [cache.ricci[a][b] for a in range(n) for b in range(n)],
                   [Vc[a] * Wc[b] for a in range(n) for b in range(n)])
    out = (
        cross.scale(n + 2)
        - (divV * divW).scale(k)
        - v_ddw.scale(k)
        - w_ddv.scale(k)
        + lap
        - ric.scale(Q(2 * (n + 2), n - 2))
        + (cache.scalar * vw).scale(Q(2 * n, (n - 1) * (n - 2)))
    )
    return _density(cache, out, 0)
