"""Weighted tensor fields with polynomial or jet components."""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations_with_replacement, product

from .exact.poly import MultiPoly
from .exact.scalar import as_q

SYMMETRY_TAGS = ("none", "sym", "stf", "skew")


class TensorTagError(ValueError):
    """A field's valence, symmetry tag or weight does not fit the operation."""


def canonical_indices(n: int, rank: int, symmetry: str):
    """The stored index tuples for a given symmetry type."""
    if symmetry in ("sym", "stf"):
        return list(combinations_with_replacement(range(n), rank))
    if symmetry == "skew":
        return [t for t in combinations_with_replacement(range(n), rank) if len(set(t)) == rank]
    return list(product(range(n), repeat=rank))


def _sort_sign(idx):
    """Sorted index tuple and the sign of the sorting permutation (0 on repeats)."""
    idx = list(idx)
    sign = 1
    for i in range(len(idx)):
        for j in range(len(idx) - 1 - i):
            if idx[j] > idx[j + 1]:
                idx[j], idx[j + 1] = idx[j + 1], idx[j]
                sign = -sign
    if len(set(idx)) < len(idx):
        sign = 0
    return tuple(idx), sign


@dataclass(frozen=True)
class WeightedTensorField:
    """Tensor components plus valence, symmetry tag and conformal weight.

    ``valence`` holds one of ``"u"``/``"d"`` per slot.  ``components`` maps
    canonical index tuples (sorted for symmetric tags) to a component, which
    is a :class:`MultiPoly` on flat space or a ``Jet`` in curved contexts.
    Use :meth:`comp` to read any index tuple; it applies the symmetry.
    """

    n: int
    valence: tuple[str, ...]
    symmetry: str
    weight: object
    components: dict = field(repr=False)

    def __post_init__(self):
        if self.symmetry not in SYMMETRY_TAGS:
            raise TensorTagError(f"unknown symmetry tag {self.symmetry!r}")
        if any(v not in ("u", "d") for v in self.valence):
            raise TensorTagError(f"bad valence {self.valence!r}")
        object.__setattr__(self, "weight", as_q(self.weight))
        want = canonical_indices(self.n, self.rank, self.symmetry)
        missing = [t for t in want if t not in self.components]
        if missing:
            raise TensorTagError(f"missing components {missing[:3]}...")
        if self.symmetry == "stf" and self.rank == 2:
            first = self.components[want[0]]
            if isinstance(first, MultiPoly):
                trace = sum((self.components[(i, i)] for i in range(self.n)), MultiPoly.zero(self.n))
                if trace:
                    raise TensorTagError("trace-free tag but nonzero Euclidean trace")

    @property
    def rank(self) -> int:
        return len(self.valence)

    def comp(self, idx=()):
        idx = tuple(idx)
        if self.symmetry in ("sym", "stf"):
            return self.components[tuple(sorted(idx))]
        if self.symmetry == "skew":
            key, sign = _sort_sign(idx)
            if sign == 0:
                return self.components[next(iter(self.components))] * 0
            c = self.components[key]
            return c if sign > 0 else -c
        return self.components[idx]

    def __getitem__(self, idx):
        if not isinstance(idx, tuple):
            idx = (idx,)
        return self.comp(idx)

    def all_indices(self):
        return list(product(range(self.n), repeat=self.rank))

    def map(self, fn, weight=None) -> WeightedTensorField:
        """Apply ``fn`` to every stored component."""
        return WeightedTensorField(
            self.n,
            self.valence,
            self.symmetry,
            self.weight if weight is None else weight,
            {k: fn(v) for k, v in self.components.items()},
        )

    def with_weight(self, weight) -> WeightedTensorField:
        return WeightedTensorField(self.n, self.valence, self.symmetry, weight, dict(self.components))

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.components.values())

    def __add__(self, other: WeightedTensorField) -> WeightedTensorField:
        if (self.n, self.valence, self.symmetry) != (other.n, other.valence, other.symmetry):
            raise TensorTagError("cannot add fields of different type")
        return WeightedTensorField(
            self.n,
            self.valence,
            self.symmetry,
            self.weight,
            {k: v + other.components[k] for k, v in self.components.items()},
        )

    def __sub__(self, other: WeightedTensorField) -> WeightedTensorField:
        return self + other.map(lambda c: -c)

    def scale(self, s) -> WeightedTensorField:
        return self.map(lambda c: c * s)


def scalar_field(f, weight=0) -> WeightedTensorField:
    """A density (rank-0 field) of the given conformal weight."""
    return WeightedTensorField(f.n, (), "none", weight, {(): f})


def vector_field(components, weight=0) -> WeightedTensorField:
    components = list(components)
    n = components[0].n
    if len(components) != n:
        raise TensorTagError("vector field needs n components")
    return WeightedTensorField(n, ("u",), "none", weight, {(i,): c for i, c in enumerate(components)})


def one_form(components, weight=0) -> WeightedTensorField:
    components = list(components)
    n = components[0].n
    return WeightedTensorField(n, ("d",), "none", weight, {(i,): c for i, c in enumerate(components)})


def symmetric_tensor(entries: dict, n: int, weight=0, tracefree=True, valence=("u", "u")):
    """A symmetric valence-2 field from ``{(a, b): component}`` (either order)."""
    comps = {}
    for (a, b), c in entries.items():
        comps[(min(a, b), max(a, b))] = c
    return WeightedTensorField(n, valence, "stf" if tracefree else "sym", weight, comps)


def euclidean_tracefree_part(entries: dict, n: int) -> dict:
    """Subtract (1/n) * trace * delta from a symmetric polynomial matrix."""
    out = {(a, b): entries[(a, b)] for a in range(n) for b in range(a, n)}
    trace = sum((out[(i, i)] for i in range(n)), MultiPoly.zero(n))
    for i in range(n):
        out[(i, i)] = out[(i, i)] - trace.scale(as_q(1) / n)
    return out
