"""Sparse multivariate polynomials with exact rational coefficients."""

from __future__ import annotations

from collections.abc import Iterable, Mapping

from .monomials import display_key
from .scalar import ONE, ZERO, as_q, fmt_q


class DimensionError(ValueError):
    """Operands live in different numbers of variables."""


class MultiPoly:
    """A polynomial in ``x1..xn`` stored as ``{exponent tuple: mpq}``.

    Instances are treated as immutable.  Zero coefficients are never stored,
    so equality is plain dictionary equality.
    """

    __slots__ = ("n", "terms", "_hash")

    def __init__(self, n: int, terms: Mapping | None = None):
        if n < 1:
            raise ValueError("need at least one variable")
        self.n = n
        clean = {}
        if terms:
            for e, c in terms.items():
                e = tuple(e)
                if len(e) != n:
                    raise DimensionError(f"exponent {e} has length != {n}")
                if any(x < 0 for x in e):
                    raise ValueError(f"negative exponent in {e}")
                c = as_q(c)
                if c:
                    clean[e] = c
        self.terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, n: int, terms: dict) -> MultiPoly:
        # trusted constructor: terms already canonical
        obj = cls.__new__(cls)
        obj.n = n
        obj.terms = terms
        obj._hash = None
        return obj

    # -- constructors ----------------------------------------------------
    @classmethod
    def zero(cls, n: int) -> MultiPoly:
        return cls._raw(n, {})

    @classmethod
    def const(cls, n: int, c) -> MultiPoly:
        c = as_q(c)
        return cls._raw(n, {(0,) * n: c} if c else {})

    @classmethod
    def var(cls, n: int, i: int) -> MultiPoly:
        """The coordinate ``x_{i+1}`` (0-based ``i``)."""
        if not 0 <= i < n:
            raise IndexError(f"coordinate index {i} out of range for n={n}")
        e = [0] * n
        e[i] = 1
        return cls._raw(n, {tuple(e): ONE})

    @classmethod
    def monomial(cls, n: int, exps: Iterable[int], c=1) -> MultiPoly:
        return cls(n, {tuple(exps): c})

    # -- queries ---------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    @property
    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        return max((sum(e) for e in self.terms), default=-1)

    def coeff(self, exps) -> object:
        return self.terms.get(tuple(exps), ZERO)

    def constant_term(self):
        return self.terms.get((0,) * self.n, ZERO)

    def sorted_terms(self) -> list:
        """Terms in display order: highest degree first, then lex."""
        return sorted(self.terms.items(), key=lambda t: display_key(t[0]))

    def __call__(self, point) -> object:
        """Evaluate at a rational point."""
        point = [as_q(p) for p in point]
        if len(point) != self.n:
            raise DimensionError("point has wrong dimension")
        total = ZERO
        for e, c in self.terms.items():
            v = c
            for p, k in zip(point, e):
                if k:
                    v *= p**k
            total += v
        return total

    # -- arithmetic ------------------------------------------------------
    def _check(self, other: MultiPoly):
        if self.n != other.n:
            raise DimensionError(f"dimension mismatch: {self.n} vs {other.n}")

    def _lift(self, other) -> MultiPoly:
        if isinstance(other, MultiPoly):
            self._check(other)
            return other
        return MultiPoly.const(self.n, other)

    def __add__(self, other):
        other = self._lift(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            v = out.get(e, ZERO) + c
            if v:
                out[e] = v
            else:
                out.pop(e, None)
        return MultiPoly._raw(self.n, out)

    __radd__ = __add__

    def __neg__(self):
        return MultiPoly._raw(self.n, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def scale(self, c) -> MultiPoly:
        c = as_q(c)
        if not c:
            return MultiPoly.zero(self.n)
        return MultiPoly._raw(self.n, {e: c * v for e, v in self.terms.items()})

    def __mul__(self, other):
        if not isinstance(other, MultiPoly):
            return self.scale(other)
        self._check(other)
        out: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                v = out.get(e, ZERO) + c1 * c2
                if v:
                    out[e] = v
                else:
                    del out[e]
        return MultiPoly._raw(self.n, out)

    def __rmul__(self, other):
        return self.scale(other)

    def __truediv__(self, other):
        return self.scale(1 / as_q(other))

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative powers are not polynomials")
        out = MultiPoly.const(self.n, 1)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def diff(self, i: int) -> MultiPoly:
        """Partial derivative with respect to ``x_{i+1}`` (0-based ``i``)."""
        if not 0 <= i < self.n:
            raise IndexError(f"coordinate index {i} out of range for n={self.n}")
        out = {}
        for e, c in self.terms.items():
            k = e[i]
            if k:
                lowered = e[:i] + (k - 1,) + e[i + 1:]
                out[lowered] = c * k
        return MultiPoly._raw(self.n, out)

    def diff_multi(self, beta) -> MultiPoly:
        """Apply ``d^beta`` for a multi-index ``beta``."""
        p = self
        for i, k in enumerate(beta):
            for _ in range(k):
                if not p.terms:
                    return p
                p = p.diff(i)
        return p

    # -- comparison & display --------------------------------------------
    def __eq__(self, other):
        if isinstance(other, MultiPoly):
            return self.n == other.n and self.terms == other.terms
        try:
            c = as_q(other)
        except TypeError:
            return NotImplemented
        return self.terms == ({(0,) * self.n: c} if c else {})

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.n, frozenset(self.terms.items())))
        return self._hash

    def __repr__(self):
        return f"MultiPoly({self.n}, {str(self)!r})"

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for e, c in self.sorted_terms():
            mon = "*".join(
                f"x{i + 1}" if k == 1 else f"x{i + 1}^{k}" for i, k in enumerate(e) if k
            )
            if not mon:
                body = fmt_q(abs(c))
            elif abs(c) == 1:
                body = mon
            else:
                body = f"{fmt_q(abs(c))}*{mon}"
            sign = "-" if c < 0 else "+"
            parts.append((sign, body))
        first_sign, first = parts[0]
        out = ("-" if first_sign == "-" else "") + first
        for sign, body in parts[1:]:
            out += f" {sign} {body}"
        return out


def poly_arith(a: MultiPoly, b, kind: str) -> MultiPoly:
    """Dispatch form of the ring operations: ``kind`` in add|sub|mul|scale."""
    if kind == "add":
        return a + b
    if kind == "sub":
        return a - b
    if kind == "mul":
        if not isinstance(b, MultiPoly):
            raise TypeError("mul expects two polynomials; use 'scale' for scalars")
        return a * b
    if kind == "scale":
        return a.scale(b)
    raise ValueError(f"unknown kind {kind!r}")


def coordinates(n: int) -> list[MultiPoly]:
    """The coordinate functions ``[x1, ..., xn]``."""
    return [MultiPoly.var(n, i) for i in range(n)]
