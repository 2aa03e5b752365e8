"""Truncated Taylor expansions ("jets") with an honest valid-order counter.

A :class:`Jet` stores the Taylor coefficients of a function at a base point
``p`` for every monomial ``(x - p)^e`` with ``|e| <= order``.  Nothing beyond
``order`` is kept, products keep the smaller of the two orders, and every
differentiation costs one order.  A residual that vanishes as a jet therefore
vanishes to exactly the recorded order, no more.
"""

from __future__ import annotations

from math import factorial

from .monomials import count_upto, diff_table, graded_monomials, monomial_index, mul_table
from .poly import DimensionError, MultiPoly
from .scalar import ONE, ZERO, as_q, binomial_q


class OrderExhausted(ArithmeticError):
    """A derivative was requested from a jet with no remaining valid order."""


class JetDomainError(ArithmeticError):
    """Division by a jet vanishing at the base point, or a rational power of
    a jet not normalized to 1 there."""


class Jet:
    __slots__ = ("n", "order", "base", "c")

    def __init__(self, n: int, order: int, coeffs, base=None):
        if order < 0:
            raise ValueError("order must be non-negative")
        coeffs = list(coeffs)
        if len(coeffs) != count_upto(n, order):
            raise ValueError("coefficient vector has wrong length")
        self.n = n
        self.order = order
        self.base = tuple(as_q(b) for b in base) if base is not None else (ZERO,) * n
        self.c = coeffs

    @classmethod
    def _raw(cls, n, order, coeffs, base):
        obj = cls.__new__(cls)
        obj.n = n
        obj.order = order
        obj.base = base
        obj.c = coeffs
        return obj

    # -- constructors ----------------------------------------------------
    @classmethod
    def const(cls, n: int, value, order: int, base=None) -> Jet:
        c = [ZERO] * count_upto(n, order)
        c[0] = as_q(value)
        return cls(n, order, c, base)

    @classmethod
    def from_poly(cls, p: MultiPoly, order: int, base=None) -> Jet:
        """Taylor coefficients of a polynomial about ``base`` (default origin)."""
        if order < 0:
            raise ValueError("order must be non-negative")
        n = p.n
        base_q = tuple(as_q(b) for b in base) if base is not None else (ZERO,) * n
        if len(base_q) != n:
            raise DimensionError("base point has wrong dimension")
        index = monomial_index(n, order)
        coeffs = [ZERO] * len(index)
        if not any(base_q):
            for e, v in p.terms.items():
                i = index.get(e)
                if i is not None:
                    coeffs[i] = v
        else:
            for i, e in enumerate(graded_monomials(n, order)):
                d = p.diff_multi(e)
                if d:
                    denom = 1
                    for k in e:
                        denom *= factorial(k)
                    coeffs[i] = d(base_q) / denom
        return cls._raw(n, order, coeffs, base_q)

    def like(self, value) -> Jet:
        """Constant jet sharing this jet's dimension, base point and order."""
        return Jet.const(self.n, value, self.order, self.base)

    # -- queries ---------------------------------------------------------
    @property
    def value(self):
        """Value at the base point."""
        return self.c[0]

    def is_zero(self) -> bool:
        return not any(self.c)

    def coefficient(self, exps):
        i = monomial_index(self.n, self.order).get(tuple(exps))
        if i is None:
            raise KeyError(f"monomial {exps} beyond valid order {self.order}")
        return self.c[i]

    def to_poly(self) -> MultiPoly:
        """The Taylor polynomial in the shifted variables ``y = x - base``."""
        mons = graded_monomials(self.n, self.order)
        return MultiPoly(self.n, {mons[i]: v for i, v in enumerate(self.c) if v})

    def truncate(self, order: int) -> Jet:
        if order > self.order:
            raise ValueError("cannot raise the valid order of a jet")
        if order == self.order:
            return self
        return Jet._raw(self.n, order, self.c[: count_upto(self.n, order)], self.base)

    def lowest_nonzero_degree(self) -> int | None:
        mons = graded_monomials(self.n, self.order)
        for i, v in enumerate(self.c):
            if v:
                return sum(mons[i])
        return None

    # -- arithmetic ------------------------------------------------------
    def _coerce(self, other):
        if isinstance(other, Jet):
            if other.n != self.n:
                raise DimensionError("jets live in different dimensions")
            if other.base != self.base:
                raise ValueError("jets expanded about different base points")
            return other
        return None

    def _pair(self, other: Jet):
        k = min(self.order, other.order)
        m = count_upto(self.n, k)
        return k, self.c[:m], other.c[:m]

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            c = list(self.c)
            c[0] = c[0] + as_q(other)
            return Jet._raw(self.n, self.order, c, self.base)
        k, a, b = self._pair(o)
        return Jet._raw(self.n, k, [x + y for x, y in zip(a, b)], self.base)

    __radd__ = __add__

    def __neg__(self):
        return Jet._raw(self.n, self.order, [-x for x in self.c], self.base)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return self + (-as_q(other))
        k, a, b = self._pair(o)
        return Jet._raw(self.n, k, [x - y for x, y in zip(a, b)], self.base)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, s) -> Jet:
        s = as_q(s)
        return Jet._raw(self.n, self.order, [s * x for x in self.c], self.base)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return self.scale(other)
        k, a, b = self._pair(o)
        table = mul_table(self.n, k)
        out = [ZERO] * len(a)
        for i, ai in enumerate(a):
            if ai:
                for j, t in table[i]:
                    bj = b[j]
                    if bj:
                        out[t] += ai * bj
        return Jet._raw(self.n, k, out, self.base)

    __rmul__ = __mul__

    def _series(self, coeffs) -> Jet:
        """Evaluate sum_j coeffs[j] * u^j with u = self - self.value (u nilpotent)."""
        u = self - self.value
        out = self.like(coeffs[0])
        power = self.like(1)
        for j in range(1, self.order + 1):
            power = power * u
            if coeffs[j]:
                out = out + power.scale(coeffs[j])
        return out

    def inverse(self) -> Jet:
        a0 = self.value
        if not a0:
            raise JetDomainError("division by a jet vanishing at the base point")
        # 1/(a0 + u) = sum_j (-1)^j u^j / a0^(j+1)
        coeffs = []
        term = 1 / a0
        for _ in range(self.order + 1):
            coeffs.append(term)
            term = -term / a0
        return self._series(coeffs)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return self.scale(1 / as_q(other))
        return self * o.inverse()

    def __rtruediv__(self, other):
        return self.inverse().scale(other)

    def pow_rational(self, w) -> Jet:
        """``self ** w`` for rational ``w``; requires value 1 at the base point."""
        w = as_q(w)
        if self.value != ONE:
            raise JetDomainError("rational powers need the jet normalized to 1 at the base point")
        return self._series([binomial_q(w, j) for j in range(self.order + 1)])

    def __pow__(self, w):
        w = as_q(w)
        if w.denominator == 1 and self.value != ONE:
            k = int(w)
            if k < 0:
                return self.inverse() ** (-k)
            out = self.like(1)
            base = self
            while k:
                if k & 1:
                    out = out * base
                base = base * base
                k >>= 1
            return out
        return self.pow_rational(w)

    def exp(self) -> Jet:
        """``exp(self)`` for a jet vanishing at the base point."""
        if self.value:
            raise JetDomainError("exp is only rational for jets vanishing at the base point")
        coeffs = [ONE / factorial(j) for j in range(self.order + 1)]
        return self._series(coeffs)

    def log(self) -> Jet:
        """``log(self)`` for a jet equal to 1 at the base point."""
        if self.value != ONE:
            raise JetDomainError("log needs the jet normalized to 1 at the base point")
        coeffs = [ZERO] + [as_q((-1) ** (j + 1)) / j for j in range(1, self.order + 1)]
        return self._series(coeffs)

    def diff(self, i: int) -> Jet:
        """Partial derivative in coordinate ``i`` (0-based); costs one order."""
        if not 0 <= i < self.n:
            raise IndexError(f"coordinate index {i} out of range for n={self.n}")
        if self.order == 0:
            raise OrderExhausted("cannot differentiate a jet of valid order 0")
        out = [ZERO] * count_upto(self.n, self.order - 1)
        c = self.c
        for src, dst, k in diff_table(self.n, self.order, i):
            v = c[src]
            if v:
                out[dst] = v * k
        return Jet._raw(self.n, self.order - 1, out, self.base)

    # -- comparison & display --------------------------------------------
    def __eq__(self, other):
        if not isinstance(other, Jet):
            return NotImplemented
        return (
            self.n == other.n
            and self.order == other.order
            and self.base == other.base
            and self.c == other.c
        )

    __hash__ = None

    def agrees_with(self, other: Jet) -> bool:
        """Equality up to the smaller of the two valid orders."""
        k, a, b = self._pair(other)
        return a == b

    def __repr__(self):
        return f"Jet(n={self.n}, order={self.order}, {self.to_poly()})"


def jet_arith(a: Jet, b, kind: str) -> Jet:
    """Dispatch form: ``kind`` in add|sub|mul|div."""
    if kind == "add":
        return a + b
    if kind == "sub":
        return a - b
    if kind == "mul":
        return a * b
    if kind == "div":
        return a / b
    raise ValueError(f"unknown kind {kind!r}")


def add_product(acc: Jet, a: Jet, b: Jet) -> Jet:
    """``acc + a*b``, skipping the multiplication when a factor is zero.

    A skipped product still caps the valid order of the result.
    """
    if a.is_zero() or b.is_zero():
        k = min(acc.order, a.order, b.order)
        return acc if k == acc.order else acc.truncate(k)
    return acc + a * b
