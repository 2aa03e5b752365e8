"""Polynomial-coefficient differential operators on flat R^n.

A :class:`DiffOp` is kept in normal order, coefficients to the left:
``sum_beta c_beta(x) d^beta``.  Normal form is unique, so two operators are
equal exactly when their coefficient maps agree and ``is_zero`` decides
every flat operator identity.
"""

from __future__ import annotations

from itertools import product
from math import comb

from .exact.monomials import display_key
from .exact.poly import DimensionError, MultiPoly
from .exact.scalar import as_q, fmt_q


def _sub_multi_indices(alpha):
    return product(*(range(a + 1) for a in alpha))


class DiffOp:
    __slots__ = ("n", "terms")

    def __init__(self, n: int, terms: dict | None = None):
        self.n = n
        clean = {}
        for beta, c in (terms or {}).items():
            beta = tuple(beta)
            if len(beta) != n:
                raise DimensionError(f"derivative index {beta} has length != {n}")
            if not isinstance(c, MultiPoly):
                c = MultiPoly.const(n, c)
            elif c.n != n:
                raise DimensionError("coefficient dimension mismatch")
            if c:
                clean[beta] = clean[beta] + c if beta in clean else c
                if not clean[beta]:
                    del clean[beta]
        self.terms = clean

    # -- constructors ----------------------------------------------------
    @classmethod
    def zero(cls, n: int) -> DiffOp:
        return cls(n)

    @classmethod
    def identity(cls, n: int) -> DiffOp:
        return cls.multiplication(MultiPoly.const(n, 1))

    @classmethod
    def multiplication(cls, p) -> DiffOp:
        """The order-0 operator ``f -> p f``."""
        return cls(p.n, {(0,) * p.n: p})

    @classmethod
    def partial(cls, n: int, i: int) -> DiffOp:
        if not 0 <= i < n:
            raise IndexError(f"coordinate index {i} out of range for n={n}")
        beta = [0] * n
        beta[i] = 1
        return cls(n, {tuple(beta): MultiPoly.const(n, 1)})

    @classmethod
    def vector_field(cls, components) -> DiffOp:
        """``V^a d_a`` from a list of polynomial components."""
        components = list(components)
        n = components[0].n
        if len(components) != n:
            raise DimensionError("vector field needs n components")
        terms = {}
        for i, c in enumerate(components):
            beta = [0] * n
            beta[i] = 1
            terms[tuple(beta)] = c
        return cls(n, terms)

    # -- queries ---------------------------------------------------------
    @property
    def order(self) -> int:
        return max((sum(b) for b in self.terms), default=-1)

    def is_zero(self) -> bool:
        return not self.terms

    def coefficient(self, beta) -> MultiPoly:
        return self.terms.get(tuple(beta), MultiPoly.zero(self.n))

    # -- algebra ---------------------------------------------------------
    def _check(self, other: DiffOp):
        if self.n != other.n:
            raise DimensionError(f"dimension mismatch: {self.n} vs {other.n}")

    def __add__(self, other):
        if not isinstance(other, DiffOp):
            other = DiffOp.multiplication(MultiPoly.const(self.n, other))
        self._check(other)
        out = dict(self.terms)
        for b, c in other.terms.items():
            s = out[b] + c if b in out else c
            if s:
                out[b] = s
            else:
                out.pop(b, None)
        return DiffOp._from_clean(self.n, out)

    __radd__ = __add__

    def __neg__(self):
        return DiffOp._from_clean(self.n, {b: -c for b, c in self.terms.items()})

    def __sub__(self, other):
        if not isinstance(other, DiffOp):
            other = DiffOp.multiplication(MultiPoly.const(self.n, other))
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, s) -> DiffOp:
        if isinstance(s, MultiPoly):
            return DiffOp.multiplication(s) @ self
        s = as_q(s)
        if not s:
            return DiffOp.zero(self.n)
        return DiffOp._from_clean(self.n, {b: c.scale(s) for b, c in self.terms.items()})

    def __mul__(self, s):
        return self.scale(s)

    __rmul__ = __mul__

    @classmethod
    def _from_clean(cls, n, terms):
        obj = cls.__new__(cls)
        obj.n = n
        obj.terms = terms
        return obj

    def compose(self, other: DiffOp) -> DiffOp:
        """``self o other`` in normal order (Leibniz rule)."""
        self._check(other)
        n = self.n
        out: dict = {}
        deriv_cache: dict = {}
        for alpha, a in self.terms.items():
            for beta, b in other.terms.items():
                for gamma in _sub_multi_indices(alpha):
                    key = (beta, gamma)
                    db = deriv_cache.get(key)
                    if db is None:
                        db = b.diff_multi(gamma)
                        deriv_cache[key] = db
                    if not db:
                        continue
                    k = 1
                    for ai, gi in zip(alpha, gamma):
                        k *= comb(ai, gi)
                    target = tuple(ai - gi + bi for ai, gi, bi in zip(alpha, gamma, beta))
                    term = (a * db).scale(k)
                    if target in out:
                        s = out[target] + term
                        if s:
                            out[target] = s
                        else:
                            del out[target]
                    elif term:
                        out[target] = term
        return DiffOp._from_clean(n, out)

    __matmul__ = compose

    def apply(self, f: MultiPoly) -> MultiPoly:
        if f.n != self.n:
            raise DimensionError(f"dimension mismatch: {self.n} vs {f.n}")
        out = MultiPoly.zero(self.n)
        for beta, c in self.terms.items():
            d = f.diff_multi(beta)
            if d:
                out = out + c * d
        return out

    __call__ = apply

    def __eq__(self, other):
        if not isinstance(other, DiffOp):
            return NotImplemented
        return self.n == other.n and self.terms == other.terms

    __hash__ = None

    # -- display -----------------------------------------------------------
    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for beta in sorted(self.terms, key=display_key):
            c = self.terms[beta]
            d = "*".join(
                f"d{i + 1}" if k == 1 else f"d{i + 1}^{k}" for i, k in enumerate(beta) if k
            )
            if len(c.terms) == 1 and d:
                (e, v), = c.terms.items()
                if not any(e):
                    coef = "" if v == 1 else ("-" if v == -1 else fmt_q(v) + "*")
                    parts.append(f"{coef}{d}")
                    continue
            cs = str(c)
            if not d:
                parts.append(cs if len(c.terms) == 1 else f"({cs})")
            else:
                parts.append(f"({cs})*{d}")
        return " + ".join(parts).replace("+ -", "- ")

    def __repr__(self):
        return f"DiffOp({self.n}, {str(self)!r})"


def op_apply(D: DiffOp, f: MultiPoly) -> MultiPoly:
    return D.apply(f)


def op_compose(A: DiffOp, B: DiffOp) -> DiffOp:
    return A.compose(B)


def op_commutator(A: DiffOp, B: DiffOp) -> DiffOp:
    return A.compose(B) - B.compose(A)


def op_is_zero(A: DiffOp) -> bool:
    return A.is_zero()


def laplacian(n: int) -> DiffOp:
    """``sum_i d_i^2`` on R^n."""
    if n < 1:
        raise ValueError("n must be positive")
    terms = {}
    for i in range(n):
        beta = [0] * n
        beta[i] = 2
        terms[tuple(beta)] = MultiPoly.const(n, 1)
    return DiffOp(n, terms)


def euler_operator(n: int) -> DiffOp:
    """``x . grad``."""
    return DiffOp.vector_field([MultiPoly.var(n, i) for i in range(n)])
