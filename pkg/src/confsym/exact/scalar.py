"""Exact rational scalars.

All arithmetic in the package runs over ``gmpy2.mpq``.  The helpers here
coerce the usual Python inputs (int, str, Fraction) and render values in
the bit-exact ``p/q`` form used by reports.
"""

from __future__ import annotations

from fractions import Fraction
from numbers import Rational

from gmpy2 import mpq

Q = mpq
ZERO = mpq(0)
ONE = mpq(1)


def as_q(value) -> mpq:
    """Coerce ``value`` to an exact rational.

    Floats are rejected: they would silently smuggle rounding into an exact
    computation.
    """
    if isinstance(value, float):
        raise TypeError(f"refusing inexact float {value!r}; pass a string or Fraction")
    if isinstance(value, str):
        return mpq(Fraction(value.strip()))
    if isinstance(value, Fraction):
        return mpq(value.numerator, value.denominator)
    if isinstance(value, (int, Rational)):
        return mpq(value)
    raise TypeError(f"cannot interpret {value!r} as a rational")


def fmt_q(value) -> str:
    """Render a rational as ``p`` or ``p/q``."""
    value = mpq(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def binomial_q(w, j: int) -> mpq:
    """Generalized binomial coefficient ``w choose j`` for rational ``w``."""
    out = ONE
    for i in range(j):
        out = out * (w - i) / (i + 1)
    return out
