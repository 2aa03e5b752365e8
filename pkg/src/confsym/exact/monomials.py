"""Monomial enumeration and the cached index tables used by dense jets.

Monomials are exponent tuples.  The canonical order is graded: total
degree ascending, then lexicographically descending exponents inside a
degree (so ``x1^2 < x1*x2 < x2^2`` in position, i.e. ``x1^2`` comes first).
Because degree is the primary key, the monomials of degree <= k always
form a prefix of the list for any larger degree bound.
"""

from __future__ import annotations

from functools import lru_cache
from itertools import combinations_with_replacement
from math import comb


def monomials_of_degree(n: int, d: int) -> list[tuple[int, ...]]:
    """All exponent tuples of total degree ``d`` in ``n`` variables, lex-descending."""
    out = []
    for combo in combinations_with_replacement(range(n), d):
        e = [0] * n
        for i in combo:
            e[i] += 1
        out.append(tuple(e))
    out.sort(reverse=True)
    return out


@lru_cache(maxsize=None)
def graded_monomials(n: int, k: int) -> tuple[tuple[int, ...], ...]:
    """Monomials of total degree <= k in canonical graded order."""
    out: list[tuple[int, ...]] = []
    for d in range(k + 1):
        out.extend(monomials_of_degree(n, d))
    return tuple(out)


def count_upto(n: int, k: int) -> int:
    """Number of monomials of degree <= k in n variables."""
    if k < 0:
        return 0
    return comb(n + k, n)


def sort_key(e: tuple[int, ...]):
    """Key realizing the canonical graded order."""
    return (sum(e), tuple(-x for x in e))


def display_key(e: tuple[int, ...]):
    """Highest degree first, ``x1`` before ``x2`` within a degree."""
    return (-sum(e), tuple(-x for x in e))


@lru_cache(maxsize=None)
def monomial_index(n: int, k: int) -> dict[tuple[int, ...], int]:
    return {e: i for i, e in enumerate(graded_monomials(n, k))}


@lru_cache(maxsize=None)
def mul_table(n: int, k: int) -> tuple[tuple[tuple[int, int], ...], ...]:
    """For each monomial i, the pairs (j, i*j) whose product has degree <= k."""
    mons = graded_monomials(n, k)
    index = monomial_index(n, k)
    degs = [sum(e) for e in mons]
    rows = []
    for i, ei in enumerate(mons):
        room = k - degs[i]
        limit = count_upto(n, room)
        row = []
        for j in range(limit):
            ej = mons[j]
            row.append((j, index[tuple(a + b for a, b in zip(ei, ej))]))
        rows.append(tuple(row))
    return tuple(rows)


@lru_cache(maxsize=None)
def diff_table(n: int, k: int, var: int) -> tuple[tuple[int, int, int], ...]:
    """Triples (src, dst, factor) realizing d/dx_var from degree <= k to <= k-1."""
    mons = graded_monomials(n, k)
    index = monomial_index(n, k - 1) if k > 0 else {}
    out = []
    for src, e in enumerate(mons):
        if e[var] == 0:
            continue
        lowered = list(e)
        lowered[var] -= 1
        out.append((src, index[tuple(lowered)], e[var]))
    return tuple(out)
