"""Exact kernels by fraction-free (Bareiss) elimination.

``exact_nullspace`` handles dense matrices.  ``sparse_nullspace`` takes a
column-sparse system, splits it into independent blocks (connected
components of the row/column incidence graph) and solves each block
densely.  For a block-diagonal system the reduced-echelon kernel basis is
block-local, so the combined basis is the same one a single global
elimination would return.
"""

from __future__ import annotations

from collections.abc import Sequence
from math import lcm

from .scalar import ZERO, as_q


class ExactMatrix:
    """A rows x cols matrix of exact rationals."""

    __slots__ = ("rows", "ncols")

    def __init__(self, rows: Sequence[Sequence], ncols: int | None = None):
        self.rows = [[as_q(v) for v in row] for row in rows]
        if ncols is None:
            ncols = len(self.rows[0]) if self.rows else 0
        if any(len(r) != ncols for r in self.rows):
            raise ValueError("ragged matrix")
        self.ncols = ncols

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.rows), self.ncols

    def __matmul__(self, vec):
        return [sum((a * b for a, b in zip(row, vec)), ZERO) for row in self.rows]

    def __repr__(self):
        return f"ExactMatrix({len(self.rows)}x{self.ncols})"


def _integer_rows(rows):
    out = []
    for row in rows:
        den = lcm(*(int(v.denominator) for v in row)) if row else 1
        out.append([int(v.numerator) * (den // int(v.denominator)) for v in row])
    return out


def _echelon(rows: list[list[int]], cols: list[int]):
    """Bareiss elimination visiting columns in the order ``cols``.

    Pivot: first column in ``cols`` with a nonzero entry at or below the
    current rank, taking the smallest such row index.  Returns the reduced
    rows and the list of ``(row, col)`` pivots.
    """
    m = len(rows)
    rank = 0
    prev = 1
    pivots = []
    for c in cols:
        if rank == m:
            break
        p = next((r for r in range(rank, m) if rows[r][c]), None)
        if p is None:
            continue
        rows[rank], rows[p] = rows[p], rows[rank]
        prow = rows[rank]
        pv = prow[c]
        for r in range(rank + 1, m):
            row = rows[r]
            f = row[c]
            if f:
                rows[r] = [(pv * x - f * y) // prev for x, y in zip(row, prow)]
            elif pv != prev:
                rows[r] = [(pv * x) // prev for x in row]
        prev = pv
        pivots.append((rank, c))
        rank += 1
    return rows, pivots


def exact_nullspace(M, reverse: bool = False) -> list[tuple]:
    """Basis of the right kernel of ``M``.

    With ``reverse=False`` the basis is the reduced-echelon one: one vector
    per free column (in increasing column order), equal to 1 there and 0 on
    the other free columns.  ``reverse=True`` runs the elimination with the
    column order reversed; it spans the same space and exists for
    cross-checking.
    """
    if not isinstance(M, ExactMatrix):
        M = ExactMatrix(M)
    m, ncols = M.shape
    order = list(range(ncols))
    if reverse:
        order.reverse()
    if m == 0:
        rows, pivots = [], []
    else:
        rows, pivots = _echelon(_integer_rows(M.rows), order)
    pivot_cols = {c for _, c in pivots}
    free = [c for c in sorted(range(ncols), reverse=reverse) if c not in pivot_cols]
    basis = []
    for f in free:
        x = [ZERO] * ncols
        x[f] = as_q(1)
        # back substitution over the pivot rows, last pivot first
        for r, c in reversed(pivots):
            row = rows[r]
            s = ZERO
            for j in range(ncols):
                if j != c and row[j] and x[j]:
                    s += row[j] * x[j]
            x[c] = -s / row[c]
        basis.append(tuple(x))
    if reverse:
        basis.reverse()
    return basis


def rank(M) -> int:
    if not isinstance(M, ExactMatrix):
        M = ExactMatrix(M)
    return M.shape[1] - len(exact_nullspace(M))


def sparse_nullspace(columns: Sequence[dict]) -> list[dict]:
    """Kernel basis for a system given column-wise as ``{row_key: value}``.

    Returns sparse vectors ``{column_index: value}`` in reduced-echelon order
    (sorted by free column), identical to what :func:`exact_nullspace` would
    give on the assembled dense matrix with rows in any order.
    """
    ncols = len(columns)
    parent = list(range(ncols))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    owner: dict = {}
    for j, col in enumerate(columns):
        for key, v in col.items():
            if not v:
                continue
            if key in owner:
                ra, rb = find(owner[key]), find(j)
                if ra != rb:
                    parent[max(ra, rb)] = min(ra, rb)
            else:
                owner[key] = j
    blocks: dict[int, list[int]] = {}
    for j in range(ncols):
        blocks.setdefault(find(j), []).append(j)

    out = []
    for cols in blocks.values():
        row_keys = []
        seen = set()
        for j in cols:
            for key, v in columns[j].items():
                if v and key not in seen:
                    seen.add(key)
                    row_keys.append(key)
        if not row_keys:
            out.extend({j: as_q(1)} for j in cols)
            continue
        rindex = {k: i for i, k in enumerate(row_keys)}
        dense = [[ZERO] * len(cols) for _ in row_keys]
        for local, j in enumerate(cols):
            for key, v in columns[j].items():
                if v:
                    dense[rindex[key]][local] = as_q(v)
        for vec in exact_nullspace(ExactMatrix(dense, len(cols))):
            out.append({cols[i]: v for i, v in enumerate(vec) if v})
    # in reduced-echelon form a vector's free column is its largest index
    out.sort(key=lambda vec: max(vec))
    return out
