"""Exact linear algebra over rationals: elimination, nullspaces, PSD certification.

All routines take and return ``fractions.Fraction`` entries and never leave the
rational field, so every verdict they produce is exact.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Optional

ZERO = Fraction(0)
ONE = Fraction(1)

Matrix = list[list[Fraction]]
Vector = list[Fraction]


def solve(a: Matrix, b: Vector) -> Optional[Vector]:
    """Solve a x = b exactly; return one particular solution or None if inconsistent.

    Free variables are set to zero, so the answer is deterministic.
    """
    if not a:
        return [] if all(x == 0 for x in b) else None
    rows = [list(row) + [b[i]] for i, row in enumerate(a)]
    n_rows, n_cols = len(rows), len(a[0])
    pivot_cols = []
    r = 0
    for c in range(n_cols):
        piv = next((i for i in range(r, n_rows) if rows[i][c] != 0), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = ONE / rows[r][c]
        rows[r] = [x * inv for x in rows[r]]
        for i in range(n_rows):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        pivot_cols.append(c)
        r += 1
        if r == n_rows:
            break
    for i in range(r, n_rows):
        if rows[i][n_cols] != 0:
            return None
    sol = [ZERO] * n_cols
    for i, c in enumerate(pivot_cols):
        sol[c] = rows[i][n_cols]
    return sol


def nullspace(a: Matrix, n_cols: Optional[int] = None) -> list[Vector]:
    """Basis of {x : a x = 0}, deterministic (free variables set one at a time)."""
    if not a:
        return [] if not n_cols else [
            [ONE if j == i else ZERO for j in range(n_cols)] for i in range(n_cols)
        ]
    n_cols = len(a[0])
    rows = [list(row) for row in a]
    n_rows = len(rows)
    pivot_cols = []
    r = 0
    for c in range(n_cols):
        piv = next((i for i in range(r, n_rows) if rows[i][c] != 0), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = ONE / rows[r][c]
        rows[r] = [x * inv for x in rows[r]]
        for i in range(n_rows):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        pivot_cols.append(c)
        r += 1
        if r == n_rows:
            break
    free_cols = [c for c in range(n_cols) if c not in pivot_cols]
    basis = []
    for fc in free_cols:
        v = [ZERO] * n_cols
        v[fc] = ONE
        for i, pc in enumerate(pivot_cols):
            v[pc] = -rows[i][fc]
        basis.append(v)
    return basis


def matrix_rank(a: Matrix) -> int:
    if not a:
        return 0
    n_cols = len(a[0])
    return n_cols - len(nullspace(a, n_cols))


class PsdVerdict:
    """Outcome of an exact LDL^T check with symmetric pivoting.

    ``pivots`` lists the nonnegative pivots encountered (padded with zeros for
    rank deficiency); on failure ``witness`` holds coefficients w with
    w^T G w = ``witness_value`` < 0.
    """

    def __init__(self, is_psd: bool, pivots: Vector, witness: Optional[Vector],
                 witness_value: Optional[Fraction]):
        self.is_psd = is_psd
        self.pivots = pivots
        self.witness = witness
        self.witness_value = witness_value

    def __bool__(self) -> bool:
        return self.is_psd

    def __repr__(self):
        return "PSD" if self.is_psd else f"NotPSD(value={self.witness_value})"


def ldlt_psd(g: Matrix) -> PsdVerdict:
    """Certify positive semidefiniteness of a symmetric rational matrix.

    Pivots on the largest remaining diagonal entry. A zero pivot forces the
    whole remaining block to vanish; any surviving off-diagonal entry yields an
    explicit witness of indefiniteness.
    """
    n = len(g)
    for i in range(n):
        for j in range(i + 1, n):
            if g[i][j] != g[j][i]:
                raise ValueError("matrix is not symmetric")
    r = [list(row) for row in g]
    # basis[i] tracks the congruence transform, so r[i][j] == basis[i]^T G basis[j]
    basis = [[ONE if j == i else ZERO for j in range(n)] for i in range(n)]
    remaining = list(range(n))
    pivots: Vector = []
    while remaining:
        neg = [i for i in remaining if r[i][i] < 0]
        if neg:
            i = neg[0]
            return PsdVerdict(False, pivots, basis[i], r[i][i])
        pos = [i for i in remaining if r[i][i] > 0]
        if not pos:
            # all remaining diagonals are zero: the block must vanish entirely
            for i in remaining:
                for j in remaining:
                    if i != j and r[i][j] != 0:
                        t = -(r[j][j] + 1) / (2 * r[i][j])
                        w = [t * basis[i][k] + basis[j][k] for k in range(n)]
                        val = r[j][j] + 2 * t * r[i][j]
                        return PsdVerdict(False, pivots, w, val)
            pivots.extend(ZERO for _ in remaining)
            return PsdVerdict(True, pivots, None, None)
        best = max(r[i][i] for i in pos)
        k = min(i for i in pos if r[i][i] == best)
        d = r[k][k]
        pivots.append(d)
        remaining.remove(k)
        factors = {i: r[i][k] / d for i in remaining if r[i][k] != 0}
        for i, f in factors.items():
            basis[i] = [x - f * y for x, y in zip(basis[i], basis[k])]
        for i in remaining:
            fi = factors.get(i)
            if fi is None:
                continue
            for j in remaining:
                r[i][j] -= fi * r[k][j]
        for i in remaining:
            fi = factors.get(i)
            if fi is None:
                continue
            for j in remaining:
                r[j][i] = r[i][j]
    return PsdVerdict(True, pivots, None, None)
