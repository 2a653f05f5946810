"""Finitely spanned subspaces with exact orthogonal projection.

Projections are computed from Gram data alone (normal equations), never from
an orthonormalised basis, so everything stays inside the rational field.  Any
particular solution of a singular system is accepted; the projected vector is
the same for all of them.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from . import linalg
from .hilbert import InnerSpace, Scalar, Vec, gram, inner, zero_vec


class Subspace:
    """A subspace given by a spanning list; Gram and rank cached at build time.

    ``gen_set`` marks spans of plain generator vectors, which admit a fast
    coefficient-restriction projection in free spaces.
    """

    def __init__(self, space: InnerSpace, spanning: tuple[Vec, ...],
                 gen_set: Optional[frozenset[int]] = None):
        for v in spanning:
            if v.space is not space:
                raise ValueError("spanning vectors live in a different space")
        self.space = space
        self.spanning = spanning
        self.gram = gram(list(spanning))
        self.rank = linalg.matrix_rank(self.gram)
        self.gen_set = gen_set

    def __repr__(self):
        return f"Subspace(rank={self.rank}, spanned_by={len(self.spanning)})"


def span(space: InnerSpace, vs) -> Subspace:
    return Subspace(space, tuple(vs))


def generator_span(space: InnerSpace, gen_ids) -> Subspace:
    """Span of unit generator vectors, remembered for fast projection."""
    idxs = sorted(space.index[g] for g in gen_ids)
    vecs = tuple(Vec(space, {i: Fraction(1)}) for i in idxs)
    return Subspace(space, vecs, gen_set=frozenset(idxs))


def project(v: Vec, sub: Subspace) -> Vec:
    """Exact orthogonal projection of ``v`` onto ``sub``."""
    if v.space is not sub.space:
        raise ValueError("vector and subspace live in different spaces")
    if not sub.spanning:
        return zero_vec(v.space)
    if sub.gen_set is not None and v.space.is_free:
        return Vec(v.space, {i: c for i, c in v.coeffs.items() if i in sub.gen_set})
    rhs = [inner(v, s) for s in sub.spanning]
    sol = linalg.solve(self_adjoint_rows(sub), rhs)
    if sol is None:
        raise ArithmeticError("normal equations inconsistent for an in-space vector")
    out = zero_vec(v.space)
    for c, s in zip(sol, sub.spanning):
        if c:
            out = out + s.scale(c)
    return out


def self_adjoint_rows(sub: Subspace) -> list[list[Scalar]]:
    return [list(row) for row in sub.gram]


def residual(v: Vec, sub: Subspace) -> Vec:
    return v - project(v, sub)


def intersect(a: Subspace, b: Subspace) -> Subspace:
    """Exact basis of the intersection, computed by rational elimination.

    Works in the quotient by null vectors: two formal combinations count as
    the same vector exactly when their difference has norm zero.
    """
    if a.space is not b.space:
        raise ValueError("subspaces live in different spaces")
    space = a.space
    if a.gen_set is not None and b.gen_set is not None and space.is_free:
        from .hilbert import Vec as _V
        common = sorted(a.gen_set & b.gen_set)
        vecs = tuple(_V(space, {i: Fraction(1)}) for i in common)
        return Subspace(space, vecs, gen_set=frozenset(common))
    if not a.spanning or not b.spanning:
        return Subspace(space, ())
    # pairing of each candidate combination against every generator must agree
    cols = []
    for s in a.spanning:
        cols.append(_generator_pairings(s))
    for s in b.spanning:
        cols.append([-x for x in _generator_pairings(s)])
    rows = [[cols[c][r] for c in range(len(cols))] for r in range(space.dim)]
    basis = linalg.nullspace(rows, len(cols))
    vecs = []
    for combo in basis:
        v = zero_vec(space)
        for c, s in zip(combo[: len(a.spanning)], a.spanning):
            if c:
                v = v + s.scale(c)
        if not v.is_zero():
            vecs.append(v)
    return Subspace(space, tuple(vecs))


def _generator_pairings(v: Vec) -> list[Scalar]:
    space = v.space
    if space.is_free:
        return [v.coeffs.get(i, Fraction(0)) for i in range(space.dim)]
    return [sum((c * space.gram_entry(i, j) for j, c in v.coeffs.items()), Fraction(0))
            for i in range(space.dim)]


@dataclass
class AlternateResult:
    """Trace of an alternating-projection run plus its termination status."""

    trace: list[Vec]
    fixed: bool
    steps: Optional[int]  # index where the trace first becomes constant


def alternate(v: Vec, a: Subspace, b: Subspace, max_iter: int = 64) -> AlternateResult:
    """Iterate v, P_B v, P_A P_B v, ... with exact fixed-point detection.

    Stops once two successive projections leave the vector unchanged, which is
    sound because equality is exact.  Otherwise reports non-convergence after
    ``max_iter`` round trips.
    """
    if max_iter < 1:
        raise ValueError("max_iter must be at least 1")
    if v.space is not a.space or a.space is not b.space:
        raise ValueError("vector and subspaces must share one space")
    trace = [v]
    cur = v
    unchanged = 0
    for it in range(2 * max_iter):
        nxt = project(cur, b if it % 2 == 0 else a)
        trace.append(nxt)
        unchanged = unchanged + 1 if nxt.same(cur) else 0
        cur = nxt
        if unchanged >= 2:
            first = len(trace) - 1
            while first > 0 and trace[first - 1].same(cur):
                first -= 1
            return AlternateResult(trace, True, first)
    return AlternateResult(trace, False, None)


@dataclass
class CommuteReport:
    holds: bool
    failures: list  # (test Vec, P_B P_A v, P_A P_B v, P_{A and B} v)


def commute_check(a: Subspace, b: Subspace, tests: list[Vec],
                  meet: Optional[Subspace] = None) -> CommuteReport:
    """Check P_B P_A v == P_A P_B v == P_{A cap B} v exactly on each test vector."""
    if a.space is not b.space:
        raise ValueError("subspaces live in different spaces")
    if meet is None:
        meet = intersect(a, b)
    failures = []
    for v in tests:
        ba = project(project(v, a), b)
        ab = project(project(v, b), a)
        mid = project(v, meet)
        if not (ba.same(ab) and ab.same(mid)):
            failures.append((v, ba, ab, mid))
    return CommuteReport(not failures, failures)
