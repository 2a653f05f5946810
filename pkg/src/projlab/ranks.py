"""Local splitting rank over finitely many inner-product conditions.

A condition space collects the finitely many values the inner product takes on
a closure.  A partial type is a finite set of conditions <x, p_i> = value; it
is consistent exactly when some closure element realises it.  The rank of a
type counts nested splittings into ``split_width`` pairwise inconsistent
refinements, which is the finite-truncation reading of the classical local
rank; the width is an explicit parameter because "for every n" has no finite
meaning.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .closures import WeakClosure, bdd_subspace
from .hilbert import Scalar, Vec, inner
from .subspaces import project


@dataclass(frozen=True)
class DeltaTypeSpace:
    """Parameters, realized value set, and realized full types of a closure."""

    closure: WeakClosure
    parameters: tuple[Vec, ...]
    values: frozenset[Scalar]
    profiles: tuple[tuple[Scalar, ...], ...]  # realized parameter -> value rows


def delta_space(c: WeakClosure) -> DeltaTypeSpace:
    params = c.elements
    profiles = tuple(tuple(inner(e, p) for p in params) for e in c.elements)
    values = frozenset(v for row in profiles for v in row)
    return DeltaTypeSpace(c, params, values, profiles)


PartialType = dict[int, Scalar]  # parameter index -> required inner product


def realization_set(d: DeltaTypeSpace, q: PartialType) -> frozenset[int]:
    """Closure elements realising every condition of ``q``."""
    out = []
    for i, row in enumerate(d.profiles):
        if all(row[j] == v for j, v in q.items()):
            out.append(i)
    return frozenset(out)


def base_type(d: DeltaTypeSpace, base_index: int) -> PartialType:
    """The base element's conditions over its own bounded-closure domain.

    Ranks of types depend only on their base (parallel types share it), so this
    is the canonical representative used by the rank bridge.
    """
    c = d.closure
    dom = bdd_subspace(c, [base_index])
    in_dom = [j for j in range(len(c))
              if project(c.elements[j], dom).same(c.elements[j])]
    row = d.profiles[base_index]
    return {j: row[j] for j in in_dom}


def _definable_family(d: DeltaTypeSpace) -> list[frozenset[int]]:
    """All realization sets of partial types: intersections of coordinate sets."""
    universe = frozenset(range(len(d.closure)))
    coord_sets = set()
    for j in range(len(d.parameters)):
        for v in {row[j] for row in d.profiles}:
            coord_sets.add(frozenset(i for i, row in enumerate(d.profiles)
                                     if row[j] == v))
    family = {universe} | coord_sets
    frontier = set(family)
    while frontier:
        new = set()
        for s in frontier:
            for t in coord_sets:
                u = s & t
                if u and u not in family:
                    new.add(u)
        family |= new
        frontier = new
    return sorted(family, key=lambda s: (len(s), sorted(s)))


def shelah_rank(d: DeltaTypeSpace, q: PartialType, split_width: int,
                n_max: Optional[int] = None) -> int:
    """Largest rank certified by nested ``split_width``-fold splittings.

    Inconsistent types get the -1 sentinel.  The rank is monotone nondecreasing
    in branching and split width; callers comparing truncations should report
    it alongside both parameters.
    """
    if split_width < 2:
        raise ValueError("split_width must be at least 2")
    start = realization_set(d, q)
    if not start:
        return -1
    family = _definable_family(d)
    subsets: dict[frozenset, list[frozenset]] = {}
    ranks: dict[frozenset, int] = {}

    def rank(s: frozenset) -> int:
        if s in ranks:
            return ranks[s]
        cands = subsets.get(s)
        if cands is None:
            cands = [t for t in family if t < s]
            subsets[s] = cands
        ranked = sorted(((rank(t), t) for t in cands), reverse=True)
        best = 0
        thresholds = sorted({r for r, _ in ranked}, reverse=True)
        for alpha in thresholds:
            pool = [t for r, t in ranked if r >= alpha]
            if _has_disjoint(pool, split_width):
                best = alpha + 1
                break
        ranks[s] = best
        return best

    # family members are processed smallest first so recursion never loops
    for s in family:
        rank(s)
    value = rank(start)
    if n_max is not None:
        value = min(value, n_max)
    return value


def _has_disjoint(pool: list[frozenset], width: int) -> bool:
    """Exact search for ``width`` pairwise disjoint sets in the pool."""
    pool = sorted(pool, key=len)

    def go(idx: int, used: frozenset, left: int) -> bool:
        if left == 0:
            return True
        for k in range(idx, len(pool)):
            t = pool[k]
            if used & t:
                continue
            if go(k + 1, used | t, left - 1):
                return True
        return False

    return go(0, frozenset(), width)
