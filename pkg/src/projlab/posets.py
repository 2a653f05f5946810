"""Finite strict partial orders and their foundation ranks."""

from __future__ import annotations

from dataclasses import dataclass


class CycleError(ValueError):
    pass


class Poset:
    """Strict order on 0..n-1, stored as (lower, upper) pairs, transitively closed."""

    def __init__(self, size: int, pairs, labels=None):
        self.size = size
        self.labels = list(labels) if labels is not None else [str(i) for i in range(size)]
        below = {i: set() for i in range(size)}  # below[u] = strict predecessors of u
        for lo, hi in pairs:
            below[hi].add(lo)
        changed = True
        while changed:
            changed = False
            for u in range(size):
                extra = set()
                for v in below[u]:
                    extra |= below[v]
                if not extra <= below[u]:
                    below[u] |= extra
                    changed = True
        for u in range(size):
            if u in below[u]:
                raise CycleError(f"element {self.labels[u]} is strictly below itself")
        self.below = {u: frozenset(vs) for u, vs in below.items()}
        self.pairs = frozenset((lo, u) for u in range(size) for lo in below[u])

    def predecessors(self, u: int) -> frozenset[int]:
        return self.below[u]

    def transpose(self) -> "Poset":
        return Poset(self.size, [(hi, lo) for lo, hi in self.pairs], self.labels)

    def __repr__(self):
        return f"Poset(size={self.size}, strict_pairs={len(self.pairs)})"


@dataclass(frozen=True)
class RankMap:
    ranks: tuple[int, ...]
    top: int


def foundation_rank(p: Poset) -> RankMap:
    """rank(x) = 0 for minimal x, otherwise 1 + max rank of strict predecessors."""
    ranks: dict[int, int] = {}

    def rank(u: int) -> int:
        if u not in ranks:
            preds = p.predecessors(u)
            ranks[u] = 1 + max(rank(v) for v in preds) if preds else 0
        return ranks[u]

    for u in range(p.size):
        rank(u)
    values = tuple(ranks[u] for u in range(p.size))
    return RankMap(values, max(values, default=0))


def chain_probe(p: Poset) -> int:
    """Number of elements in the longest strict chain (1 for a nonempty antichain)."""
    if p.size == 0:
        return 0
    return foundation_rank(p).top + 1
