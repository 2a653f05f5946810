"""Weak closures of type-definable vector families, with their partial orders.

A closure holds the finitely many vectors reachable as weak limits inside a
truncated structure: embedded points plus their truncations (refining), tails
(coarsening), subset sums (a designated atom sequence in a pure set), or class
limit vectors plus zero (mixed_kernel).  Each element carries a provenance tag
and a seed set from which its bounded-closure subspace is generated.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from typing import Optional

from .hilbert import (
    InnerSpace,
    Vec,
    class_gen,
    embed,
    inner,
    kernel_point,
    structure_space,
    zero_vec,
)
from .posets import Poset
from .structures import (
    ClassId,
    LayeredStructure,
    PointId,
    all_classes,
    bdd_basis,
    class_of,
    classes_at_level,
    enumerate_points,
)
from .subspaces import Subspace, generator_span, project

KINDS = ("points", "subset_sum", "piece")


@dataclass(frozen=True)
class TypeDef:
    """Which family of vectors a closure is built from."""

    structure: LayeredStructure
    kind: str
    prefix_len: int = 0  # subset_sum: number of designated atoms

    def __post_init__(self):
        fam = self.structure.family
        if self.kind == "points" and fam == "mixed_kernel":
            raise ValueError("use kind='piece' for mixed_kernel structures")
        if self.kind == "subset_sum":
            if fam != "pure_set":
                raise ValueError("subset sums need a pure_set structure")
            if not 1 <= self.prefix_len <= self.structure.branching:
                raise ValueError("prefix_len out of range")
        if self.kind == "piece" and fam != "mixed_kernel":
            raise ValueError("kind='piece' needs a mixed_kernel structure")
        if self.kind not in KINDS:
            raise ValueError(f"unknown kind {self.kind!r}")


def points_type(s: LayeredStructure) -> TypeDef:
    return TypeDef(s, "points")


def subset_sum_type(s: LayeredStructure, prefix_len: int) -> TypeDef:
    return TypeDef(s, "subset_sum", prefix_len)


def piece_type(s: LayeredStructure) -> TypeDef:
    return TypeDef(s, "piece")


@dataclass(frozen=True, order=True)
class ElementTag:
    """Provenance of a closure element.

    kinds: ``full_point`` (an embedded point), ``trunc`` (partial sum of a
    point's class chain up to ``level``), ``tail`` (sum from ``level`` up),
    ``subset`` (subset sum with support in ``address``), ``zero``.
    """

    kind: str
    level: int
    address: tuple[int, ...]

    def render(self) -> str:
        addr = ".".join(map(str, self.address))
        if self.kind == "full_point":
            return f"full_point[{addr}]"
        if self.kind == "trunc":
            return f"trunc@{self.level}[{addr}]"
        if self.kind == "tail":
            return f"tail@{self.level}[{addr}]"
        if self.kind == "subset":
            return f"subset{{{','.join(map(str, self.address))}}}"
        return "zero"

    def shape(self) -> str:
        """Parameter-independent shape key, used to match elements across truncations."""
        if self.kind == "subset":
            return f"subset#{len(self.address)}"
        if self.kind in ("trunc", "tail"):
            return f"{self.kind}@{self.level}"
        return self.kind


_TAG_ORDER = {"zero": 0, "trunc": 1, "tail": 1, "subset": 1, "full_point": 2}


class WeakClosure:
    """The closure's element list (pairwise distinct vectors) with provenance."""

    def __init__(self, typedef: TypeDef, space: InnerSpace,
                 elements: list[Vec], tags: list[ElementTag]):
        self.typedef = typedef
        self.space = space
        order = sorted(range(len(tags)),
                       key=lambda i: (_TAG_ORDER[tags[i].kind], tags[i].level,
                                      len(tags[i].address), tags[i].address))
        self.elements = tuple(elements[i] for i in order)
        self.tags = tuple(tags[i] for i in order)

    def __len__(self):
        return len(self.elements)

    def find(self, v: Vec) -> Optional[int]:
        """Index of the closure element equal (as a vector) to ``v``, else None."""
        for i, e in enumerate(self.elements):
            if e.same(v):
                return i
        return None

    def realization_indices(self) -> list[int]:
        """Indices of elements that realise the defining type."""
        return [i for i, t in enumerate(self.tags) if t.kind in ("full_point", "subset")
                and (t.kind != "subset" or len(t.address) == self.typedef.prefix_len)]

    def labels(self) -> list[str]:
        return [t.render() for t in self.tags]


class ClosureMembershipError(RuntimeError):
    """A projection left the closure: surfaced rather than swallowed."""


def _dedupe(pairs):
    seen: list[tuple[ElementTag, Vec]] = []
    for tag, v in pairs:
        if not any(v.same(w) for _, w in seen):
            seen.append((tag, v))
    return seen


def weak_closure(td: TypeDef) -> WeakClosure:
    """Materialise the closure of a type definition at its truncation."""
    s = td.structure
    space = structure_space(s)
    items: list[tuple[ElementTag, Vec]] = []
    if td.kind == "points" and s.family == "refining":
        for m in range(s.depth):
            for c in classes_at_level(s, m):
                coeffs = {class_gen(ClassId(k, c.path[:k])): Fraction(1, 2 ** k)
                          for k in range(m + 1)}
                items.append((ElementTag("trunc", m, c.path),
                              Vec.from_generators(space, coeffs)))
        for x in enumerate_points(s):
            items.append((ElementTag("full_point", s.depth, x.address), embed(s, x)))
    elif td.kind == "points" and s.family == "coarsening":
        for x in enumerate_points(s):
            items.append((ElementTag("full_point", 0, x.address), embed(s, x)))
        for m in range(1, s.depth + 1):
            for c in classes_at_level(s, m):
                coeffs = {class_gen(ClassId(k, c.path[: s.depth + 1 - k])):
                          Fraction(1, 2 ** k) for k in range(m, s.depth + 1)}
                items.append((ElementTag("tail", m, c.path),
                              Vec.from_generators(space, coeffs)))
    elif td.kind == "points" and s.family == "pure_set":
        for x in enumerate_points(s):
            items.append((ElementTag("full_point", 0, x.address), embed(s, x)))
    elif td.kind == "subset_sum":
        atoms = enumerate_points(s)[: td.prefix_len]
        supports = []
        for r in range(td.prefix_len + 1):
            supports.extend(combinations(range(td.prefix_len), r))
        for sup in supports:
            v = zero_vec(space)
            for n in sup:
                v = v + embed(s, atoms[n]).scale(Fraction(1, 2 ** n))
            items.append((ElementTag("subset", 0, tuple(sup)), v))
    else:  # piece over mixed_kernel
        items.append((ElementTag("zero", 0, ()), zero_vec(space)))
        for c in all_classes(s):
            m = c.path[0]
            v = Vec.from_generators(space, {class_gen(c): Fraction(1)})
            if c.level == m:
                items.append((ElementTag("full_point", m, c.path), v))
            else:
                items.append((ElementTag("trunc", c.level, c.path), v))
    items = _dedupe(items)
    return WeakClosure(td, space, [v for _, v in items], [t for t, _ in items])


# ---------------------------------------------------------------------------
# bounded-closure subspaces

def element_seeds(td: TypeDef, tag: ElementTag) -> frozenset:
    """Structure seeds whose bounded closure supports this element."""
    s = td.structure
    if tag.kind == "zero":
        return frozenset()
    if tag.kind == "subset":
        atoms = enumerate_points(s)
        return frozenset(ClassId(0, atoms[n].address) for n in tag.address)
    if tag.kind == "full_point":
        if s.family == "pure_set":
            return frozenset({ClassId(0, tag.address)})
        if s.family == "mixed_kernel":
            return frozenset({ClassId(tag.level, tag.address)})
        return frozenset({PointId(tag.address)})
    # trunc and tail carry the class they stem from
    return frozenset({ClassId(tag.level, tag.address)})


def _class_generator(s: LayeredStructure, cl: ClassId):
    """Generator carrying a class: the atom itself for pure-set singletons."""
    if s.family == "pure_set":
        from .hilbert import atom_gen
        return atom_gen(PointId(cl.path))
    return class_gen(cl)


def bdd_subspace(c: WeakClosure, element_indices) -> Subspace:
    """Span of the bounded-closure generators of the given elements' seeds."""
    seeds: set = set()
    for i in element_indices:
        seeds |= element_seeds(c.typedef, c.tags[i])
    s = c.typedef.structure
    basis = bdd_basis(s, seeds)
    return generator_span(c.space, sorted(_class_generator(s, cl) for cl in basis))


def subspace_family(c: WeakClosure, max_seeds: int = 2,
                    include_empty: bool = True) -> list[tuple[str, Subspace]]:
    """Deduplicated bounded-closure subspaces from seed sets of bounded size."""
    combos: list[tuple[str, tuple[int, ...]]] = []
    if include_empty:
        combos.append(("bdd()", ()))
    idxs = range(len(c))
    for r in range(1, max_seeds + 1):
        for sel in combinations(idxs, r):
            key = "bdd(" + ",".join(c.tags[i].render() for i in sel) + ")"
            combos.append((key, sel))
    out: list[tuple[str, Subspace]] = []
    seen: dict[frozenset, int] = {}
    for key, sel in combos:
        sub = bdd_subspace(c, sel)
        mark = sub.gen_set
        if mark in seen:
            continue
        seen[mark] = len(out)
        out.append((key, sub))
    return out


# ---------------------------------------------------------------------------
# canonical bases and orders

def canonical_base(c: WeakClosure, a: Vec, sub: Subspace) -> tuple[int, Vec]:
    """Project ``a`` onto a bounded-closure subspace and locate it in the closure.

    The projection is the unique vector inside the subspace whose inner
    products against the subspace agree with ``a``.  If it is not a closure
    element the modelling is broken, so the error is surfaced.
    """
    p = project(a, sub)
    idx = c.find(p)
    if idx is None:
        raise ClosureMembershipError(
            f"projection {p!r} is not a closure element")
    return idx, c.elements[idx]


def _single_seed_family(c: WeakClosure) -> list[Subspace]:
    subs = [bdd_subspace(c, [i]) for i in range(len(c))]
    subs.append(bdd_subspace(c, []))
    seen: set = set()
    out = []
    for sub in subs:
        if sub.gen_set not in seen:
            seen.add(sub.gen_set)
            out.append(sub)
    return out


def projection_order(c: WeakClosure) -> Poset:
    """Strict order: v below u when a chain of bounded projections maps u to v.

    Breadth-first search over single-seed bounded subspaces; compositions are
    paths, so the transitive closure of direct projection steps is the full
    reachability order.  Every strict step strictly decreases the norm.
    """
    fam = _single_seed_family(c)
    direct: set[tuple[int, int]] = set()
    for i, v in enumerate(c.elements):
        for sub in fam:
            p = project(v, sub)
            if p.same(v):
                continue
            j = c.find(p)
            if j is None:
                if p.is_zero():
                    continue  # zero is only a closure element in some families
                raise ClosureMembershipError(
                    f"projection of {c.tags[i].render()} left the closure")
            direct.add((j, i))
    return Poset(len(c), direct, c.labels())


def forking_order(c: WeakClosure) -> Poset:
    """Strict order generated by single forking steps.

    The generating relation holds for (b, c0) when projecting b onto the
    bounded closure of c0 gives exactly c0; the pair is oriented with b below,
    making the result the exact transpose of :func:`projection_order`.
    """
    subs = [bdd_subspace(c, [j]) for j in range(len(c))]
    pairs = set()
    for i, b in enumerate(c.elements):
        for j in range(len(c)):
            if i == j:
                continue
            if project(b, subs[j]).same(c.elements[j]):
                pairs.add((i, j))
    return Poset(len(c), pairs, c.labels())


def link_step(c: WeakClosure, i: int, j: int) -> bool:
    """Single forking step predicate: element j is the base of element i's type."""
    return project(c.elements[i], bdd_subspace(c, [j])).same(c.elements[j])


def nonforking_restriction(r1: tuple[Vec, Subspace], r2: tuple[Vec, Subspace]) -> bool:
    """Whether r1's global type restricted to r2's domain is exactly r2.

    Each type is given by its base vector and bounded-closure domain; the base
    must lie inside its domain.
    """
    for base, dom in (r1, r2):
        if not project(base, dom).same(base):
            raise ValueError("type base does not lie in its domain")
    b1, _ = r1
    b2, dom2 = r2
    return project(b1, dom2).same(b2)


def forking_rank(c: WeakClosure, a: Vec, sub: Subspace,
                 order: Optional[Poset] = None) -> int:
    """Rank of a vector's type over a bounded-closure domain.

    Equals the foundation rank of the type's base in the forking order, i.e.
    the longest chain of strictly more informative bases above it.
    """
    from .posets import foundation_rank
    idx, _ = canonical_base(c, a, sub)
    if order is None:
        order = forking_order(c)
    return foundation_rank(order).ranks[idx]


# ---------------------------------------------------------------------------
# symbolic weak limits

def weak_limit(c: WeakClosure, spec: dict) -> Vec:
    """Limit vector of an idealised sequence described by ``spec``.

    Forms: ``{"kind": "constant", "index": i}`` for a constant sequence;
    ``{"kind": "class_spread", "class_path": [...], "level": m}`` for points of
    one class that pairwise share exactly that class; ``{"kind":
    "distinct_atoms"}`` for a sequence of distinct pure-set atoms.  The limit
    keeps the part of the embedding every sequence member shares and drops the
    coordinates that move.
    """
    s = c.typedef.structure
    kind = spec.get("kind")
    if kind == "constant":
        return c.elements[spec["index"]]
    if kind == "distinct_atoms":
        if s.family != "pure_set":
            raise ValueError("distinct_atoms needs a pure_set structure")
        return zero_vec(c.space)
    if kind != "class_spread":
        raise ValueError(f"unknown weak-limit specification {kind!r}")
    level = spec["level"]
    path = tuple(spec["class_path"])
    cls = ClassId(level, path)
    if cls not in all_classes(s):
        raise ValueError(f"{cls} is not a class of the structure")
    if s.family == "refining":
        coeffs = {class_gen(ClassId(k, path[:k])): Fraction(1, 2 ** k)
                  for k in range(level + 1)}
        return Vec.from_generators(c.space, coeffs)
    if s.family == "coarsening":
        coeffs = {class_gen(ClassId(k, path[: s.depth + 1 - k])): Fraction(1, 2 ** k)
                  for k in range(level, s.depth + 1)}
        return Vec.from_generators(c.space, coeffs)
    if s.family == "mixed_kernel":
        return Vec.from_generators(c.space, {class_gen(cls): Fraction(1)})
    raise ValueError("class_spread does not apply to pure sets")


def realizations(c: WeakClosure) -> list[Vec]:
    return [c.elements[i] for i in c.realization_indices()]
