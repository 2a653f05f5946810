"""Finite truncations of layered equivalence-relation structures.

Four families are supported:

* ``refining``: level 0 is a single class covering everything; each class at
  level n splits into ``branching`` classes at level n+1, down to ``depth``.
  Every finest class holds ``leaf_multiplicity`` points.
* ``coarsening``: level 0 is equality (each point its own class); each class
  at level n+1 is the union of ``branching`` classes at level n.  The top
  level materialises ``branching`` classes, so every "infinitely many" of the
  idealised structure grows with the same knob.
* ``pure_set``: ``branching`` structureless atoms, each its own level-0 class.
* ``mixed_kernel``: ``class_count`` top classes A_1 .. A_m_max.  Inside A_m the
  relations refine ``branching``-fold at levels 2..m and stay constant after
  level m; each finest class holds ``class_size`` points.

Infinity is always truncated to a parameter; statements about infinite
behaviour are probed as growth in these parameters.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from itertools import product

FAMILIES = ("refining", "coarsening", "pure_set", "mixed_kernel")

#: Marker for "equivalent at every materialised level" / "never equivalent".
INFINITE = math.inf


@dataclass(frozen=True, order=True)
class PointId:
    """A point located by its index path down the class tree."""

    address: tuple[int, ...]


@dataclass(frozen=True, order=True)
class ClassId:
    """The equivalence class at ``level`` identified by an address prefix."""

    level: int
    path: tuple[int, ...]


@dataclass(frozen=True)
class LayeredStructure:
    family: str
    depth: int = 0
    branching: int = 2
    leaf_multiplicity: int = 1
    class_count: int = 0
    class_size: int = 1

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"unknown family {self.family!r}")
        if self.depth < 0 or self.branching < 2 or self.leaf_multiplicity < 1:
            raise ValueError("need depth >= 0, branching >= 2, leaf_multiplicity >= 1")
        if self.family == "coarsening" and self.leaf_multiplicity != 1:
            raise ValueError("coarsening classes at level 0 are singletons")
        if self.family == "pure_set" and self.depth != 0:
            raise ValueError("pure sets have depth 0")
        if self.family == "mixed_kernel":
            if self.class_count < 1 or self.class_size < 1:
                raise ValueError("mixed_kernel needs class_count >= 1, class_size >= 1")
        elif self.class_count or self.class_size != 1:
            raise ValueError("class_count/class_size apply to mixed_kernel only")


def refining(depth: int, branching: int, leaf_multiplicity: int = 1) -> LayeredStructure:
    return LayeredStructure("refining", depth, branching, leaf_multiplicity)


def coarsening(depth: int, branching: int) -> LayeredStructure:
    return LayeredStructure("coarsening", depth, branching)


def pure_set(size: int) -> LayeredStructure:
    return LayeredStructure("pure_set", 0, size)


def mixed_kernel(class_count: int, branching: int, class_size: int = 1) -> LayeredStructure:
    return LayeredStructure("mixed_kernel", 0, branching, 1, class_count, class_size)


_DESCRIPTOR_KEYS = {"family", "depth", "branching", "leaf_multiplicity",
                    "class_count", "class_size"}


def from_descriptor(desc: dict) -> LayeredStructure:
    """Build a structure from a JSON-style descriptor; unknown keys are rejected."""
    unknown = set(desc) - _DESCRIPTOR_KEYS
    if unknown:
        raise ValueError(f"unknown descriptor keys: {sorted(unknown)}")
    if "family" not in desc:
        raise ValueError("descriptor needs a 'family' key")
    kwargs = {k: desc[k] for k in _DESCRIPTOR_KEYS if k in desc}
    return LayeredStructure(**kwargs)


def to_descriptor(s: LayeredStructure) -> dict:
    desc = {"family": s.family, "depth": s.depth, "branching": s.branching,
            "leaf_multiplicity": s.leaf_multiplicity}
    if s.family == "mixed_kernel":
        desc["class_count"] = s.class_count
        desc["class_size"] = s.class_size
    return desc


# ---------------------------------------------------------------------------
# points and classes

@lru_cache(maxsize=None)
def enumerate_points(s: LayeredStructure) -> tuple[PointId, ...]:
    """All materialised points in lexicographic address order."""
    b, c = s.branching, s.leaf_multiplicity
    if s.family == "refining":
        body = product(range(b), repeat=s.depth)
        if c > 1:
            addrs = [t + (j,) for t in body for j in range(c)]
        else:
            addrs = list(body)
    elif s.family == "coarsening":
        addrs = [(t,) + rest for t in range(b)
                 for rest in product(range(b), repeat=s.depth)]
    elif s.family == "pure_set":
        addrs = [(i,) for i in range(b)]
    else:  # mixed_kernel
        addrs = []
        for m in range(1, s.class_count + 1):
            for rest in product(range(b), repeat=m - 1):
                if s.class_size > 1:
                    addrs.extend((m,) + rest + (j,) for j in range(s.class_size))
                else:
                    addrs.append((m,) + rest)
    return tuple(PointId(a) for a in sorted(addrs))


def _class_part(s: LayeredStructure, x: PointId) -> tuple[int, ...]:
    """Address with any leaf-multiplicity coordinate stripped."""
    a = x.address
    if s.family == "refining" and s.leaf_multiplicity > 1:
        return a[:-1]
    if s.family == "mixed_kernel" and s.class_size > 1:
        return a[:-1]
    return a


def mixed_depth(s: LayeredStructure, x: PointId) -> int:
    """Number of distinct relation levels on the top class containing x."""
    if s.family != "mixed_kernel":
        raise ValueError("mixed_depth applies to mixed_kernel structures")
    return x.address[0]


def class_of(s: LayeredStructure, x: PointId, level: int) -> ClassId:
    """The unique class at ``level`` containing ``x``."""
    part = _class_part(s, x)
    if s.family == "refining":
        if not 0 <= level <= s.depth:
            raise ValueError(f"level {level} out of range 0..{s.depth}")
        return ClassId(level, part[:level])
    if s.family == "coarsening":
        if not 0 <= level <= s.depth:
            raise ValueError(f"level {level} out of range 0..{s.depth}")
        return ClassId(level, part[: s.depth + 1 - level])
    if s.family == "pure_set":
        if level != 0:
            raise ValueError("pure sets only have level 0")
        return ClassId(0, part)
    # mixed_kernel: relations stay constant past the class's own depth
    if level < 1:
        raise ValueError("mixed_kernel levels start at 1")
    eff = min(level, part[0])
    return ClassId(eff, part[:eff])


def all_classes(s: LayeredStructure) -> tuple[ClassId, ...]:
    """Every materialised class, sorted by (level, path)."""
    out = set()
    if s.family == "mixed_kernel":
        for x in enumerate_points(s):
            part = _class_part(s, x)
            out.update(ClassId(k, part[:k]) for k in range(1, part[0] + 1))
    else:
        for x in enumerate_points(s):
            out.update(class_of(s, x, n) for n in range(s.depth + 1))
    return tuple(sorted(out))


def classes_at_level(s: LayeredStructure, level: int) -> tuple[ClassId, ...]:
    return tuple(c for c in all_classes(s) if c.level == level)


def common_level(s: LayeredStructure, x: PointId, y: PointId):
    """Where two points' class chains agree.

    Refining / mixed_kernel: the largest level at which x and y share a class,
    ``INFINITE`` when they share classes at every materialised level.
    Coarsening: the smallest such level (0 for x == y), ``INFINITE`` when the
    points are never equivalent.  Pure sets: 0 iff x == y.
    """
    px, py = _class_part(s, x), _class_part(s, y)
    shared = 0
    for a, b in zip(px, py):
        if a != b:
            break
        shared += 1
    if s.family == "refining":
        return INFINITE if px == py else shared
    if s.family == "coarsening":
        if x == y:
            return 0
        return INFINITE if shared == 0 else s.depth + 1 - shared
    if s.family == "pure_set":
        return 0 if x == y else INFINITE
    # mixed_kernel: levels count from 1; different top classes never meet
    if px[0] != py[0]:
        return 0
    return INFINITE if px == py else shared


# ---------------------------------------------------------------------------
# bounded closure

def bdd_basis(s: LayeredStructure, seeds) -> frozenset[ClassId]:
    """Class generators with small orbit once the seeds are fixed.

    Seeds may be ``PointId`` or ``ClassId`` values.  Refining and mixed_kernel
    keep the ancestor chain of every seed (plus the root, which nothing can
    move); coarsening keeps the coarsening chain above each seed; pure sets
    keep the seed atoms themselves.  The rule is a closure operator and is
    cross-checked against explicit orbit enumeration in the test suite.
    """
    out: set[ClassId] = set()
    for seed in seeds:
        if isinstance(seed, PointId):
            if seed not in enumerate_points(s):
                raise ValueError(f"seed point {seed} not in structure")
            part = _class_part(s, seed)
            if s.family == "refining":
                out.update(ClassId(k, part[:k]) for k in range(s.depth + 1))
            elif s.family == "coarsening":
                out.update(class_of(s, seed, n) for n in range(s.depth + 1))
            elif s.family == "pure_set":
                out.add(ClassId(0, part))
            else:
                out.update(ClassId(k, part[:k]) for k in range(1, part[0] + 1))
        elif isinstance(seed, ClassId):
            if seed not in all_classes(s):
                raise ValueError(f"seed class {seed} not in structure")
            if s.family == "refining":
                out.update(ClassId(k, seed.path[:k]) for k in range(seed.level + 1))
            elif s.family == "coarsening":
                out.update(ClassId(k, seed.path[: s.depth + 1 - k])
                           for k in range(seed.level, s.depth + 1))
            elif s.family == "pure_set":
                out.add(seed)
            else:
                out.update(ClassId(k, seed.path[:k]) for k in range(1, seed.level + 1))
        else:
            raise TypeError(f"seed must be PointId or ClassId, got {type(seed)}")
    if s.family == "refining":
        out.add(ClassId(0, ()))
    return frozenset(out)
