"""Exact-rational inner-product spaces presented by generators and a Gram matrix.

Free spaces carry an implicit identity Gram.  The mixed_kernel family gets a
space whose generators are its classes, with inner products equal to the exact
limits of the structure's similarity kernel; the embedded points are the
finest-class generators, so their pairwise Gram matrix is exactly the kernel.
Vectors are sparse rational coefficient maps and all arithmetic is exact.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Optional, Union

from . import linalg
from .structures import (
    INFINITE,
    ClassId,
    LayeredStructure,
    PointId,
    all_classes,
    class_of,
    common_level,
    enumerate_points,
)

Scalar = Fraction


@dataclass(frozen=True, order=True)
class GeneratorId:
    """Label of one generator: a class, a lone atom, or a formal symbol."""

    kind: str  # "class" | "atom" | "formal"
    key: tuple

    def label(self) -> str:
        if self.kind == "class":
            level, path = self.key
            return f"c{level}[{'.'.join(map(str, path))}]"
        if self.kind == "atom":
            return f"a[{'.'.join(map(str, self.key))}]"
        return str(self.key[0])


def class_gen(c: ClassId) -> GeneratorId:
    return GeneratorId("class", (c.level, c.path))


def atom_gen(p: PointId) -> GeneratorId:
    return GeneratorId("atom", p.address)


def formal_gen(name: str) -> GeneratorId:
    return GeneratorId("formal", (name,))


class InnerSpace:
    """Generators plus a symmetric PSD Gram matrix, certified on construction."""

    def __init__(self, generators: tuple[GeneratorId, ...],
                 gram: Optional[tuple[tuple[Scalar, ...], ...]] = None):
        if len(set(generators)) != len(generators):
            raise ValueError("generator labels must be unique")
        self.generators = generators
        self.index = {g: i for i, g in enumerate(generators)}
        self.is_free = gram is None
        self._gram = gram
        if gram is not None:
            verdict = linalg.ldlt_psd([list(row) for row in gram])
            if not verdict:
                raise ValueError(f"Gram matrix is not positive semidefinite: {verdict}")

    @property
    def dim(self) -> int:
        return len(self.generators)

    def gram_entry(self, i: int, j: int) -> Scalar:
        if self.is_free:
            return Fraction(int(i == j))
        return self._gram[i][j]

    def __repr__(self):
        kind = "free" if self.is_free else "gram"
        return f"InnerSpace({kind}, dim={self.dim})"


def free_space(generators) -> InnerSpace:
    return InnerSpace(tuple(generators))


def gram_space(generators, gram) -> InnerSpace:
    return InnerSpace(tuple(generators),
                      tuple(tuple(Fraction(x) for x in row) for row in gram))


class Vec:
    """Sparse rational vector over a space's generators; zero entries dropped."""

    __slots__ = ("space", "coeffs")

    def __init__(self, space: InnerSpace, coeffs: dict[int, Scalar]):
        self.space = space
        self.coeffs = {i: c for i, c in coeffs.items() if c != 0}

    @classmethod
    def from_generators(cls, space: InnerSpace, mapping: dict[GeneratorId, Scalar]) -> "Vec":
        return cls(space, {space.index[g]: Fraction(c) for g, c in mapping.items()})

    def coeff(self, g: GeneratorId) -> Scalar:
        return self.coeffs.get(self.space.index[g], Fraction(0))

    def by_generator(self) -> dict[GeneratorId, Scalar]:
        return {self.space.generators[i]: c for i, c in sorted(self.coeffs.items())}

    def __add__(self, other: "Vec") -> "Vec":
        _check_space(self, other)
        out = dict(self.coeffs)
        for i, c in other.coeffs.items():
            out[i] = out.get(i, Fraction(0)) + c
        return Vec(self.space, out)

    def __sub__(self, other: "Vec") -> "Vec":
        return self + other.scale(Fraction(-1))

    def scale(self, c) -> "Vec":
        c = Fraction(c)
        return Vec(self.space, {i: c * v for i, v in self.coeffs.items()})

    def is_zero(self) -> bool:
        return norm_sq(self) == 0

    def same(self, other: "Vec") -> bool:
        """Equality as space vectors: the difference has norm zero."""
        _check_space(self, other)
        if self.space.is_free:
            return self.coeffs == other.coeffs
        return (self - other).is_zero()

    def __repr__(self):
        terms = ", ".join(f"{g.label()}: {c}" for g, c in self.by_generator().items())
        return f"Vec({terms or '0'})"


def zero_vec(space: InnerSpace) -> Vec:
    return Vec(space, {})


def _check_space(u: Vec, v: Vec):
    if u.space is not v.space:
        raise ValueError("vectors live in different spaces")


def inner(u: Vec, v: Vec) -> Scalar:
    """Exact inner product u^T G v through the space's Gram form."""
    _check_space(u, v)
    if u.space.is_free:
        if len(v.coeffs) < len(u.coeffs):
            u, v = v, u
        return sum((c * v.coeffs[i] for i, c in u.coeffs.items() if i in v.coeffs),
                   Fraction(0))
    total = Fraction(0)
    for i, ci in u.coeffs.items():
        for j, cj in v.coeffs.items():
            g = u.space.gram_entry(i, j)
            if g:
                total += ci * cj * g
    return total


def norm_sq(v: Vec) -> Scalar:
    return inner(v, v)


def gram(vs: list[Vec]) -> list[list[Scalar]]:
    """Exact symmetric matrix of pairwise inner products."""
    n = len(vs)
    out = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        for j in range(i, n):
            val = inner(vs[i], vs[j])
            out[i][j] = val
            out[j][i] = val
    return out


def psd_check(g: list[list[Scalar]]) -> linalg.PsdVerdict:
    return linalg.ldlt_psd([list(row) for row in g])


# ---------------------------------------------------------------------------
# spaces and embeddings for the structure families

@lru_cache(maxsize=None)
def structure_space(s: LayeredStructure) -> InnerSpace:
    """The inner-product space a structure's vectors live in.

    Refining/coarsening: free space on all classes.  Pure sets: free space on
    the atoms.  mixed_kernel: one generator per class with the exact limit
    kernel as Gram data (see :func:`kernel_level_values`).
    """
    if s.family == "pure_set":
        return free_space(atom_gen(x) for x in enumerate_points(s))
    if s.family in ("refining", "coarsening"):
        return free_space(class_gen(c) for c in all_classes(s))
    classes = all_classes(s)
    gens = [class_gen(c) for c in classes]
    g = []
    for ci in classes:
        row = []
        for cj in classes:
            row.append(_kernel_class_inner(ci, cj))
        g.append(tuple(row))
    return InnerSpace(tuple(gens), tuple(g))


def kernel_level_values(m: int) -> list[Scalar]:
    """Kernel values t_1 <= ... <= t_m attained inside a depth-m top class."""
    return [Fraction(m - 1, m) + Fraction(1, m * (m + 1 - k)) for k in range(1, m + 1)]


def _kernel_class_inner(ci: ClassId, cj: ClassId) -> Scalar:
    if ci.path[0] != cj.path[0]:
        return Fraction(0)
    m = ci.path[0]
    shared = 0
    for a, b in zip(ci.path, cj.path):
        if a != b:
            break
        shared += 1
    return kernel_level_values(m)[shared - 1]


def embed(s: LayeredStructure, x: PointId) -> Vec:
    """Geometric-series embedding h(x) = sum of class generators / 2^level.

    Pure-set points map to their own atom.  mixed_kernel has no explicit
    embedding formula; use :func:`kernel_point` and :func:`kernel_value`.
    """
    space = structure_space(s)
    if s.family == "pure_set":
        return Vec.from_generators(space, {atom_gen(x): Fraction(1)})
    if s.family == "mixed_kernel":
        raise ValueError("mixed_kernel structures have no explicit embedding")
    coeffs = {class_gen(class_of(s, x, n)): Fraction(1, 2 ** n)
              for n in range(s.depth + 1)}
    return Vec.from_generators(space, coeffs)


def kernel_point(s: LayeredStructure, x: PointId) -> Vec:
    """The vector of a mixed_kernel point: the generator of its finest class."""
    if s.family != "mixed_kernel":
        raise ValueError("kernel_point applies to mixed_kernel structures")
    space = structure_space(s)
    finest = class_of(s, x, x.address[0])
    return Vec.from_generators(space, {class_gen(finest): Fraction(1)})


def kernel_value(s: LayeredStructure, x: PointId, y: PointId) -> Scalar:
    """Similarity kernel of a mixed_kernel structure.

    Zero across different top classes; one when the points are equivalent at
    every level; otherwise (m-1)/m + 1/(m(m+1-k)) where m is the top class
    depth and k the deepest shared level.
    """
    if s.family != "mixed_kernel":
        raise ValueError("kernel_value applies to mixed_kernel structures")
    d = common_level(s, x, y)
    if d == 0:
        return Fraction(0)
    m = x.address[0]
    if d == INFINITE:
        return Fraction(1)
    k = min(d, m)
    return Fraction(m - 1, m) + Fraction(1, m * (m + 1 - k))


def points_gram(s: LayeredStructure) -> list[list[Scalar]]:
    """Kernel matrix of all materialised mixed_kernel points."""
    pts = enumerate_points(s)
    return [[kernel_value(s, x, y) for y in pts] for x in pts]
