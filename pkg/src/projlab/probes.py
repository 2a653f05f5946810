"""Structure probes: commuting projections, asymptotic freeness, scatteredness.

Each probe enumerates bounded-closure subspaces from small seed sets (size at
most two, a disclosed parameter) and reports exact verdicts with witnesses.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations_with_replacement

from .closures import (
    TypeDef,
    WeakClosure,
    bdd_subspace,
    subspace_family,
    weak_closure,
)
from .hilbert import InnerSpace, Vec, formal_gen, free_space, inner, norm_sq
from .structures import LayeredStructure
from .subspaces import Subspace, commute_check, generator_span, intersect, project, span


@dataclass
class PairFailure:
    vector: str
    left: str
    right: str


@dataclass
class CommutingReport:
    holds: bool
    n_subspaces: int
    n_pairs: int
    failures: list[dict] = field(default_factory=list)


def commuting_report(space: InnerSpace, subspaces: list[tuple[str, Subspace]],
                     vectors: list[Vec], labels: list[str]) -> CommutingReport:
    """Exhaustive commuting check over all unordered subspace pairs."""
    failures = []
    proj_cache: dict[tuple[int, int], Vec] = {}

    def proj(vi: int, si: int) -> Vec:
        key = (vi, si)
        if key not in proj_cache:
            proj_cache[key] = project(vectors[vi], subspaces[si][1])
        return proj_cache[key]

    n_pairs = 0
    for ia, ib in combinations_with_replacement(range(len(subspaces)), 2):
        ka, a = subspaces[ia]
        kb, b = subspaces[ib]
        meet = intersect(a, b)
        n_pairs += 1
        for vi in range(len(vectors)):
            ab = project(proj(vi, ib), a)
            ba = project(proj(vi, ia), b)
            mid = project(vectors[vi], meet)
            if not (ab.same(ba) and ba.same(mid)):
                failures.append({
                    "vector": labels[vi], "a": ka, "b": kb,
                    "p_a_p_b": repr(ab), "p_b_p_a": repr(ba), "p_meet": repr(mid),
                })
    return CommutingReport(not failures, len(subspaces), n_pairs, failures)


def one_based_check(p: TypeDef, max_seeds: int = 2) -> CommutingReport:
    """One-basedness as exact commuting of bounded projections on the closure."""
    c = weak_closure(p)
    fam = subspace_family(c, max_seeds)
    return commuting_report(c.space, fam, list(c.elements), c.labels())


@dataclass
class FreenessReport:
    holds: bool
    violations: list[dict] = field(default_factory=list)


def asym_free_check(p: TypeDef) -> FreenessReport:
    """Any two realizations must be orthogonal or bounded over one another."""
    c = weak_closure(p)
    idxs = c.realization_indices()
    violations = []
    for i in idxs:
        for j in idxs:
            a, b = c.elements[i], c.elements[j]
            val = inner(a, b)
            if val == 0:
                continue
            dom = bdd_subspace(c, [j])
            if not project(a, dom).same(a):
                violations.append({
                    "a": c.tags[i].render(), "b": c.tags[j].render(),
                    "inner": f"{val.numerator}/{val.denominator}",
                })
    return FreenessReport(not violations, violations)


@dataclass
class NeighborhoodRow:
    params: dict
    counts: dict[str, int]        # element tag -> neighbours within eps
    shape_max: dict[str, int]     # shape key -> max count over its elements


@dataclass
class ScatterReport:
    eps: Fraction
    rows: list[NeighborhoodRow]
    growing_shapes: list[str]


def scattered_probe(p: TypeDef, eps: Fraction, params: list[dict]) -> ScatterReport:
    """Count eps-neighbourhoods per closure element across truncation parameters.

    A shape whose maximal neighbourhood count strictly increases with the
    branching parameter (at fixed depth) is flagged as evidence against local
    compactness there.
    """
    eps = Fraction(eps)
    if eps <= 0:
        raise ValueError("eps must be positive")
    rows = []
    for prm in params:
        s = _restructure(p.structure, prm)
        td = TypeDef(s, p.kind, p.prefix_len)
        c = weak_closure(td)
        n = len(c)
        counts = {}
        dists = [[norm_sq(c.elements[i] - c.elements[j]) for j in range(n)]
                 for i in range(n)]
        for i in range(n):
            counts[c.tags[i].render()] = sum(1 for j in range(n)
                                             if dists[i][j] <= eps * eps)
        shape_max: dict[str, int] = {}
        for i in range(n):
            key = c.tags[i].shape()
            shape_max[key] = max(shape_max.get(key, 0), counts[c.tags[i].render()])
        rows.append(NeighborhoodRow(dict(prm), counts, shape_max))
    growing = []
    by_depth: dict[int, list[NeighborhoodRow]] = {}
    for row in rows:
        by_depth.setdefault(row.params.get("depth", 0), []).append(row)
    for depth_rows in by_depth.values():
        ordered = sorted(depth_rows, key=lambda r: r.params.get("branching", 0))
        if len(ordered) < 2:
            continue
        shapes = set().union(*(r.shape_max for r in ordered))
        for shape in sorted(shapes):
            seq = [r.shape_max.get(shape) for r in ordered]
            if all(x is not None for x in seq) and all(a < b for a, b in zip(seq, seq[1:])):
                if shape not in growing:
                    growing.append(shape)
    return ScatterReport(eps, rows, growing)


def _restructure(template: LayeredStructure, prm: dict) -> LayeredStructure:
    fields = {"family": template.family, "depth": template.depth,
              "branching": template.branching,
              "leaf_multiplicity": template.leaf_multiplicity,
              "class_count": template.class_count, "class_size": template.class_size}
    unknown = set(prm) - (set(fields) - {"family"})
    if unknown:
        raise ValueError(f"unknown probe parameters: {sorted(unknown)}")
    fields.update(prm)
    return LayeredStructure(**fields)


# ---------------------------------------------------------------------------
# synthetic negative control: two lines at a rational angle

def angled_lines(cosine: Fraction = Fraction(3, 5)):
    """Two lines in a free plane whose unit spans have the given inner product.

    Returns (space, [(key, line)], test vectors, labels).  The projections onto
    the two lines do not commute, so this is the standard failing control for
    the commuting-projection checks.
    """
    cosine = Fraction(cosine)
    if not 0 < cosine < 1:
        raise ValueError("cosine must be strictly between 0 and 1")
    sine = _rational_sqrt(1 - cosine * cosine)
    space = free_space((formal_gen("g1"), formal_gen("g2")))
    g1 = Vec.from_generators(space, {formal_gen("g1"): Fraction(1)})
    w = Vec.from_generators(space, {formal_gen("g1"): cosine,
                                    formal_gen("g2"): sine})
    line_a = span(space, [g1])
    line_b = span(space, [w])
    vectors = [g1, w]
    labels = ["first_line_unit", "second_line_direction"]
    return space, [("first_line", line_a), ("second_line", line_b)], vectors, labels


def _rational_sqrt(q: Fraction) -> Fraction:
    num = math.isqrt(q.numerator)
    den = math.isqrt(q.denominator)
    if num * num != q.numerator or den * den != q.denominator:
        raise ValueError("cosine must come from a rational right triangle, "
                         "e.g. 3/5 or 5/13")
    return Fraction(num, den)


def angled_lines_report(cosine: Fraction = Fraction(3, 5)) -> CommutingReport:
    space, lines, vectors, labels = angled_lines(cosine)
    return commuting_report(space, lines, vectors, labels)
