from fractions import Fraction as F
from itertools import combinations

import pytest

from projlab import (
    ClassId,
    ClosureMembershipError,
    PointId,
    bdd_subspace,
    canonical_base,
    class_gen,
    coarsening,
    embed,
    enumerate_points,
    forking_order,
    inner,
    link_step,
    mixed_kernel,
    nonforking_restriction,
    piece_type,
    points_type,
    project,
    projection_order,
    pure_set,
    refining,
    span,
    structure_space,
    subset_sum_type,
    subspace_family,
    weak_closure,
    weak_limit,
)
from projlab.hilbert import Vec


ALL_SMALL = [
    points_type(refining(1, 2)),
    points_type(refining(2, 2)),
    points_type(refining(1, 3)),
    points_type(coarsening(1, 2)),
    points_type(coarsening(2, 2)),
    points_type(pure_set(4)),
    subset_sum_type(pure_set(3), 3),
    piece_type(mixed_kernel(2, 2)),
    piece_type(mixed_kernel(3, 2)),
]


def test_refining_closure_shape():
    c = weak_closure(points_type(refining(1, 2)))
    assert len(c) == 3
    kinds = sorted(t.render() for t in c.tags)
    assert kinds == ["full_point[0]", "full_point[1]", "trunc@0[]"]
    # the embedded points are their own deepest truncations
    s = refining(1, 2)
    for x in enumerate_points(s):
        assert c.find(embed(s, x)) is not None


def test_refining_closure_counts():
    for n, b in [(1, 2), (2, 2), (2, 3)]:
        c = weak_closure(points_type(refining(n, b)))
        assert len(c) == sum(b ** k for k in range(n + 1))


def test_coarsening_closure_holds_tails():
    s = coarsening(1, 2)
    c = weak_closure(points_type(s))
    x = PointId((0, 0))
    tail = Vec.from_generators(structure_space(s),
                               {class_gen(ClassId(1, (0,))): F(1, 2)})
    assert c.find(tail) is not None
    assert len(c) == 4 + 2  # points plus level-1 tails; zero excluded


def test_subset_sum_closure_is_all_partial_sums():
    s = pure_set(2)
    c = weak_closure(subset_sum_type(s, 2))
    assert len(c) == 4
    norms = sorted(inner(v, v) for v in c.elements)
    assert norms == [F(0), F(1, 4), F(1), F(5, 4)]


def test_subset_sum_sizes():
    for n in (1, 2, 3):
        c = weak_closure(subset_sum_type(pure_set(n + 1), n + 1))
        assert len(c) == 2 ** (n + 1)


def test_mixed_closure_shape():
    c = weak_closure(piece_type(mixed_kernel(2, 2)))
    # zero, the A_1 point, the A_2 class limit, two A_2 points
    assert [t.render() for t in c.tags] == [
        "zero", "trunc@1[2]", "full_point[1]", "full_point[2.0]", "full_point[2.1]"]


def test_elements_pairwise_distinct_with_multiplicities():
    c = weak_closure(points_type(refining(1, 2, 3)))
    assert len(c) == 3  # multiplicity collapses
    ck = weak_closure(piece_type(mixed_kernel(2, 2, 2)))
    assert len(ck) == 5


def test_realizations():
    c = weak_closure(subset_sum_type(pure_set(3), 3))
    idxs = c.realization_indices()
    assert len(idxs) == 1
    assert len(c.tags[idxs[0]].address) == 3


def test_weak_limit_constant():
    c = weak_closure(points_type(refining(2, 2)))
    assert weak_limit(c, {"kind": "constant", "index": 2}).same(c.elements[2])


def test_weak_limit_refining_spread_matches_truncation():
    c = weak_closure(points_type(refining(2, 2)))
    w = weak_limit(c, {"kind": "class_spread", "class_path": [0], "level": 1})
    i = c.find(w)
    assert c.tags[i].render() == "trunc@1[0]"


def finite_instantiation_check(n, b, level, path):
    """Independent convergence oracle: instantiate the spread at branching b and
    compare the symbolic limit against the stable majority of inner products."""
    s = refining(n, b)
    c = weak_closure(points_type(s))
    w = weak_limit(c, {"kind": "class_spread", "class_path": list(path), "level": level})
    seq = []
    for k in range(b):
        addr = tuple(path) + (k,) + (0,) * (n - level - 1)
        seq.append(embed(s, PointId(addr)))
    space = structure_space(s)
    for gi in range(space.dim):
        unit = Vec(space, {gi: F(1)})
        values = [inner(a, unit) for a in seq]
        majority = max(set(values), key=values.count)
        assert values.count(majority) >= b - 1
        assert inner(w, unit) == majority


def test_weak_limit_convergence_oracle():
    finite_instantiation_check(2, 4, 1, (0,))
    finite_instantiation_check(2, 8, 1, (1,))
    finite_instantiation_check(3, 4, 2, (0, 1))


def test_weak_limit_atoms_vanish():
    c = weak_closure(points_type(pure_set(4)))
    assert weak_limit(c, {"kind": "distinct_atoms"}).is_zero()


def test_weak_limit_coarsening_spread_is_tail():
    c = weak_closure(points_type(coarsening(2, 2)))
    w = weak_limit(c, {"kind": "class_spread", "class_path": [0, 1], "level": 1})
    assert c.tags[c.find(w)].render() == "tail@1[0.1]"


def test_weak_limit_validates_spec():
    c = weak_closure(points_type(refining(1, 2)))
    with pytest.raises(ValueError):
        weak_limit(c, {"kind": "nonsense"})
    with pytest.raises(ValueError):
        weak_limit(c, {"kind": "class_spread", "class_path": [9], "level": 1})
    with pytest.raises(ValueError):
        weak_limit(c, {"kind": "distinct_atoms"})


def test_canonical_base_inside_domain_returns_element():
    s = refining(2, 2)
    c = weak_closure(points_type(s))
    h = c.elements[c.find(embed(s, PointId((0, 0))))]
    full = bdd_subspace(c, [c.find(h)])
    idx, b = canonical_base(c, h, full)
    assert b.same(h)


def test_canonical_base_truncates():
    s = refining(2, 2)
    c = weak_closure(points_type(s))
    h = c.elements[c.find(embed(s, PointId((0, 0))))]
    t1_idx = next(i for i, t in enumerate(c.tags) if t.render() == "trunc@1[0]")
    dom = bdd_subspace(c, [t1_idx])
    idx, b = canonical_base(c, h, dom)
    assert idx == t1_idx


def test_canonical_base_zero_domain_errors_when_zero_missing():
    s = refining(1, 2)
    c = weak_closure(points_type(s))
    zero_dom = span(c.space, [])
    with pytest.raises(ClosureMembershipError):
        canonical_base(c, c.elements[-1], zero_dom)


def test_closure_closed_under_canonical_bases():
    # projecting any element onto any bounded domain stays inside the closure
    for td in ALL_SMALL:
        c = weak_closure(td)
        fam = subspace_family(c, 2)
        for _, sub in fam:
            for v in c.elements:
                p = project(v, sub)
                if p.is_zero() and c.find(p) is None:
                    continue  # zero only belongs to some families
                assert c.find(p) is not None, (td, _)


def test_canonical_base_unique_inside_domain():
    for td in ALL_SMALL[:6]:
        c = weak_closure(td)
        for _, sub in subspace_family(c, 2):
            in_span = [j for j in range(len(c))
                       if project(c.elements[j], sub).same(c.elements[j])]
            for i in range(len(c)):
                p = project(c.elements[i], sub)
                if c.find(p) is None:
                    assert p.is_zero()  # existence can only fail at zero
                    continue
                matches = [j for j in in_span
                           if all(inner(c.elements[j], sv) == inner(c.elements[i], sv)
                                  for sv in sub.spanning)]
                assert len(matches) == 1
                assert c.elements[matches[0]].same(p)


def test_projection_order_pure_set_antichain():
    c = weak_closure(points_type(pure_set(4)))
    assert projection_order(c).pairs == frozenset()


def test_projection_order_refining_chain():
    c = weak_closure(points_type(refining(2, 2)))
    po = projection_order(c)
    labels = c.labels()
    t0 = labels.index("trunc@0[]")
    t1 = labels.index("trunc@1[0]")
    h = labels.index("full_point[0.0]")
    assert (t0, t1) in po.pairs and (t1, h) in po.pairs and (t0, h) in po.pairs


def test_projection_order_transitive():
    for td in ALL_SMALL:
        po = projection_order(weak_closure(td))
        for a, b in po.pairs:
            for c_, d in po.pairs:
                if b == c_:
                    assert (a, d) in po.pairs


def test_orders_are_exact_transposes():
    for td in ALL_SMALL:
        c = weak_closure(td)
        po = projection_order(c)
        fo = forking_order(c)
        assert fo.pairs == frozenset((b, a) for a, b in po.pairs), td


def test_subset_order_is_support_containment():
    c = weak_closure(subset_sum_type(pure_set(3), 3))
    po = projection_order(c)
    for i, j in po.pairs:
        assert set(c.tags[i].address) < set(c.tags[j].address)
    n_contain = sum(1 for i in range(len(c)) for j in range(len(c))
                    if set(c.tags[i].address) < set(c.tags[j].address))
    assert len(po.pairs) == n_contain


def test_nonforking_restriction_and_link_agree():
    # restriction of the global type to the second domain vs the single step
    for td in [points_type(refining(2, 2)), points_type(coarsening(1, 2)),
               piece_type(mixed_kernel(2, 2)), subset_sum_type(pure_set(3), 3)]:
        c = weak_closure(td)
        doms = [bdd_subspace(c, [i]) for i in range(len(c))]
        for i in range(len(c)):
            for j in range(len(c)):
                lhs = nonforking_restriction((c.elements[i], doms[i]),
                                             (c.elements[j], doms[j]))
                assert lhs == link_step(c, i, j)


def test_nonforking_restriction_cases():
    c = weak_closure(points_type(refining(2, 2)))
    h = next(i for i, t in enumerate(c.tags) if t.kind == "full_point")
    t1 = next(i for i, t in enumerate(c.tags)
              if t.render() == "trunc@1" + "[" + str(c.tags[h].address[0]) + "]")
    r_h = (c.elements[h], bdd_subspace(c, [h]))
    r_t = (c.elements[t1], bdd_subspace(c, [t1]))
    assert nonforking_restriction(r_h, r_h)
    assert nonforking_restriction(r_h, r_t)
    assert not nonforking_restriction(r_t, r_h)
    # same domain, different bases: the restriction is the base itself
    other = next(i for i, t in enumerate(c.tags)
                 if t.kind == "full_point" and i != h)
    r_o = (c.elements[other], bdd_subspace(c, [other]))
    dom = bdd_subspace(c, [h, other])
    assert not nonforking_restriction((c.elements[h], dom), (c.elements[other], dom))
    with pytest.raises(ValueError):
        nonforking_restriction((c.elements[h], r_t[1]), r_t)


def test_restriction_iff_link_on_enlarged_domains():
    c = weak_closure(points_type(refining(2, 2)))
    for i in range(len(c)):
        for j in range(len(c)):
            for k in range(len(c)):
                dom2 = bdd_subspace(c, [j, k])
                if not project(c.elements[j], dom2).same(c.elements[j]):
                    continue
                lhs = nonforking_restriction(
                    (c.elements[i], bdd_subspace(c, [i])), (c.elements[j], dom2))
                assert lhs == link_step(c, i, j)
