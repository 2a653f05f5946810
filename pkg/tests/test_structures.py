import math
from itertools import combinations

import pytest

from projlab import (
    INFINITE,
    ClassId,
    PointId,
    bdd_basis,
    class_of,
    classes_at_level,
    coarsening,
    common_level,
    enumerate_points,
    from_descriptor,
    mixed_kernel,
    pure_set,
    refining,
    to_descriptor,
)
from projlab.structures import LayeredStructure


def test_enumerate_refining_counts():
    assert len(enumerate_points(refining(1, 2))) == 2
    assert len(enumerate_points(refining(2, 2))) == 4
    assert len(enumerate_points(refining(2, 3))) == 9
    assert len(enumerate_points(refining(1, 2, 3))) == 6


def test_enumerate_mixed_kernel_counts():
    # A_1 contributes one finest class, A_2 contributes branching many
    s = mixed_kernel(2, 2, 1)
    assert [p.address for p in enumerate_points(s)] == [(1,), (2, 0), (2, 1)]
    assert len(enumerate_points(mixed_kernel(3, 2, 2))) == 2 * (1 + 2 + 4)


def test_enumeration_is_sorted():
    for s in (refining(2, 3), coarsening(2, 2), mixed_kernel(3, 2)):
        pts = enumerate_points(s)
        assert list(pts) == sorted(pts)


def test_class_of_refining():
    s = refining(2, 2)
    x = PointId((1, 0))
    assert class_of(s, x, 0) == ClassId(0, ())
    assert class_of(s, x, 1) == ClassId(1, (1,))
    assert class_of(s, x, 2) == ClassId(2, (1, 0))
    with pytest.raises(ValueError):
        class_of(s, x, 3)


def test_class_of_coarsening_level_zero_is_singleton():
    s = coarsening(1, 2)
    for x in enumerate_points(s):
        assert class_of(s, x, 0) == ClassId(0, x.address)


def test_class_of_monotone_chains():
    s = refining(3, 2)
    for x in enumerate_points(s):
        chain = [class_of(s, x, n) for n in range(4)]
        for lo, hi in zip(chain, chain[1:]):
            assert hi.path[: len(lo.path)] == lo.path


def test_mixed_class_of_stabilises():
    s = mixed_kernel(3, 2)
    x = PointId((2, 1))
    assert class_of(s, x, 2) == class_of(s, x, 5) == ClassId(2, (2, 1))
    assert class_of(s, x, 1) == ClassId(1, (2,))


def test_refining_class_counts_are_powers():
    for b in (2, 3):
        s = refining(2, b)
        for n in range(3):
            assert len(classes_at_level(s, n)) == b ** n


def test_common_level_refining():
    s = refining(2, 2)
    assert common_level(s, PointId((0, 0)), PointId((0, 1))) == 1
    assert common_level(s, PointId((0, 0)), PointId((1, 1))) == 0
    assert common_level(s, PointId((0, 0)), PointId((0, 0))) == INFINITE
    # same finest class at leaf multiplicity > 1: equal at all levels
    s2 = refining(1, 2, 2)
    assert common_level(s2, PointId((0, 0)), PointId((0, 1))) == INFINITE


def test_common_level_symmetric():
    for s in (refining(2, 3), coarsening(2, 2), mixed_kernel(3, 2)):
        pts = enumerate_points(s)
        for x in pts:
            for y in pts:
                assert common_level(s, x, y) == common_level(s, y, x)


def test_common_level_coarsening():
    s = coarsening(2, 2)
    x = PointId((0, 0, 0))
    assert common_level(s, x, x) == 0
    assert common_level(s, x, PointId((0, 0, 1))) == 1
    assert common_level(s, x, PointId((0, 1, 0))) == 2
    assert common_level(s, x, PointId((1, 0, 0))) == INFINITE


def test_common_level_mixed():
    s = mixed_kernel(3, 2)
    assert common_level(s, PointId((3, 0, 0)), PointId((3, 0, 1))) == 2
    assert common_level(s, PointId((3, 0, 0)), PointId((3, 1, 0))) == 1
    assert common_level(s, PointId((1,)), PointId((2, 0))) == 0
    assert common_level(s, PointId((2, 0)), PointId((2, 0))) == INFINITE


def test_bdd_empty_seeds():
    assert bdd_basis(refining(2, 2), []) == frozenset({ClassId(0, ())})
    assert bdd_basis(coarsening(2, 2), []) == frozenset()
    assert bdd_basis(pure_set(3), []) == frozenset()
    assert bdd_basis(mixed_kernel(2, 2), []) == frozenset()


def test_bdd_point_seed_is_ancestor_chain():
    s = refining(2, 2)
    x = PointId((0, 1))
    assert bdd_basis(s, [x]) == frozenset(
        {ClassId(0, ()), ClassId(1, (0,)), ClassId(2, (0, 1))})


def test_bdd_coarsening_chain_goes_up():
    s = coarsening(2, 2)
    cls = ClassId(1, (0, 1))
    assert bdd_basis(s, [cls]) == frozenset({ClassId(1, (0, 1)), ClassId(2, (0,))})


def test_bdd_is_closure_operator():
    # extensive on class seeds, monotone, idempotent, checked exhaustively small
    for s in (refining(2, 2), coarsening(1, 2), mixed_kernel(2, 2), pure_set(3)):
        pts = enumerate_points(s)
        seed_pool = list(pts[:3])
        for r in range(3):
            for seeds in combinations(seed_pool, r):
                basis = bdd_basis(s, seeds)
                assert bdd_basis(s, basis) == basis  # idempotent on class seeds
                for extra in seed_pool:
                    bigger = bdd_basis(s, list(seeds) + [extra])
                    assert basis <= bigger  # monotone
        for cls in bdd_basis(s, seed_pool):
            assert cls in bdd_basis(s, [cls])  # extensive


def test_bdd_rejects_foreign_seed():
    with pytest.raises(ValueError):
        bdd_basis(refining(1, 2), [PointId((5,))])


def test_descriptor_round_trip_and_unknown_keys():
    for s in (refining(2, 3, 2), coarsening(1, 2), pure_set(4), mixed_kernel(2, 2, 2)):
        assert from_descriptor(to_descriptor(s)) == s
    with pytest.raises(ValueError):
        from_descriptor({"family": "refining", "depth": 1, "branching": 2,
                         "weird": True})
    with pytest.raises(ValueError):
        from_descriptor({"depth": 1, "branching": 2})


def test_structure_validation():
    with pytest.raises(ValueError):
        LayeredStructure("refining", depth=-1)
    with pytest.raises(ValueError):
        LayeredStructure("refining", branching=1)
    with pytest.raises(ValueError):
        LayeredStructure("coarsening", depth=1, leaf_multiplicity=2)
    with pytest.raises(ValueError):
        LayeredStructure("mixed_kernel", class_count=0)
    with pytest.raises(ValueError):
        LayeredStructure("nonsense")
