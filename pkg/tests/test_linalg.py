from fractions import Fraction as F

import pytest

from projlab import linalg


def test_solve_simple():
    a = [[F(2), F(1)], [F(1), F(3)]]
    assert linalg.solve(a, [F(5), F(10)]) == [F(1), F(3)]


def test_solve_inconsistent():
    a = [[F(1), F(1)], [F(2), F(2)]]
    assert linalg.solve(a, [F(1), F(3)]) is None


def test_solve_underdetermined_gives_particular_solution():
    a = [[F(1), F(1)]]
    sol = linalg.solve(a, [F(2)])
    assert sol is not None
    assert sol[0] + sol[1] == F(2)


def test_nullspace_dimensions():
    a = [[F(1), F(2), F(3)]]
    basis = linalg.nullspace(a)
    assert len(basis) == 2
    for v in basis:
        assert sum(c * x for c, x in zip(a[0], v)) == 0


def test_rank():
    assert linalg.matrix_rank([[F(1), F(0)], [F(0), F(1)]]) == 2
    assert linalg.matrix_rank([[F(1), F(2)], [F(2), F(4)]]) == 1
    assert linalg.matrix_rank([]) == 0


def test_psd_identity():
    v = linalg.ldlt_psd([[F(1), F(0)], [F(0), F(1)]])
    assert v.is_psd
    assert v.pivots == [F(1), F(1)]


def test_psd_rejects_indefinite_with_witness():
    g = [[F(1), F(2)], [F(2), F(1)]]
    v = linalg.ldlt_psd(g)
    assert not v.is_psd
    w = v.witness
    val = sum(w[i] * g[i][j] * w[j] for i in range(2) for j in range(2))
    assert val == v.witness_value
    assert val < 0


def test_psd_zero_pivot_rank_deficient():
    g = [[F(1), F(1)], [F(1), F(1)]]
    v = linalg.ldlt_psd(g)
    assert v.is_psd
    assert F(0) in v.pivots


def test_psd_zero_diagonal_nonzero_offdiagonal():
    g = [[F(0), F(1)], [F(1), F(0)]]
    v = linalg.ldlt_psd(g)
    assert not v.is_psd
    w = v.witness
    val = sum(w[i] * g[i][j] * w[j] for i in range(2) for j in range(2))
    assert val < 0


def test_psd_requires_symmetry():
    with pytest.raises(ValueError):
        linalg.ldlt_psd([[F(1), F(2)], [F(3), F(1)]])
