"""Exact Perron-Frobenius utilities."""
import random
from itertools import combinations

import numpy as np
import pytest
import sympy

from core.exceptions import StructuralError
from services.pfexact import column_sum_bounds, column_bound_check, pf_summary, quasi_idempotent_check, rank_exact

SCALAR_THREE = [[3]]
EQUAL_COLUMNS = [[1, 1], [2, 2]]
EQUAL_ROWS = [[1, 2], [1, 2]]
ALL_ONES = [[1, 1, 1], [1, 1, 1], [1, 1, 1]]


@pytest.mark.parametrize("matrix,bounds", [(EQUAL_ROWS, (2, 4)), (EQUAL_COLUMNS, (3, 3)), ([[5]], (5, 5))])
def test_column_sum_bounds(matrix, bounds):
    assert column_sum_bounds(matrix) == bounds


def test_column_sum_bounds_needs_a_square_matrix():
    with pytest.raises(StructuralError):
        column_sum_bounds([[1, 2, 3], [4, 5, 6]])


@pytest.mark.parametrize("matrix,rank", [(ALL_ONES, 1), (EQUAL_COLUMNS, 1), ([[1, 0], [0, 1]], 2), ([[0, 0], [0, 0]], 0)])
def test_rank_exact(matrix, rank):
    assert rank_exact(matrix) == rank


def test_quasi_idempotent_check():
    check = quasi_idempotent_check(SCALAR_THREE, 3)
    assert check.holds and check.positive and check.rank1
    assert check.pf_eigenvalue == 3
    exotic = quasi_idempotent_check([[1, 1], [1, 1]], 2)
    assert exotic.holds and exotic.trace == 2
    identity = quasi_idempotent_check([[1, 0], [0, 1]], 2)
    assert not identity.holds
    assert identity.pf_eigenvalue is None


def test_column_bound_examples():
    applicable = column_bound_check(EQUAL_COLUMNS, 3)
    assert applicable.applicable and applicable.columns_equal
    other = column_bound_check(EQUAL_ROWS, 3)
    assert not other.applicable and not other.columns_equal
    scalar = column_bound_check([[4]], 4)
    assert scalar.applicable and scalar.columns_equal


def test_pf_summary_reports_everything():
    summary = pf_summary(EQUAL_COLUMNS, 3)
    assert summary["rank"] == 1
    assert summary["column_sum_bounds"] == [3, 3]
    assert summary["column_bound"]["applicable"]
    assert summary["quasi_idempotent"]["holds"]


def test_rank_one_quasi_idempotents_meet_column_bounds():
    rng = random.Random(7)
    for _ in range(1000):
        k = rng.randint(1, 4)
        u = np.array([rng.randint(1, 5) for _ in range(k)], dtype=np.int64)
        v = np.array([rng.randint(1, 5) for _ in range(k)], dtype=np.int64)
        matrix = np.outer(u, v)
        m = int(v @ u)
        check = quasi_idempotent_check(matrix, m)
        assert check.holds and check.positive and check.rank1 and check.trace == m
        low, high = column_sum_bounds(matrix)
        assert low <= m <= high
        bound_check = column_bound_check(matrix, m)
        if m in (low, high):
            assert bound_check.applicable and bound_check.columns_equal


def _rank_by_minors(matrix: np.ndarray) -> int:
    rows, cols = matrix.shape
    for size in range(min(rows, cols), 0, -1):
        for r in combinations(range(rows), size):
            for c in combinations(range(cols), size):
                if sympy.Matrix(matrix[np.ix_(r, c)].tolist()).det() != 0:
                    return size
    return 0


def test_rank_agrees_with_minors():
    rng = random.Random(11)
    for _ in range(100):
        rows, cols = rng.randint(1, 4), rng.randint(1, 4)
        matrix = np.array([[rng.randint(-2, 2) for _ in range(cols)] for _ in range(rows)], dtype=np.int64)
        assert rank_exact(matrix) == _rank_by_minors(matrix)
