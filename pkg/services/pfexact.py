"""
Exact Perron-Frobenius utilities for non-negative integer matrices.

Spectral facts are derived from A² = mA (eigenvalues in {0, m}); nothing
here uses floating point.
"""
import logging
from dataclasses import asdict, dataclass
from typing import Optional

import numpy as np
from sympy import Matrix

from core.exceptions import InvalidInputError, StageMismatchError, StructuralError
from utils.helpers import as_int_matrix


logger = logging.getLogger(__name__)


def _square(matrix) -> np.ndarray:
    a = as_int_matrix(matrix)
    if a.shape[0] != a.shape[1]:
        raise StructuralError("Matrix must be square", details={"shape": list(a.shape)})
    return a


def column_sum_bounds(matrix) -> tuple[int, int]:
    """Exact (min, max) column sums; these bracket the PF eigenvalue."""
    a = _square(matrix)
    if a.size == 0:
        raise StructuralError("Column sums of an empty matrix are undefined")
    if (a < 0).any():
        raise InvalidInputError("Column-sum bounds need non-negative entries")
    sums = a.sum(axis=0)
    return int(sums.min()), int(sums.max())


def rank_exact(matrix) -> int:
    a = as_int_matrix(matrix)
    if a.size == 0:
        return 0
    return int(Matrix(a.tolist()).rank())


@dataclass(frozen=True)
class QuasiIdempotentCheck:
    holds: bool
    positive: bool
    rank1: bool
    trace: int
    pf_eigenvalue: Optional[int] = None

    def to_dict(self) -> dict:
        return asdict(self)


def quasi_idempotent_check(matrix, m: int) -> QuasiIdempotentCheck:
    """Check A² = mA exactly; report positivity and rank one."""
    a = _square(matrix)
    if m < 1:
        raise InvalidInputError("m must be at least 1", details={"m": m})
    holds = bool(np.array_equal(a @ a, m * a))
    positive = bool(a.size and (a > 0).all())
    rank1 = rank_exact(a) == 1
    nonzero = bool(a.any())
    return QuasiIdempotentCheck(
        holds=holds,
        positive=positive,
        rank1=rank1,
        trace=int(np.trace(a)),
        pf_eigenvalue=m if holds and nonzero else None,
    )


@dataclass(frozen=True)
class ColumnBoundCheck:
    applicable: bool
    columns_equal: bool
    bounds: tuple[int, int]

    def to_dict(self) -> dict:
        return {"applicable": self.applicable, "columns_equal": self.columns_equal, "bounds": list(self.bounds)}


def column_bound_check(matrix, m: int) -> ColumnBoundCheck:
    """Column-sum equality case for positive rank-one matrices with PF eigenvalue m.

    The PF eigenvalue of a rank-one matrix is its trace.
    """
    a = _square(matrix)
    bounds = column_sum_bounds(a)
    columns_equal = bool((a == a[:, :1]).all())
    positive = bool((a > 0).all())
    applicable = (
        positive
        and rank_exact(a) == 1
        and int(np.trace(a)) == m
        and m in bounds
    )
    if applicable and not columns_equal:
        raise StageMismatchError(
            "column_bound", "Column-sum bound is attained but columns differ",
            details={"matrix": a.tolist(), "m": m},
        )
    return ColumnBoundCheck(applicable=applicable, columns_equal=columns_equal, bounds=bounds)


def pf_summary(matrix, m: int) -> dict:
    """Everything the pf command reports about one matrix."""
    a = _square(matrix)
    summary = {
        "rank": rank_exact(a),
        "quasi_idempotent": quasi_idempotent_check(a, m).to_dict(),
    }
    if a.size and not (a < 0).any():
        summary["column_sum_bounds"] = list(column_sum_bounds(a))
        summary["column_bound"] = column_bound_check(a, m).to_dict()
    return summary
