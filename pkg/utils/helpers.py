"""
Helper utilities for tworep.
Multisets of 1-morphism names and small integer matrices.
"""
from collections import Counter
from itertools import permutations
from typing import Iterable, Mapping, Sequence

import numpy as np

from core.constants import NAME_PATTERN
from core.exceptions import InvalidInputError, StructuralError


Multiset = dict[str, int]
MatrixKey = tuple[tuple[int, ...], ...]


# --- Names ---


def validate_name(name: str, kind: str = "name") -> str:
    """Validate an object or 1-morphism name against NAME_PATTERN."""
    if not isinstance(name, str) or not NAME_PATTERN.match(name):
        raise InvalidInputError(f"Invalid {kind}: {name!r}", details={kind: str(name)})
    return name


# --- Multisets ---


def clean_multiset(items: Mapping[str, int] | Iterable[str]) -> Multiset:
    """Normalize to a key-sorted dict of positive multiplicities."""
    counts = Counter(items) if not isinstance(items, Mapping) else items
    return {k: int(v) for k, v in sorted(counts.items()) if v}


def add_multisets(*parts: Mapping[str, int]) -> Multiset:
    total: Counter = Counter()
    for part in parts:
        for key, value in part.items():
            total[key] += value
    return clean_multiset(total)


def scale_multiset(items: Mapping[str, int], factor: int) -> Multiset:
    return clean_multiset({k: v * factor for k, v in items.items()})


def support(items: Mapping[str, int]) -> frozenset[str]:
    return frozenset(k for k, v in items.items() if v)


# --- Matrices ---


def as_int_matrix(data, rows: int | None = None, cols: int | None = None) -> np.ndarray:
    """Convert nested sequences (or an array) to a read-only int64 matrix.

    Empty inputs need explicit `rows`/`cols` to recover their shape.
    """
    if isinstance(data, np.ndarray):
        matrix = data.astype(np.int64, copy=True)
    else:
        data = [list(row) for row in data]
        if not data:
            matrix = np.zeros((rows or 0, cols or 0), dtype=np.int64)
        else:
            widths = {len(row) for row in data}
            if len(widths) != 1:
                raise StructuralError("Matrix rows have different lengths", details={"widths": sorted(widths)})
            if any(not isinstance(x, (int, np.integer)) or isinstance(x, bool) for row in data for x in row):
                raise StructuralError("Matrix entries must be integers")
            matrix = np.array(data, dtype=np.int64).reshape(len(data), widths.pop())
    if matrix.ndim != 2:
        raise StructuralError("Matrix must be two-dimensional", details={"shape": list(matrix.shape)})
    if rows is not None and cols is not None and matrix.shape != (rows, cols):
        if matrix.size == 0 and rows * cols == 0:
            matrix = np.zeros((rows, cols), dtype=np.int64)
        else:
            raise StructuralError(
                f"Expected a {rows}x{cols} matrix, got {matrix.shape[0]}x{matrix.shape[1]}",
                details={"expected": [rows, cols], "actual": list(matrix.shape)},
            )
    matrix.flags.writeable = False
    return matrix


def zeros(rows: int, cols: int) -> np.ndarray:
    return as_int_matrix(np.zeros((rows, cols), dtype=np.int64))


def identity(n: int) -> np.ndarray:
    return as_int_matrix(np.eye(n, dtype=np.int64))


def matrix_key(matrix: np.ndarray) -> MatrixKey:
    """Hashable, sortable form of a matrix."""
    return tuple(tuple(int(x) for x in row) for row in matrix)


def matrix_to_list(matrix: np.ndarray) -> list[list[int]]:
    return [[int(x) for x in row] for row in matrix]


def permute_matrix(matrix: np.ndarray, row_perm: Sequence[int], col_perm: Sequence[int]) -> np.ndarray:
    """Relabel: entry (row_perm[a], col_perm[b]) of the result is entry (a, b) of `matrix`."""
    out = np.zeros_like(matrix)
    for a in range(matrix.shape[0]):
        for b in range(matrix.shape[1]):
            out[row_perm[a], col_perm[b]] = matrix[a, b]
    return as_int_matrix(out)


def conjugates(matrix: np.ndarray) -> list[np.ndarray]:
    """All simultaneous row/column permutations of a square matrix."""
    n = matrix.shape[0]
    return [permute_matrix(matrix, perm, perm) for perm in permutations(range(n))]


def canonical_conjugate(matrix: np.ndarray) -> np.ndarray:
    """Lexicographically smallest simultaneous permutation (row-major)."""
    return min(conjugates(matrix), key=matrix_key)


def block_diagonal(first: np.ndarray, second: np.ndarray) -> np.ndarray:
    rows = first.shape[0] + second.shape[0]
    cols = first.shape[1] + second.shape[1]
    out = np.zeros((rows, cols), dtype=np.int64)
    out[:first.shape[0], :first.shape[1]] = first
    out[first.shape[0]:, first.shape[1]:] = second
    return as_int_matrix(out)
