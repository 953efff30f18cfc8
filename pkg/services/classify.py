"""
Constraint-driven classification of small transitive matrix representations.

Covers exhaustive enumeration of integer matrices satisfying a polynomial
identity, the positive quasi-idempotent classification and the
subgroup/coset classification for group categories.
"""
import logging
from dataclasses import dataclass, field
from enum import Enum
from itertools import product
from math import gcd
from typing import Iterable, Optional, Sequence

import numpy as np
import sympy

from core.config import settings
from core.exceptions import BudgetExceededError, InvalidInputError
from services.based_cat import GROUP_OBJECT, BasedCategory, build_group_category
from services.groups import GroupTable
from services.matrep import MatrixRep, is_transitive
from utils.helpers import as_int_matrix, canonical_conjugate, matrix_key, matrix_to_list


logger = logging.getLogger(__name__)


class Positivity(str, Enum):
    NONNEGATIVE = "nonnegative"
    POSITIVE = "positive"


class NormalForm(str, Enum):
    SORTED_DIAGONAL = "sorted_diagonal"
    CONJUGACY = "conjugacy"


@dataclass(frozen=True)
class MatrixConstraintSet:
    """p(X) = 0 plus sign, trace and determinant constraints on k×k matrices.

    `polynomial` lists integer coefficients from the constant term upwards.
    """
    size: int
    polynomial: tuple[int, ...]
    positivity: Positivity = Positivity.NONNEGATIVE
    trace: Optional[int] = None
    determinant: Optional[int] = None
    entry_bound: int = 1
    exclude_zero: bool = False
    normal_form: NormalForm = NormalForm.SORTED_DIAGONAL

    def __post_init__(self):
        object.__setattr__(self, "polynomial", tuple(int(c) for c in self.polynomial))
        object.__setattr__(self, "positivity", Positivity(self.positivity))
        object.__setattr__(self, "normal_form", NormalForm(self.normal_form))
        if self.size < 1:
            raise InvalidInputError("Matrix size must be at least 1", details={"size": self.size})
        if self.entry_bound < 1:
            raise InvalidInputError("Entry bound must be at least 1", details={"entry_bound": self.entry_bound})
        if not self.polynomial or self.polynomial[0] != 0:
            raise InvalidInputError("Polynomial must have zero constant term", details={"polynomial": list(self.polynomial)})

    @classmethod
    def from_sympy(cls, expr, symbol, **kwargs) -> "MatrixConstraintSet":
        coeffs = sympy.Poly(expr, symbol).all_coeffs()[::-1]
        return cls(polynomial=tuple(int(c) for c in coeffs), **kwargs)

    @property
    def search_size(self) -> int:
        values = self.entry_bound + (1 if self.positivity is Positivity.NONNEGATIVE else 0)
        return values ** (self.size * self.size)

    def evaluate(self, matrix: np.ndarray) -> np.ndarray:
        total = np.zeros_like(matrix)
        power = np.eye(self.size, dtype=np.int64)
        for c in self.polynomial:
            if c:
                total = total + c * power
            power = power @ matrix
        return total

    def satisfied_by(self, matrix: np.ndarray) -> bool:
        if self.trace is not None and int(np.trace(matrix)) != self.trace:
            return False
        if self.determinant is not None and int(round(sympy.Matrix(matrix.tolist()).det())) != self.determinant:
            return False
        return not self.evaluate(matrix).any()

    def to_dict(self) -> dict:
        return {
            "size": self.size,
            "polynomial": list(self.polynomial),
            "positivity": self.positivity.value,
            "trace": self.trace,
            "determinant": self.determinant,
            "entry_bound": self.entry_bound,
            "exclude_zero": self.exclude_zero,
            "normal_form": self.normal_form.value,
        }


def polynomial_text(coefficients: Sequence[int]) -> str:
    x = sympy.Symbol("x")
    return str(sum(c * x**d for d, c in enumerate(coefficients)))


def enumerate_matrix_solutions(
    constraints: MatrixConstraintSet, budget: Optional[int] = None
) -> list[np.ndarray]:
    """Exhaustive search over the entry box, normalized and sorted canonically.

    Solutions are sorted by descending row-major entries.
    """
    budget = settings.search_budget if budget is None else budget
    needed = constraints.search_size
    if needed > budget:
        raise BudgetExceededError(needed, budget)
    k = constraints.size
    low = 1 if constraints.positivity is Positivity.POSITIVE else 0
    values = range(low, constraints.entry_bound + 1)
    logger.debug(f"Enumerating {needed} candidate {k}x{k} matrices")

    found = {}
    for entries in product(values, repeat=k * k):
        if constraints.trace is not None and sum(entries[i * k + i] for i in range(k)) != constraints.trace:
            continue
        matrix = np.array(entries, dtype=np.int64).reshape(k, k)
        if constraints.exclude_zero and not matrix.any():
            continue
        if not constraints.satisfied_by(matrix):
            continue
        if constraints.normal_form is NormalForm.CONJUGACY:
            matrix = canonical_conjugate(matrix)
        else:
            diagonal = [int(matrix[i, i]) for i in range(k)]
            if diagonal != sorted(diagonal, reverse=True):
                continue
        found[matrix_key(matrix)] = as_int_matrix(matrix)
    solutions = [found[key] for key in sorted(found, reverse=True)]
    logger.debug(f"Found {len(solutions)} solutions")
    return solutions


def conjugacy_classes(matrices: Iterable[np.ndarray]) -> list[list[int]]:
    """Group indices of matrices that are simultaneous permutations of each other."""
    classes: dict[tuple, list[int]] = {}
    for i, matrix in enumerate(matrices):
        classes.setdefault(matrix_key(canonical_conjugate(matrix)), []).append(i)
    return list(classes.values())


@dataclass
class ClassificationReport:
    solutions: list[np.ndarray]
    eliminated: list[dict] = field(default_factory=list)
    conclusion: str = ""
    parameters: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "solutions": [matrix_to_list(s) for s in self.solutions],
            "eliminated": self.eliminated,
            "conclusion": self.conclusion,
            "parameters": self.parameters,
        }


def _rank_one_factors(m: int, k: int):
    """Pairs (u, v) of positive vectors of length k with v·u = m."""
    def extend(remaining: int, slots: int):
        if slots == 0:
            if remaining == 0:
                yield (), ()
            return
        # each later slot needs at least 1
        for u in range(1, remaining - (slots - 1) + 1):
            for v in range(1, (remaining - (slots - 1)) // u + 1):
                for us, vs in extend(remaining - u * v, slots - 1):
                    yield (u, *us), (v, *vs)

    yield from extend(m, k)


def classify_quasi_idempotent(m: int, size_max: Optional[int] = None) -> ClassificationReport:
    """Positive integer matrices X with X² = mX, up to simultaneous permutation.

    Such a matrix is u·vᵗ with u primitive and v·u = m, so sizes stop at m.
    """
    if m < 1:
        raise InvalidInputError("m must be at least 1", details={"m": m})
    size_max = m if size_max is None else size_max
    eliminated = []
    if size_max > m:
        eliminated.append({"matrix": None, "reason": f"sizes {m + 1}..{size_max}: trace m forces size <= m"})
        size_max = m
    found = {}
    for k in range(1, size_max + 1):
        for u, v in _rank_one_factors(m, k):
            if gcd(*u) != 1:
                continue
            matrix = canonical_conjugate(np.outer(np.array(u), np.array(v)).astype(np.int64))
            found[(k, matrix_key(matrix))] = matrix
    solutions = [found[key] for key in sorted(found)]
    logger.info(f"classify_quasi_idempotent(m={m}): {len(solutions)} classes")
    return ClassificationReport(
        solutions=solutions,
        eliminated=eliminated,
        conclusion=f"{len(solutions)} positive solutions of X^2 = {m}X up to simultaneous permutation",
        parameters={"m": m, "size_max": size_max},
    )


# --- Groups ---


@dataclass(frozen=True)
class SubgroupLattice:
    group: GroupTable
    subgroups: tuple[frozenset[int], ...]
    classes: tuple[tuple[int, ...], ...]

    @property
    def representatives(self) -> list[frozenset[int]]:
        return [self.subgroups[c[0]] for c in self.classes]

    def labels(self, subgroup: Iterable[int]) -> list[str]:
        return [self.group.elements[i] for i in sorted(subgroup)]

    def to_dict(self) -> dict:
        return {
            "group": self.group.name,
            "subgroups": [self.labels(h) for h in self.subgroups],
            "classes": [list(c) for c in self.classes],
        }


def _subgroup_key(subgroup: frozenset[int]) -> tuple:
    return len(subgroup), sorted(subgroup)


def enumerate_subgroups(group: GroupTable) -> SubgroupLattice:
    """All subgroups as joins of cyclic subgroups, grouped by conjugacy."""
    if not isinstance(group, GroupTable):
        group = GroupTable.from_rows(group["elements"], group["table"], group.get("name"))
    cyclic = {group.closure([g]) for g in range(group.order)}
    found = set(cyclic)
    frontier = set(cyclic)
    while frontier:
        new = set()
        for a in frontier:
            for c in cyclic:
                if c <= a:
                    continue
                joined = group.closure(a | c)
                if joined not in found:
                    new.add(joined)
        found |= new
        frontier = new
    for h in found:
        if group.order % len(h):
            raise InvalidInputError("Subgroup order does not divide the group order", details={"size": len(h)})
    subgroups = tuple(sorted(found, key=_subgroup_key))
    index = {h: i for i, h in enumerate(subgroups)}
    classes = []
    seen = set()
    for i, h in enumerate(subgroups):
        if i in seen:
            continue
        members = sorted({index[group.conjugate_set(h, g)] for g in range(group.order)})
        seen.update(members)
        classes.append(tuple(members))
    logger.debug(f"{group.name}: {len(subgroups)} subgroups in {len(classes)} conjugacy classes")
    return SubgroupLattice(group, subgroups, tuple(classes))


def coset_rep(cat: BasedCategory, group: GroupTable, subgroup: Iterable[int]) -> MatrixRep:
    """Permutation action of G on G/H: [F_g] sends xH to gxH."""
    cosets = group.left_cosets(subgroup)
    labels = tuple(f"{group.elements[min(c)]}H" for c in cosets)
    where = {x: i for i, c in enumerate(cosets) for x in c}
    matrices = {}
    for g in range(group.order):
        matrix = np.zeros((len(cosets), len(cosets)), dtype=np.int64)
        for i, c in enumerate(cosets):
            matrix[where[group.mul(g, min(c))], i] = 1
        matrices[f"F_{group.elements[g]}"] = matrix
    return MatrixRep(cat, {GROUP_OBJECT: labels}, matrices)


def classify_group_reps(group: GroupTable) -> list[MatrixRep]:
    """One transitive representation per conjugacy class of subgroups."""
    if not isinstance(group, GroupTable):
        group = GroupTable.from_rows(group["elements"], group["table"], group.get("name"))
    cat = build_group_category(group)
    lattice = enumerate_subgroups(group)
    reps = [coset_rep(cat, group, h) for h in lattice.representatives]
    for rep in reps:
        if not is_transitive(rep):
            raise InvalidInputError("Coset representation is not transitive")
    logger.info(f"{group.name}: {len(reps)} transitive representations")
    return reps
