"""
Left, right and two-sided preorders of a based category and their cells.

G ≥_L F when G is a summand of H∘F for some H; ≥_R uses F∘H and ≥_J uses
H∘F∘K. Cells are the strongly connected components of the one-step graph.
"""
import logging
from dataclasses import dataclass
from enum import Enum
from functools import cached_property
from itertools import product
from typing import Iterable, Mapping, Optional

import networkx as nx
import numpy as np

from core.config import settings
from core.exceptions import MissingInvolutionError, PreconditionError
from services.based_cat import BasedCategory
from services.matrep import MatrixRep, validate_rep
from utils.helpers import as_int_matrix


logger = logging.getLogger(__name__)


class Side(str, Enum):
    LEFT = "left"
    RIGHT = "right"
    TWO_SIDED = "two-sided"


@dataclass(frozen=True)
class CellStructure:
    """A preorder on 1-morphism names with its cells.

    `preorder` holds pairs (G, F) with G ≥ F. `cell_order` holds strict
    pairs (a, b) of cell indices with cells[a] > cells[b].
    """
    side: Side
    preorder: frozenset[tuple[str, str]]
    cells: tuple[tuple[str, ...], ...]
    cell_order: tuple[tuple[int, int], ...]
    one_step_transitive: bool = True

    @cached_property
    def _cell_index(self) -> dict[str, int]:
        return {name: i for i, cell in enumerate(self.cells) for name in cell}

    def cell_of(self, name: str) -> tuple[str, ...]:
        return self.cells[self._cell_index[name]]

    def index_of(self, name: str) -> int:
        return self._cell_index[name]

    def geq(self, greater: str, lesser: str) -> bool:
        return (greater, lesser) in self.preorder

    def to_dict(self) -> dict:
        return {
            "side": self.side.value,
            "cells": [list(cell) for cell in self.cells],
            "order": [list(pair) for pair in self.cell_order],
        }


def _one_step_graph(cat: BasedCategory, side: Side) -> nx.DiGraph:
    # edge F -> G whenever G ≥ F in one step
    graph = nx.DiGraph()
    graph.add_nodes_from(cat.names)
    names = cat.names
    for f in names:
        reached = {}
        if side in (Side.LEFT, Side.TWO_SIDED):
            for h in names:
                if cat.composable(h, f):
                    reached.update(cat.compose(h, f))
        if side in (Side.RIGHT, Side.TWO_SIDED):
            for h in names:
                if cat.composable(f, h):
                    reached.update(cat.compose(f, h))
        if side is Side.TWO_SIDED:
            for h, k in product(names, repeat=2):
                if cat.composable(f, k):
                    reached.update(cat.compose_sums({h: 1}, cat.compose(f, k)))
        graph.add_edges_from((f, g) for g in reached)
    return graph


def preorder(cat: BasedCategory, side: Side | str) -> CellStructure:
    """The preorder ≥ of the given side, its cells and the order between cells."""
    side = Side(side)
    one_step = _one_step_graph(cat, side)
    closure = nx.transitive_closure(one_step, reflexive=True)
    one_step_pairs = {(g, f) for f, g in one_step.edges} | {(f, f) for f in cat.names}
    closed_pairs = {(g, f) for f, g in closure.edges}
    transitive = one_step_pairs == closed_pairs
    if not transitive:
        logger.warning(f"One-step {side.value} relation is not transitive; using its closure")

    position = {name: i for i, name in enumerate(cat.names)}
    components = [sorted(c, key=position.__getitem__) for c in nx.strongly_connected_components(one_step)]
    components.sort(key=lambda cell: min(cell))
    cells = tuple(tuple(c) for c in components)
    index = {name: i for i, cell in enumerate(cells) for name in cell}
    order = sorted({
        (index[g], index[f]) for g, f in closed_pairs if index[g] != index[f]
    })
    logger.debug(f"{side.value} preorder: {len(cells)} cells")
    return CellStructure(side, frozenset(closed_pairs), cells, tuple(order), transitive)


def left_cells(cat: BasedCategory) -> tuple[tuple[str, ...], ...]:
    return preorder(cat, Side.LEFT).cells


def two_sided_cells(cat: BasedCategory) -> tuple[tuple[str, ...], ...]:
    return preorder(cat, Side.TWO_SIDED).cells


def _require_cell(structure: CellStructure, members: Iterable[str], what: str) -> tuple[str, ...]:
    members = set(members)
    for cell in structure.cells:
        if set(cell) == members:
            return cell
    raise PreconditionError(f"{sorted(members)} is not a {what}", details={"members": sorted(members)})


@dataclass(frozen=True)
class Verdict:
    verdict: bool
    witness: Optional[dict] = None

    def to_dict(self) -> dict:
        return {"verdict": self.verdict, "witness": self.witness}


def is_strongly_regular(cat: BasedCategory, cell: Iterable[str]) -> Verdict:
    """Both regularity conditions on a two-sided cell.

    Different left (right) cells inside J must be incomparable and every
    intersection of a left and a right cell of J must be a single element.
    """
    cell = _require_cell(preorder(cat, Side.TWO_SIDED), cell, "two-sided cell")
    members = set(cell)
    lefts = preorder(cat, Side.LEFT)
    rights = preorder(cat, Side.RIGHT)
    j_lefts = [c for c in lefts.cells if set(c) <= members]
    j_rights = [c for c in rights.cells if set(c) <= members]

    for left in j_lefts:
        for right in j_rights:
            meet = [name for name in left if name in right]
            if len(meet) != 1:
                return Verdict(False, {
                    "kind": "intersection", "left_cell": list(left), "right_cell": list(right),
                    "intersection": meet, "size": len(meet),
                })
    for kind, structure, family in (("left", lefts, j_lefts), ("right", rights, j_rights)):
        for a, b in product(family, repeat=2):
            if a != b and structure.geq(a[0], b[0]):
                return Verdict(False, {"kind": f"comparable_{kind}_cells", "greater": list(a), "lesser": list(b)})
    return Verdict(True, None)


@dataclass(frozen=True)
class NumericalCondition:
    verdict: bool
    values: Mapping[str, int]
    right_cells: tuple[tuple[str, ...], ...]
    with_multiplicity: bool

    def to_dict(self) -> dict:
        cells = []
        for cell in self.right_cells:
            distinct = sorted({self.values[name] for name in cell})
            cells.append({
                "right_cell": list(cell),
                "value": distinct[0] if len(distinct) == 1 else None,
                "values": {name: self.values[name] for name in cell},
            })
        return {"verdict": self.verdict, "with_multiplicity": self.with_multiplicity, "right_cells": cells}


def numerical_condition(
    cat: BasedCategory,
    cell: Iterable[str],
    with_multiplicity: Optional[bool] = None,
    strict: bool = True,
) -> NumericalCondition:
    """Number of summands of F*∘F lying in J, checked constant on right cells."""
    if not cat.has_involution:
        raise MissingInvolutionError("numerical_condition")
    if with_multiplicity is None:
        with_multiplicity = settings.numerical_multiplicity
    cell = _require_cell(preorder(cat, Side.TWO_SIDED), cell, "two-sided cell")
    regular = is_strongly_regular(cat, cell)
    if strict and not regular.verdict:
        raise PreconditionError(
            "Numerical condition is defined on strongly regular cells only",
            details={"witness": regular.witness},
        )
    members = set(cell)
    values = {}
    for f in cell:
        product_ = cat.compose(cat.star(f), f)
        inside = {h: c for h, c in product_.items() if h in members}
        values[f] = sum(inside.values()) if with_multiplicity else len(inside)
    right_cells = tuple(c for c in preorder(cat, Side.RIGHT).cells if set(c) <= members)
    verdict = all(len({values[name] for name in c}) == 1 for c in right_cells)
    return NumericalCondition(verdict, values, right_cells, with_multiplicity)


def cell_rep(cat: BasedCategory, cell: Iterable[str]) -> MatrixRep:
    """Action of every 1-morphism on the additive closure of a left cell.

    Entry (F', F) of the matrix of G is c_{G,F}^{F'} for F, F' in the cell.
    """
    cell = _require_cell(preorder(cat, Side.LEFT), cell, "left cell")
    by_name = cat.by_name
    ind = {obj: tuple(f for f in cell if by_name[f].cod == obj) for obj in cat.objects}
    matrices = {}
    for g in cat.one_morphisms:
        rows, cols = ind[g.cod], ind[g.dom]
        matrices[g.name] = as_int_matrix(
            np.array([[cat.coefficient(g.name, f, f2) for f in cols] for f2 in rows], dtype=np.int64).reshape(
                len(rows), len(cols)
            )
        )
    rep = MatrixRep(cat, ind, matrices)
    report = validate_rep(rep)
    if not report.ok:
        raise PreconditionError(
            "Cell representation violates the homomorphism law; the category is not associative",
            details=report.to_dict(),
        )
    return rep


def annihilator_consistency(cat: BasedCategory, partial_matrices: Mapping[str, object]) -> Verdict:
    """Check that the zero-assigned 1-morphisms can form an annihilator.

    Fails when a two-sided cell mixes zero and nonzero assignments, or when a
    nonzero-assigned G lies ≥_J a zero-assigned F.
    """
    two_sided = preorder(cat, Side.TWO_SIDED)
    zero = {}
    for name in cat.names:
        if name in partial_matrices:
            zero[name] = not as_int_matrix(partial_matrices[name]).any()
    unknown = sorted(set(partial_matrices) - set(cat.names))
    if unknown:
        raise PreconditionError("Assignments name unknown 1-morphisms", details={"names": unknown})

    for cell in two_sided.cells:
        assigned = [name for name in cell if name in zero]
        zeros = [name for name in assigned if zero[name]]
        nonzeros = [name for name in assigned if not zero[name]]
        if zeros and nonzeros:
            return Verdict(False, {"kind": "split_cell", "pair": [zeros[0], nonzeros[0]], "cell": list(cell)})
    for f in (name for name in zero if zero[name]):
        for g in (name for name in zero if not zero[name]):
            if two_sided.geq(g, f):
                return Verdict(False, {"kind": "not_upward_closed", "pair": [f, g]})
    return Verdict(True, None)
