"""
The type B2 obstruction: which one-dimensional modules of the dihedral group
of order 8 admit a transitive categorification by Soergel bimodules.

Each stage checks its output against the expected form and aborts with a
stage-labeled StageMismatchError otherwise.
"""
import logging
from itertools import product

import numpy as np
import sympy

from core.constants import (
    B2_SQUARE_COEFFICIENT,
    B2_SUM_CANDIDATES,
    B2_SURVIVING_PAIR,
    B2_THETA_SQUARE_COEFFICIENTS,
)
from core.exceptions import StageMismatchError
from services.based_cat import full_subcategory, validate_category
from services.cells import Side, annihilator_consistency, cell_rep, preorder
from services.classify import (
    ClassificationReport,
    MatrixConstraintSet,
    NormalForm,
    conjugacy_classes,
    enumerate_matrix_solutions,
    polynomial_text,
)
from services.matrep import (
    MatrixRep,
    complete_filtrations,
    is_transitive,
    jh_subquotients,
    reps_equivalent,
    validate_rep,
)
from services.soergel import build_dihedral_soergel, dihedral_kl_data, sign_character_values, theta
from utils.helpers import as_int_matrix, conjugates, identity, matrix_key, matrix_to_list


logger = logging.getLogger(__name__)

SIGNS = ((1, 1), (-1, -1), (-1, 1), (1, -1))


def _module_name(eps: tuple[int, int]) -> str:
    return f"V_{{{eps[0]},{eps[1]}}}"


def _stage_one_dimensional(cat, data) -> dict:
    """Modules realized by the one-element left cells."""
    realized = []
    characters = {eps: sign_character_values(data, {"s": eps[0], "t": eps[1]}) for eps in SIGNS}
    for cell in preorder(cat, Side.LEFT).cells:
        if len(cell) != 1:
            continue
        rep = cell_rep(cat, cell)
        values = {name: int(rep.matrices[name][0, 0]) for name in cat.names}
        match = [_module_name(eps) for eps, chi in characters.items() if chi == values]
        realized.append({"left_cell": list(cell), "values": values, "module": match[0] if match else None})
    if sorted(r["module"] or "" for r in realized) != sorted(_module_name(eps) for eps in SIGNS[:2]):
        raise StageMismatchError("0", "One-element cells do not realize V_{1,1} and V_{-1,-1}", {"realized": realized})
    return {"realized": realized}


def _stage_identities(cat) -> tuple[dict, tuple[int, int, int]]:
    """(θ_st+θ_ts)² = aΘ and Θ² = bΘ + c(θ_st+θ_ts) modulo the top cell."""
    cells = preorder(cat, Side.TWO_SIDED).cells
    if len(cells) != 3:
        raise StageMismatchError("2", "Expected three two-sided cells", {"cells": [list(c) for c in cells]})
    top = next(c for c in cells if theta("stst") in c)
    middle = next(c for c in cells if theta("s") in c)
    y = {theta("st"): 1, theta("ts"): 1}
    big_theta = {name: 1 for name in middle}

    def truncated(value: dict) -> dict:
        return {k: v for k, v in value.items() if k not in top}

    y_square = truncated(cat.compose_sums(y, y))
    theta_square = truncated(cat.compose_sums(big_theta, big_theta))
    a = y_square.get(theta("s"), 0)
    b = theta_square.get(theta("s"), 0)
    c = theta_square.get(theta("st"), 0) - b
    if y_square != {k: a for k in big_theta}:
        raise StageMismatchError("2", "(θ_st+θ_ts)² is not a multiple of Θ", {"square": y_square})
    expected = {k: b + (c if k in y else 0) for k in big_theta}
    if theta_square != expected:
        raise StageMismatchError("2", "Θ² is not of the form bΘ + c(θ_st+θ_ts)", {"square": theta_square})
    if (a, (b, c)) != (B2_SQUARE_COEFFICIENT, B2_THETA_SQUARE_COEFFICIENTS):
        raise StageMismatchError("2", "Unexpected identity coefficients", {"a": a, "b": b, "c": c})
    return {
        "cells": [list(cell) for cell in cells],
        "y_square": {"theta_coefficient": a},
        "theta_square": {"theta_coefficient": b, "y_coefficient": c},
    }, (a, b, c)


def _stage_sum_candidates(a: int, b: int, c: int) -> tuple[dict, list[np.ndarray]]:
    """X = [[θ_st+θ_ts]] satisfies X⁴ = abX² + a²cX; 2×2 solutions with the quadratic factor."""
    x = sympy.Symbol("x")
    p = x**4 - a * b * x**2 - a * a * c * x
    _, factors = sympy.factor_list(p)
    quadratics = [f for f, _ in factors if sympy.degree(f, x) == 2]
    if len(quadratics) != 1:
        raise StageMismatchError("3", "Expected exactly one irreducible quadratic factor", {"polynomial": str(p)})
    quadratic = sympy.Poly(quadratics[0], x)
    _, lin, const = quadratic.all_coeffs()
    trace, determinant = int(-lin), int(const)
    # trace 4 bounds the diagonal, so bc = ad - det <= 4 + 4 bounds every entry
    bound = max(trace * trace // 4 - determinant, trace)
    constraints = MatrixConstraintSet.from_sympy(
        p, x, size=2, trace=trace, determinant=determinant, entry_bound=bound,
    )
    solutions = enumerate_matrix_solutions(constraints)
    if tuple(matrix_key(s) for s in solutions) != B2_SUM_CANDIDATES:
        raise StageMismatchError(
            "3", "Candidate list differs from the expected nine matrices",
            {"found": [matrix_to_list(s) for s in solutions]},
        )
    return {
        "polynomial": polynomial_text(constraints.polynomial),
        "quadratic_factor": str(quadratic.as_expr()),
        "trace": trace,
        "determinant": determinant,
        "entry_bound": bound,
        "solutions": [matrix_to_list(s) for s in solutions],
        "conjugacy_classes": len(conjugacy_classes(solutions)),
    }, solutions


def _expected_reflection_candidates(bound: int) -> set:
    expected = {((1, 1), (1, 1)), ((2, 0), (0, 2))}
    expected |= {((2, a), (0, 0)) for a in range(bound + 1)}
    expected |= {((2, 0), (a, 0)) for a in range(bound + 1)}
    return expected


def _stage_reflection_candidates(bound: int) -> tuple[dict, list[np.ndarray]]:
    constraints = MatrixConstraintSet(
        size=2, polynomial=(0, -2, 1), entry_bound=bound, exclude_zero=True,
        normal_form=NormalForm.SORTED_DIAGONAL,
    )
    solutions = enumerate_matrix_solutions(constraints)
    if {matrix_key(s) for s in solutions} != _expected_reflection_candidates(bound):
        raise StageMismatchError(
            "4", "Candidates for θ_s differ from the expected families",
            {"found": [matrix_to_list(s) for s in solutions]},
        )
    return {"entry_bound": bound, "count": len(solutions), "solutions": [matrix_to_list(s) for s in solutions]}, solutions


def _intersect(first: list[np.ndarray], second: list[np.ndarray], targets: set) -> list[tuple]:
    pairs = []
    for s, t in product(first, second):
        if matrix_key(s @ t + t @ s) in targets:
            pairs.append((matrix_key(s), matrix_key(t)))
    return pairs


def _stage_intersection(candidates: list[np.ndarray], sums: list[np.ndarray]) -> tuple[dict, list[tuple]]:
    targets = {matrix_key(s) for s in sums}
    pairs = sorted(set(_intersect(candidates, candidates, targets)), reverse=True)
    expected = sorted({B2_SURVIVING_PAIR, B2_SURVIVING_PAIR[::-1]}, reverse=True)
    if pairs != expected:
        raise StageMismatchError("5", "Unexpected surviving pairs", {"pairs": [[list(map(list, m)) for m in p] for p in pairs]})
    return {
        "pairs": [{"theta_s": [list(r) for r in s], "theta_t": [list(r) for r in t]} for s, t in pairs],
    }, pairs


def restriction_check(cat, generator: str, simple_matrix) -> dict:
    """Restrict to {θ_e, θ_g} and compare every subquotient with the cell representations.

    θ_g* = θ_g, so the action on indecomposables is [θ_g] = [[θ_g]]ᵗ. Each weak
    Jordan-Hölder subquotient is transitive, and its simple transitive quotient
    keeps its matrices, so a subquotient matching no cell representation
    excludes the candidate.
    """
    subcat = full_subcategory(cat, [theta("e"), theta(generator)])
    action = as_int_matrix(np.array(simple_matrix)).T
    size = action.shape[0]
    rep = MatrixRep(
        subcat, {subcat.objects[0]: tuple(f"X{k + 1}" for k in range(size))},
        {theta("e"): identity(size), theta(generator): action},
    )
    result = {"generator": generator, "action": matrix_to_list(action)}
    if not validate_rep(rep).ok:
        return {**result, "valid": False, "excludes": True}
    cells = [cell_rep(subcat, cell) for cell in preorder(subcat, Side.LEFT).cells]
    parts = jh_subquotients(rep, complete_filtrations(rep)[0])
    matches = [any(reps_equivalent(cell, part) is not None for cell in cells) for part in parts]
    return {
        **result,
        "valid": True,
        "transitive": is_transitive(rep),
        "subquotients": [matrix_to_list(p.matrices[theta(generator)]) for p in parts],
        "match_cell_reps": matches,
        "excludes": not all(matches),
    }


def _stage_shared_basis(cat, candidates: list[np.ndarray], sums: list[np.ndarray], known: list[tuple]) -> dict:
    """Re-run the intersection with [[θ_t]] in every basis ordering and test each new pair by restriction."""
    targets = {matrix_key(s) for s in sums}
    reordered = {matrix_key(c): c for t in candidates for c in conjugates(t)}
    pairs = sorted(set(_intersect(candidates, list(reordered.values()), targets)) - set(known), reverse=True)
    audited = []
    for s, t in pairs:
        restrictions = [restriction_check(cat, "s", s), restriction_check(cat, "t", t)]
        audited.append({
            "theta_s": [list(r) for r in s],
            "theta_t": [list(r) for r in t],
            "restrictions": restrictions,
            "status": "eliminated" if any(r["excludes"] for r in restrictions) else "open",
        })
    open_pairs = [p for p in audited if p["status"] == "open"]
    if open_pairs:
        logger.warning(f"Shared-basis audit leaves {len(open_pairs)} pairs that no restriction excludes")
    return {"extra_pairs": audited, "count": len(audited), "open": len(open_pairs)}


def _stage_certificate(cat, pairs: list[tuple]) -> dict:
    """The surviving [[θ_s]] restricted to {θ_e, θ_s} is transitive but matches no cell representation."""
    subcat = full_subcategory(cat, [theta("e"), theta("s")])
    cell_matrices = [
        matrix_to_list(cell_rep(subcat, cell).matrices[theta("s")]) for cell in preorder(subcat, Side.LEFT).cells
    ]
    checked = []
    for s, _ in pairs:
        if s != B2_SURVIVING_PAIR[0]:
            continue
        check = restriction_check(cat, "s", s)
        if not check["valid"] or not check["transitive"]:
            raise StageMismatchError("6", "Restricted action is not a transitive representation", {"matrix": s})
        if not check["excludes"]:
            raise StageMismatchError("6", "Restricted action matches a cell representation", {"matrix": s})
        checked.append({"theta_s_action": check["action"], "transitive": True, "matches_cell_rep": False})
    return {
        "label": "obstruction certificate: transitive restriction not equivalent to any cell representation",
        "subcategory": list(subcat.names),
        "cell_rep_matrices": cell_matrices,
        "checked": checked,
    }


def _stage_annihilators(cat, data) -> dict:
    results = []
    for eps in SIGNS:
        values = sign_character_values(data, {"s": eps[0], "t": eps[1]})
        verdict = annihilator_consistency(cat, {name: [[v]] for name, v in values.items()})
        results.append({"module": _module_name(eps), "values": values, **verdict.to_dict()})
    consistent = [r["module"] for r in results if r["verdict"]]
    if consistent != [_module_name(eps) for eps in SIGNS[:2]]:
        raise StageMismatchError("7", "Unexpected annihilator verdicts", {"results": results})
    return {"modules": results}


def b2_obstruction_pipeline() -> ClassificationReport:
    """Run every stage and collect the stage outputs into one report.

    The conclusion is unconditional only when the shared-basis audit leaves no
    open pair; otherwise it names the open pairs and `parameters["complete"]`
    is false.
    """
    stages = {}
    data = dihedral_kl_data(4)
    cat = build_dihedral_soergel(4)
    report = validate_category(cat)
    if not report.ok:
        raise StageMismatchError("1", "B2 Soergel category fails validation", report.to_dict())
    stages["1"] = {"one_morphisms": list(cat.names), "valid": True}
    stages["0"] = _stage_one_dimensional(cat, data)
    stages["2"], (a, b, c) = _stage_identities(cat)
    stages["3"], sums = _stage_sum_candidates(a, b, c)
    bound = max(int(s.max()) for s in sums)
    stages["4"], candidates = _stage_reflection_candidates(bound)
    stages["5"], pairs = _stage_intersection(candidates, sums)
    stages["5b"] = _stage_shared_basis(cat, candidates, sums, pairs)
    stages["6"] = _stage_certificate(cat, pairs)
    stages["7"] = _stage_annihilators(cat, data)

    eliminated = [
        {"matrix": [list(r) for r in B2_SURVIVING_PAIR[0]], "reason": "stage 6: two-dimensional candidate has no cell-representation restriction"},
    ]
    for pair in stages["5b"]["extra_pairs"]:
        if pair["status"] == "eliminated":
            eliminated.append({
                "matrix": pair["theta_s"],
                "theta_t": pair["theta_t"],
                "reason": "stage 5b: a restriction to {θ_e, θ_s} or {θ_e, θ_t} has a subquotient matching no cell representation",
            })
    eliminated += [
        {"matrix": None, "reason": "stage 7: V_{-1,1} splits the middle two-sided cell"},
        {"matrix": None, "reason": "stage 7: V_{1,-1} splits the middle two-sided cell"},
    ]
    open_pairs = [
        {"theta_s": p["theta_s"], "theta_t": p["theta_t"]} for p in stages["5b"]["extra_pairs"] if p["status"] == "open"
    ]
    conclusion = "only V_{1,1} and V_{-1,-1} categorifiable"
    if open_pairs:
        conclusion += f"; V_2 not excluded for {len(open_pairs)} shared-basis pairs"
    # θ_s action on the surviving modules V_{1,1}, V_{-1,-1}
    solutions = [as_int_matrix([[r["values"][theta("s")]]]) for r in stages["7"]["modules"][:2]]
    logger.info("B2 pipeline finished")
    return ClassificationReport(
        solutions=solutions,
        eliminated=eliminated,
        conclusion=conclusion,
        parameters={
            "stages": {k: stages[k] for k in sorted(stages)},
            "size_assumption": 2,
            "complete": not open_pairs,
            "open_pairs": open_pairs,
        },
    )
