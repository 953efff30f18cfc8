"""
tworep command-line interface.

Every subcommand loads its inputs, runs one library operation and writes a
report envelope. Exit codes: 0 success, 1 failed verdict or library error,
2 usage error or malformed input.
"""
import logging
import sys
from functools import wraps
from pathlib import Path
from typing import Optional, Sequence

import click

from core.config import settings
from core.constants import OUTPUT_FORMATS
from core.exceptions import InvalidInputError, PreconditionError, handle_errors
from core.report import Report, report_success
from services.based_cat import build_cartan_category, build_group_category, validate_category
from services.cells import (
    Side,
    annihilator_consistency,
    cell_rep,
    is_strongly_regular,
    numerical_condition,
    preorder,
)
from services.classify import (
    MatrixConstraintSet,
    classify_group_reps,
    classify_quasi_idempotent,
    enumerate_matrix_solutions,
    enumerate_subgroups,
)
from services.export_service import export_service
from services.groups import GroupTable, named_group
from services.matrep import (
    Filtration,
    action_preorder,
    annihilated_morphisms,
    canonical_subquotient,
    complete_filtrations,
    is_transitive,
    jh_subquotients,
    formal_sum_check,
    match_cell_rep,
    principal_rep,
    reps_equivalent,
    simple_basis_matrices,
    subquotient,
    validate_rep,
    weak_jh_verify,
)
from services.obstruction import b2_obstruction_pipeline
from services.pfexact import pf_summary
from services.soergel import build_dihedral_soergel
from storage.json_store import json_store
from utils.helpers import matrix_to_list


logger = logging.getLogger(__name__)


@click.group()
@click.option("--format", "fmt", type=click.Choice(OUTPUT_FORMATS), default=None,
              help="Report rendering (default from TWOREP_DEFAULT_FORMAT).")
@click.option("--output", "-o", default="-", show_default=True, help="Report path, or - for stdout.")
@click.pass_context
def cli(ctx: click.Context, fmt: Optional[str], output: str):
    """Decategorified finitary 2-representation workbench."""
    ctx.obj = {"format": fmt or settings.default_format, "output": output}


def _emit(ctx: click.Context, report: Report, exit_code: int) -> None:
    options = ctx.find_root().obj
    text = export_service.export(report.to_dict(), options["format"])
    if options["output"] == "-":
        click.echo(text)
    else:
        Path(options["output"]).write_text(text + "\n", encoding="utf-8")
    ctx.exit(exit_code)


def report_command(name: str):
    """Register a click subcommand whose body returns a Report.

    Options are declared below this decorator as usual.
    """
    def decorator(body):
        guarded = handle_errors(name)(body)

        @wraps(body)
        def command(ctx: click.Context, **kwargs):
            report, exit_code = guarded(**kwargs)
            _emit(ctx, report, exit_code)

        return cli.command(name)(click.pass_context(command))

    return decorator


# --- Option helpers ---


def _input_option(f):
    return click.option("--input", "-i", "input_path", required=True, help="Category JSON file.")(f)


def _rep_option(f):
    return click.option("--rep", "-r", "rep_path", required=True, help="Representation JSON file.")(f)


def _cell_options(f):
    f = click.option("--cell", "cell", multiple=True, help="Cell member (repeat for every member).")(f)
    return click.option("--containing", default=None, help="Select the cell containing this 1-morphism.")(f)


def _parse_json_option(value: str, what: str):
    return json_store.parse(value, f"--{what}")


def _parse_indices(value: Optional[str]) -> list[int]:
    if value is None or not value.strip():
        return []
    try:
        return [int(x) for x in value.split(",")]
    except ValueError:
        raise InvalidInputError(f"Expected comma-separated class indices, got {value!r}") from None


def _select_cell(cat, side: Side, cell: Sequence[str], containing: Optional[str]) -> tuple[str, ...]:
    if bool(cell) == bool(containing):
        raise InvalidInputError("Give either --cell (every member) or --containing, not both")
    if containing:
        cat.morphism(containing)
        return preorder(cat, side).cell_of(containing)
    return tuple(cell)


def _load_group(group: Optional[str], table: Optional[str]) -> GroupTable:
    if bool(group) == bool(table):
        raise InvalidInputError("Give either --group (e.g. dihedral:4) or --table")
    if group:
        return named_group(group)
    data = json_store.load_json(table)
    if not isinstance(data, dict):
        raise InvalidInputError("Group table document must be a JSON object")
    try:
        return GroupTable.from_rows(data["elements"], data["table"], data.get("name"))
    except KeyError as e:
        raise InvalidInputError(f"Group table document lacks {e.args[0]!r}") from None


# --- Based categories ---


@report_command("validate")
@_input_option
def validate(input_path: str) -> Report:
    """Check every based-category axiom."""
    cat = json_store.load_category(input_path)
    report = validate_category(cat)
    return report_success("validate", report.to_dict(), passed=report.ok)


@report_command("compose")
@_input_option
@click.option("--first", "-f", required=True, help="Left factor F of F∘G.")
@click.option("--second", "-g", required=True, help="Right factor G of F∘G.")
def compose(input_path: str, first: str, second: str) -> Report:
    """Multiset of indecomposable summands of F∘G."""
    cat = json_store.load_category(input_path)
    return report_success("compose", {"pair": [first, second], "result": cat.compose(first, second)})


@report_command("build-group")
@click.option("--group", default=None, help="Named group: cyclic:n, dihedral:n, symmetric:n, alternating:n, klein.")
@click.option("--table", default=None, help="JSON file with 'elements' and 'table'.")
def build_group(group: Optional[str], table: Optional[str]) -> Report:
    """Group 2-category of a finite group."""
    cat = build_group_category(_load_group(group, table))
    return report_success("build-group", {"category": cat.to_dict()})


@report_command("build-cartan")
@click.option("--cartan", required=True, help="Cartan matrix as JSON, e.g. [[2,1],[1,2]].")
@click.option("--sigma", default=None, help="Nakayama permutation as a 1-based JSON list (default identity).")
def build_cartan(cartan: str, sigma: Optional[str]) -> Report:
    """Decategorified C_A of a connected algebra with the given Cartan matrix."""
    matrix = _parse_json_option(cartan, "cartan")
    if not isinstance(matrix, list):
        raise InvalidInputError("--cartan must be a JSON list of rows")
    perm = _parse_json_option(sigma, "sigma") if sigma else list(range(1, len(matrix) + 1))
    cat = build_cartan_category(matrix, perm)
    return report_success("build-cartan", {"category": cat.to_dict()})


@report_command("build-dihedral")
@click.option("--n", "n", type=int, required=True, help="Dihedral parameter: group of order 2n.")
def build_dihedral(n: int) -> Report:
    """Soergel-bimodule skeleton of a dihedral group."""
    cat = build_dihedral_soergel(n)
    return report_success("build-dihedral", {"category": cat.to_dict()})


# --- Cells ---


@report_command("cells")
@_input_option
@click.option("--side", type=click.Choice([s.value for s in Side]), default=Side.TWO_SIDED.value, show_default=True)
def cells(input_path: str, side: str) -> Report:
    """Cells of the left, right or two-sided preorder."""
    cat = json_store.load_category(input_path)
    structure = preorder(cat, side)
    return report_success("cells", structure.to_dict())


@report_command("strong-regularity")
@_input_option
@_cell_options
def strong_regularity(input_path: str, cell: tuple[str, ...], containing: Optional[str]) -> Report:
    """Whether a two-sided cell is strongly regular, with a witness if not."""
    cat = json_store.load_category(input_path)
    members = _select_cell(cat, Side.TWO_SIDED, cell, containing)
    verdict = is_strongly_regular(cat, members)
    return report_success("strong-regularity", {"cell": list(members), **verdict.to_dict()})


@report_command("numerical-condition")
@_input_option
@_cell_options
@click.option("--with-multiplicity/--without-multiplicity", "with_multiplicity", default=None,
              help="Count summands of F*∘F with or without multiplicity.")
@click.option("--lenient", is_flag=True, help="Also evaluate on cells that are not strongly regular.")
def numerical_condition_cmd(
    input_path: str, cell: tuple[str, ...], containing: Optional[str],
    with_multiplicity: Optional[bool], lenient: bool,
) -> Report:
    """Constancy of the J-supported summand count of F*∘F on right cells."""
    cat = json_store.load_category(input_path)
    members = _select_cell(cat, Side.TWO_SIDED, cell, containing)
    result = numerical_condition(cat, members, with_multiplicity=with_multiplicity, strict=not lenient)
    return report_success("numerical-condition", {"cell": list(members), **result.to_dict()})


@report_command("cell-rep")
@_input_option
@_cell_options
@click.option("--simple-basis", is_flag=True, help="Also report the transposed family [F*]ᵗ.")
def cell_rep_cmd(input_path: str, cell: tuple[str, ...], containing: Optional[str], simple_basis: bool) -> Report:
    """Cell representation of a left cell."""
    cat = json_store.load_category(input_path)
    members = _select_cell(cat, Side.LEFT, cell, containing)
    rep = cell_rep(cat, members)
    data = {"left_cell": list(members), "representation": rep.to_dict()}
    if simple_basis:
        dual = simple_basis_matrices(rep)
        data["simple_basis_matrices"] = {name: matrix_to_list(dual.matrices[name]) for name in cat.names}
    return report_success("cell-rep", data)


# --- Representations ---


@report_command("principal-rep")
@_input_option
@click.option("--object", "obj", required=True, help="Object i of the principal representation P_i.")
def principal_rep_cmd(input_path: str, obj: str) -> Report:
    """Principal representation P_i."""
    cat = json_store.load_category(input_path)
    rep = principal_rep(cat, obj)
    return report_success("principal-rep", {"object": obj, "representation": rep.to_dict()})


@report_command("validate-rep")
@_rep_option
@click.option("--formal-sum", is_flag=True, help="Also check the matrix of the sum of all non-identity 1-morphisms.")
def validate_rep_cmd(rep_path: str, formal_sum: bool) -> Report:
    """Representation axioms, action preorder and zero-set checks."""
    rep = json_store.load_rep(rep_path)
    report = validate_rep(rep)
    data = report.to_dict()
    if report.ok:
        zero = annihilated_morphisms(rep)
        data["action_preorder"] = action_preorder(rep).to_dict()
        data["annihilated"] = zero
        data["zero_set"] = annihilator_consistency(
            rep.category, {name: rep.matrices[name] for name in rep.category.names}
        ).to_dict()
        if formal_sum:
            data["formal_sum"] = formal_sum_check(rep)
    return report_success("validate-rep", data, passed=report.ok)


def _parse_filtration(value: Optional[str], count: int) -> Optional[Filtration]:
    if value is None:
        return None
    steps = _parse_indices(value)
    if sorted(steps) != list(range(count)):
        raise PreconditionError("Filtration must list every class index once", details={"steps": steps})
    return Filtration(tuple(steps))


@report_command("jh")
@_rep_option
@click.option("--filtration", default=None, help="Class indices in the order they are added, e.g. 1,0,2.")
def jh(rep_path: str, filtration: Optional[str]) -> Report:
    """Subquotients of a complete filtration (the first one by default)."""
    rep = json_store.load_rep(rep_path)
    structure = action_preorder(rep)
    chosen = _parse_filtration(filtration, len(structure.classes)) or complete_filtrations(rep)[0]
    parts = jh_subquotients(rep, chosen, structure)
    subquotients = []
    for part in parts:
        match = match_cell_rep(part) if part.size else None
        subquotients.append({
            "representation": part.to_dict(inline_category=False),
            "transitive": is_transitive(part),
            "cell_match": list(match[0]) if match else None,
        })
    canonical = [
        canonical_subquotient(rep, r, structure).to_dict(inline_category=False)
        for r in range(len(structure.classes))
    ]
    return report_success("jh", {
        "action_preorder": structure.to_dict(),
        "filtration": chosen.to_dict(),
        "subquotients": subquotients,
        "canonical_subquotients": canonical,
    })


@report_command("weak-jh-verify")
@_rep_option
@click.option("--cap", type=int, default=None, help="Exhaustive filtration cap (default TWOREP_FILTRATION_CAP).")
@click.option("--samples", type=int, default=None, help="Sampled filtrations beyond the cap.")
@click.option("--seed", type=int, default=None, help="Sampling seed.")
def weak_jh_verify_cmd(rep_path: str, cap: Optional[int], samples: Optional[int], seed: Optional[int]) -> Report:
    """Subquotient multisets agree across complete filtrations."""
    rep = json_store.load_rep(rep_path)
    result = weak_jh_verify(rep, cap=cap, sample_count=samples, seed=seed)
    return report_success("weak-jh-verify", result.to_dict(), passed=result.verdict)


@report_command("subquotient")
@_rep_option
@click.option("--lower", default="", help="Lower coideal as class indices, e.g. 0.")
@click.option("--upper", required=True, help="Upper coideal as class indices, e.g. 0,1.")
def subquotient_cmd(rep_path: str, lower: str, upper: str) -> Report:
    """Subquotient between two nested coideals."""
    rep = json_store.load_rep(rep_path)
    part = subquotient(rep, _parse_indices(lower), _parse_indices(upper))
    return report_success("subquotient", {"representation": part.to_dict(inline_category=False)})


@report_command("equivalent")
@_rep_option
@click.option("--other", required=True, help="Second representation JSON file.")
def equivalent(rep_path: str, other: str) -> Report:
    """Per-object permutations matching two representations, if any."""
    first = json_store.load_rep(rep_path)
    second = json_store.load_rep(other)
    perms = reps_equivalent(first, second)
    return report_success("equivalent", {"equivalent": perms is not None, "permutations": perms})


# --- Perron-Frobenius and classification ---


@report_command("pf")
@click.option("--matrix", required=True, help="Square integer matrix as JSON.")
@click.option("--m", "m", type=int, required=True, help="Quasi-idempotence constant: A² = mA.")
def pf(matrix: str, m: int) -> Report:
    """Exact Perron-Frobenius checks for a quasi-idempotent matrix."""
    data = _parse_json_option(matrix, "matrix")
    return report_success("pf", {"matrix": data, "m": m, **pf_summary(data, m)})


@report_command("enumerate")
@click.option("--size", type=int, required=True)
@click.option("--polynomial", required=True, help="Coefficients from the constant term up, e.g. 0,-2,1.")
@click.option("--positive", is_flag=True, help="Require every entry to be positive.")
@click.option("--trace", type=int, default=None)
@click.option("--determinant", type=int, default=None)
@click.option("--entry-bound", type=int, required=True)
@click.option("--exclude-zero", is_flag=True)
@click.option("--normal-form", type=click.Choice(["sorted_diagonal", "conjugacy"]), default="conjugacy", show_default=True)
@click.option("--budget", type=int, default=None, help="Maximum candidates (default TWOREP_SEARCH_BUDGET).")
def enumerate_cmd(
    size: int, polynomial: str, positive: bool, trace: Optional[int], determinant: Optional[int],
    entry_bound: int, exclude_zero: bool, normal_form: str, budget: Optional[int],
) -> Report:
    """Integer matrices X with p(X) = 0 under sign, trace and determinant constraints."""
    constraints = MatrixConstraintSet(
        size=size,
        polynomial=tuple(_parse_indices(polynomial)),
        positivity="positive" if positive else "nonnegative",
        trace=trace,
        determinant=determinant,
        entry_bound=entry_bound,
        exclude_zero=exclude_zero,
        normal_form=normal_form,
    )
    solutions = enumerate_matrix_solutions(constraints, budget=budget)
    return report_success("enumerate", {
        "constraints": constraints.to_dict(),
        "solutions": [matrix_to_list(s) for s in solutions],
    })


@report_command("classify-qi")
@click.option("--m", "m", type=int, required=True, help="Quasi-idempotence constant.")
@click.option("--size-max", type=int, default=None, help="Largest matrix size (default m).")
def classify_qi(m: int, size_max: Optional[int]) -> Report:
    """Positive integer X with X² = mX up to simultaneous permutation."""
    return report_success("classify-qi", classify_quasi_idempotent(m, size_max).to_dict())


@report_command("classify-group")
@click.option("--group", default=None, help="Named group, e.g. symmetric:3.")
@click.option("--table", default=None, help="JSON file with 'elements' and 'table'.")
def classify_group(group: Optional[str], table: Optional[str]) -> Report:
    """One transitive representation per conjugacy class of subgroups."""
    table_ = _load_group(group, table)
    lattice = enumerate_subgroups(table_)
    reps = classify_group_reps(table_)
    inequivalent = all(
        reps_equivalent(a, b) is None for i, a in enumerate(reps) for b in reps[i + 1:]
    )
    return report_success("classify-group", {
        "group": table_.name,
        "order": table_.order,
        "subgroups": len(lattice.subgroups),
        "classes": [lattice.labels(h) for h in lattice.representatives],
        "category": build_group_category(table_).to_dict(),
        "representations": [rep.to_dict(inline_category=False) for rep in reps],
        "pairwise_inequivalent": inequivalent,
    }, passed=inequivalent)


@report_command("b2-demo")
def b2_demo() -> Report:
    """Run the type B2 obstruction pipeline; fails when open shared-basis pairs remain."""
    result = b2_obstruction_pipeline()
    return report_success("b2-demo", result.to_dict(), passed=result.parameters["complete"])


def run(argv: Optional[Sequence[str]] = None) -> int:
    """Invoke the CLI without letting click exit the process."""
    try:
        result = cli.main(args=list(argv) if argv is not None else None, prog_name="tworep", standalone_mode=False)
    except click.ClickException as e:
        e.show()
        return 2 if isinstance(e, click.UsageError) else e.exit_code
    except click.Abort:
        click.echo("Aborted!", err=True)
        return 1
    return result if isinstance(result, int) else 0


if __name__ == "__main__":
    sys.exit(run())
