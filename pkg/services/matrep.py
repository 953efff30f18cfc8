"""
Non-negative integer matrix representations of a based category.

The matrix of F: i -> j has rows indexed by the indecomposables over j and
columns by those over i. Filtrations, subquotients and the weak
Jordan-Hölder comparison all work on the poset of action classes.
"""
import logging
import random
from dataclasses import dataclass, field
from functools import cached_property
from itertools import islice
from typing import Iterable, Mapping, Optional, Sequence

import networkx as nx
import numpy as np

from core.config import settings
from core.exceptions import MissingInvolutionError, PreconditionError, StructuralError
from services.based_cat import BasedCategory, ValidationReport
from utils.helpers import as_int_matrix, block_diagonal, identity, matrix_key, matrix_to_list, zeros


logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class MatrixRep:
    """Per-object indecomposable labels and one matrix per 1-morphism.

    Labels are unique across objects. Shapes are checked on construction;
    the algebraic axioms are checked by validate_rep.
    """
    category: BasedCategory
    ind_objects: Mapping[str, tuple[str, ...]]
    matrices: Mapping[str, np.ndarray]

    def __post_init__(self):
        unknown = sorted(set(self.ind_objects) - set(self.category.objects))
        if unknown:
            raise StructuralError("Indecomposables placed over unknown objects", details={"objects": unknown})
        ind = {obj: tuple(self.ind_objects.get(obj, ())) for obj in self.category.objects}
        labels = [label for obj in ind for label in ind[obj]]
        if len(set(labels)) != len(labels):
            raise StructuralError("Indecomposable labels must be unique", details={"labels": labels})
        missing = [name for name in self.category.names if name not in self.matrices]
        extra = sorted(set(self.matrices) - set(self.category.names))
        if missing or extra:
            raise StructuralError(
                "Matrices must be given for exactly the 1-morphisms of the category",
                details={"missing": missing, "unknown": extra},
            )
        matrices = {}
        for f in self.category.one_morphisms:
            rows, cols = len(ind[f.cod]), len(ind[f.dom])
            try:
                matrices[f.name] = as_int_matrix(self.matrices[f.name], rows, cols)
            except StructuralError as e:
                raise StructuralError(f"Matrix of {f.name}: {e.message}", details=dict(e.details, morphism=f.name)) from None
        object.__setattr__(self, "ind_objects", ind)
        object.__setattr__(self, "matrices", matrices)

    @cached_property
    def labels(self) -> tuple[str, ...]:
        return tuple(label for obj in self.category.objects for label in self.ind_objects[obj])

    @cached_property
    def object_of(self) -> dict[str, str]:
        return {label: obj for obj, labels in self.ind_objects.items() for label in labels}

    @cached_property
    def position(self) -> dict[str, int]:
        """Row/column position of each label inside its object's block."""
        return {label: k for labels in self.ind_objects.values() for k, label in enumerate(labels)}

    @property
    def size(self) -> int:
        return len(self.labels)

    def matrix(self, name: str) -> np.ndarray:
        return self.matrices[name]

    def entry(self, name: str, target: str, source: str) -> int:
        return int(self.matrices[name][self.position[target], self.position[source]])

    def to_dict(self, inline_category: bool = True) -> dict:
        data = {
            "ind_objects": {obj: list(labels) for obj, labels in self.ind_objects.items()},
            "matrices": {name: matrix_to_list(self.matrices[name]) for name in self.category.names},
        }
        if inline_category:
            data = {"category": self.category.to_dict(), **data}
        return data

    @classmethod
    def from_dict(cls, data: Mapping, category: BasedCategory) -> "MatrixRep":
        try:
            ind = {obj: tuple(labels) for obj, labels in data["ind_objects"].items()}
            matrices = {name: value for name, value in data["matrices"].items()}
        except (KeyError, TypeError, AttributeError) as e:
            raise StructuralError(f"Malformed representation document: {e}") from None
        return cls(category, ind, matrices)


def same_category(first: BasedCategory, second: BasedCategory) -> bool:
    return first is second or first.to_dict() == second.to_dict()


# --- Validation and constructions ---


def validate_rep(rep: MatrixRep) -> ValidationReport:
    """Identity, homomorphism-law and sign checks with witnesses."""
    report = ValidationReport()
    cat = rep.category
    for f in cat.one_morphisms:
        matrix = rep.matrices[f.name]
        negative = np.argwhere(matrix < 0)
        if len(negative):
            r, c = (int(x) for x in negative[0])
            report.add("negative_entry", f"matrix of {f.name} has a negative entry", f.name, r, c)
        if f.identity and not np.array_equal(matrix, identity(matrix.shape[0])):
            report.add("identity", f"identity {f.name} is not sent to an identity matrix", f.name)
    for f in cat.one_morphisms:
        for g in cat.one_morphisms:
            if f.dom != g.cod:
                continue
            expected = zeros(len(rep.ind_objects[f.cod]), len(rep.ind_objects[g.dom])).copy()
            for h, c in cat.compose(f.name, g.name).items():
                expected = expected + c * rep.matrices[h]
            if not np.array_equal(rep.matrices[f.name] @ rep.matrices[g.name], expected):
                report.add(
                    "homomorphism_law", f"[{f.name}][{g.name}] differs from the matrix of {f.name}∘{g.name}",
                    f.name, g.name,
                )
    return report


def _checked(rep: MatrixRep, what: str) -> MatrixRep:
    report = validate_rep(rep)
    if not report.ok:
        raise PreconditionError(f"{what} violates the representation axioms", details=report.to_dict())
    return rep


def principal_rep(cat: BasedCategory, obj: str) -> MatrixRep:
    """P_i: indecomposables over j are the 1-morphisms i -> j."""
    if obj not in cat.objects:
        raise PreconditionError(f"Unknown object {obj!r}", details={"object": obj})
    ind = {j: tuple(cat.hom(obj, j)) for j in cat.objects}
    matrices = {}
    for g in cat.one_morphisms:
        rows, cols = ind[g.cod], ind[g.dom]
        matrices[g.name] = np.array(
            [[cat.coefficient(g.name, f, f2) for f in cols] for f2 in rows], dtype=np.int64
        ).reshape(len(rows), len(cols))
    return _checked(MatrixRep(cat, ind, matrices), "Principal representation")


def _fresh_label(label: str, taken: set[str]) -> str:
    while label in taken:
        label = label + "'"
    return label


def direct_sum(first: MatrixRep, second: MatrixRep) -> MatrixRep:
    """Block-diagonal sum; clashing labels of the second summand get primes."""
    if not same_category(first.category, second.category):
        raise PreconditionError("Direct sum needs representations of the same category")
    taken = set(first.labels)
    rename = {}
    for label in second.labels:
        rename[label] = _fresh_label(label, taken)
        taken.add(rename[label])
    ind = {
        obj: first.ind_objects[obj] + tuple(rename[x] for x in second.ind_objects[obj])
        for obj in first.category.objects
    }
    matrices = {
        name: block_diagonal(first.matrices[name], second.matrices[name]) for name in first.category.names
    }
    return MatrixRep(first.category, ind, matrices)


def restrict_rep(rep: MatrixRep, subcat: BasedCategory) -> MatrixRep:
    """Restriction to a sub-2-category sharing the parent's 1-morphisms."""
    by_name = rep.category.by_name
    for f in subcat.one_morphisms:
        if f.name not in by_name or (by_name[f.name].dom, by_name[f.name].cod) != (f.dom, f.cod):
            raise PreconditionError(f"{f.name} is not a 1-morphism of the parent category", details={"name": f.name})
    ind = {obj: rep.ind_objects[obj] for obj in subcat.objects}
    return MatrixRep(subcat, ind, {f.name: rep.matrices[f.name] for f in subcat.one_morphisms})


def sum_matrix(rep: MatrixRep, multiset: Mapping[str, int]) -> np.ndarray:
    """Matrix of a formal sum of 1-morphisms with a common domain and codomain."""
    shapes = {rep.matrices[name].shape for name in multiset}
    if len(shapes) > 1:
        raise StructuralError("Formal sum mixes 1-morphisms of different shapes", details={"names": sorted(multiset)})
    if not shapes:
        raise StructuralError("Formal sum is empty")
    total = np.zeros(shapes.pop(), dtype=np.int64)
    for name, c in multiset.items():
        total = total + c * rep.matrices[name]
    return as_int_matrix(total)


def annihilated_morphisms(rep: MatrixRep) -> list[str]:
    return [name for name in rep.category.names if not rep.matrices[name].any()]


# --- Action preorder, coideals, filtrations ---


@dataclass(frozen=True)
class ActionPreorder:
    """Classes of the action preorder and the strict order between them.

    `class_order` holds (a, b) with classes[a] > classes[b].
    """
    labels: tuple[str, ...]
    classes: tuple[tuple[str, ...], ...]
    class_order: tuple[tuple[int, int], ...]
    relation: frozenset[tuple[str, str]] = field(default_factory=frozenset)

    @cached_property
    def class_of(self) -> dict[str, int]:
        return {label: i for i, cls in enumerate(self.classes) for label in cls}

    @cached_property
    def dag(self) -> nx.DiGraph:
        """Edges greater -> lesser between class indices (transitively closed)."""
        graph = nx.DiGraph()
        graph.add_nodes_from(range(len(self.classes)))
        graph.add_edges_from(self.class_order)
        return graph

    def above(self, index: int) -> set[int]:
        return set(nx.ancestors(self.dag, index))

    def below(self, index: int) -> set[int]:
        return set(nx.descendants(self.dag, index))

    def is_coideal(self, classes: Iterable[int]) -> bool:
        chosen = set(classes)
        return chosen <= set(range(len(self.classes))) and all(self.above(c) <= chosen for c in chosen)

    def to_dict(self) -> dict:
        return {
            "classes": [list(c) for c in self.classes],
            "order": [list(pair) for pair in self.class_order],
            "transitive": len(self.classes) == 1,
        }


def action_preorder(rep: MatrixRep) -> ActionPreorder:
    """X ≥ Y when X is a summand of F·Y for some F."""
    graph = nx.DiGraph()
    graph.add_nodes_from(rep.labels)
    for f in rep.category.one_morphisms:
        matrix = rep.matrices[f.name]
        for r, c in np.argwhere(matrix > 0):
            target = rep.ind_objects[f.cod][r]
            source = rep.ind_objects[f.dom][c]
            graph.add_edge(source, target)
    order = {label: i for i, label in enumerate(rep.labels)}
    classes = sorted(
        (sorted(c, key=order.__getitem__) for c in nx.strongly_connected_components(graph)),
        key=lambda c: order[c[0]],
    )
    index = {label: i for i, c in enumerate(classes) for label in c}
    closure = nx.transitive_closure(graph, reflexive=True)
    relation = frozenset((x, y) for y, x in closure.edges)
    class_order = sorted({(index[x], index[y]) for x, y in relation if index[x] != index[y]})
    return ActionPreorder(rep.labels, tuple(tuple(c) for c in classes), tuple(class_order), relation)


def is_transitive(rep: MatrixRep) -> bool:
    return rep.size > 0 and len(action_preorder(rep).classes) == 1


def coideals(rep: MatrixRep, structure: Optional[ActionPreorder] = None) -> list[frozenset[int]]:
    """All upward-closed sets of classes, by size then members."""
    structure = structure or action_preorder(rep)
    found = set()
    for antichain in nx.antichains(structure.dag):
        upset = set(antichain)
        for c in antichain:
            upset |= structure.above(c)
        found.add(frozenset(upset))
    return sorted(found, key=lambda s: (len(s), sorted(s)))


def subquotient(
    rep: MatrixRep,
    lower: Iterable[int],
    upper: Iterable[int],
    structure: Optional[ActionPreorder] = None,
) -> MatrixRep:
    """The subquotient on the classes in upper \\ lower, for coideals lower ⊆ upper."""
    structure = structure or action_preorder(rep)
    lower, upper = frozenset(lower), frozenset(upper)
    for name, chosen in (("lower", lower), ("upper", upper)):
        if not structure.is_coideal(chosen):
            raise PreconditionError(f"The {name} set is not a coideal", details={name: sorted(chosen)})
    if not lower <= upper:
        raise PreconditionError("Coideals are not nested", details={"lower": sorted(lower), "upper": sorted(upper)})

    keep_classes = upper - lower
    keep = {label for c in keep_classes for label in structure.classes[c]}
    inside_upper = {label for c in upper for label in structure.classes[c]}
    inside_lower = {label for c in lower for label in structure.classes[c]}
    ind = {obj: tuple(x for x in labels if x in keep) for obj, labels in rep.ind_objects.items()}
    matrices = {}
    for f in rep.category.one_morphisms:
        full = rep.matrices[f.name]
        sources, targets = rep.ind_objects[f.dom], rep.ind_objects[f.cod]
        for r, t in enumerate(targets):
            for c, s in enumerate(sources):
                leaks = (s in inside_upper and t not in inside_upper) or (s in inside_lower and t in keep)
                if leaks and full[r, c]:
                    raise PreconditionError(
                        "Discarded block is not zero; the representation is not coideal-closed",
                        details={"morphism": f.name, "source": s, "target": t},
                    )
        rows = [r for r, t in enumerate(targets) if t in keep]
        cols = [c for c, s in enumerate(sources) if s in keep]
        matrices[f.name] = full[np.ix_(rows, cols)] if rows and cols else np.zeros((len(rows), len(cols)), dtype=np.int64)
    return MatrixRep(rep.category, ind, matrices)


@dataclass(frozen=True)
class Filtration:
    """Complete filtration given by the order in which classes are added."""
    steps: tuple[int, ...]

    @property
    def chain(self) -> list[frozenset[int]]:
        return [frozenset(self.steps[:t]) for t in range(len(self.steps) + 1)]

    def to_dict(self) -> dict:
        return {"steps": list(self.steps), "chain": [sorted(q) for q in self.chain]}


def iter_filtrations(structure: ActionPreorder):
    """Complete filtrations: linear extensions adding greater classes first."""
    if not structure.classes:
        yield Filtration(())
        return
    for order in nx.all_topological_sorts(structure.dag):
        yield Filtration(tuple(order))


def complete_filtrations(rep: MatrixRep) -> list[Filtration]:
    return sorted(iter_filtrations(action_preorder(rep)), key=lambda f: f.steps)


def random_filtration(structure: ActionPreorder, rng: random.Random) -> Filtration:
    """A random linear extension (uniform choice among addable classes at each step)."""
    remaining = set(range(len(structure.classes)))
    steps = []
    while remaining:
        addable = sorted(c for c in remaining if not (structure.above(c) & remaining))
        choice = rng.choice(addable)
        steps.append(choice)
        remaining.remove(choice)
    return Filtration(tuple(steps))


def jh_subquotients(
    rep: MatrixRep, filtration: Filtration, structure: Optional[ActionPreorder] = None
) -> list[MatrixRep]:
    """Subquotients Q_{t-1} ⊆ Q_t of a complete filtration, each transitive."""
    structure = structure or action_preorder(rep)
    if sorted(filtration.steps) != list(range(len(structure.classes))):
        raise PreconditionError("Not a complete filtration of this representation", details=filtration.to_dict())
    chain = filtration.chain
    parts = []
    for t in range(1, len(chain)):
        part = subquotient(rep, chain[t - 1], chain[t], structure)
        if not is_transitive(part):
            raise PreconditionError(
                "Filtration step is not a coideal chain", details={"step": t, "filtration": filtration.to_dict()}
            )
        parts.append(part)
    return parts


def canonical_subquotient(rep: MatrixRep, index: int, structure: Optional[ActionPreorder] = None) -> MatrixRep:
    """Subquotient Y_r / X_r where X_r is the largest coideal avoiding class r."""
    structure = structure or action_preorder(rep)
    if not 0 <= index < len(structure.classes):
        raise PreconditionError("Class index out of range", details={"index": index})
    x_r = frozenset(set(range(len(structure.classes))) - structure.below(index) - {index})
    return subquotient(rep, x_r, x_r | {index}, structure)


# --- Equivalence ---


def _signature(rep: MatrixRep, label: str) -> tuple:
    obj = rep.object_of[label]
    k = rep.position[label]
    sig = []
    for f in rep.category.one_morphisms:
        matrix = rep.matrices[f.name]
        column = tuple(sorted(int(x) for x in matrix[:, k])) if f.dom == obj else ()
        row = tuple(sorted(int(x) for x in matrix[k, :])) if f.cod == obj else ()
        diagonal = int(matrix[k, k]) if f.dom == obj == f.cod else None
        sig.append((column, row, diagonal))
    return tuple(sig)


def reps_equivalent(first: MatrixRep, second: MatrixRep) -> Optional[dict[str, list[int]]]:
    """Per-object permutations p with second[F][p(a), p(b)] = first[F][a, b], or None.

    Objects stay fixed; only indecomposables over each object are relabeled.
    """
    if not same_category(first.category, second.category):
        raise PreconditionError("Equivalence compares representations of the same category")
    cat = first.category
    if any(len(first.ind_objects[o]) != len(second.ind_objects[o]) for o in cat.objects):
        return None
    sig2 = {label: _signature(second, label) for label in second.labels}
    candidates = {
        label: [y for y in second.ind_objects[first.object_of[label]] if sig2[y] == _signature(first, label)]
        for label in first.labels
    }
    if any(not options for options in candidates.values()):
        return None
    # most constrained first
    order = sorted(first.labels, key=lambda x: (len(candidates[x]), first.labels.index(x)))
    assignment: dict[str, str] = {}
    used: set[str] = set()
    morphisms = cat.one_morphisms

    def consistent(x: str, y: str) -> bool:
        obj = first.object_of[x]
        for f in morphisms:
            m1, m2 = first.matrices[f.name], second.matrices[f.name]
            if f.dom == obj:
                for t, ty in list(assignment.items()) + [(x, y)]:
                    if first.object_of[t] == f.cod and m1[first.position[t], first.position[x]] != m2[
                        second.position[ty], second.position[y]
                    ]:
                        return False
            if f.cod == obj:
                for s, sy in list(assignment.items()) + [(x, y)]:
                    if first.object_of[s] == f.dom and m1[first.position[x], first.position[s]] != m2[
                        second.position[y], second.position[sy]
                    ]:
                        return False
        return True

    def search(depth: int) -> bool:
        if depth == len(order):
            return True
        x = order[depth]
        for y in candidates[x]:
            if y in used or not consistent(x, y):
                continue
            assignment[x] = y
            used.add(y)
            if search(depth + 1):
                return True
            del assignment[x]
            used.discard(y)
        return False

    if not search(0):
        return None
    return {
        obj: [second.position[assignment[x]] for x in first.ind_objects[obj]]
        for obj in cat.objects
    }


# --- Weak Jordan-Hölder ---


@dataclass
class WeakJHResult:
    verdict: bool
    sampled: bool
    filtrations_checked: int
    certificate: list[dict] = field(default_factory=list)
    counterexample: Optional[dict] = None

    def to_dict(self) -> dict:
        return {
            "verdict": self.verdict,
            "sampled": self.sampled,
            "filtrations_checked": self.filtrations_checked,
            "certificate": self.certificate,
            "counterexample": self.counterexample,
        }


def _match(reference: Sequence[MatrixRep], other: Sequence[MatrixRep]) -> Optional[list[int]]:
    # greedy matching is exact because matrix equivalence is an equivalence relation
    if len(reference) != len(other):
        return None
    free = list(range(len(reference)))
    sigma = []
    for part in other:
        hit = next((i for i in free if reps_equivalent(reference[i], part) is not None), None)
        if hit is None:
            return None
        free.remove(hit)
        sigma.append(hit)
    return sigma


def weak_jh_verify(
    rep: MatrixRep,
    cap: Optional[int] = None,
    sample_count: Optional[int] = None,
    seed: Optional[int] = None,
) -> WeakJHResult:
    """Compare the subquotient multisets of all complete filtrations.

    Beyond `cap` filtrations, `sample_count` random ones are checked instead
    and the result is flagged as sampled.
    """
    cap = settings.filtration_cap if cap is None else cap
    sample_count = settings.sample_count if sample_count is None else sample_count
    seed = settings.random_seed if seed is None else seed
    structure = action_preorder(rep)

    filtrations = list(islice(iter_filtrations(structure), cap + 1))
    sampled = len(filtrations) > cap
    if sampled:
        logger.warning(f"More than {cap} complete filtrations; checking {sample_count} sampled ones")
        rng = random.Random(seed)
        filtrations = [random_filtration(structure, rng) for _ in range(sample_count)]
    else:
        filtrations.sort(key=lambda f: f.steps)

    reference = jh_subquotients(rep, filtrations[0], structure)
    result = WeakJHResult(verdict=True, sampled=sampled, filtrations_checked=len(filtrations))
    for k, filtration in enumerate(filtrations[1:], start=1):
        parts = jh_subquotients(rep, filtration, structure)
        sigma = _match(reference, parts)
        if sigma is None:
            result.verdict = False
            result.counterexample = {
                "first": filtrations[0].to_dict(),
                "second": filtration.to_dict(),
            }
            return result
        result.certificate.append({"filtration": filtration.to_dict(), "sigma": sigma})
    logger.debug(f"weak Jordan-Hölder check passed on {len(filtrations)} filtrations")
    return result


# --- Involution-dependent ---


def simple_basis_matrices(rep: MatrixRep) -> MatrixRep:
    """⟦F⟧ = [F*]ᵗ, returned as a representation on the same labels."""
    cat = rep.category
    if not cat.has_involution:
        raise MissingInvolutionError("simple_basis_matrices")
    matrices = {name: rep.matrices[cat.star(name)].T for name in cat.names}
    dual = MatrixRep(cat, rep.ind_objects, matrices)
    report = validate_rep(dual)
    if not report.ok:
        raise PreconditionError(
            "Transposed family violates the homomorphism law; the involution is not compatible",
            details=report.to_dict(),
        )
    return dual


def match_cell_rep(rep: MatrixRep) -> Optional[tuple[tuple[str, ...], dict[str, list[int]]]]:
    """A left cell whose cell representation is matrix-equivalent to rep."""
    from services.cells import cell_rep, left_cells

    for cell in left_cells(rep.category):
        candidate = cell_rep(rep.category, cell)
        perms = reps_equivalent(candidate, rep)
        if perms is not None:
            return cell, perms
    return None


def formal_sum_check(rep: MatrixRep) -> dict:
    """[F] for F the sum of all non-identity 1-morphisms of a C_A-type category."""
    from services.based_cat import non_identity_sum
    from services.pfexact import quasi_idempotent_check

    cat = rep.category
    if len(cat.objects) != 1:
        raise PreconditionError("The formal sum check needs a one-object category")
    formal = non_identity_sum(cat)
    m = cat.metadata.get("m")
    if m is None:
        m = sum(cat.compose_sums(formal, formal).values()) // max(len(formal), 1)
    matrix = sum_matrix(rep, formal)
    check = quasi_idempotent_check(matrix, m)
    transitive = is_transitive(rep)
    holds = check.holds and (not transitive or (check.positive and check.rank1))
    return {
        "m": m,
        "matrix": matrix_to_list(matrix),
        "transitive": transitive,
        "check": check.to_dict(),
        "holds": holds,
    }


def rep_key(rep: MatrixRep) -> tuple:
    """Hashable summary for ordering and caching."""
    return tuple((name, matrix_key(rep.matrices[name])) for name in rep.category.names)
