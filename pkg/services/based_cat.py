"""
Based categories: the decategorified skeleton of a finitary 2-category.

A BasedCategory holds objects, indecomposable 1-morphisms and the structure
constants c_{F,G}^H (multiplicity of H in F∘G), plus an optional involution.
Validation never raises for axiom violations; it returns a ValidationReport.
"""
import logging
from dataclasses import dataclass, field
from functools import cached_property
from itertools import product
from typing import Iterable, Mapping, Optional, Sequence

import networkx as nx

from core.constants import COMPOSITION_KEY_SEP
from core.exceptions import (
    CompositionUndefinedError,
    InvalidInputError,
    MissingInvolutionError,
)
from services.groups import GroupTable, MultiplicationTable
from utils.helpers import Multiset, add_multisets, clean_multiset, scale_multiset, validate_name


logger = logging.getLogger(__name__)

Pair = tuple[str, str]


@dataclass(frozen=True)
class OneMorphism:
    name: str
    dom: str
    cod: str
    identity: bool = False

    def to_dict(self) -> dict:
        return {"name": self.name, "dom": self.dom, "cod": self.cod, "identity": self.identity}


@dataclass(frozen=True)
class Violation:
    kind: str
    message: str
    witness: tuple = ()

    def to_dict(self) -> dict:
        return {"kind": self.kind, "message": self.message, "witness": list(self.witness)}


@dataclass
class ValidationReport:
    violations: list[Violation] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def add(self, kind: str, message: str, *witness) -> None:
        self.violations.append(Violation(kind, message, tuple(witness)))

    def kinds(self) -> set[str]:
        return {v.kind for v in self.violations}

    def to_dict(self) -> dict:
        return {"valid": self.ok, "violations": [v.to_dict() for v in self.violations]}


@dataclass(frozen=True)
class BasedCategory:
    """Objects, indecomposable 1-morphisms and non-negative structure constants.

    `composition[(F, G)]` is the multiset F∘G for dom(F) = cod(G). Missing
    composable pairs compose to zero, except that missing identity
    compositions default to the unit law.
    """
    objects: tuple[str, ...]
    one_morphisms: tuple[OneMorphism, ...]
    composition: Mapping[Pair, Multiset]
    involution: Optional[Mapping[str, str]] = None
    metadata: Mapping = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "objects", tuple(self.objects))
        object.__setattr__(self, "one_morphisms", tuple(self.one_morphisms))
        table = {pair: clean_multiset(value) for pair, value in self.composition.items()}
        for unit in self.one_morphisms:
            if not unit.identity:
                continue
            for f in self.one_morphisms:
                if f.cod == unit.dom:
                    table.setdefault((unit.name, f.name), {f.name: 1})
                if f.dom == unit.dom:
                    table.setdefault((f.name, unit.name), {f.name: 1})
        object.__setattr__(self, "composition", {k: v for k, v in table.items() if v})
        if self.involution is not None:
            object.__setattr__(self, "involution", dict(self.involution))
        object.__setattr__(self, "metadata", dict(self.metadata))

    __hash__ = None

    # --- Lookup ---

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(f.name for f in self.one_morphisms)

    @cached_property
    def by_name(self) -> dict[str, OneMorphism]:
        return {f.name: f for f in self.one_morphisms}

    def morphism(self, name: str) -> OneMorphism:
        if name in self.by_name:
            return self.by_name[name]
        raise InvalidInputError(f"Unknown 1-morphism {name!r}", details={"name": name})

    def identity_of(self, obj: str) -> str:
        for f in self.one_morphisms:
            if f.identity and f.dom == obj:
                return f.name
        raise InvalidInputError(f"Object {obj!r} has no identity 1-morphism", details={"object": obj})

    def hom(self, source: str, target: str) -> list[str]:
        """Names of the 1-morphisms source -> target, in declaration order."""
        return [f.name for f in self.one_morphisms if f.dom == source and f.cod == target]

    def composable(self, first: str, second: str) -> bool:
        return self.morphism(first).dom == self.morphism(second).cod

    @property
    def has_involution(self) -> bool:
        return self.involution is not None

    def star(self, name: str) -> str:
        if self.involution is None:
            raise MissingInvolutionError("The involution *")
        return self.involution[name]

    # --- Composition ---

    def compose(self, first: str, second: str) -> Multiset:
        if not self.composable(first, second):
            raise CompositionUndefinedError(first, second)
        return dict(self.composition.get((first, second), {}))

    def coefficient(self, first: str, second: str, target: str) -> int:
        return self.composition.get((first, second), {}).get(target, 0)

    def compose_sums(self, first: Mapping[str, int], second: Mapping[str, int]) -> Multiset:
        """Composition of formal sums; non-composable pairs contribute zero."""
        parts = []
        for f, a in first.items():
            for g, b in second.items():
                if a and b and self.composable(f, g):
                    parts.append(scale_multiset(self.composition.get((f, g), {}), a * b))
        return add_multisets(*parts)

    # --- Serialization ---

    def to_dict(self) -> dict:
        data = {
            "objects": list(self.objects),
            "one_morphisms": [f.to_dict() for f in self.one_morphisms],
            "composition": {
                f"{f}{COMPOSITION_KEY_SEP}{g}": dict(value)
                for (f, g), value in sorted(self.composition.items(), key=lambda kv: self._pair_order(kv[0]))
            },
        }
        if self.involution is not None:
            data["involution"] = {name: self.involution[name] for name in self.names if name in self.involution}
        if self.metadata:
            data["metadata"] = dict(self.metadata)
        return data

    def _pair_order(self, pair: Pair) -> tuple:
        position = {name: i for i, name in enumerate(self.names)}
        return tuple(position.get(name, len(position)) for name in pair) + pair

    @classmethod
    def from_dict(cls, data: Mapping) -> "BasedCategory":
        if not isinstance(data, Mapping):
            raise InvalidInputError("Category document must be a JSON object")
        try:
            objects = tuple(validate_name(o, "object") for o in data["objects"])
            morphisms = tuple(
                OneMorphism(
                    validate_name(m["name"], "1-morphism"),
                    m["dom"],
                    m["cod"],
                    bool(m.get("identity", False)),
                )
                for m in data["one_morphisms"]
            )
            composition = {}
            for key, value in data.get("composition", {}).items():
                first, sep, second = key.partition(COMPOSITION_KEY_SEP)
                if not sep or COMPOSITION_KEY_SEP in second:
                    raise InvalidInputError(f"Bad composition key {key!r}", details={"key": key})
                if not isinstance(value, Mapping) or any(
                    not isinstance(v, int) or isinstance(v, bool) for v in value.values()
                ):
                    raise InvalidInputError(f"Composition entry {key!r} must map names to integers")
                composition[(first, second)] = dict(value)
        except (KeyError, TypeError) as e:
            raise InvalidInputError(f"Malformed category document: {e}") from None
        involution = data.get("involution")
        return cls(objects, morphisms, composition, dict(involution) if involution is not None else None,
                   dict(data.get("metadata") or {}))


# --- Validation ---


def validate_category(cat: BasedCategory) -> ValidationReport:
    """Check every based-category axiom and report violations with witnesses."""
    report = ValidationReport()
    by_name = {}
    for f in cat.one_morphisms:
        if f.name in by_name:
            report.add("duplicate_name", f"1-morphism {f.name} declared twice", f.name)
        by_name[f.name] = f
        for end in (f.dom, f.cod):
            if end not in cat.objects:
                report.add("unknown_object", f"{f.name} refers to unknown object {end}", f.name, end)
        if f.identity and f.dom != f.cod:
            report.add("identity_shape", f"identity {f.name} is not an endomorphism", f.name)

    for obj in cat.objects:
        units = [f.name for f in cat.one_morphisms if f.identity and f.dom == obj]
        if len(units) != 1:
            report.add("identity_count", f"object {obj} has {len(units)} identity 1-morphisms", obj, *units)
    if not report.ok:
        return report

    for (f, g), value in cat.composition.items():
        if f not in by_name or g not in by_name:
            report.add("unknown_morphism", f"composition key {f}|{g} names an unknown 1-morphism", f, g)
            continue
        if by_name[f].dom != by_name[g].cod:
            report.add("not_composable", f"composition {f}|{g} stored for a non-composable pair", f, g)
            continue
        for h, c in value.items():
            if h not in by_name:
                report.add("unknown_morphism", f"{f}∘{g} contains unknown 1-morphism {h}", f, g, h)
            elif (by_name[h].dom, by_name[h].cod) != (by_name[g].dom, by_name[f].cod):
                report.add("summand_shape", f"{h} cannot be a summand of {f}∘{g}", f, g, h)
            if c < 0:
                report.add("negative", f"c[{f},{g}]^{h} = {c} is negative", f, g, h)
    if not report.ok:
        return report

    for unit in (f for f in cat.one_morphisms if f.identity):
        for f in cat.one_morphisms:
            if f.cod == unit.dom and cat.composition.get((unit.name, f.name), {}) != {f.name: 1}:
                report.add("unit_law", f"{unit.name}∘{f.name} is not {f.name}", unit.name, f.name)
            if f.dom == unit.dom and cat.composition.get((f.name, unit.name), {}) != {f.name: 1}:
                report.add("unit_law", f"{f.name}∘{unit.name} is not {f.name}", f.name, unit.name)

    names = cat.names
    for f, g, k in product(names, repeat=3):
        if by_name[f].dom != by_name[g].cod or by_name[g].dom != by_name[k].cod:
            continue
        left = cat.compose_sums(cat.compose(f, g), {k: 1})
        right = cat.compose_sums({f: 1}, cat.compose(g, k))
        if left != right:
            report.add("associativity", f"({f}∘{g})∘{k} != {f}∘({g}∘{k})", f, g, k)

    if cat.involution is not None:
        _validate_involution(cat, report)
    return report


def _validate_involution(cat: BasedCategory, report: ValidationReport) -> None:
    inv = cat.involution
    by_name = cat.by_name
    if set(inv) != set(by_name) or set(inv.values()) != set(by_name):
        report.add("involution_domain", "involution is not a bijection on 1-morphism names")
        return
    for f in cat.one_morphisms:
        image = by_name[inv[f.name]]
        if (image.dom, image.cod) != (f.cod, f.dom):
            report.add("involution_shape", f"{f.name}* = {image.name} does not swap dom and cod", f.name)
        if inv[image.name] != f.name:
            report.add("involution_order", f"{f.name}** != {f.name}", f.name)
        if f.identity and image.name != f.name:
            report.add("involution_identity", f"identity {f.name} is not fixed by *", f.name)
    if not report.ok:
        return
    for (f, g), value in cat.composition.items():
        mirrored = cat.composition.get((inv[g], inv[f]), {})
        if {inv[h]: c for h, c in value.items()} != mirrored:
            report.add("involution_compatibility", f"({f}∘{g})* != {g}*∘{f}*", f, g)


# --- Builders ---

GROUP_OBJECT = "♣"


def _as_group(mult_table) -> GroupTable:
    if isinstance(mult_table, GroupTable):
        return mult_table
    if isinstance(mult_table, MultiplicationTable):
        return GroupTable.from_rows(mult_table.elements, mult_table.rows(), mult_table.name)
    try:
        return GroupTable.from_rows(mult_table["elements"], mult_table["table"], mult_table.get("name"))
    except (KeyError, TypeError):
        raise InvalidInputError("Group table must provide 'elements' and 'table'") from None


def build_group_category(mult_table) -> BasedCategory:
    """One object, F_g per element, F_g∘F_h = F_{gh}, F_g* = F_{g⁻¹}."""
    group = _as_group(mult_table)
    name = {label: f"F_{label}" for label in group.elements}
    morphisms = tuple(
        OneMorphism(name[label], GROUP_OBJECT, GROUP_OBJECT, label == group.identity)
        for label in group.elements
    )
    composition = {
        (name[a], name[b]): {name[group.multiply(a, b)]: 1}
        for a in group.elements for b in group.elements
    }
    involution = {name[a]: name[group.inverse(a)] for a in group.elements}
    logger.info(f"Built group category for {group.name} with {group.order} 1-morphisms")
    return BasedCategory(
        (GROUP_OBJECT,), morphisms, composition, involution,
        {"family": "group", "group": group.name, "order": group.order},
    )


def build_monoid_category(mult_table) -> BasedCategory:
    """One object, F_x per element, F_x∘F_y = F_{xy}; no involution."""
    if isinstance(mult_table, MultiplicationTable):
        monoid = mult_table
    else:
        try:
            monoid = MultiplicationTable.from_rows(mult_table["elements"], mult_table["table"], mult_table.get("name"))
        except (KeyError, TypeError):
            raise InvalidInputError("Monoid table must provide 'elements' and 'table'") from None
    name = {label: f"F_{label}" for label in monoid.elements}
    morphisms = tuple(
        OneMorphism(name[label], GROUP_OBJECT, GROUP_OBJECT, label == monoid.identity)
        for label in monoid.elements
    )
    composition = {
        (name[a], name[b]): {name[monoid.multiply(a, b)]: 1}
        for a in monoid.elements for b in monoid.elements
    }
    logger.info(f"Built monoid category for {monoid.name} with {monoid.order} 1-morphisms")
    return BasedCategory(
        (GROUP_OBJECT,), morphisms, composition, None,
        {"family": "monoid", "monoid": monoid.name, "order": monoid.order},
    )


CARTAN_OBJECT = "i"


def cartan_name(i: int, j: int, n: int) -> str:
    """F_ij with 1-based indices; a comma separates indices once n >= 10."""
    return f"F_{i}{j}" if n < 10 else f"F_{i},{j}"


def build_cartan_category(cartan: Sequence[Sequence[int]], sigma: Sequence[int]) -> BasedCategory:
    """The decategorified C_A for a connected algebra with Cartan matrix C.

    `sigma` is the Nakayama permutation as a 1-based list (sigma[i-1] = σ(i)).
    """
    n = len(cartan)
    if n == 0 or any(len(row) != n for row in cartan):
        raise InvalidInputError("Cartan matrix must be square and non-empty")
    if any(not isinstance(x, int) or isinstance(x, bool) or x < 0 for row in cartan for x in row):
        raise InvalidInputError("Cartan matrix entries must be non-negative integers")
    zero_diagonal = [i + 1 for i in range(n) if cartan[i][i] < 1]
    if zero_diagonal:
        raise InvalidInputError("Cartan matrix has a zero diagonal entry", details={"indices": zero_diagonal})
    if sorted(sigma) != list(range(1, n + 1)):
        raise InvalidInputError("sigma is not a permutation of 1..n", details={"sigma": list(sigma)})
    graph = nx.Graph()
    graph.add_nodes_from(range(n))
    graph.add_edges_from((i, j) for i in range(n) for j in range(n) if cartan[i][j] or cartan[j][i])
    if not nx.is_connected(graph):
        raise InvalidInputError(
            "Cartan matrix decomposes into blocks (algebra is not connected)",
            details={"blocks": [sorted(k + 1 for k in c) for c in nx.connected_components(graph)]},
        )

    sigma_inv = {s: i + 1 for i, s in enumerate(sigma)}
    idx = range(1, n + 1)
    name = {(i, j): cartan_name(i, j, n) for i in idx for j in idx}
    morphisms = [OneMorphism("id", CARTAN_OBJECT, CARTAN_OBJECT, True)]
    morphisms += [OneMorphism(name[i, j], CARTAN_OBJECT, CARTAN_OBJECT) for i in idx for j in idx]
    composition = {}
    for (i, j), (s, t) in product(name, repeat=2):
        multiplicity = cartan[j - 1][s - 1]
        if multiplicity:
            composition[(name[i, j], name[s, t])] = {name[i, t]: multiplicity}
    involution = {"id": "id"}
    involution.update({name[i, j]: name[sigma_inv[j], i] for i, j in name})

    mismatches = [
        [j, s] for j in idx for s in idx if cartan[j - 1][s - 1] != cartan[s - 1][sigma_inv[j] - 1]
    ]
    if mismatches:
        logger.warning(
            f"Cartan matrix is not compatible with sigma={list(sigma)}; "
            f"{len(mismatches)} entries violate C[j][s] = C[s][σ⁻¹(j)]"
        )
    m = sum(sum(row) for row in cartan)
    logger.info(f"Built Cartan category with n={n}, m={m}")
    return BasedCategory(
        (CARTAN_OBJECT,), tuple(morphisms), composition, involution,
        {
            "family": "cartan",
            "cartan": [list(row) for row in cartan],
            "sigma": list(sigma),
            "m": m,
            "nakayama_compatible": not mismatches,
        },
    )


def build_scalar_category(k: int) -> BasedCategory:
    """One object, 1 and F with F∘F = F^{⊕k} and F* = F."""
    if not isinstance(k, int) or k < 0:
        raise InvalidInputError("k must be a non-negative integer", details={"k": k})
    morphisms = (OneMorphism("1", CARTAN_OBJECT, CARTAN_OBJECT, True), OneMorphism("F", CARTAN_OBJECT, CARTAN_OBJECT))
    composition = {("F", "F"): {"F": k}}
    return BasedCategory(
        (CARTAN_OBJECT,), morphisms, composition, {"1": "1", "F": "F"},
        {"family": "scalar", "k": k},
    )


def full_subcategory(cat: BasedCategory, names: Iterable[str]) -> BasedCategory:
    """Restrict to a composition-closed set of 1-morphisms containing the needed identities."""
    keep = list(dict.fromkeys(names))
    by_name = cat.by_name
    unknown = [n for n in keep if n not in by_name]
    if unknown:
        raise InvalidInputError("Unknown 1-morphisms", details={"names": unknown})
    objects = [o for o in cat.objects if any(o in (by_name[n].dom, by_name[n].cod) for n in keep)]
    missing = [o for o in objects if cat.identity_of(o) not in keep]
    if missing:
        raise InvalidInputError("Subcategory lacks identities of its objects", details={"objects": missing})
    kept = set(keep)
    composition = {}
    for f, g in product(keep, repeat=2):
        if by_name[f].dom != by_name[g].cod:
            continue
        value = cat.composition.get((f, g), {})
        outside = sorted(set(value) - kept)
        if outside:
            raise InvalidInputError(
                f"{f}∘{g} leaves the chosen set", details={"pair": [f, g], "outside": outside}
            )
        composition[(f, g)] = value
    involution = None
    if cat.involution is not None and all(cat.involution[n] in kept for n in keep):
        involution = {n: cat.involution[n] for n in keep}
    ordered = tuple(f for f in cat.one_morphisms if f.name in kept)
    metadata = {"family": "subcategory", "parent": cat.metadata.get("family"), "names": [f.name for f in ordered]}
    return BasedCategory(tuple(objects), ordered, composition, involution, metadata)


def non_identity_sum(cat: BasedCategory) -> Multiset:
    """Formal sum of all non-identity 1-morphisms (the F = ⊕F_ij of C_A)."""
    return {f.name: 1 for f in cat.one_morphisms if not f.identity}
