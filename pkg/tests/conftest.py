"""Shared fixtures and seeded generators for the tworep test suite."""
import random
from itertools import product

import networkx as nx
import numpy as np
import pytest
from click.testing import CliRunner

from core.exceptions import InvalidInputError
from services.based_cat import (
    CARTAN_OBJECT,
    BasedCategory,
    OneMorphism,
    build_cartan_category,
    build_group_category,
    build_monoid_category,
    build_scalar_category,
)
from services.cells import cell_rep, left_cells
from services.classify import classify_group_reps
from services.groups import GroupTable, MultiplicationTable, cyclic, klein, symmetric
from services.matrep import MatrixRep, direct_sum, principal_rep, validate_rep
from services.soergel import build_dihedral_soergel


@pytest.fixture(scope="session")
def b2():
    return build_dihedral_soergel(4)


@pytest.fixture
def exotic():
    """One object, 1 and F with F∘F = F⊕F."""
    return build_scalar_category(2)


@pytest.fixture
def exotic_rep(exotic):
    return MatrixRep(exotic, {"i": ("X1", "X2")}, {"1": np.eye(2, dtype=np.int64), "F": [[1, 1], [1, 1]]})


@pytest.fixture
def dual_numbers():
    return build_cartan_category([[2]], [1])


@pytest.fixture
def two_objects():
    """Objects a, b with identities and a single G: a -> b."""
    return BasedCategory(
        ("a", "b"),
        (OneMorphism("1a", "a", "a", True), OneMorphism("1b", "b", "b", True), OneMorphism("G", "a", "b")),
        {},
        None,
    )


@pytest.fixture
def runner():
    return CliRunner()


def scalar_rep(cat: BasedCategory, matrix) -> MatrixRep:
    """Representation of a scalar category sending F to `matrix`."""
    matrix = np.array(matrix, dtype=np.int64)
    labels = tuple(f"X{k + 1}" for k in range(matrix.shape[0]))
    return MatrixRep(cat, {"i": labels}, {"1": np.eye(len(labels), dtype=np.int64), "F": matrix})


# --- Random categories and representations ---


def transformation_monoid(rng: random.Random, points: int = 3, max_size: int = 4):
    """Random transformation monoid on `points` points with at most `max_size` elements."""
    unit = tuple(range(points))
    while True:
        generators = [tuple(rng.randrange(points) for _ in range(points)) for _ in range(rng.randint(1, 2))]
        elements = [unit]
        frontier = list(generators)
        while frontier and len(elements) <= max_size:
            f = frontier.pop()
            if f in elements:
                continue
            elements.append(f)
            for g in list(elements):
                frontier.append(tuple(f[g[x]] for x in unit))
                frontier.append(tuple(g[f[x]] for x in unit))
        if len(elements) <= max_size and not frontier:
            break
    labels = ["e"] + [f"m{k}" for k in range(1, len(elements))]
    index = {f: k for k, f in enumerate(elements)}
    rows = [[labels[index[tuple(a[b[x]] for x in unit)]] for b in elements] for a in elements]
    return MultiplicationTable.from_rows(labels, rows, "transformations"), elements


def point_action(cat: BasedCategory, elements) -> MatrixRep:
    """Action of a transformation monoid on its points: F_f sends x to f(x)."""
    points = len(elements[0])
    labels = tuple(f"p{x}" for x in range(points))
    matrices = {}
    for name, f in zip(cat.names, elements):
        matrix = np.zeros((points, points), dtype=np.int64)
        for x in range(points):
            matrix[f[x], x] = 1
        matrices[name] = matrix
    return MatrixRep(cat, {cat.objects[0]: labels}, matrices)


def matrix_unit_category(diagonal) -> BasedCategory:
    """Objects o1..on, identities 1_k and F_ij: oj -> oi with F_ij∘F_jt = d_j F_it and F_ij* = F_ji."""
    idx = range(1, len(diagonal) + 1)
    objects = tuple(f"o{k}" for k in idx)
    morphisms = [OneMorphism(f"1_{k}", f"o{k}", f"o{k}", True) for k in idx]
    morphisms += [OneMorphism(f"F_{i}{j}", f"o{j}", f"o{i}") for i in idx for j in idx]
    composition = {
        (f"F_{i}{j}", f"F_{j}{t}"): {f"F_{i}{t}": diagonal[j - 1]} for i in idx for j in idx for t in idx
    }
    involution = {f"1_{k}": f"1_{k}" for k in idx}
    involution.update({f"F_{i}{j}": f"F_{j}{i}" for i in idx for j in idx})
    return BasedCategory(objects, tuple(morphisms), composition, involution, {"family": "matrix_units"})


def groupoid_category(group: GroupTable, size: int) -> BasedCategory:
    """Connected groupoid on `size` objects with vertex group `group`; F* is the inverse arrow."""
    objects = tuple(f"o{k}" for k in range(1, size + 1))

    def arrow(target, g, source):
        return f"{g}:{source}>{target}"

    morphisms = tuple(
        OneMorphism(arrow(b, g, a), a, b, a == b and g == group.identity)
        for a in objects for b in objects for g in group.elements
    )
    composition = {
        (arrow(c, g, b), arrow(b, h, a)): {arrow(c, group.multiply(g, h), a): 1}
        for a in objects for b in objects for c in objects for g in group.elements for h in group.elements
    }
    involution = {
        arrow(b, g, a): arrow(a, group.inverse(g), b) for a in objects for b in objects for g in group.elements
    }
    return BasedCategory(objects, morphisms, composition, involution, {"family": "groupoid", "group": group.name})


def poset_category(rng: random.Random, size: int) -> BasedCategory:
    """Objects o1..on and one arrow a -> b for every a < b in a random order refining 1 < 2 < ... < n."""
    graph = nx.DiGraph()
    graph.add_nodes_from(range(1, size + 1))
    graph.add_edge(1, 2)
    graph.add_edges_from((a, b) for a in range(1, size + 1) for b in range(a + 1, size + 1) if rng.random() < 0.5)
    order = nx.transitive_closure_dag(graph)
    objects = tuple(f"o{k}" for k in range(1, size + 1))
    morphisms = [OneMorphism(f"1_{k}", f"o{k}", f"o{k}", True) for k in range(1, size + 1)]
    morphisms += [OneMorphism(f"a_{a}{b}", f"o{a}", f"o{b}") for a, b in sorted(order.edges)]
    composition = {
        (f"a_{b}{c}", f"a_{a}{b}"): {f"a_{a}{c}": 1}
        for a, b in order.edges for b2, c in order.edges if b2 == b
    }
    return BasedCategory(objects, tuple(morphisms), composition, None, {"family": "poset"})


def random_category(rng: random.Random):
    """A valid based category, possibly with several objects, plus extra reps it supports."""
    kind = rng.choice(["scalar", "cartan", "group", "monoid", "matrix_units", "groupoid", "poset"])
    if kind == "scalar":
        return build_scalar_category(rng.randint(0, 3)), []
    if kind == "cartan":
        return build_cartan_category([[rng.randint(1, 3)]], [1]), []
    if kind == "group":
        group = rng.choice([cyclic(2), cyclic(3), cyclic(4), klein(), symmetric(3)])
        # coset reps of S3 include the non-normal order-two subgroups
        if group.name == "S3":
            extra = classify_group_reps(group)
            return extra[0].category, extra
        return build_group_category(group), []
    if kind == "matrix_units":
        return matrix_unit_category([rng.randint(1, 3) for _ in range(rng.randint(2, 3))]), []
    if kind == "groupoid":
        size = rng.randint(2, 3)
        return groupoid_category(rng.choice([cyclic(1), cyclic(2)] if size == 3 else [cyclic(2), cyclic(3)]), size), []
    if kind == "poset":
        return poset_category(rng, rng.randint(2, 4)), []
    table, elements = transformation_monoid(rng)
    cat = build_monoid_category(table)
    return cat, [point_action(cat, elements)]


def shuffled(rep: MatrixRep, rng: random.Random) -> MatrixRep:
    """Relabel the indecomposables over every object by a random permutation."""
    order = {obj: list(range(len(labels))) for obj, labels in rep.ind_objects.items()}
    for perm in order.values():
        rng.shuffle(perm)
    ind = {obj: tuple(rep.ind_objects[obj][k] for k in order[obj]) for obj in rep.ind_objects}
    matrices = {}
    for f in rep.category.one_morphisms:
        matrices[f.name] = rep.matrices[f.name][np.ix_(order[f.cod], order[f.dom])]
    return MatrixRep(rep.category, ind, matrices)


def random_rep(rng: random.Random, max_size: int = 5):
    """A valid representation; direct sums stop growing at `max_size` indecomposables."""
    cat, extra = random_category(rng)
    pieces = [principal_rep(cat, obj) for obj in cat.objects] + extra
    pieces += [cell_rep(cat, cell) for cell in left_cells(cat)]
    rep = rng.choice(pieces)
    for _ in range(rng.randint(0, 2)):
        other = rng.choice(pieces)
        if rep.size + other.size <= max_size:
            rep = direct_sum(rep, other)
    rep = shuffled(rep, rng)
    assert validate_rep(rep).ok
    return rep


def non_split_rep(rng: random.Random):
    """A principal representation in which a 1-morphism maps one action class into another."""
    kind = rng.choice(["cartan", "matrix_units", "poset", "scalar"])
    if kind == "cartan":
        cat, _ = random_cartan(rng)
        rep = principal_rep(cat, CARTAN_OBJECT)
    elif kind == "matrix_units":
        cat = matrix_unit_category([rng.randint(1, 3) for _ in range(rng.randint(2, 3))])
        rep = principal_rep(cat, rng.choice(cat.objects))
    elif kind == "poset":
        cat = poset_category(rng, rng.randint(2, 4))
        rep = principal_rep(cat, "o1")
    else:
        cat = build_scalar_category(rng.randint(1, 3))
        rep = principal_rep(cat, CARTAN_OBJECT)
        rep = direct_sum(rep, rng.choice([rep, cell_rep(cat, ["F"])]))
    rep = shuffled(rep, rng)
    assert validate_rep(rep).ok
    return rep


def random_cartan(rng: random.Random, symmetric: bool = False):
    """A connected Cartan matrix with n <= 3, entries <= 3 and diagonal >= 1."""
    while True:
        n = rng.randint(1, 3)
        cartan = [[rng.randint(0, 3) for _ in range(n)] for _ in range(n)]
        for i in range(n):
            cartan[i][i] = rng.randint(1, 3)
        if symmetric:
            for i, j in product(range(n), repeat=2):
                if i < j:
                    cartan[j][i] = cartan[i][j]
        sigma = list(range(1, n + 1))
        if not symmetric:
            rng.shuffle(sigma)
        try:
            return build_cartan_category(cartan, sigma), cartan
        except InvalidInputError:
            continue
