"""Group and monoid tables."""
import pytest

from core.exceptions import InvalidInputError
from services.groups import (
    GroupTable,
    MultiplicationTable,
    alternating,
    cyclic,
    dihedral,
    dihedral_words,
    klein,
    named_group,
    symmetric,
)


def test_cyclic_table():
    c3 = cyclic(3)
    assert c3.elements == ("e", "g", "g^2")
    assert c3.multiply("g", "g^2") == "e"
    assert c3.inverse("g") == "g^2"


def test_dihedral_words_are_reduced_and_ordered():
    assert dihedral_words(4) == ["e", "s", "t", "st", "ts", "sts", "tst", "stst"]
    assert dihedral_words(2) == ["e", "s", "t", "st"]


def test_dihedral_relations():
    d4 = dihedral(4)
    assert d4.order == 8
    assert d4.multiply("s", "s") == "e"
    assert d4.multiply("t", "t") == "e"
    assert d4.multiply("s", "t") == "st"
    assert d4.multiply("st", "st") == "stst"
    assert d4.multiply("ts", "ts") == "stst"
    assert d4.inverse("st") == "ts"
    assert d4.inverse("stst") == "stst"


def test_permutation_groups():
    s3 = symmetric(3)
    assert s3.order == 6
    assert s3.identity == "e"
    assert alternating(4).order == 12
    assert klein().order == 4
    for a in s3.elements:
        assert s3.multiply(a, s3.inverse(a)) == "e"


@pytest.mark.parametrize("label,order", [("cyclic:5", 5), ("dihedral:3", 6), ("symmetric:3", 6), ("klein", 4)])
def test_named_group(label, order):
    assert named_group(label).order == order


def test_named_group_rejects_unknown_family():
    with pytest.raises(InvalidInputError):
        named_group("quaternion:8")


def test_closure_and_cosets():
    d4 = dihedral(4)
    s = d4.index("s")
    subgroup = d4.closure([s])
    assert {d4.elements[i] for i in subgroup} == {"e", "s"}
    cosets = d4.left_cosets(subgroup)
    assert len(cosets) == 4
    assert sorted(x for c in cosets for x in c) == list(range(8))


def test_conjugation_moves_reflections():
    d4 = dihedral(4)
    s, t = d4.index("s"), d4.index("t")
    conjugated = d4.conjugate_set([d4.identity_index, s], t)
    assert {d4.elements[i] for i in conjugated} == {"e", "tst"}


def test_monoid_without_inverses_is_not_a_group():
    rows = [["e", "a"], ["a", "a"]]
    monoid = MultiplicationTable.from_rows(["e", "a"], rows)
    assert monoid.identity == "e"
    with pytest.raises(InvalidInputError, match="no inverse"):
        GroupTable.from_rows(["e", "a"], rows)


def test_table_without_identity_is_rejected():
    with pytest.raises(InvalidInputError, match="identity"):
        MultiplicationTable.from_rows(["a", "b"], [["a", "a"], ["b", "b"]])


def test_non_associative_table_is_rejected():
    # identity e; x*x = y, x*y = e, y*x = x, y*y = e breaks associativity
    rows = [["e", "x", "y"], ["x", "y", "e"], ["y", "x", "e"]]
    with pytest.raises(InvalidInputError, match="associative"):
        MultiplicationTable.from_rows(["e", "x", "y"], rows)
