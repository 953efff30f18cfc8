"""
Finite groups and monoids given by multiplication tables.

Elements are string labels; the table is stored on indices. Named tables
come either from sympy permutation groups or from explicit rules (cyclic,
dihedral with reduced-word labels).
"""
import logging
from dataclasses import dataclass
from functools import cached_property
from itertools import product
from typing import Iterable, Sequence

from sympy.combinatorics import Permutation, PermutationGroup
from sympy.combinatorics.named_groups import AlternatingGroup, SymmetricGroup

from core.exceptions import InvalidInputError
from utils.helpers import validate_name


logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class MultiplicationTable:
    """A finite monoid: `table[a][b]` is the index of elements[a]·elements[b]."""
    elements: tuple[str, ...]
    table: tuple[tuple[int, ...], ...]
    name: str = "monoid"

    @classmethod
    def from_rows(cls, elements: Sequence[str], rows: Sequence[Sequence[str]], name: str | None = None):
        """Build from a table of labels, checking identity and associativity."""
        elements = tuple(elements)
        for label in elements:
            validate_name(label, "element")
        if len(set(elements)) != len(elements) or not elements:
            raise InvalidInputError("Element labels must be non-empty and distinct")
        index = {label: i for i, label in enumerate(elements)}
        if len(rows) != len(elements) or any(len(row) != len(elements) for row in rows):
            raise InvalidInputError(
                "Multiplication table must be square over the element list",
                details={"elements": len(elements)},
            )
        try:
            table = tuple(tuple(index[entry] for entry in row) for row in rows)
        except KeyError as e:
            raise InvalidInputError(f"Table entry {e.args[0]!r} is not an element") from None
        result = cls(elements, table, name or cls.name)
        result.check()
        return result

    def check(self) -> None:
        n = len(self.elements)
        if self.identity_index is None:
            raise InvalidInputError("Multiplication table has no identity element", details={"table": self.name})
        for a, b, c in product(range(n), repeat=3):
            if self.table[self.table[a][b]][c] != self.table[a][self.table[b][c]]:
                raise InvalidInputError(
                    "Multiplication table is not associative",
                    details={"triple": [self.elements[a], self.elements[b], self.elements[c]]},
                )

    @property
    def order(self) -> int:
        return len(self.elements)

    @cached_property
    def identity_index(self) -> int | None:
        n = len(self.elements)
        for e in range(n):
            if all(self.table[e][x] == x == self.table[x][e] for x in range(n)):
                return e
        return None

    @property
    def identity(self) -> str:
        return self.elements[self.identity_index]

    def index(self, label: str) -> int:
        try:
            return self.elements.index(label)
        except ValueError:
            raise InvalidInputError(f"Unknown element {label!r}", details={"table": self.name}) from None

    def mul(self, a: int, b: int) -> int:
        return self.table[a][b]

    def multiply(self, a: str, b: str) -> str:
        return self.elements[self.table[self.index(a)][self.index(b)]]

    def rows(self) -> list[list[str]]:
        return [[self.elements[c] for c in row] for row in self.table]

    def to_dict(self) -> dict:
        return {"name": self.name, "elements": list(self.elements), "table": self.rows()}


@dataclass(frozen=True)
class GroupTable(MultiplicationTable):
    """A finite group table."""
    name: str = "group"

    def check(self) -> None:
        super().check()
        e = self.identity_index
        for a in range(self.order):
            if e not in self.table[a]:
                raise InvalidInputError(
                    f"Element {self.elements[a]!r} has no inverse",
                    details={"table": self.name, "element": self.elements[a]},
                )

    @cached_property
    def inverses(self) -> tuple[int, ...]:
        e = self.identity_index
        return tuple(self.table[a].index(e) for a in range(self.order))

    def inverse(self, label: str) -> str:
        return self.elements[self.inverses[self.index(label)]]

    def conjugate_set(self, subset: Iterable[int], g: int) -> frozenset[int]:
        """g·H·g⁻¹ on indices."""
        g_inv = self.inverses[g]
        return frozenset(self.mul(self.mul(g, h), g_inv) for h in subset)

    def closure(self, generators: Iterable[int]) -> frozenset[int]:
        """Subgroup generated by the given indices (finite, so closure under products suffices)."""
        current = {self.identity_index, *generators}
        frontier = list(current)
        while frontier:
            new = set()
            for a in frontier:
                for b in list(current):
                    for c in (self.mul(a, b), self.mul(b, a)):
                        if c not in current:
                            new.add(c)
            current |= new
            frontier = list(new)
        return frozenset(current)

    def left_cosets(self, subgroup: Iterable[int]) -> list[frozenset[int]]:
        """Left cosets xH, ordered by their smallest element index."""
        subgroup = frozenset(subgroup)
        cosets: list[frozenset[int]] = []
        seen: set[int] = set()
        for x in range(self.order):
            if x in seen:
                continue
            coset = frozenset(self.mul(x, h) for h in subgroup)
            seen |= coset
            cosets.append(coset)
        return cosets


# --- Named tables ---


def _permutation_label(perm: Permutation) -> str:
    if perm.is_Identity:
        return "e"
    return "".join("(" + " ".join(str(x) for x in cycle) + ")" for cycle in perm.cyclic_form)


def from_permutation_group(group: PermutationGroup, name: str) -> GroupTable:
    """Tabulate a sympy permutation group; elements sorted by array form."""
    perms = sorted(group.elements, key=lambda p: p.array_form)
    index = {tuple(p.array_form): i for i, p in enumerate(perms)}
    # sympy composes left to right; a·b here means "apply b, then a"
    table = tuple(
        tuple(index[tuple((b * a).array_form)] for b in perms)
        for a in perms
    )
    result = GroupTable(tuple(_permutation_label(p) for p in perms), table, name)
    result.check()
    logger.debug(f"Tabulated {name} of order {result.order}")
    return result


def cyclic(n: int) -> GroupTable:
    if n < 1:
        raise InvalidInputError("Cyclic group order must be positive", details={"n": n})
    labels = tuple("e" if k == 0 else ("g" if k == 1 else f"g^{k}") for k in range(n))
    table = tuple(tuple((a + b) % n for b in range(n)) for a in range(n))
    return GroupTable(labels, table, f"C{n}")


def dihedral_words(n: int) -> list[str]:
    """Reduced words of the dihedral group of order 2n, by length then s-first.

    The longest element is written starting with s.
    """
    words = ["e"]
    for length in range(1, n):
        for first in "st":
            other = "t" if first == "s" else "s"
            words.append("".join(first if k % 2 == 0 else other for k in range(length)))
    words.append("".join("s" if k % 2 == 0 else "t" for k in range(n)))
    return words


def _dihedral_element(word: str, n: int) -> tuple[int, int]:
    # (k, f): rotation by k followed by f reflections; s = (0, 1), t = (1, 1)
    k, f = 0, 0
    for letter in ("" if word == "e" else word):
        b, g = (0, 1) if letter == "s" else (1, 1)
        k, f = (k + (b if f == 0 else -b)) % n, f ^ g
    return k, f


def dihedral(n: int) -> GroupTable:
    """Dihedral group of order 2n generated by reflections s, t with (st)^n = e."""
    if n < 2:
        raise InvalidInputError("Dihedral parameter must be at least 2", details={"n": n})
    words = dihedral_words(n)
    elements = [_dihedral_element(w, n) for w in words]
    if len(set(elements)) != 2 * n:
        raise InvalidInputError("Dihedral word labels are not distinct", details={"n": n})
    index = {el: i for i, el in enumerate(elements)}
    table = []
    for (a, f) in elements:
        row = []
        for (b, g) in elements:
            row.append(index[((a + (b if f == 0 else -b)) % n, f ^ g)])
        table.append(tuple(row))
    return GroupTable(tuple(words), tuple(table), f"D{n}")


def symmetric(n: int) -> GroupTable:
    if n < 1:
        raise InvalidInputError("Symmetric group degree must be positive", details={"n": n})
    return from_permutation_group(SymmetricGroup(n), f"S{n}")


def alternating(n: int) -> GroupTable:
    if n < 1:
        raise InvalidInputError("Alternating group degree must be positive", details={"n": n})
    return from_permutation_group(AlternatingGroup(n), f"A{n}")


def klein() -> GroupTable:
    group = PermutationGroup([Permutation([1, 0, 3, 2]), Permutation([2, 3, 0, 1])])
    return from_permutation_group(group, "V4")


NAMED_GROUPS = {
    "cyclic": cyclic,
    "dihedral": dihedral,
    "symmetric": symmetric,
    "alternating": alternating,
}


def named_group(label: str) -> GroupTable:
    """Parse "cyclic:3", "dihedral:4", "symmetric:3", "alternating:4" or "klein"."""
    family, _, arg = label.partition(":")
    family = family.strip().lower()
    if family == "klein" and not arg:
        return klein()
    if family not in NAMED_GROUPS:
        raise InvalidInputError(f"Unknown group family: {family!r}", details={"known": sorted([*NAMED_GROUPS, "klein"])})
    try:
        n = int(arg)
    except ValueError:
        raise InvalidInputError(f"Group parameter must be an integer: {arg!r}") from None
    return NAMED_GROUPS[family](n)
