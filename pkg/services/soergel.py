"""
Kazhdan-Lusztig style based rings from a group table and a unitriangular basis.

Structure constants come from multiplying basis expansions in the group ring
and converting back with the exact inverse change of basis.
"""
import logging
from dataclasses import dataclass
from functools import cached_property
from typing import Mapping

from sympy import Matrix

from core.constants import B2_REFERENCE_EXPANSIONS
from core.exceptions import InvalidInputError, NotABasedRingError, StageMismatchError
from services.based_cat import GROUP_OBJECT, BasedCategory, OneMorphism
from services.groups import GroupTable, MultiplicationTable, dihedral, dihedral_words
from utils.helpers import Multiset, clean_multiset


logger = logging.getLogger(__name__)

PRODUCT_ORDERS = ("ring", "opposite")


def theta(label: str) -> str:
    return f"theta_{label}"


@dataclass(frozen=True)
class KLRingData:
    """Group (or monoid) table plus basis expansions θ_w = Σ_v b_{w,v} v.

    `order` lists the basis labels in a total order refining the Bruhat
    order; every basis label is also an element label (its leading term).
    """
    group: MultiplicationTable
    basis: Mapping[str, Mapping[str, int]]
    order: tuple[str, ...]

    def __post_init__(self):
        object.__setattr__(self, "order", tuple(self.order))
        object.__setattr__(self, "basis", {w: clean_multiset(v) for w, v in self.basis.items()})

    __hash__ = None

    def check(self) -> None:
        elements = set(self.group.elements)
        if set(self.order) != elements or len(self.order) != len(elements) or set(self.basis) != elements:
            raise InvalidInputError("Basis labels must be exactly the group elements, each once")
        position = {w: i for i, w in enumerate(self.order)}
        for w, expansion in self.basis.items():
            if expansion.get(w) != 1:
                raise InvalidInputError(f"θ_{w} does not have leading coefficient 1 on {w}", details={"label": w})
            later = [v for v in expansion if v not in position or position[v] > position[w]]
            if later:
                raise InvalidInputError(
                    f"θ_{w} is not unitriangular for the declared order", details={"label": w, "terms": later}
                )
        if self.basis[self.group.identity] != {self.group.identity: 1}:
            raise InvalidInputError("The basis element of the identity must be the identity itself")

    @cached_property
    def _change_of_basis(self) -> Matrix:
        # row w holds the group-basis coefficients of θ_w, columns in `order`
        return Matrix([[self.basis[w].get(v, 0) for v in self.order] for w in self.order])

    @cached_property
    def _inverse(self) -> Matrix:
        return self._change_of_basis.inv()

    def ring_product(self, x: Mapping[str, int], y: Mapping[str, int]) -> Multiset:
        """Product in the group ring, on element-label vectors."""
        out: dict[str, int] = {}
        for a, p in x.items():
            for b, q in y.items():
                c = self.group.multiply(a, b)
                out[c] = out.get(c, 0) + p * q
        return clean_multiset(out)

    def expand(self, combination: Mapping[str, int]) -> Multiset:
        """θ-coordinates (keyed by element label) to the group basis."""
        out: dict[str, int] = {}
        for w, a in combination.items():
            for v, b in self.basis[w].items():
                out[v] = out.get(v, 0) + a * b
        return clean_multiset(out)

    def to_kl_basis(self, vector: Mapping[str, int]) -> dict[str, object]:
        """Group-basis vector to θ-coordinates, exact (sympy rationals)."""
        row = Matrix([[vector.get(v, 0) for v in self.order]])
        coords = row * self._inverse
        return {w: coords[0, i] for i, w in enumerate(self.order) if coords[0, i] != 0}

    def to_dict(self) -> dict:
        return {
            "group": self.group.to_dict(),
            "basis": {w: dict(self.basis[w]) for w in self.order},
            "order": list(self.order),
        }

    @classmethod
    def from_dict(cls, data: Mapping) -> "KLRingData":
        try:
            group_doc = data["group"]
            group = MultiplicationTable.from_rows(group_doc["elements"], group_doc["table"], group_doc.get("name"))
            result = cls(group, dict(data["basis"]), tuple(data.get("order") or group_doc["elements"]))
        except (KeyError, TypeError) as e:
            raise InvalidInputError(f"Malformed KL ring document: {e}") from None
        result.check()
        return result


def _kl_involution(data: KLRingData) -> dict[str, str] | None:
    """θ_w ↦ θ_{w⁻¹} when the group anti-involution permutes the basis."""
    try:
        group = data.group if isinstance(data.group, GroupTable) else GroupTable.from_rows(
            data.group.elements, data.group.rows(), data.group.name
        )
    except InvalidInputError:
        return None
    for w in data.order:
        inverted = clean_multiset({group.inverse(v): c for v, c in data.basis[w].items()})
        if inverted != data.basis[group.inverse(w)]:
            return None
    return {theta(w): theta(group.inverse(w)) for w in data.order}


def build_kl_category(data: KLRingData, product_order: str = "ring") -> BasedCategory:
    """One object, one 1-morphism θ_w per basis label, θ_e the identity.

    product_order "ring" sets θ_x∘θ_y = θ_x·θ_y; "opposite" sets θ_x∘θ_y = θ_y·θ_x.
    """
    if product_order not in PRODUCT_ORDERS:
        raise InvalidInputError(f"Unknown product order {product_order!r}", details={"known": list(PRODUCT_ORDERS)})
    data.check()
    unit = data.group.identity
    morphisms = tuple(OneMorphism(theta(w), GROUP_OBJECT, GROUP_OBJECT, w == unit) for w in data.order)
    composition = {}
    for x in data.order:
        for y in data.order:
            left, right = (x, y) if product_order == "ring" else (y, x)
            product = data.ring_product(data.basis[left], data.basis[right])
            coords = data.to_kl_basis(product)
            bad = {w: str(c) for w, c in coords.items() if c < 0 or not c.is_integer}
            if bad:
                raise NotABasedRingError(
                    f"θ_{x}∘θ_{y} has structure constants outside ℕ",
                    details={"pair": [theta(x), theta(y)], "coefficients": {theta(w): c for w, c in bad.items()}},
                )
            composition[(theta(x), theta(y))] = {theta(w): int(c) for w, c in coords.items()}
    involution = _kl_involution(data)
    logger.info(
        f"Built KL category over {data.group.name} with {len(morphisms)} 1-morphisms "
        f"(product order {product_order})"
    )
    return BasedCategory(
        (GROUP_OBJECT,), morphisms, composition, involution,
        {"family": "kazhdan-lusztig", "group": data.group.name, "product_order": product_order},
    )


def dihedral_kl_data(n: int) -> KLRingData:
    """θ_w = Σ_{v ≤ w} v, Bruhat order by length with the longest element on top."""
    group = dihedral(n)
    words = dihedral_words(n)
    length = {w: (0 if w == "e" else len(w)) for w in words}
    basis = {w: {v: 1 for v in words if v == w or length[v] < length[w]} for w in words}
    data = KLRingData(group, basis, tuple(words))
    if n == 4:
        for w, reference in B2_REFERENCE_EXPANSIONS.items():
            if basis[w] != {v: 1 for v in reference}:
                raise StageMismatchError(
                    "dihedral-expansions", f"θ_{w} differs from the reference B2 expansion",
                    details={"computed": sorted(basis[w]), "reference": sorted(reference)},
                )
    return data


def build_dihedral_soergel(n: int) -> BasedCategory:
    """Soergel-bimodule skeleton for the dihedral group of order 2n.

    Uses the opposite product order so that left cells are {θ_s, θ_st, ...}.
    """
    if not isinstance(n, int) or n < 2:
        raise InvalidInputError("Dihedral parameter must be an integer >= 2", details={"n": n})
    cat = build_kl_category(dihedral_kl_data(n), product_order="opposite")
    metadata = dict(cat.metadata, family="dihedral-soergel", n=n)
    return BasedCategory(cat.objects, cat.one_morphisms, cat.composition, cat.involution, metadata)


def sign_character_values(data: KLRingData, eps: Mapping[str, int]) -> dict[str, int]:
    """Scalar by which each θ_w acts on the one-dimensional module V_eps.

    `eps` maps each generator letter (s, t) to ±1; a word acts by the
    product of its letters' signs.
    """
    if any(sign not in (1, -1) for sign in eps.values()):
        raise InvalidInputError("Sign characters take values ±1", details={"eps": dict(eps)})

    def chi(word: str) -> int:
        value = 1
        for letter in ("" if word == data.group.identity else word):
            if letter not in eps:
                raise InvalidInputError(f"No sign given for generator {letter!r}", details={"word": word})
            value *= eps[letter]
        return value

    for a in data.group.elements:
        for b in data.group.elements:
            if chi(data.group.multiply(a, b)) != chi(a) * chi(b):
                raise InvalidInputError(
                    "Signs do not define a character of the group",
                    details={"eps": dict(eps), "pair": [a, b]},
                )
    return {theta(w): sum(c * chi(v) for v, c in data.basis[w].items()) for w in data.order}
