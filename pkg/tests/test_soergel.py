"""Kazhdan-Lusztig based rings and the dihedral Soergel categories."""
import pytest

from core.constants import B2_REFERENCE_EXPANSIONS
from core.exceptions import InvalidInputError, NotABasedRingError
from services.based_cat import validate_category
from services.groups import cyclic
from services.soergel import (
    KLRingData,
    build_dihedral_soergel,
    build_kl_category,
    dihedral_kl_data,
    sign_character_values,
    theta,
)


def test_b2_expansions_match_reference():
    data = dihedral_kl_data(4)
    for w, terms in B2_REFERENCE_EXPANSIONS.items():
        assert data.basis[w] == {v: 1 for v in terms}


def test_b2_structure_constants(b2):
    assert b2.compose(theta("s"), theta("s")) == {theta("s"): 2}
    # θ_x∘θ_y is the ring product θ_y·θ_x
    assert b2.compose(theta("s"), theta("t")) == {theta("ts"): 1}
    assert b2.compose(theta("t"), theta("s")) == {theta("st"): 1}
    assert b2.compose(theta("stst"), theta("s")) == {theta("stst"): 2}
    assert b2.star(theta("st")) == theta("ts")
    assert b2.metadata["family"] == "dihedral-soergel"


def test_ring_order_reverses_composition():
    cat = build_kl_category(dihedral_kl_data(4))
    assert cat.compose(theta("s"), theta("t")) == {theta("st"): 1}


def test_theta_s_theta_st(b2):
    # (e+s)(e+s+t+st) in the group ring is 2θ_st
    assert b2.compose(theta("st"), theta("s")) == {theta("st"): 2}


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_dihedral_soergel_is_a_valid_fiat_category(n):
    cat = build_dihedral_soergel(n)
    assert len(cat.names) == 2 * n
    assert validate_category(cat).ok


def test_dihedral_parameter_must_be_at_least_two():
    with pytest.raises(InvalidInputError):
        build_dihedral_soergel(1)


def test_negative_constants_are_rejected():
    group = cyclic(2)
    data = KLRingData(group, {"e": {"e": 1}, "g": {"g": 1, "e": 2}}, ("e", "g"))
    # θ_g² = 4θ_g - 3θ_e
    with pytest.raises(NotABasedRingError) as info:
        build_kl_category(data)
    assert info.value.details["coefficients"] == {"theta_e": "-3"}


def test_basis_must_be_unitriangular():
    data = KLRingData(cyclic(2), {"e": {"e": 1, "g": 1}, "g": {"g": 1}}, ("e", "g"))
    with pytest.raises(InvalidInputError):
        build_kl_category(data)


def test_kl_data_round_trip():
    data = dihedral_kl_data(3)
    again = KLRingData.from_dict(data.to_dict())
    assert again.basis == data.basis
    assert again.order == data.order


def test_sign_characters():
    data = dihedral_kl_data(4)
    trivial = sign_character_values(data, {"s": 1, "t": 1})
    assert trivial == {
        "theta_e": 1, "theta_s": 2, "theta_t": 2, "theta_st": 4, "theta_ts": 4,
        "theta_sts": 6, "theta_tst": 6, "theta_stst": 8,
    }
    sign = sign_character_values(data, {"s": -1, "t": -1})
    assert sign["theta_e"] == 1
    assert all(value == 0 for name, value in sign.items() if name != "theta_e")
    mixed = sign_character_values(data, {"s": -1, "t": 1})
    assert mixed["theta_s"] == 0
    assert mixed["theta_t"] == 2


def test_sign_character_rejects_non_signs():
    with pytest.raises(InvalidInputError):
        sign_character_values(dihedral_kl_data(4), {"s": 2, "t": 1})
