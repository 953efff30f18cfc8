"""Matrix representations: validation, action preorder, filtrations and equivalence."""
import numpy as np
import pytest

from core.exceptions import MissingInvolutionError, PreconditionError, StructuralError
from services.based_cat import build_cartan_category, build_group_category, build_monoid_category, full_subcategory
from services.cells import cell_rep
from services.groups import cyclic
from services.matrep import (
    Filtration,
    MatrixRep,
    action_preorder,
    annihilated_morphisms,
    canonical_subquotient,
    coideals,
    complete_filtrations,
    direct_sum,
    is_transitive,
    jh_subquotients,
    formal_sum_check,
    match_cell_rep,
    principal_rep,
    reps_equivalent,
    restrict_rep,
    simple_basis_matrices,
    subquotient,
    sum_matrix,
    validate_rep,
    weak_jh_verify,
)
from tests.conftest import scalar_rep


class TestPrincipalRep:
    def test_exotic_matrices(self, exotic):
        rep = principal_rep(exotic, "i")
        assert rep.ind_objects == {"i": ("1", "F")}
        assert rep.matrices["F"].tolist() == [[0, 0], [1, 2]]
        assert rep.matrices["1"].tolist() == [[1, 0], [0, 1]]

    def test_exotic_action_preorder(self, exotic):
        rep = principal_rep(exotic, "i")
        structure = action_preorder(rep)
        assert structure.classes == (("1",), ("F",))
        assert structure.class_order == ((1, 0),)
        assert not is_transitive(rep)
        assert coideals(rep) == [frozenset(), frozenset({1}), frozenset({0, 1})]

    def test_exotic_filtration_and_subquotients(self, exotic):
        rep = principal_rep(exotic, "i")
        filtrations = complete_filtrations(rep)
        assert filtrations == [Filtration((1, 0))]
        parts = jh_subquotients(rep, filtrations[0])
        assert [p.matrices["F"].tolist() for p in parts] == [[[2]], [[0]]]
        assert all(is_transitive(p) for p in parts)

    def test_canonical_subquotients(self, exotic):
        rep = principal_rep(exotic, "i")
        assert canonical_subquotient(rep, 1).matrices["F"].tolist() == [[2]]
        assert canonical_subquotient(rep, 0).matrices["F"].tolist() == [[0]]
        with pytest.raises(PreconditionError):
            canonical_subquotient(rep, 2)

    def test_unknown_object(self, exotic):
        with pytest.raises(PreconditionError):
            principal_rep(exotic, "j")

    def test_two_object_category(self, two_objects):
        rep = principal_rep(two_objects, "a")
        assert rep.ind_objects == {"a": ("1a",), "b": ("G",)}
        assert rep.matrices["G"].tolist() == [[1]]
        assert rep.matrices["1b"].tolist() == [[1]]
        assert validate_rep(rep).ok
        from_b = principal_rep(two_objects, "b")
        assert from_b.ind_objects == {"a": (), "b": ("1b",)}
        assert from_b.matrices["G"].shape == (1, 0)


class TestSubquotient:
    def test_rejects_non_coideal(self, exotic):
        rep = principal_rep(exotic, "i")
        with pytest.raises(PreconditionError):
            subquotient(rep, [], [0])

    def test_rejects_unnested(self, exotic):
        rep = principal_rep(exotic, "i")
        with pytest.raises(PreconditionError):
            subquotient(rep, [0, 1], [1])

    def test_rejects_incomplete_filtration(self, exotic):
        rep = principal_rep(exotic, "i")
        with pytest.raises(PreconditionError):
            jh_subquotients(rep, Filtration((1,)))


class TestValidation:
    def test_exotic_rep_is_valid_and_transitive(self, exotic_rep):
        assert validate_rep(exotic_rep).ok
        assert is_transitive(exotic_rep)

    def test_homomorphism_law_witness(self, exotic):
        report = validate_rep(scalar_rep(exotic, [[1, 0], [0, 0]]))
        assert report.kinds() == {"homomorphism_law"}
        assert report.violations[0].witness == ("F", "F")

    def test_negative_entry(self, exotic):
        report = validate_rep(scalar_rep(exotic, [[-1]]))
        assert "negative_entry" in report.kinds()

    def test_identity_must_be_identity(self, exotic):
        rep = MatrixRep(exotic, {"i": ("X",)}, {"1": [[2]], "F": [[0]]})
        assert "identity" in validate_rep(rep).kinds()

    @pytest.mark.parametrize(
        "ind, matrices",
        [
            ({"i": ("X",)}, {"1": [[1]], "F": [[1, 1]]}),
            ({"i": ("X",)}, {"1": [[1]]}),
            ({"i": ("X",)}, {"1": [[1]], "F": [[0]], "G": [[0]]}),
            ({"i": ("X", "X")}, {"1": np.eye(2, dtype=np.int64), "F": np.zeros((2, 2), dtype=np.int64)}),
            ({"j": ("X",)}, {"1": [], "F": []}),
            ({"i": ("X",)}, {"1": [[1]], "F": [[0.5]]}),
        ],
        ids=["shape", "missing", "unknown", "duplicate_label", "unknown_object", "non_integer"],
    )
    def test_structural_errors(self, exotic, ind, matrices):
        with pytest.raises(StructuralError):
            MatrixRep(exotic, ind, matrices)

    def test_dict_round_trip(self, exotic_rep):
        again = MatrixRep.from_dict(exotic_rep.to_dict(), exotic_rep.category)
        assert reps_equivalent(exotic_rep, again) == {"i": [0, 1]}

    def test_malformed_document(self, exotic):
        with pytest.raises(StructuralError):
            MatrixRep.from_dict({"matrices": {}}, exotic)


class TestConstructions:
    def test_direct_sum_primes_clashing_labels(self, exotic_rep):
        total = direct_sum(exotic_rep, exotic_rep)
        assert total.ind_objects["i"] == ("X1", "X2", "X1'", "X2'")
        assert validate_rep(total).ok
        assert total.matrices["F"][2:, :2].sum() == 0
        assert len(action_preorder(total).classes) == 2

    def test_direct_sum_with_empty(self, exotic, exotic_rep):
        empty = MatrixRep(
            exotic, {"i": ()}, {"1": np.zeros((0, 0), dtype=np.int64), "F": np.zeros((0, 0), dtype=np.int64)}
        )
        assert empty.size == 0
        assert not is_transitive(empty)
        total = direct_sum(empty, exotic_rep)
        assert reps_equivalent(total, exotic_rep) == {"i": [0, 1]}

    def test_direct_sum_needs_same_category(self, exotic_rep, dual_numbers):
        with pytest.raises(PreconditionError):
            direct_sum(exotic_rep, principal_rep(dual_numbers, "i"))

    def test_sum_matrix_and_annihilated(self, exotic):
        rep = principal_rep(exotic, "i")
        assert sum_matrix(rep, {"1": 1, "F": 2}).tolist() == [[1, 0], [2, 5]]
        with pytest.raises(StructuralError):
            sum_matrix(rep, {})
        assert annihilated_morphisms(cell_rep(exotic, ["1"])) == ["F"]

    def test_restrict_to_subcategory(self, b2):
        rep = cell_rep(b2, ["theta_s", "theta_st", "theta_sts"])
        sub = full_subcategory(b2, ["theta_e", "theta_s"])
        restricted = restrict_rep(rep, sub)
        assert sorted(restricted.matrices) == ["theta_e", "theta_s"]
        assert restricted.ind_objects == rep.ind_objects
        assert restricted.matrices["theta_s"].tolist() == rep.matrices["theta_s"].tolist()
        assert validate_rep(restricted).ok

    def test_restrict_rejects_foreign_subcategory(self, b2, exotic_rep):
        with pytest.raises(PreconditionError):
            restrict_rep(exotic_rep, full_subcategory(b2, ["theta_e", "theta_s"]))


class TestEquivalence:
    def test_swap(self, exotic):
        first = scalar_rep(exotic, [[2, 0], [0, 0]])
        second = scalar_rep(exotic, [[0, 0], [0, 2]])
        assert reps_equivalent(first, second) == {"i": [1, 0]}

    def test_different_sizes(self, exotic, exotic_rep):
        assert reps_equivalent(exotic_rep, cell_rep(exotic, ["F"])) is None

    def test_same_size_not_equivalent(self, exotic, exotic_rep):
        assert reps_equivalent(exotic_rep, scalar_rep(exotic, [[2, 0], [0, 0]])) is None

    def test_match_cell_rep(self, exotic, exotic_rep):
        cell, perms = match_cell_rep(cell_rep(exotic, ["F"]))
        assert cell == ("F",)
        assert perms == {"i": [0]}
        assert match_cell_rep(exotic_rep) is None


class TestWeakJordanHolder:
    def test_antichain_has_two_filtrations(self, exotic):
        rep = scalar_rep(exotic, [[2, 0], [0, 0]])
        result = weak_jh_verify(rep, cap=10)
        assert result.verdict
        assert not result.sampled
        assert result.filtrations_checked == 2
        assert result.certificate[0]["sigma"] == [1, 0]

    def test_sampling_beyond_cap(self, exotic):
        rep = scalar_rep(exotic, [[2, 0], [0, 0]])
        result = weak_jh_verify(rep, cap=1, sample_count=5, seed=0)
        assert result.sampled
        assert result.verdict
        assert result.filtrations_checked == 5
        assert result.to_dict()["sampled"] is True

    def test_single_filtration(self, exotic):
        result = weak_jh_verify(principal_rep(exotic, "i"))
        assert result.verdict
        assert result.filtrations_checked == 1
        assert result.certificate == []


class TestInvolutionDependent:
    def test_simple_basis_of_group_principal_rep(self):
        cat = build_group_category(cyclic(3))
        rep = principal_rep(cat, cat.objects[0])
        dual = simple_basis_matrices(rep)
        for name in cat.names:
            assert np.array_equal(dual.matrices[name], rep.matrices[name])

    def test_simple_basis_needs_involution(self):
        cat = build_monoid_category({"elements": ["e", "a"], "table": [["e", "a"], ["a", "a"]]})
        with pytest.raises(MissingInvolutionError):
            simple_basis_matrices(principal_rep(cat, cat.objects[0]))

    def test_formal_sum_on_dual_numbers(self, dual_numbers):
        result = formal_sum_check(principal_rep(dual_numbers, "i"))
        assert result["m"] == 2
        assert result["matrix"] == [[0, 0], [1, 2]]
        assert not result["transitive"]
        assert result["holds"]

    def test_formal_sum_on_cell_rep(self):
        cat = build_cartan_category([[2, 1], [1, 2]], [1, 2])
        result = formal_sum_check(cell_rep(cat, ["F_11", "F_21"]))
        assert result["m"] == 6
        assert result["matrix"] == [[3, 3], [3, 3]]
        assert result["transitive"]
        assert result["check"]["positive"] and result["check"]["rank1"]
        assert result["holds"]

    def test_formal_sum_needs_one_object(self, two_objects):
        with pytest.raises(PreconditionError):
            formal_sum_check(principal_rep(two_objects, "a"))
