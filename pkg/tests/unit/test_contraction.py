"""Tests for omega_coend.contraction module"""
from math import comb

import pytest

from omega_coend.collection import build_complex
from omega_coend.config import LoopMode
from omega_coend.contraction import (
    classify,
    eligible_pairs,
    find_contraction,
    free_operad,
    has_loop,
    is_root,
    verify_property,
)
from omega_coend.errors import BoundaryMismatch, BudgetExceeded, DimensionMismatch, NotEligible, OutOfBounds
from omega_coend.operads import Bounds, Property, free_presentation
from omega_coend.terms import Contraction, Reflex, Unit
from omega_coend.trees import enumerate_trees


def catalan(k: int) -> int:
    return comb(2 * k, k) // (k + 1)


def bracketings(P):
    """mu(mu, u1) and mu(u1, mu) in P"""
    alg = P.algebra
    mu = alg.generator("mu(1,0)")
    return alg.compose(mu, [mu, Unit("1", 1)]), alg.compose(mu, [Unit("1", 1), mu])


def widths_by_size(max_size: int):
    """Leaf counts of every word in mu(1,0), u1 and r(u0), grouped by mu count"""
    found = {0: [1, 0]}
    for k in range(1, max_size + 1):
        found[k] = [a + b for i in range(k) for a in found[i] for b in found[k - 1 - i]]
    return found


class TestRootAndLoop:
    """Tests for is_root(), has_loop() and classify()"""

    def test_tau_is_root_without_loop(self, small_bounds):
        """tau should be a root cell whose ends differ"""
        P = free_presentation(build_complex(2, 2), Property.C, small_bounds)
        tau = P.generator("tau")

        assert is_root(P, tau)
        assert not has_loop(P, tau, tau)
        assert not classify(P, tau, tau).eligible

    def test_two_way_loop_mode(self, small_bounds):
        """The two-way reading should also reject tau against itself"""
        P = free_presentation(build_complex(2, 2), Property.C, small_bounds, loop_mode=LoopMode.TWO_WAY)
        tau = P.generator("tau")

        assert not has_loop(P, tau, tau)

    def test_unit_reflexivity_has_loop(self, b1):
        """A reflexivity on a unit 0-cell should be an eligible root pair with itself"""
        r = Reflex(Unit("1", 0), 1)

        pair = classify(b1, r, r)

        assert pair.is_root_pair and pair.has_loop and pair.eligible

    def test_functor_cells_are_not_root(self, b1):
        """F1 has a one-leaf arity"""
        assert not is_root(b1, b1.generator("F1"))

    def test_zero_cells_have_no_root_property(self, b1):
        """is_root() should reject 0-cells"""
        with pytest.raises(DimensionMismatch):
            is_root(b1, b1.generator("F0"))

    def test_different_arities_are_not_eligible(self, b1):
        """classify() should reject endpoints of different arity"""
        mu = b1.generator("mu(1,0)")

        assert not classify(b1, mu, Unit("1", 1)).eligible


class TestFindContraction:
    """Tests for find_contraction()"""

    @pytest.fixture
    def p0(self):
        """Unsaturated C^0 presentations by property"""
        return lambda prop: free_presentation(build_complex(0, 1), prop, Bounds(max_dim=1))

    def test_contractible_connects_bracketings(self, p0):
        """A contractible operad should answer with [x | y]"""
        P = p0(Property.C)
        x, y = bracketings(P)

        assert find_contraction(P, x, y) == Contraction(x, y)

    @pytest.mark.parametrize("prop", [Property.ID, Property.ID_U])
    def test_free_operads_only_connect_equal_ends(self, p0, prop):
        """Id and Id_u should give a reflexivity for x = x and nothing otherwise"""
        P = p0(prop)
        x, y = bracketings(P)

        assert find_contraction(P, x, x) == Reflex(x, 2)
        assert find_contraction(P, x, y) is None

    def test_strict_gives_reflexivity_of_class(self, p0):
        """A strict operad should connect both bracketings by one reflexivity"""
        P = p0(Property.S)
        P.cells
        x, y = bracketings(P)

        assert find_contraction(P, x, y) == find_contraction(P, y, x)
        assert isinstance(find_contraction(P, x, y), Reflex)

    def test_strict_rejects_cells_outside_the_bounds(self):
        """find_contraction() should not identify bracketings that saturation never stored"""
        P = free_operad(build_complex(1, 2), Property.S, Bounds(max_dim=2, max_width=3, max_size=1))
        x, y = bracketings(P)

        with pytest.raises(OutOfBounds):
            find_contraction(P, x, y)

    def test_strict_lands_on_the_class_of_both_ends(self, p0):
        """The reflexivity found under S should sit on the class shared by x and y"""
        P = p0(Property.S)
        x, y = bracketings(P)

        cell = find_contraction(P, x, y)

        assert cell.base == P.class_of(x) == P.class_of(y)
        assert P.algebra.source(cell) == P.algebra.target(cell)

    def test_ineligible_pair(self, p0):
        """find_contraction() should refuse a pair of different arity"""
        P = p0(Property.C)

        with pytest.raises(NotEligible):
            find_contraction(P, P.generator("mu(1,0)"), Unit("1", 1))


class TestSaturation:
    """Tests for saturate() and free_operad()"""

    @pytest.mark.parametrize("width, size", [(2, 1), (3, 2), (4, 3)])
    def test_id_counts_are_catalan(self, width, size):
        """Id on C^0 at dim 1 should store every bracketing within the bounds"""
        P = free_operad(build_complex(0, 1), Property.ID, Bounds(max_dim=1, max_width=width, max_size=size))

        expected = sum(catalan(k) for k in range(size + 1) if k + 1 <= width)
        assert P.counts() == [1, expected]

    @pytest.mark.parametrize("width", [2, 3])
    def test_strict_collapse_at_dim_one(self, width):
        """S_u on C^0 should keep one class per 1-tree of bounded width"""
        P = free_operad(build_complex(0, 1), Property.S_U, Bounds(max_dim=1, max_width=width, max_size=2))

        classes = {P.class_of(t) for t in P.cells_of_dim(1)}

        assert len(classes) == len(enumerate_trees(1, width))

    @pytest.mark.slow
    def test_strict_collapse_is_injective_at_dim_two(self):
        """S_u on C^0 should not identify 2-cells of different arity"""
        P = free_operad(build_complex(0, 2), Property.S_U, Bounds(max_dim=2, max_width=2, max_size=1))

        for t in P.cells_of_dim(2):
            for s in P.cells_of_dim(2):
                if P.class_of(t) == P.class_of(s):
                    assert P.algebra.arity(t) == P.algebra.arity(s)

    @pytest.mark.parametrize("width, size", [(2, 1), (3, 2), (2, 3)])
    def test_unit_reflexive_counts_match_brute_force(self, width, size):
        """Id_u on C^0 at dim 1 should store every word in mu, u1 and r(u0) within the bounds"""
        P = free_operad(build_complex(0, 1), Property.ID_U, Bounds(max_dim=1, max_width=width, max_size=size))

        expected = sum(1 for words in widths_by_size(size).values() for w in words if w <= width)

        assert P.counts() == [1, expected]

    @pytest.mark.slow
    def test_strict_unit_collapse_gives_one_class_per_tree(self):
        """S_u on C^0 should keep exactly one class for each tree of width at most 3"""
        P = free_operad(build_complex(0, 2), Property.S_U, Bounds(max_dim=2, max_width=3, max_size=2))

        for dim in range(1, 3):
            classes = {}
            for t in P.cells_of_dim(dim):
                classes.setdefault(P.algebra.arity(t)[0], set()).add(P.class_of(t))

            assert all(len(found) == 1 for found in classes.values())
            assert set(classes) == set(enumerate_trees(dim, 3))

    def test_strict_composes_across_identified_boundaries(self, two_globes):
        """Saturation under S should paste alpha and beta once g and g2 are identified"""
        P = free_operad(two_globes, Property.S, Bounds(max_dim=2, max_width=2, max_size=3))
        alg = P.algebra

        composite = alg.compose(P.generator("m"), [P.generator("alpha"), P.generator("beta")])

        assert P.same_class(P.generator("g"), P.generator("g2"))
        assert P.is_stored(composite)
        assert verify_property(P).ok

    def test_free_operad_keeps_distinct_boundaries_apart(self, two_globes):
        """Without identifications alpha and beta should not paste"""
        P = free_presentation(two_globes, Property.ID, Bounds(max_dim=2, max_width=2, max_size=3))

        with pytest.raises(BoundaryMismatch):
            P.algebra.compose(P.generator("m"), [P.generator("alpha"), P.generator("beta")])

    def test_budget(self):
        """saturate() should stop once the cell cap is passed"""
        with pytest.raises(BudgetExceeded):
            free_operad(build_complex(0, 1), Property.ID, Bounds(max_dim=1, max_width=4, max_size=3, max_cells=5))

    def test_unit_reflexivities_are_stored(self):
        """Id_u should store the reflexivity on each lower unit"""
        P = free_operad(build_complex(0, 1), Property.ID_U, Bounds(max_dim=1, max_width=2, max_size=1))

        assert Reflex(Unit("1", 0), 1) in P.cells_of_dim(1)


class TestEligiblePairs:
    """Tests for eligible_pairs()"""

    def test_dimension_range(self, small_bounds):
        """eligible_pairs() should need a dimension above k within the bounds"""
        P = free_presentation(build_complex(0, 2), Property.C, small_bounds)

        with pytest.raises(DimensionMismatch):
            eligible_pairs(P, 2)

    def test_zero_cells_pair_with_themselves(self, small_bounds):
        """At dim 0 every stored cell should pair with itself only"""
        P = free_operad(build_complex(0, 2), Property.C, small_bounds)

        pairs = eligible_pairs(P, 0)

        assert [(p.x, p.y) for p in pairs] == [(Unit("1", 0), Unit("1", 0))]

    def test_tau_pair_is_listed_as_ineligible(self, small_bounds):
        """(tau, tau) should be filtered out and no reflexivity on tau stored"""
        P = free_operad(build_complex(2, 2), Property.C, small_bounds)
        tau = P.generator("tau")

        everything = eligible_pairs(P, 1, include_ineligible=True)
        eligible = eligible_pairs(P, 1)

        assert any(p.x == tau and p.y == tau and not p.eligible for p in everything)
        assert not any(p.x == tau for p in eligible)
        assert not P.is_stored(Reflex(tau, 2))


class TestVerifyProperty:
    """Tests for verify_property()"""

    def test_contractible_audit_passes(self, small_bounds):
        """The saturated C operad on C^0 should pass its audit"""
        P = free_operad(build_complex(0, 2), Property.C, small_bounds)

        report = verify_property(P)

        assert report.ok
        assert report.checked > 0

    def test_removed_contraction_is_reported(self, small_bounds):
        """Dropping a stored contraction should make the audit fail"""
        P = free_operad(build_complex(0, 2), Property.C, small_bounds)
        victim = next(t for t in P.cells_of_dim(2) if isinstance(t, Contraction))

        P.remove_cell(victim)
        report = verify_property(P)

        assert not report.ok
        assert {v.kind for v in report.violations} == {"MissingContraction"}

    @pytest.mark.parametrize("prop", [Property.ID, Property.ID_U])
    def test_contraction_in_free_operad_is_reported(self, small_bounds, prop):
        """A contraction slipped into Id or Id_u should make the audit fail"""
        P = free_operad(build_complex(0, 2), prop, small_bounds)
        mu = P.generator("mu(1,0)")
        assert verify_property(P).ok

        P.cells_of_dim(2).append(Contraction(mu, mu))
        report = verify_property(P)

        assert not report.ok
        assert {v.kind for v in report.violations} == {"UnexpectedContraction"}

    def test_nested_contraction_is_reported(self, small_bounds):
        """A composite with a contraction among its labels should be reported too"""
        P = free_operad(build_complex(0, 2), Property.ID, small_bounds)
        x, y = bracketings(P)
        nested = P.algebra.compose(P.generator("mu(2,0)"), [Contraction(x, y), Unit("1", 2)])

        P.cells_of_dim(2).append(nested)

        assert "UnexpectedContraction" in {v.kind for v in verify_property(P).violations}

    def test_strict_audit_passes(self):
        """The saturated S_u operad on C^0 should identify every eligible pair"""
        P = free_operad(build_complex(0, 1), Property.S_U, Bounds(max_dim=1, max_width=3, max_size=2))

        assert verify_property(P).ok

    def test_missing_unit_reflexivity(self):
        """Dropping a unit reflexivity should be reported"""
        P = free_operad(build_complex(0, 1), Property.ID_U, Bounds(max_dim=1, max_width=2, max_size=1))

        P.remove_cell(Reflex(Unit("1", 0), 1))

        assert "MissingUnitReflexivity" in {v.kind for v in verify_property(P).violations}
