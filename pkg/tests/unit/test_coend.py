"""Tests for omega_coend.coend module"""
import pytest

from omega_coend.coend import CoendCell, cells_equal, tree_key
from omega_coend.config import Variant
from omega_coend.errors import (
    BadLevel,
    ContractionUnavailable,
    DimensionMismatch,
    MissingImage,
    MissingReference,
    NotEligible,
)
from omega_coend.globular import Side
from omega_coend.operads import check_morphism
from omega_coend.syntax import format_term
from omega_coend.terms import Contraction, Reflex, Unit
from omega_coend.trees import Tree, lift_to, star


def two(n: int, p: int) -> Tree:
    return star(Tree.linear(n), Tree.linear(n), n, p)


class TestTreeOperads:
    """Tests for CoendOperad.tree_operad()"""

    def test_linear_tree_is_the_complex(self, coend):
        """B^(1(n)) should be B^n itself"""
        assert coend.tree_operad(Tree.linear(1)).presentation is coend.complex(1)

    def test_degenerate_trees_share_the_operad(self, coend):
        """Trees with the same leaves and junctions should share one B^t"""
        assert coend.tree_operad(lift_to(Tree.linear(1), 2)) is coend.tree_operad(Tree.linear(1))
        assert tree_key(two(1, 0)) == ((1, 1), (0,))

    def test_two_arrows(self, coend):
        """B^(1(1) *0 1(1)) should have three colours and two functor copies"""
        T = coend.tree_operad(two(1, 0))

        assert T.presentation.base.colours == ("1", "2", "3")
        assert {"F1", "F1#2"} <= set(T.presentation.base.cells)
        assert len(T.injections) == 2

    def test_three_arrows(self, coend):
        """Three glued arrows should give four colours and a third functor copy"""
        t = star(two(1, 0), Tree.linear(1), 1, 0)

        P = coend.tree_operad(t).presentation

        assert len(P.base.colours) == 4
        assert "F1#3" in P.base.cells

    def test_morphism_needs_every_image(self, coend):
        """morphism() should refuse a generator with no image and no namesake"""
        with pytest.raises(MissingImage):
            coend.morphism(2, Tree.linear(1), {})


class TestMakeMu:
    """Tests for make_mu() and cw_image()"""

    @pytest.mark.parametrize("n, p", [(1, 0), (2, 0), (2, 1)])
    @pytest.mark.parametrize("variant", [Variant.LEFT, Variant.RIGHT])
    def test_composition_cells_are_sound(self, coend, n, p, variant):
        """make_mu() should give a well-typed cell that commutes with the cofaces"""
        c = coend.make_mu(n, p, variant)

        assert c.tree == two(n, p)
        assert check_morphism(c.top).ok
        assert coend.check_serial(c).ok

    def test_cells_are_cached(self, coend):
        """make_mu() should return the same cell for the same arguments"""
        assert coend.make_mu(1, 0) is coend.make_mu(1, 0, Variant.LEFT)

    @pytest.mark.parametrize("n, p", [(1, 1), (2, 2), (2, -1)])
    def test_level_out_of_range(self, coend, n, p):
        """make_mu() should reject p outside 0..n-1"""
        with pytest.raises(BadLevel):
            coend.make_mu(n, p)

    def test_units_go_to_identities(self, coend):
        """cw_image() of a unit should be the identity cell"""
        assert coend.cw_image("u1") is coend.identity_cell(1)

    def test_cw_respects_boundaries(self, coend):
        """The boundary of the image of mu(2,p) should be the image of its boundary"""
        assert cells_equal(coend.boundary(coend.cw_image("mu(2,0)"), Side.SOURCE), coend.cw_image("mu(1,0)"))
        assert cells_equal(coend.boundary(coend.cw_image("mu(2,1)"), Side.TARGET), coend.cw_image("u1"))

    def test_unknown_generator(self, coend):
        """cw_image() should reject names outside C^0"""
        with pytest.raises(MissingReference):
            coend.cw_image("bogus")

    def test_identity_cell_is_serial(self, coend):
        """Identity cells should pass the serial audit"""
        assert coend.check_serial(coend.identity_cell(2)).ok

    def test_zero_cell_has_no_boundary(self, coend):
        """boundary() of a level-0 cell should raise"""
        with pytest.raises(DimensionMismatch):
            coend.boundary(coend.identity_cell(0), Side.SOURCE)


class TestCompose:
    """Tests for CoendOperad.compose()"""

    def test_unit_laws(self, coend):
        """Grafting identities into mu, or mu into an identity, should give mu"""
        mu, one = coend.make_mu(1, 0), coend.identity_cell(1)

        assert cells_equal(coend.compose(mu, [one, one]), mu)
        assert cells_equal(coend.compose(one, [mu]), mu)

    def test_associativity(self, coend):
        """Both ways of building a ternary composite should agree"""
        mu, one = coend.make_mu(1, 0), coend.identity_cell(1)

        left = coend.compose(coend.compose(mu, [mu, one]), [mu, one, one])
        right = coend.compose(mu, [coend.compose(mu, [mu, one]), coend.compose(one, [one])])

        assert cells_equal(left, right)

    def test_leaf_count(self, coend):
        """compose() should need one cell per leaf"""
        with pytest.raises(DimensionMismatch):
            coend.compose(coend.make_mu(1, 0), [coend.identity_cell(1)])

    def test_leaf_level(self, coend):
        """compose() should need cells at the height of their leaf"""
        with pytest.raises(DimensionMismatch):
            coend.compose(coend.make_mu(1, 0), [coend.identity_cell(2), coend.identity_cell(1)])


class TestLiftContraction:
    """Tests for lift_contraction()"""

    def test_identity_pair(self, coend):
        """Lifting two identities should send tau to the reflexivity on F0"""
        one = coend.identity_cell(1)

        lifted = coend.lift_contraction(one, one)

        B1 = coend.complex(1)
        assert lifted.top.images["tau"] == Reflex(B1.generator("F0"), 1)
        assert lifted.tree == lift_to(Tree.linear(1), 2)
        assert coend.check_serial(lifted).ok

    def test_loop_pair(self, coend, loop_pair):
        """Lifting the loop pair should connect the two images of tau"""
        minus, plus = loop_pair(coend)

        lifted = coend.lift_contraction(minus, plus)

        alg = coend.complex(1).algebra
        assert format_term(alg, lifted.top.images["xi3"]) == "[r[0,1](F0) | F1(r[0,1](u0))]"
        assert lifted.top.images["alpha(1)"] == minus.top.images["tau"]
        assert lifted.top.images["beta(1)"] == plus.top.images["tau"]
        assert coend.check_serial(lifted).ok

    def test_bracketing_pair(self, coend):
        """Cells sending tau through the two bracketings of r(u0) should lift to their contraction"""
        tree = lift_to(Tree.linear(1), 2)
        alg = coend.complex(1).algebra
        mu, f1 = alg.generator("mu(1,0)"), alg.generator("F1")
        r = alg.reflex(Unit("1", 0), 1)
        x = alg.compose(f1, [alg.compose(mu, [alg.compose(mu, [r, r]), r])])
        y = alg.compose(f1, [alg.compose(mu, [r, alg.compose(mu, [r, r])])])
        below = coend.identity_cell(1)
        levels = [(below.top, below.top)] + below.levels
        fixed = {f"H{m}": alg.generator(f"F{m}") for m in range(3)}
        minus = CoendCell(2, tree, coend.morphism(2, tree, {**fixed, "tau": x}, label="left"), list(levels), "left")
        plus = CoendCell(2, tree, coend.morphism(2, tree, {**fixed, "tau": y}, label="right"), list(levels), "right")

        lifted = coend.lift_contraction(minus, plus)

        assert x != y
        assert alg.is_root(x) and alg.is_root(y)
        assert lifted.top.images["xi3"] == Contraction(x, y)
        assert lifted.top.images["alpha(1)"] == x
        assert lifted.top.images["beta(1)"] == y
        assert coend.check_serial(lifted).ok

    def test_swapped_levels_break_seriality(self, coend, loop_pair):
        """Exchanging source and target below the lifted cell should be caught"""
        minus, plus = loop_pair(coend)
        lifted = coend.lift_contraction(minus, plus)

        lifted.levels[0] = (plus.top, minus.top)
        report = coend.check_serial(lifted)

        assert not report.ok
        assert "SerialMismatch" in {v.kind for v in report.violations}

    def test_missing_levels(self, coend):
        """check_serial() should flag a cell with too few levels"""
        one = coend.identity_cell(2)
        broken = CoendCell(one.n, one.tree, one.top, one.levels[:1], "broken")

        assert [v.kind for v in coend.check_serial(broken).violations] == ["LevelCount"]

    def test_tau_pair_has_no_filler(self, coend):
        """Lifting two identities at level 2 should fail on the root pair (tau, tau)"""
        two_cell = coend.identity_cell(2)

        with pytest.raises(ContractionUnavailable):
            coend.lift_contraction(two_cell, two_cell)

    def test_no_contractions_without_property_c(self, id_coend, loop_pair):
        """An Id builder should not connect the loop pair"""
        minus, plus = loop_pair(id_coend)

        with pytest.raises(ContractionUnavailable):
            id_coend.lift_contraction(minus, plus)

    def test_levels_must_match(self, coend):
        """lift_contraction() should reject cells at different levels"""
        with pytest.raises(DimensionMismatch):
            coend.lift_contraction(coend.identity_cell(1), coend.identity_cell(2))

    def test_level_zero(self, coend):
        """lift_contraction() should reject level-0 cells"""
        zero = coend.identity_cell(0)

        with pytest.raises(DimensionMismatch):
            coend.lift_contraction(zero, zero)

    def test_trees_must_match(self, coend):
        """lift_contraction() should reject cells over different trees"""
        with pytest.raises(NotEligible):
            coend.lift_contraction(coend.make_mu(1, 0), coend.identity_cell(1))
