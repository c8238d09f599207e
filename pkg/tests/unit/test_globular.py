"""Tests for omega_coend.globular module"""
import pytest

from omega_coend.errors import DimensionMismatch, GlobularIdentityViolation, MissingReference
from omega_coend.globular import ReflexiveStructure, Side, is_parallel, iterated_boundary, validate_globular_set


class TestValidateGlobularSet:
    """Tests for validate_globular_set()"""

    def test_valid_globe(self, globe2):
        """validate_globular_set() should accept the 2-globe"""
        assert globe2.counts() == [2, 2, 1]
        assert globe2.source(globe2.cell("alpha")).id == "f"

    def test_missing_reference(self):
        """validate_globular_set() should reject a dangling source"""
        raw = {"max_dim": 1, "cells": [{"id": "a", "dim": 0}, {"id": "f", "dim": 1, "src": "a", "tgt": "b"}]}

        with pytest.raises(MissingReference):
            validate_globular_set(raw)

    def test_boundary_of_wrong_dimension(self):
        """validate_globular_set() should reject a boundary two dimensions down"""
        raw = {
            "max_dim": 2,
            "cells": [
                {"id": "a", "dim": 0},
                {"id": "x", "dim": 2, "src": "a", "tgt": "a"},
            ],
        }

        with pytest.raises(DimensionMismatch):
            validate_globular_set(raw)

    def test_globular_identity_violation(self):
        """validate_globular_set() should reject a 2-cell between non-parallel arrows"""
        raw = {
            "max_dim": 2,
            "cells": [
                {"id": "a", "dim": 0},
                {"id": "b", "dim": 0},
                {"id": "f", "dim": 1, "src": "a", "tgt": "b"},
                {"id": "g", "dim": 1, "src": "b", "tgt": "a"},
                {"id": "alpha", "dim": 2, "src": "f", "tgt": "g"},
            ],
        }

        with pytest.raises(GlobularIdentityViolation):
            validate_globular_set(raw)

    def test_cell_above_max_dim(self):
        """validate_globular_set() should reject cells beyond max_dim"""
        with pytest.raises(DimensionMismatch):
            validate_globular_set({"max_dim": 0, "cells": [{"id": "a", "dim": 1, "src": "a", "tgt": "a"}]})

    def test_to_raw_round_trip(self, globe2):
        """to_raw() should feed back into an equal globular set"""
        assert validate_globular_set(globe2.to_raw()) == globe2


class TestBoundaries:
    """Tests for iterated_boundary() and is_parallel()"""

    def test_iterated_boundary(self, globe2):
        """iterated_boundary() should walk down to the requested dimension"""
        alpha = globe2.cell("alpha")

        assert iterated_boundary(globe2, alpha, 0, Side.SOURCE).id == "a"
        assert iterated_boundary(globe2, alpha, 0, Side.TARGET).id == "b"
        assert iterated_boundary(globe2, alpha, 2, Side.TARGET) is alpha

    def test_iterated_boundary_out_of_range(self, globe2):
        """iterated_boundary() should reject k above the cell's dimension"""
        with pytest.raises(DimensionMismatch):
            iterated_boundary(globe2, globe2.cell("f"), 2, Side.SOURCE)

    def test_parallel_arrows(self, globe2):
        """is_parallel() should hold for f and g"""
        assert is_parallel(globe2, globe2.cell("f"), globe2.cell("g"))

    def test_parallel_needs_positive_dim(self, globe2):
        """is_parallel() should reject 0-cells"""
        with pytest.raises(DimensionMismatch):
            is_parallel(globe2, globe2.cell("a"), globe2.cell("b"))

    def test_zero_cell_has_no_source(self, globe2):
        """source() of a 0-cell should raise"""
        with pytest.raises(DimensionMismatch):
            globe2.source(globe2.cell("a"))


class TestReflexiveStructure:
    """Tests for ReflexiveStructure"""

    def test_sound_lifts(self):
        """violations() should be empty for identities that sit on their base"""
        X = validate_globular_set(
            {
                "max_dim": 2,
                "cells": [
                    {"id": "a", "dim": 0},
                    {"id": "1a", "dim": 1, "src": "a", "tgt": "a"},
                    {"id": "11a", "dim": 2, "src": "1a", "tgt": "1a"},
                ],
            }
        )
        a, one, two = X.cell("a"), X.cell("1a"), X.cell("11a")
        R = ReflexiveStructure(X, {(a, 1): one, (a, 2): two})

        assert R.violations() == []
        assert R.lift(a, 2) is two

    def test_lift_needs_higher_dim(self, globe2):
        """lift() should reject a target dimension at or below the cell's"""
        R = ReflexiveStructure(globe2)

        with pytest.raises(DimensionMismatch):
            R.lift(globe2.cell("f"), 1)

    def test_missing_lift(self, globe2):
        """lift() should raise when no identity was chosen"""
        R = ReflexiveStructure(globe2)

        with pytest.raises(MissingReference):
            R.lift(globe2.cell("a"), 1)

    def test_broken_lift_is_reported(self, globe2):
        """violations() should list an identity that is not an endo-cell"""
        R = ReflexiveStructure(globe2, {(globe2.cell("a"), 1): globe2.cell("f")})

        assert len(R.violations()) == 1
