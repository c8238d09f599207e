"""Shared test fixtures for omega-coend tests"""
from typing import Tuple

import pytest

from omega_coend.coend import CoendCell, CoendOperad
from omega_coend.collection import CollectionCell, PointedCollection, build_complex, unit_collection
from omega_coend.config import ENV_PREFIX, Settings
from omega_coend.globular import GlobularSet, validate_globular_set
from omega_coend.operads import Bounds, OperadPresentation, Property, free_presentation
from omega_coend.terms import TermAlgebra, Unit
from omega_coend.trees import Tree, TreeMatrix, decode, lift_to


@pytest.fixture
def globe2() -> GlobularSet:
    """The 2-globe: two 0-cells, two parallel 1-cells and one 2-cell"""
    return validate_globular_set(
        {
            "max_dim": 2,
            "cells": [
                {"id": "a", "dim": 0},
                {"id": "b", "dim": 0},
                {"id": "f", "dim": 1, "src": "a", "tgt": "b"},
                {"id": "g", "dim": 1, "src": "a", "tgt": "b"},
                {"id": "alpha", "dim": 2, "src": "f", "tgt": "g"},
            ],
        }
    )


@pytest.fixture
def algebra() -> TermAlgebra:
    """Term algebra over C^1 truncated at dim 2"""
    return TermAlgebra(build_complex(1, 2))


@pytest.fixture
def small_bounds() -> Bounds:
    """Bounds that keep saturation to a few dozen cells per dimension"""
    return Bounds(max_dim=2, max_width=3, max_size=1)


@pytest.fixture
def b1() -> OperadPresentation:
    """The free contractible operad on C^1, unsaturated"""
    return free_presentation(build_complex(1, 2), Property.C, Bounds(), label="B1")


@pytest.fixture
def coend() -> CoendOperad:
    """Coend builder with property C and default bounds"""
    return CoendOperad(Property.C)


@pytest.fixture
def id_coend() -> CoendOperad:
    """Coend builder whose operads have no contractions"""
    return CoendOperad(Property.ID)


@pytest.fixture
def two_globes() -> PointedCollection:
    """alpha: f => g and beta: g2 => h over one colour, plus a binary m over 1(2) *[2,1] 1(2)

    g and g2 are different generators, so alpha and beta only paste once they
    are identified.
    """
    C = unit_collection(("1",), 2)
    for name in ("f", "g", "g2", "h"):
        C.add(CollectionCell(name, 1, "u0", "u0", Tree.linear(1), "1", "1"))
    C.add(CollectionCell("alpha", 2, "f", "g", Tree.linear(2), "1", "1"))
    C.add(CollectionCell("beta", 2, "g2", "h", Tree.linear(2), "1", "1"))
    C.add(CollectionCell("m", 2, "u1", "u1", decode(TreeMatrix(2, (2, 2), (1,))), "1", "1"))
    return C.validate()


def _loop_pair(builder: CoendOperad) -> Tuple[CoendCell, CoendCell]:
    """Two parallel level-2 cells over d[1,2](1(1)) with distinct images of tau

    Both send F and H to F; minus sends tau to the identity on F0 and plus to
    F1 applied to the identity on the unit 0-cell.
    """
    tree = lift_to(Tree.linear(1), 2)
    B1 = builder.complex(1)
    alg = B1.algebra
    images = {f"H{m}": alg.generator(f"F{m}") for m in range(3)}
    reflex_f0 = alg.reflex(alg.generator("F0"), 1)
    whiskered = alg.compose(alg.generator("F1"), [alg.reflex(Unit("1", 0), 1)])
    minus_top = builder.morphism(2, tree, {**images, "tau": reflex_f0}, label="minus")
    plus_top = builder.morphism(2, tree, {**images, "tau": whiskered}, label="plus")
    below = builder.identity_cell(1)
    levels = [(below.top, below.top)] + below.levels
    return (
        CoendCell(2, tree, minus_top, list(levels), "minus"),
        CoendCell(2, tree, plus_top, list(levels), "plus"),
    )


@pytest.fixture
def loop_pair():
    """Builder of the parallel pair (minus, plus) for a given Coend builder"""
    return _loop_pair


@pytest.fixture
def clean_env(monkeypatch: pytest.MonkeyPatch):
    """Clean environment variables before test"""
    for name in Settings.model_fields:
        monkeypatch.delenv(ENV_PREFIX + name.upper(), raising=False)
    yield
    # Cleanup happens automatically via monkeypatch
