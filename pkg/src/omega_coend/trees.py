"""Batanin n-trees

A tree is an ambient dimension plus a planar rooted shape, the shape being
the nested tuple of its children. The Grothendieck matrix is a derived codec:
``top`` lists the heights of the leaves left to right and ``bottom`` the
heights of the meets of consecutive leaves.
"""
import logging
from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

from .errors import BadLevel, DimensionMismatch, MalformedMatrix, TruncationMismatch
from .globular import GlobularSet, validate_globular_set

logger = logging.getLogger(__name__)

Shape = Tuple["Shape", ...]
Path = Tuple[int, ...]


@dataclass(frozen=True, order=True)
class Sector:
    """A gap between two consecutive children of a node; a cell of the pasting scheme"""

    path: Path
    gap: int

    @property
    def dim(self) -> int:
        return len(self.path)

    @property
    def id(self) -> str:
        node = ".".join(str(i) for i in self.path) or "r"
        return f"{node}:{self.gap}"

    @classmethod
    def from_id(cls, text: str) -> "Sector":
        node, _, gap = text.partition(":")
        path = () if node == "r" else tuple(int(i) for i in node.split("."))
        return cls(path, int(gap))


SectorMap = Dict[Sector, Sector]


@dataclass(frozen=True)
class TreeMatrix:
    dim: int
    top: Tuple[int, ...]
    bottom: Tuple[int, ...]

    def __str__(self) -> str:
        top = ",".join(map(str, self.top))
        bot = ",".join(map(str, self.bottom))
        return f"tree{{{self.dim}; top=[{top}]; bot=[{bot}]}}"

    def key(self) -> Tuple[int, Tuple[int, ...], Tuple[int, ...]]:
        return (self.dim, self.top, self.bottom)


def _height(shape: Shape) -> int:
    return 0 if not shape else 1 + max(_height(c) for c in shape)


@dataclass(frozen=True)
class Tree:
    dim: int
    shape: Shape

    def __post_init__(self) -> None:
        if self.dim < 0:
            raise BadLevel(f"negative tree dimension {self.dim}")
        if _height(self.shape) > self.dim:
            raise BadLevel(f"shape of height {_height(self.shape)} does not fit in dimension {self.dim}")

    @classmethod
    def linear(cls, n: int) -> "Tree":
        """The linear tree 1(n)"""
        shape: Shape = ()
        for _ in range(n):
            shape = (shape,)
        return cls(n, shape)

    @classmethod
    def root(cls, n: int) -> "Tree":
        """The fully degenerate tree 1^0_n(1(0))"""
        return cls(n, ())

    @property
    def height(self) -> int:
        return _height(self.shape)

    @property
    def is_root_only(self) -> bool:
        return not self.shape

    @property
    def width(self) -> int:
        """Number of leaves; the root-only tree has width 0"""
        return 0 if not self.shape else len(leaves(self))

    def node(self, path: Path) -> Shape:
        shape = self.shape
        for i in path:
            shape = shape[i]
        return shape

    def matrix(self) -> TreeMatrix:
        return encode(self)

    def __str__(self) -> str:
        return str(self.matrix())


def leaves(t: Tree) -> List[Tuple[Path, int]]:
    """Childless nodes as (path, height), left to right; the root counts when alone"""
    found: List[Tuple[Path, int]] = []

    def walk(shape: Shape, path: Path) -> None:
        if not shape:
            found.append((path, len(path)))
        for i, child in enumerate(shape):
            walk(child, path + (i,))

    walk(t.shape, ())
    return found


def nodes(t: Tree) -> List[Tuple[Path, int]]:
    """Every node as (path, number of children), in depth-first order"""
    found: List[Tuple[Path, int]] = []

    def walk(shape: Shape, path: Path) -> None:
        found.append((path, len(shape)))
        for i, child in enumerate(shape):
            walk(child, path + (i,))

    walk(t.shape, ())
    return found


def sectors(t: Tree) -> List[Sector]:
    """Scheme cells ordered by dimension, then left to right"""
    found = [Sector(path, gap) for path, count in nodes(t) for gap in range(count + 1)]
    return sorted(found, key=lambda s: (s.dim, s.path, s.gap))


def _common_prefix(a: Path, b: Path) -> int:
    n = 0
    for x, y in zip(a, b):
        if x != y:
            break
        n += 1
    return n


def encode(t: Tree) -> TreeMatrix:
    if not t.shape:
        return TreeMatrix(t.dim, (0,) if t.dim == 0 else (), ())
    found = leaves(t)
    top = tuple(h for _, h in found)
    bottom = tuple(_common_prefix(a, b) for (a, _), (b, _) in zip(found, found[1:]))
    return TreeMatrix(t.dim, top, bottom)


def decode(matrix: TreeMatrix) -> Tree:
    """Rebuild the tree of a Grothendieck matrix

    Raises:
        MalformedMatrix: the rows violate the matrix inequalities
    """
    n, top, bottom = matrix.dim, list(matrix.top), list(matrix.bottom)
    if n < 0:
        raise MalformedMatrix(f"negative dimension {n}")
    if not top:
        if bottom:
            raise MalformedMatrix("empty top row with a non-empty bottom row")
        return Tree.root(n)
    if top == [0] and not bottom:
        if n != 0:
            raise MalformedMatrix("a leaf at height 0 is written as the empty form when n >= 1")
        return Tree.root(0)
    if len(bottom) != len(top) - 1:
        raise MalformedMatrix(f"bottom row needs {len(top) - 1} entries, got {len(bottom)}")
    for i in top:
        if i < 1 or i > n:
            raise MalformedMatrix(f"leaf height {i} outside 1..{n}")
    for j, b in enumerate(bottom):
        if b < 0 or b >= min(top[j], top[j + 1]):
            raise MalformedMatrix(f"junction {b} is not below both neighbours {top[j]}, {top[j + 1]}")

    root: list = []
    spine = [root]
    for j, h in enumerate(top):
        if j > 0:
            del spine[bottom[j - 1] + 1:]
        while len(spine) <= h:
            child: list = []
            spine[-1].append(child)
            spine.append(child)

    def freeze(node: list) -> Shape:
        return tuple(freeze(c) for c in node)

    return Tree(n, freeze(root))


def truncate(t: Tree, k: int) -> Tree:
    """Remove the top k levels"""
    if k < 0 or k > t.dim:
        raise BadLevel(f"cannot truncate {k} levels of a {t.dim}-tree")
    keep = t.dim - k

    def cut(shape: Shape, depth: int) -> Shape:
        if depth == keep:
            return ()
        return tuple(cut(c, depth + 1) for c in shape)

    return Tree(keep, cut(t.shape, 0))


def restrict(t: Tree, p: int) -> Tree:
    """The p-dimensional truncation of t"""
    return truncate(t, t.dim - p)


def degenerate(t: Tree, from_dim: int, to_dim: int) -> Tree:
    if t.dim != from_dim:
        raise DimensionMismatch(f"tree has dim {t.dim}, expected {from_dim}")
    if to_dim <= from_dim:
        raise BadLevel(f"degeneracy from {from_dim} to {to_dim} does not raise the dimension")
    return Tree(to_dim, t.shape)


def lift_to(t: Tree, n: int) -> Tree:
    """degenerate(t) to dim n, or t itself when it already has dim n"""
    return t if t.dim == n else degenerate(t, t.dim, n)


def star_with_maps(t: Tree, u: Tree, n: int, p: int) -> Tuple[Tree, SectorMap, SectorMap]:
    """Glue u to the right of t along their common p-truncation

    Returns:
        The glued tree and the sector maps of t and u into it
    """
    if t.dim != n or u.dim != n:
        raise DimensionMismatch(f"star of {t.dim}- and {u.dim}-trees at ambient dim {n}")
    if p < 0 or p >= n:
        raise BadLevel(f"level {p} outside 0..{n - 1}")
    if restrict(t, p) != restrict(u, p):
        raise TruncationMismatch(f"{t} and {u} differ below level {p}")

    def merge(a: Shape, b: Shape, depth: int) -> Shape:
        if depth == p:
            return a + b
        return tuple(merge(x, y, depth + 1) for x, y in zip(a, b))

    glued = Tree(n, merge(t.shape, u.shape, 0))
    map_t = {s: s for s in sectors(t)}
    map_u: SectorMap = {}
    for s in sectors(u):
        depth = len(s.path)
        if depth < p:
            map_u[s] = s
        elif depth == p:
            map_u[s] = Sector(s.path, s.gap + len(t.node(s.path)))
        else:
            offset = len(t.node(s.path[:p]))
            path = s.path[:p] + (s.path[p] + offset,) + s.path[p + 1:]
            map_u[s] = Sector(path, s.gap)
    return glued, map_t, map_u


def star(t: Tree, u: Tree, n: int, p: int) -> Tree:
    return star_with_maps(t, u, n, p)[0]


def decompose(t: Tree) -> List[Tuple[Tree, Optional[int]]]:
    """Linear factors of t paired with the junction level after each

    The last factor carries None.
    """
    found = leaves(t)
    junctions = list(encode(t).bottom)
    factors = [lift_to(Tree.linear(h), t.dim) for _, h in found]
    return [(f, junctions[i] if i < len(junctions) else None) for i, f in enumerate(factors)]


def _compose(outer: SectorMap, inner: SectorMap) -> SectorMap:
    return {k: outer[v] for k, v in inner.items()}


def recompose_with_maps(factors: Sequence[Tree], junctions: Sequence[int]) -> Tuple[Tree, List[SectorMap]]:
    """Fold factors with star, splitting first at the lowest junction level"""
    if len(junctions) != len(factors) - 1:
        raise MalformedMatrix(f"{len(factors)} factors need {len(factors) - 1} junctions")
    if not junctions:
        only = factors[0]
        return only, [{s: s for s in sectors(only)}]
    n = factors[0].dim
    low = min(junctions)
    cuts = [i for i, j in enumerate(junctions) if j == low]
    bounds = [0] + [c + 1 for c in cuts] + [len(factors)]
    pieces = []
    for a, b in zip(bounds, bounds[1:]):
        pieces.append(recompose_with_maps(factors[a:b], junctions[a:b - 1]))

    acc, acc_maps = pieces[0]
    for tree, maps in pieces[1:]:
        acc, left, right = star_with_maps(acc, tree, n, low)
        acc_maps = [_compose(left, m) for m in acc_maps] + [_compose(right, m) for m in maps]
    return acc, acc_maps


def recompose(factors: Sequence[Tree], junctions: Sequence[int]) -> Tree:
    return recompose_with_maps(factors, junctions)[0]


def substitute_trees_with_maps(t: Tree, inner: Sequence[Tree]) -> Tuple[Tree, List[SectorMap]]:
    """Graft inner[i] into the i-th leaf of t

    inner[i] must have the dimension of the leaf it replaces; it is degenerated
    up to t's dimension before gluing.
    """
    found = leaves(t)
    if len(inner) != len(found):
        raise DimensionMismatch(f"{len(found)} leaves but {len(inner)} trees to substitute")
    for (_, h), s in zip(found, inner):
        if s.dim != h:
            raise DimensionMismatch(f"a {s.dim}-tree cannot fill a leaf of height {h}")
    lifted = [lift_to(s, t.dim) for s in inner]
    return recompose_with_maps(lifted, encode(t).bottom)


def substitute_trees(t: Tree, inner: Sequence[Tree]) -> Tree:
    return substitute_trees_with_maps(t, inner)[0]


@lru_cache(maxsize=None)
def pasting_scheme(t: Tree) -> GlobularSet:
    """The globular set of sectors of t

    A sector of node v, the j-th child of w, has source (w, j) and target (w, j + 1).
    """
    rows = []
    for s in sectors(t):
        row = {"id": s.id, "dim": s.dim}
        if s.dim > 0:
            parent, j = s.path[:-1], s.path[-1]
            row["src"] = Sector(parent, j).id
            row["tgt"] = Sector(parent, j + 1).id
        rows.append(row)
    return validate_globular_set({"max_dim": t.dim, "cells": rows})


def _shapes(height: int, budget: int) -> Iterator[Tuple[Shape, int]]:
    """Subtrees of at most the given height with at most budget leaves"""
    if budget >= 1:
        yield (), 1
    if height == 0:
        return

    def rows(remaining: int) -> Iterator[Tuple[Tuple[Shape, ...], int]]:
        for child, used in _shapes(height - 1, remaining):
            yield (child,), used
            for rest, more in rows(remaining - used):
                yield (child,) + rest, used + more

    yield from rows(budget)


def enumerate_trees(dim: int, max_leaves: int) -> List[Tree]:
    """All dim-trees with at most max_leaves leaves, sorted by matrix"""
    found = {Tree.root(dim)}
    for shape, _ in _shapes(dim, max_leaves):
        if shape:
            found.add(Tree(dim, shape))
    return sorted(found, key=lambda t: encode(t).key())
