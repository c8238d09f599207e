"""Labelled pasting diagrams: the free strict omega-category monad T

A diagram stores a label for every sector of its tree, shells included, in
the order of ``trees.sectors``.
"""
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Any, Callable, Dict, Generic, Hashable, Iterator, List, Mapping, Optional, Sequence, Tuple, TypeVar

from .errors import BadLevel, BoundaryMismatch, DimensionMismatch
from .globular import GlobularStructure, Side
from .trees import Sector, Tree, leaves, restrict, sectors, substitute_trees_with_maps

L = TypeVar("L", bound=Hashable)


@lru_cache(maxsize=None)
def _sector_index(t: Tree) -> Dict[Sector, int]:
    return {s: i for i, s in enumerate(sectors(t))}


@dataclass(frozen=True, eq=False)
class PastingDiagram(Generic[L]):
    shape: Tree
    labels: Tuple[L, ...]
    over: Optional[GlobularStructure] = field(default=None, repr=False)
    _hash: int = field(init=False, repr=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "_hash", hash((self.shape, self.labels)))

    def __hash__(self) -> int:
        return self._hash

    def __eq__(self, other: object) -> bool:
        if self is other:
            return True
        if not isinstance(other, PastingDiagram):
            return NotImplemented
        return self._hash == other._hash and self.shape == other.shape and self.labels == other.labels

    @property
    def dim(self) -> int:
        return self.shape.dim

    def label(self, sector: Sector) -> L:
        return self.labels[_sector_index(self.shape)[sector]]

    def items(self) -> Iterator[Tuple[Sector, L]]:
        return zip(sectors(self.shape), self.labels)

    def leaf_labels(self) -> List[L]:
        return [self.label(Sector(path, 0)) for path, _ in leaves(self.shape)]


def _agree(structure: Optional[GlobularStructure[L]], a: L, b: L) -> bool:
    """Equality, or the structure's own ``agree`` when it identifies more cells"""
    agree = getattr(structure, "agree", None)
    return a == b if agree is None else agree(a, b)


def fill(structure: GlobularStructure[L], shape: Tree, leaf_labels: Sequence[L]) -> PastingDiagram[L]:
    """Complete leaf labels to a full labelling of the scheme of shape

    A shared sector keeps the first boundary written to it; later boundaries
    must agree with it in the sense of ``_agree``.

    Raises:
        DimensionMismatch: a leaf label has the wrong dimension
        BoundaryMismatch: neighbouring labels disagree on a shared boundary
    """
    found = leaves(shape)
    if len(found) != len(leaf_labels):
        raise DimensionMismatch(f"{len(found)} leaves but {len(leaf_labels)} labels")
    table: Dict[Sector, L] = {}
    for (path, h), label in zip(found, leaf_labels):
        if structure.cell_dim(label) != h:
            raise DimensionMismatch(
                f"leaf at height {h} labelled by a {structure.cell_dim(label)}-cell {label!r}"
            )
        table[Sector(path, 0)] = label

    def settle(path: Tuple[int, ...], count: int) -> None:
        for i in range(count):
            settle(path + (i,), len(shape.node(path + (i,))))
        if count == 0:
            return
        for i in range(count):
            child = path + (i,)
            for gap in range(len(shape.node(child)) + 1):
                cell = table[Sector(child, gap)]
                for side, slot in ((structure.source, i), (structure.target, i + 1)):
                    bound = side(cell)
                    key = Sector(path, slot)
                    known = table.get(key)
                    if known is None:
                        table[key] = bound
                    elif not _agree(structure, known, bound):
                        raise BoundaryMismatch(
                            f"sector {key.id} is both {known!r} and {bound!r}",
                            {"sector": key.id},
                        )

    settle((), len(shape.shape))
    return PastingDiagram(shape, tuple(table[s] for s in sectors(shape)), structure)


def eta(structure: GlobularStructure[L], x: L) -> PastingDiagram[L]:
    """The one-cell diagram on x over the linear tree of its dimension"""
    return fill(structure, Tree.linear(structure.cell_dim(x)), [x])


def pd_boundary(P: PastingDiagram[L], k: int, side: Side) -> PastingDiagram[L]:
    if k < 0 or k > P.dim:
        raise BadLevel(f"no {k}-boundary of a {P.dim}-diagram")
    if k == P.dim:
        return P
    shape = restrict(P.shape, k)
    labels = []
    for s in sectors(shape):
        if s.dim < k:
            labels.append(P.label(s))
        else:
            last = len(P.shape.node(s.path)) if Side(side) is Side.TARGET else 0
            labels.append(P.label(Sector(s.path, last)))
    return PastingDiagram(shape, tuple(labels), P.over)


def substitute(Q: PastingDiagram[PastingDiagram[L]], structure: Optional[GlobularStructure[L]] = None) -> PastingDiagram[L]:
    """Graft the diagrams labelling the leaves of Q into one diagram

    Raises:
        BoundaryMismatch: two inner diagrams disagree on a shared shell
    """
    inner = Q.leaf_labels()
    shape, maps = substitute_trees_with_maps(Q.shape, [d.shape for d in inner])
    table: Dict[Sector, L] = {}
    over = structure if structure is not None else (inner[0].over if inner else None)
    for diagram, mapping in zip(inner, maps):
        for s, label in diagram.items():
            target = mapping[s]
            known = table.get(target)
            if known is None:
                table[target] = label
            elif not _agree(over, known, label):
                raise BoundaryMismatch(
                    f"grafted diagrams disagree at {target.id}: {known!r} vs {label!r}",
                    {"sector": target.id},
                )
    return PastingDiagram(shape, tuple(table[s] for s in sectors(shape)), over)


def map_labels(f: Callable[[L], Any] | Mapping[L, Any], P: PastingDiagram[L], over: Optional[GlobularStructure] = None) -> PastingDiagram:
    """T(f): relabel every sector, keeping the shape"""
    apply = f.__getitem__ if isinstance(f, Mapping) else f
    return PastingDiagram(P.shape, tuple(apply(x) for x in P.labels), over if over is not None else P.over)


@dataclass(frozen=True)
class FreeCategory:
    """T(X) viewed as a globular structure whose cells are diagrams over X"""

    base: GlobularStructure

    def cell_dim(self, P: PastingDiagram) -> int:
        return P.dim

    def source(self, P: PastingDiagram) -> PastingDiagram:
        if P.dim == 0:
            raise DimensionMismatch("a 0-diagram has no source")
        return pd_boundary(P, P.dim - 1, Side.SOURCE)

    def target(self, P: PastingDiagram) -> PastingDiagram:
        if P.dim == 0:
            raise DimensionMismatch("a 0-diagram has no target")
        return pd_boundary(P, P.dim - 1, Side.TARGET)

    def eta(self, x: Any) -> PastingDiagram:
        return eta(self.base, x)
