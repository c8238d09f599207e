"""Finite, dimension-truncated globular sets"""
import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, Generic, Hashable, List, Mapping, Optional, Protocol, Tuple, TypeVar

from .errors import DimensionMismatch, GlobularIdentityViolation, MissingReference

logger = logging.getLogger(__name__)

C = TypeVar("C", bound=Hashable)


class Side(str, Enum):
    SOURCE = "source"
    TARGET = "target"


class GlobularStructure(Protocol[C]):
    """Anything whose cells have a dimension, a source and a target

    Globular sets, collections and operad presentations all implement this,
    so the boundary helpers below work on each of them.
    """

    def cell_dim(self, cell: C) -> int: ...

    def source(self, cell: C) -> C: ...

    def target(self, cell: C) -> C: ...


@dataclass(frozen=True, order=True)
class GCell:
    id: str
    dim: int
    src: Optional[str] = None
    tgt: Optional[str] = None


@dataclass(frozen=True)
class GlobularSet:
    """A validated finite globular set

    Build instances with validate_globular_set; the constructor does no checks.
    """

    max_dim: int
    cells: Mapping[str, GCell]
    by_dim: Tuple[Tuple[str, ...], ...] = field(default=(), compare=False)

    def __contains__(self, cell_id: object) -> bool:
        return cell_id in self.cells

    def cell(self, cell_id: str) -> GCell:
        try:
            return self.cells[cell_id]
        except KeyError as exc:
            raise MissingReference(f"no cell named {cell_id!r}") from exc

    def cells_of_dim(self, dim: int) -> List[GCell]:
        if dim >= len(self.by_dim):
            return []
        return [self.cells[c] for c in self.by_dim[dim]]

    def counts(self) -> List[int]:
        """Number of cells in each dimension 0..max_dim"""
        return [len(self.cells_of_dim(d)) for d in range(self.max_dim + 1)]

    def cell_dim(self, cell: GCell) -> int:
        return cell.dim

    def source(self, cell: GCell) -> GCell:
        if cell.dim == 0:
            raise DimensionMismatch(f"0-cell {cell.id} has no source")
        return self.cell(cell.src)

    def target(self, cell: GCell) -> GCell:
        if cell.dim == 0:
            raise DimensionMismatch(f"0-cell {cell.id} has no target")
        return self.cell(cell.tgt)

    def to_raw(self) -> Dict[str, Any]:
        """JSON-ready cell table, the inverse of validate_globular_set"""
        rows = []
        for dim in range(len(self.by_dim)):
            for cell in self.cells_of_dim(dim):
                row: Dict[str, Any] = {"id": cell.id, "dim": cell.dim}
                if cell.dim > 0:
                    row["src"] = cell.src
                    row["tgt"] = cell.tgt
                rows.append(row)
        return {"max_dim": self.max_dim, "cells": rows}


def validate_globular_set(raw: Mapping[str, Any]) -> GlobularSet:
    """Validate a raw cell table into a GlobularSet

    Args:
        raw: ``{"max_dim": n, "cells": [{"id", "dim", "src", "tgt"}, ...]}``

    Returns:
        The validated GlobularSet

    Raises:
        MissingReference: a src/tgt id is not in the table
        DimensionMismatch: a cell exceeds max_dim or its boundary has the wrong dimension
        GlobularIdentityViolation: ss != st or tt != ts for some cell
    """
    max_dim = int(raw["max_dim"])
    cells: Dict[str, GCell] = {}
    for row in raw["cells"]:
        cell = GCell(str(row["id"]), int(row["dim"]), row.get("src"), row.get("tgt"))
        if cell.id in cells:
            raise DimensionMismatch(f"cell {cell.id} listed twice")
        if cell.dim < 0 or cell.dim > max_dim:
            raise DimensionMismatch(f"cell {cell.id} has dim {cell.dim} outside 0..{max_dim}")
        cells[cell.id] = cell

    for cell in cells.values():
        if cell.dim == 0:
            if cell.src is not None or cell.tgt is not None:
                raise DimensionMismatch(f"0-cell {cell.id} must not have a source or target")
            continue
        for ref in (cell.src, cell.tgt):
            if ref is None or ref not in cells:
                raise MissingReference(f"cell {cell.id} references missing cell {ref!r}")
            if cells[ref].dim != cell.dim - 1:
                raise DimensionMismatch(
                    f"cell {cell.id} of dim {cell.dim} has boundary {ref} of dim {cells[ref].dim}"
                )

    for cell in cells.values():
        if cell.dim < 2:
            continue
        src, tgt = cells[cell.src], cells[cell.tgt]
        if src.src != tgt.src or src.tgt != tgt.tgt:
            raise GlobularIdentityViolation(
                f"cell {cell.id} violates ss = st or tt = ts",
                {"cell": cell.id, "src": src.id, "tgt": tgt.id},
            )

    by_dim = tuple(
        tuple(c.id for c in cells.values() if c.dim == d) for d in range(max_dim + 1)
    )
    return GlobularSet(max_dim=max_dim, cells=cells, by_dim=by_dim)


def iterated_boundary(X: GlobularStructure[C], x: C, k: int, side: Side) -> C:
    """s^{dim}_k(x) or t^{dim}_k(x); the identity when k = dim(x)"""
    dim = X.cell_dim(x)
    if k > dim or k < 0:
        raise DimensionMismatch(f"cannot take the {k}-boundary of a {dim}-cell")
    step = X.source if Side(side) is Side.SOURCE else X.target
    while dim > k:
        x = step(x)
        dim -= 1
    return x


def is_parallel(X: GlobularStructure[C], x: C, y: C) -> bool:
    dx, dy = X.cell_dim(x), X.cell_dim(y)
    if dx != dy or dx == 0:
        raise DimensionMismatch(f"parallelism needs two cells of equal positive dim, got {dx} and {dy}")
    return X.source(x) == X.source(y) and X.target(x) == X.target(y)


@dataclass
class ReflexiveStructure(Generic[C]):
    """Chosen identity cells 1^p_n(x) on a globular structure"""

    owner: GlobularStructure[C]
    lifts: Dict[Tuple[C, int], C] = field(default_factory=dict)

    def lift(self, x: C, n: int) -> C:
        p = self.owner.cell_dim(x)
        if n <= p:
            raise DimensionMismatch(f"cannot lift a {p}-cell to dim {n}")
        try:
            return self.lifts[(x, n)]
        except KeyError as exc:
            raise MissingReference(f"no identity on {x!r} at dim {n}") from exc

    def violations(self) -> List[str]:
        """Broken reflexivity laws, empty when the structure is sound"""
        found = []
        for (x, n), y in self.lifts.items():
            p = self.owner.cell_dim(x)
            if self.owner.cell_dim(y) != n:
                found.append(f"lift of {x!r} to {n} has dim {self.owner.cell_dim(y)}")
                continue
            below = x if n == p + 1 else self.lifts.get((x, n - 1))
            if below is None:
                found.append(f"lift of {x!r} to {n} has no lift to {n - 1} below it")
            elif self.owner.source(y) != below or self.owner.target(y) != below:
                found.append(f"lift of {x!r} to {n} is not an identity on {below!r}")
        return found
