"""JSON documents and Graphviz renderings

Every exported object has a pydantic document model; ``*_to_doc`` builds the
document and ``*_from_doc`` rebuilds an equal object from it. Terms travel in
the text syntax of omega_coend.syntax.
"""
import logging
from dataclasses import asdict
from typing import Dict, List, Optional, Tuple

import graphviz
from pydantic import BaseModel, Field

from .coend import CoendCell, CoendOperad
from .collection import CollectionCell, PointedCollection
from .config import LoopMode
from .contraction import PairClass
from .errors import DimensionMismatch
from .globular import GlobularSet, validate_globular_set
from .operads import Bounds, OperadMorphism, OperadPresentation, Property
from .syntax import format_term, parse_term
from .trees import Tree, TreeMatrix, decode, encode, pasting_scheme, truncate

logger = logging.getLogger(__name__)


def _dot_id(text: str) -> str:
    return text.replace(":", "_").replace(".", "_").replace("#", "_")


class TreeDoc(BaseModel):
    dim: int
    top: List[int]
    bottom: List[int]


class GCellDoc(BaseModel):
    id: str
    dim: int
    src: Optional[str] = None
    tgt: Optional[str] = None


class GlobularSetDoc(BaseModel):
    max_dim: int
    cells: List[GCellDoc]


class CellDoc(BaseModel):
    name: str
    dim: int
    src: Optional[str] = None
    tgt: Optional[str] = None
    arity: TreeDoc
    arity_colour: str
    colour: str


class UnitDoc(BaseModel):
    colour: str
    dim: int
    name: str


class CollectionDoc(BaseModel):
    label: str = ""
    colours: List[str]
    max_dim: int
    cells: List[CellDoc]
    units: List[UnitDoc]


class BoundsDoc(BaseModel):
    max_dim: int
    max_width: int
    max_size: int
    max_cells: int


class PresentationDoc(BaseModel):
    """A presentation; ``cells`` is informative and rebuilt on import"""

    label: str
    base: CollectionDoc
    property: Property
    bounds: BoundsDoc
    loop_mode: LoopMode
    scopes: List[List[str]]
    cells: Optional[List[List[str]]] = None


class MorphismDoc(BaseModel):
    colour_map: Dict[str, str]
    images: Dict[str, str]


class CoendCellDoc(BaseModel):
    """maps: the top map, then source and target maps from level n-1 down to 0"""

    n: int
    tree: TreeDoc
    label: str = ""
    maps: List[MorphismDoc] = Field(default_factory=list)


# trees and globular sets


def tree_to_doc(t: Tree) -> TreeDoc:
    m = encode(t)
    return TreeDoc(dim=m.dim, top=list(m.top), bottom=list(m.bottom))


def tree_from_doc(doc: TreeDoc) -> Tree:
    return decode(TreeMatrix(doc.dim, tuple(doc.top), tuple(doc.bottom)))


def globular_to_doc(X: GlobularSet) -> GlobularSetDoc:
    return GlobularSetDoc.model_validate(X.to_raw())


def globular_from_doc(doc: GlobularSetDoc) -> GlobularSet:
    return validate_globular_set(doc.model_dump(exclude_none=True))


# collections and presentations


def collection_to_doc(C: PointedCollection) -> CollectionDoc:
    cells = [
        CellDoc(
            name=c.name,
            dim=c.dim,
            src=c.src,
            tgt=c.tgt,
            arity=tree_to_doc(c.arity),
            arity_colour=c.arity_colour,
            colour=c.colour,
        )
        for c in C.cells.values()
    ]
    units = [UnitDoc(colour=g, dim=m, name=name) for (g, m), name in C.units.items()]
    return CollectionDoc(label=C.label, colours=list(C.colours), max_dim=C.max_dim, cells=cells, units=units)


def collection_from_doc(doc: CollectionDoc) -> PointedCollection:
    C = PointedCollection(tuple(doc.colours), doc.max_dim, label=doc.label)
    for c in doc.cells:
        C.add(CollectionCell(c.name, c.dim, c.src, c.tgt, tree_from_doc(c.arity), c.arity_colour, c.colour))
    for u in doc.units:
        C.set_unit(u.colour, u.dim, u.name)
    return C.validate()


def presentation_to_doc(P: OperadPresentation, include_cells: bool = False) -> PresentationDoc:
    cells = None
    if include_cells:
        cells = [[format_term(P.algebra, t) for t in layer] for layer in P.cells]
    return PresentationDoc(
        label=P.label,
        base=collection_to_doc(P.base),
        property=P.property,
        bounds=BoundsDoc(**asdict(P.bounds)),
        loop_mode=P.loop_mode,
        scopes=[sorted(s) for s in P.scopes],
        cells=cells,
    )


def presentation_from_doc(doc: PresentationDoc) -> OperadPresentation:
    return OperadPresentation(
        collection_from_doc(doc.base),
        doc.property,
        Bounds(**doc.bounds.model_dump()),
        [frozenset(s) for s in doc.scopes],
        doc.loop_mode,
        doc.label,
    )


# Coend cells


def morphism_to_doc(f: OperadMorphism) -> MorphismDoc:
    alg = f.target.algebra
    return MorphismDoc(
        colour_map=dict(sorted(f.colour_map.items())),
        images={name: format_term(alg, t) for name, t in f.images.items()},
    )


def _morphism_from_doc(coend: CoendOperad, n: int, t: Tree, doc: MorphismDoc) -> OperadMorphism:
    alg = coend.tree_operad(t).presentation.algebra
    images = {name: parse_term(text, alg) for name, text in doc.images.items()}
    return coend.morphism(n, t, images, dict(doc.colour_map))


def coend_cell_to_doc(c: CoendCell) -> CoendCellDoc:
    maps = [morphism_to_doc(c.top)]
    for lo, hi in c.levels:
        maps.extend([morphism_to_doc(lo), morphism_to_doc(hi)])
    return CoendCellDoc(n=c.n, tree=tree_to_doc(c.tree), label=c.label, maps=maps)


def coend_cell_from_doc(doc: CoendCellDoc, coend: CoendOperad) -> CoendCell:
    """Rebuild a cell; the tree operads come from ``coend``

    Raises:
        DimensionMismatch: the map count does not fit the level
        ParseError, MissingReference: an image does not parse over its target
    """
    if len(doc.maps) != 2 * doc.n + 1:
        raise DimensionMismatch(f"a level-{doc.n} cell needs {2 * doc.n + 1} maps, got {len(doc.maps)}")
    t = tree_from_doc(doc.tree)
    top = _morphism_from_doc(coend, doc.n, t, doc.maps[0])
    levels: List[Tuple[OperadMorphism, OperadMorphism]] = []
    for i in range(doc.n):
        m = doc.n - 1 - i
        tm = truncate(t, doc.n - m)
        levels.append(
            (
                _morphism_from_doc(coend, m, tm, doc.maps[1 + 2 * i]),
                _morphism_from_doc(coend, m, tm, doc.maps[2 + 2 * i]),
            )
        )
    return CoendCell(doc.n, t, top, levels, doc.label)


# DOT


def scheme_to_dot(t: Tree) -> graphviz.Digraph:
    """Pasting scheme of t: one node per sector, edges to its source and from its target"""
    X = pasting_scheme(t)
    dot = graphviz.Digraph(name="scheme", comment=str(t))
    for dim in range(X.max_dim + 1):
        with dot.subgraph(name=f"dim{dim}") as sub:
            sub.attr(rank="same")
            for cell in X.cells_of_dim(dim):
                sub.node(_dot_id(cell.id), label=f"{cell.id}\\n{dim}")
    for cell in X.cells.values():
        if cell.dim > 0:
            dot.edge(_dot_id(cell.src), _dot_id(cell.id), label="s")
            dot.edge(_dot_id(cell.id), _dot_id(cell.tgt), label="t")
    return dot


def collection_to_dot(C: PointedCollection) -> graphviz.Digraph:
    """Generators of C with their boundary edges, units drawn dashed"""
    dot = graphviz.Digraph(name=C.label or "collection")
    for c in C.cells.values():
        style = "dashed" if C.unit_key(c.name) is not None else "solid"
        dot.node(_dot_id(c.name), label=f"{c.name}\\n{encode(c.arity)}\\n{c.arity_colour}->{c.colour}", style=style)
    for c in C.cells.values():
        if c.dim > 0:
            dot.edge(_dot_id(c.src), _dot_id(c.name), label="s")
            dot.edge(_dot_id(c.name), _dot_id(c.tgt), label="t")
    logger.debug("rendered %d generators of %s", len(C.cells), C.label)
    return dot


# pair listings


class PairDoc(BaseModel):
    x: str
    y: str
    dim: int
    root: bool
    loop: bool
    eligible: bool


def pairs_to_doc(P: OperadPresentation, pairs: List[PairClass]) -> List[PairDoc]:
    alg = P.algebra
    return [
        PairDoc(
            x=format_term(alg, p.x),
            y=format_term(alg, p.y),
            dim=p.dim,
            root=p.is_root_pair,
            loop=p.has_loop,
            eligible=p.eligible,
        )
        for p in pairs
    ]
