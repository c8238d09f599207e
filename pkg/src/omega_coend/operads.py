"""Presented coloured omega-operads

An OperadPresentation is the free operad of some property over a pointed
collection, truncated by Bounds. Terms are built on demand through its
TermAlgebra; the stored cells (and, for the strict properties, the
congruence on them) are only computed when first asked for.
"""
import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, FrozenSet, Iterable, List, Optional, Set

from .collection import CollectionMorphism, PointedCollection, compose, pushout_collections
from .config import LoopMode, Settings
from .congruence import UnionFind
from .errors import (
    ContractionUnavailable,
    MissingImage,
    NotEligible,
    OutOfBounds,
    ValidationError,
)
from .globular import Side
from .models import CheckReport
from .pasting import fill
from .terms import Contraction, Reflex, Term, TermAlgebra, Unit

logger = logging.getLogger(__name__)


class Property(str, Enum):
    """Which free construction a presentation stands for"""

    ID = "id"
    ID_U = "idu"
    C = "c"
    S = "s"
    S_U = "su"

    @property
    def reflexive_units(self) -> bool:
        return self in (Property.ID_U, Property.C, Property.S_U)

    @property
    def contractible(self) -> bool:
        return self is Property.C

    @property
    def strict(self) -> bool:
        return self in (Property.S, Property.S_U)


@dataclass(frozen=True)
class Bounds:
    max_dim: int = 2
    max_width: int = 3
    max_size: int = 2
    max_cells: int = 20000

    @classmethod
    def from_settings(cls, settings: Settings) -> "Bounds":
        return cls(settings.max_dim, settings.max_width, settings.max_size, settings.max_cells)


class OperadPresentation:
    """A bounded free operad over a pointed collection

    Args:
        base: Generating collection
        property: Free construction to apply
        bounds: Truncation of the stored cells
        scopes: Generator sets inside which contractions and strictness apply;
            defaults to a single scope holding every generator
        loop_mode: Reading of the loop property for root pairs
    """

    def __init__(
        self,
        base: PointedCollection,
        property: Property,
        bounds: Optional[Bounds] = None,
        scopes: Optional[Iterable[FrozenSet[str]]] = None,
        loop_mode: LoopMode = LoopMode.FOUR_WAY,
        label: str = "",
    ) -> None:
        self.base = base
        self.property = Property(property)
        self.bounds = bounds or Bounds(max_dim=base.max_dim)
        if self.bounds.max_dim > base.max_dim:
            raise OutOfBounds(f"bounds reach dim {self.bounds.max_dim} but the base stops at {base.max_dim}")
        generators = frozenset(n for n in base.cells if base.unit_key(n) is None)
        self.scopes = tuple(frozenset(s) for s in scopes) if scopes else (generators,)
        self.loop_mode = LoopMode(loop_mode)
        self.label = label or f"B[{base.label}]_{self.property.value}"
        self.algebra = TermAlgebra(base)
        self.congruence: UnionFind[Term] = UnionFind()
        if self.property.strict:
            self.algebra.equivalence = self.same_class
        self._cells: Optional[List[List[Term]]] = None
        self._index: Set[Term] = set()

    def __repr__(self) -> str:
        return f"OperadPresentation({self.label!r})"

    # GlobularStructure on terms

    def cell_dim(self, t: Term) -> int:
        return self.algebra.cell_dim(t)

    def source(self, t: Term) -> Term:
        return self.algebra.source(t)

    def target(self, t: Term) -> Term:
        return self.algebra.target(t)

    def boundary(self, t: Term, side: Side) -> Term:
        return self.algebra.boundary(t, side)

    def generator(self, name: str) -> Term:
        return self.algebra.generator(name)

    # stored cells

    @property
    def cells(self) -> List[List[Term]]:
        if self._cells is None:
            from .contraction import saturate

            saturate(self)
        return self._cells

    def install(self, cells: List[List[Term]]) -> None:
        self._cells = cells
        self._index = {t for layer in cells for t in layer}

    def cells_of_dim(self, dim: int) -> List[Term]:
        cells = self.cells
        return cells[dim] if 0 <= dim < len(cells) else []

    def is_stored(self, t: Term) -> bool:
        self.cells
        return t in self._index

    def remove_cell(self, t: Term) -> None:
        """Drop a stored cell; audits then report whatever depended on it"""
        layer = self.cells_of_dim(self.cell_dim(t))
        if t in self._index:
            layer.remove(t)
            self._index.discard(t)

    def in_bounds(self, t: Term) -> bool:
        return (
            self.algebra.cell_dim(t) <= self.bounds.max_dim
            and self.algebra.width(t) <= self.bounds.max_width
            and self.algebra.size(t) <= self.bounds.max_size
        )

    def counts(self) -> List[int]:
        return [len(layer) for layer in self.cells]

    # congruence

    def class_of(self, t: Term) -> Term:
        if self.property.strict and t in self.congruence:
            return self.congruence.find(t)
        return t

    def same_class(self, a: Term, b: Term) -> bool:
        return a == b or self.class_of(a) == self.class_of(b)

    def parallel(self, x: Term, y: Term) -> bool:
        """Equal positive dimension and congruent boundaries"""
        if self.cell_dim(x) != self.cell_dim(y) or self.cell_dim(x) == 0:
            return False
        return self.same_class(self.source(x), self.source(y)) and self.same_class(
            self.target(x), self.target(y)
        )

    def scope_of(self, *terms: Term) -> Optional[int]:
        """Index of the first scope holding every generator of terms"""
        used: FrozenSet[str] = frozenset()
        for t in terms:
            used |= self.algebra.generators_of(t)
        for i, scope in enumerate(self.scopes):
            if used <= scope:
                return i
        return None


def free_presentation(
    base: PointedCollection, property: Property, bounds: Optional[Bounds] = None, **kwargs
) -> OperadPresentation:
    return OperadPresentation(base, property, bounds, **kwargs)


def equal_terms(P: OperadPresentation, a: Term, b: Term) -> bool:
    """Normal-form identity, or congruence when P is strict

    Raises:
        OutOfBounds: a term lies beyond P's bounds (strict presentations need both stored)
    """
    a, b = P.algebra.normalize(a), P.algebra.normalize(b)
    for t in (a, b):
        if P.cell_dim(t) > P.bounds.max_dim:
            raise OutOfBounds(f"a {P.cell_dim(t)}-cell exceeds max_dim {P.bounds.max_dim}")
    if a == b:
        return True
    if not P.property.strict:
        return False
    for t in (a, b):
        if not P.is_stored(t):
            raise OutOfBounds("term is not among the stored cells of the strict presentation")
    return P.congruence.same(a, b)


@dataclass
class OperadMorphism:
    """A morphism given by generator images

    Attributes:
        collection: The collection morphism inducing it, when there is one
    """

    source: OperadPresentation
    target: OperadPresentation
    colour_map: Dict[str, str]
    images: Dict[str, Term]
    collection: Optional[CollectionMorphism] = None
    label: str = ""
    _memo: Dict[Term, Term] = field(default_factory=dict, repr=False, compare=False)

    def __call__(self, t: Term) -> Term:
        return apply_morphism(self, t)


def morphism_from_collection(
    cm: CollectionMorphism, source: OperadPresentation, target: OperadPresentation, label: str = ""
) -> OperadMorphism:
    images = {
        name: target.generator(image)
        for name, image in cm.cell_map.items()
        if source.base.unit_key(name) is None
    }
    return OperadMorphism(source, target, dict(cm.colour_map), images, cm, label)


def identity_morphism(P: OperadPresentation) -> OperadMorphism:
    images = {n: P.generator(n) for n in P.base.cells if P.base.unit_key(n) is None}
    cm = CollectionMorphism(P.base, P.base, {c: c for c in P.base.colours}, {n: n for n in P.base.cells})
    return OperadMorphism(P, P, {c: c for c in P.base.colours}, images, cm, "id")


def compose_morphisms(g: OperadMorphism, f: OperadMorphism) -> OperadMorphism:
    """g after f"""
    collection = compose(g.collection, f.collection) if g.collection and f.collection else None
    return OperadMorphism(
        f.source,
        g.target,
        {c: g.colour_map[d] for c, d in f.colour_map.items()},
        {n: apply_morphism(g, t) for n, t in f.images.items()},
        collection,
        f"{g.label}.{f.label}",
    )


def apply_morphism(m: OperadMorphism, t: Term) -> Term:
    """Extend the generator images to t

    Raises:
        MissingImage: a generator or colour of t has no image
        ContractionUnavailable: a contraction of t has no counterpart in the target
    """
    known = m._memo.get(t)
    if known is not None:
        return known
    target = m.target.algebra
    if isinstance(t, Unit):
        if t.colour not in m.colour_map:
            raise MissingImage(f"colour {t.colour} has no image")
        result: Term = Unit(m.colour_map[t.colour], t.dim)
    elif isinstance(t, Reflex):
        result = target.reflex(apply_morphism(m, t.base), t.dim)
    elif isinstance(t, Contraction):
        x, y = apply_morphism(m, t.source), apply_morphism(m, t.target)
        from .contraction import find_contraction

        try:
            found = find_contraction(m.target, x, y)
        except NotEligible as exc:
            raise ContractionUnavailable(f"image pair of {t!r} is not eligible: {exc.message}") from exc
        if found is None:
            raise ContractionUnavailable(f"{m.target.label} has no contraction for the image of {t!r}")
        result = found
    else:
        if isinstance(t.head, str):
            if t.head not in m.images:
                raise MissingImage(f"generator {t.head} has no image", {"generator": t.head})
            head = m.images[t.head]
        else:
            head = apply_morphism(m, t.head)
        labels = [apply_morphism(m, x) for x in t.inner.leaf_labels()]
        result = target.gamma(head, fill(target, target.arity(head)[0], labels))
    m._memo[t] = result
    return result


def _agree(P: OperadPresentation, a: Term, b: Term) -> bool:
    if a == b:
        return True
    if P.property.strict and P.is_stored(a) and P.is_stored(b):
        return P.congruence.same(a, b)
    return False


def check_morphism(m: OperadMorphism, contractions: bool = False) -> CheckReport:
    """Generator-wise audit of arity, boundary and unit preservation

    Args:
        m: Morphism to audit
        contractions: Also map every stored contraction cell of the source

    Returns:
        CheckReport listing every violation found
    """
    report = CheckReport()
    source, target = m.source, m.target
    for name, cell in source.base.cells.items():
        if source.base.unit_key(name) is not None:
            continue
        report.checked += 1
        if name not in m.images:
            report.add("MissingImage", name, "no image")
            continue
        image = m.images[name]
        if target.cell_dim(image) != cell.dim:
            report.add("DimensionMismatch", name, f"image has dim {target.cell_dim(image)}")
            continue
        wanted = (cell.arity, m.colour_map.get(cell.arity_colour))
        if target.algebra.arity(image) != wanted or target.algebra.colour(image) != m.colour_map.get(cell.colour):
            report.add("ArityMismatch", name, "image arity or colour differs from the generator's")
            continue
        if cell.dim == 0:
            continue
        for side, ref in ((Side.SOURCE, cell.src), (Side.TARGET, cell.tgt)):
            try:
                expected = apply_morphism(m, source.generator(ref))
            except ValidationError as exc:
                report.add("BoundaryMismatch", name, exc.message)
                continue
            if not _agree(target, target.boundary(image, side), expected):
                report.add("BoundaryMismatch", name, f"{side.value} of the image is not the image of {ref}")
    for (colour, dim), unit in source.base.units.items():
        report.checked += 1
        mapped = m.colour_map.get(colour)
        if mapped is None or (mapped, dim) not in target.base.units:
            report.add("UnitMismatch", unit, f"colour {colour} has no unit at dim {dim} in the target")
    if contractions and source.property.contractible:
        for layer in source.cells:
            for t in layer:
                if not isinstance(t, Contraction):
                    continue
                report.checked += 1
                try:
                    apply_morphism(m, t)
                except ContractionUnavailable as exc:
                    report.add("ContractionUnavailable", repr(t), exc.message)
    return report


def pushout_operads(f: OperadMorphism, g: OperadMorphism, bounds: Optional[Bounds] = None):
    """Free presentation over the pushout of the bases

    Both legs must be induced by collection morphisms; the result carries one
    contraction scope per scope of each side.

    Returns:
        (pushout presentation, injection of f.target, injection of g.target)
    """
    if f.collection is None or g.collection is None:
        raise ValidationError("pushout legs must be induced by collection morphisms")
    if f.target.property is not g.target.property:
        raise ValidationError(
            f"cannot glue a {f.target.property.value} operad to a {g.target.property.value} operad"
        )
    base, in1, in2 = pushout_collections(f.collection, g.collection)
    scopes: List[FrozenSet[str]] = []
    for side, injection in ((f.target, in1), (g.target, in2)):
        for scope in side.scopes:
            scopes.append(frozenset(injection.cell_map[n] for n in scope if n in injection.cell_map))
    bounds = bounds or Bounds(
        max_dim=min(f.target.bounds.max_dim, g.target.bounds.max_dim),
        max_width=min(f.target.bounds.max_width, g.target.bounds.max_width),
        max_size=min(f.target.bounds.max_size, g.target.bounds.max_size),
        max_cells=min(f.target.bounds.max_cells, g.target.bounds.max_cells),
    )
    P = OperadPresentation(base, f.target.property, bounds, scopes, f.target.loop_mode)
    logger.info("operad pushout %s with %d scopes", P.label, len(scopes))
    return (
        P,
        morphism_from_collection(in1, f.target, P, "in1"),
        morphism_from_collection(in2, g.target, P, "in2"),
    )
