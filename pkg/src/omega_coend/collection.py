"""Coloured collections, pointings and the coglobular complex C^0 ... C^n

Generator names follow the text grammar: ``u{m}``/``v{m}`` for units of
colours 1 and 2, ``mu(m,p)``/``nu(m,p)`` for composition symbols,
``F{m}``/``H{m}`` for functor symbols of C^1 and C^2, ``tau`` for the
principal cell of C^2, ``alpha0(m)``/``beta0(m)`` and ``alpha(p)``/``beta(p)``
for the functor and transformation symbols of C^n (n >= 3), and ``xi{n}`` for
its principal cell.
"""
import logging
from dataclasses import dataclass, field
from itertools import product
from typing import Dict, Iterable, List, Optional, Tuple

from .congruence import UnionFind
from .errors import BoundaryMismatch, DimensionMismatch, GluingMismatch, MissingReference, ValidationError
from .globular import Side
from .pasting import PastingDiagram, fill, pd_boundary
from .trees import Tree, leaves, star, substitute_trees, truncate

logger = logging.getLogger(__name__)

ColourSet = Tuple[str, ...]


@dataclass(frozen=True)
class CollectionCell:
    name: str
    dim: int
    src: Optional[str]
    tgt: Optional[str]
    arity: Tree
    arity_colour: str
    colour: str


@dataclass
class PointedCollection:
    """A collection over a constant colour set, with unit cells

    Cells are kept in insertion order; ``units`` maps (colour, dim) to a cell name.
    """

    colours: ColourSet
    max_dim: int
    cells: Dict[str, CollectionCell] = field(default_factory=dict)
    units: Dict[Tuple[str, int], str] = field(default_factory=dict)
    label: str = ""

    def __post_init__(self) -> None:
        if not self.colours:
            raise ValidationError("a collection needs at least one colour")
        self._unit_names = {name: key for key, name in self.units.items()}

    def add(self, cell: CollectionCell) -> None:
        if cell.dim > self.max_dim:
            return
        if cell.name in self.cells:
            raise ValidationError(f"duplicate cell {cell.name}")
        self.cells[cell.name] = cell

    def set_unit(self, colour: str, dim: int, name: str) -> None:
        self.units[(colour, dim)] = name
        self._unit_names[name] = (colour, dim)

    def cell(self, name: str) -> CollectionCell:
        try:
            return self.cells[name]
        except KeyError as exc:
            raise MissingReference(f"no generator named {name!r}") from exc

    def cells_of_dim(self, dim: int) -> List[CollectionCell]:
        return [c for c in self.cells.values() if c.dim == dim]

    def unit(self, colour: str, dim: int) -> str:
        return self.units[(colour, dim)]

    def unit_key(self, name: str) -> Optional[Tuple[str, int]]:
        """(colour, dim) when name is a unit cell, else None"""
        return self._unit_names.get(name)

    def cell_dim(self, name: str) -> int:
        return self.cell(name).dim

    def source(self, name: str) -> str:
        cell = self.cell(name)
        if cell.src is None:
            raise DimensionMismatch(f"0-cell {name} has no source")
        return cell.src

    def target(self, name: str) -> str:
        cell = self.cell(name)
        if cell.tgt is None:
            raise DimensionMismatch(f"0-cell {name} has no target")
        return cell.tgt

    def validate(self) -> "PointedCollection":
        """Check dimensions, d-globularity and the pointing

        Raises:
            MissingReference, DimensionMismatch, BoundaryMismatch
        """
        for cell in self.cells.values():
            if cell.colour not in self.colours or cell.arity_colour not in self.colours:
                raise MissingReference(f"{cell.name} uses a colour outside {self.colours}")
            if cell.arity.dim != cell.dim:
                raise DimensionMismatch(f"{cell.name} has a {cell.arity.dim}-tree as arity")
            if cell.dim == 0:
                continue
            for ref in (cell.src, cell.tgt):
                other = self.cell(ref)
                if other.dim != cell.dim - 1:
                    raise DimensionMismatch(f"{cell.name} has boundary {ref} of dim {other.dim}")
                if (
                    other.arity != truncate(cell.arity, 1)
                    or other.arity_colour != cell.arity_colour
                    or other.colour != cell.colour
                ):
                    raise BoundaryMismatch(f"arity of {ref} is not the boundary of the arity of {cell.name}")
            if cell.dim >= 2:
                src, tgt = self.cell(cell.src), self.cell(cell.tgt)
                if src.src != tgt.src or src.tgt != tgt.tgt:
                    raise BoundaryMismatch(f"{cell.name} violates the globular identities")
        for (colour, dim), name in self.units.items():
            cell = self.cell(name)
            if cell.arity != Tree.linear(dim) or cell.colour != colour or cell.arity_colour != colour:
                raise ValidationError(f"unit {name} does not have linear arity of colour {colour}")
            if dim > 0 and (cell.src != self.units.get((colour, dim - 1)) or cell.tgt != cell.src):
                raise ValidationError(f"unit {name} does not sit on the unit below it")
        return self


@dataclass
class CollectionMorphism:
    source: PointedCollection
    target: PointedCollection
    colour_map: Dict[str, str]
    cell_map: Dict[str, str]

    def __call__(self, name: str) -> str:
        try:
            return self.cell_map[name]
        except KeyError as exc:
            raise MissingReference(f"morphism has no image for {name!r}") from exc

    def violations(self) -> List[str]:
        found = []
        for name, cell in self.source.cells.items():
            if name not in self.cell_map:
                found.append(f"{name} has no image")
                continue
            image = self.target.cell(self.cell_map[name])
            if image.dim != cell.dim or image.arity != cell.arity:
                found.append(f"{name} -> {image.name} changes dimension or arity tree")
            if image.colour != self.colour_map[cell.colour] or image.arity_colour != self.colour_map[cell.arity_colour]:
                found.append(f"{name} -> {image.name} does not follow the colour map")
            if cell.dim > 0 and (
                image.src != self.cell_map.get(cell.src) or image.tgt != self.cell_map.get(cell.tgt)
            ):
                found.append(f"{name} -> {image.name} does not preserve source and target")
        for (colour, dim), name in self.source.units.items():
            if self.cell_map.get(name) != self.target.units.get((self.colour_map[colour], dim)):
                found.append(f"unit {name} is not sent to a unit")
        return found


def compose(g: CollectionMorphism, f: CollectionMorphism) -> CollectionMorphism:
    """g after f"""
    return CollectionMorphism(
        source=f.source,
        target=g.target,
        colour_map={c: g.colour_map[d] for c, d in f.colour_map.items()},
        cell_map={a: g.cell_map[b] for a, b in f.cell_map.items() if b in g.cell_map},
    )


def identity(C: PointedCollection) -> CollectionMorphism:
    return CollectionMorphism(C, C, {c: c for c in C.colours}, {n: n for n in C.cells})


def _unit_name(colour: str, dim: int) -> str:
    if colour == "1":
        return f"u{dim}"
    if colour == "2":
        return f"v{dim}"
    return f"u{dim}@{colour}"


def unit_collection(colours: Iterable[str], max_dim: int) -> PointedCollection:
    """I(G): only the unit cells"""
    colours = tuple(colours)
    C = PointedCollection(colours, max_dim, label="unit")
    for g in colours:
        for m in range(max_dim + 1):
            name = _unit_name(g, m)
            below = _unit_name(g, m - 1) if m else None
            C.add(CollectionCell(name, m, below, below, Tree.linear(m), g, g))
            C.set_unit(g, m, name)
    return C.validate()


def _add_composition_system(C: PointedCollection, colour: str, unit: str, mu: str) -> None:
    for m in range(C.max_dim + 1):
        below = f"{unit}{m - 1}" if m else None
        C.add(CollectionCell(f"{unit}{m}", m, below, below, Tree.linear(m), colour, colour))
        C.set_unit(colour, m, f"{unit}{m}")
    for m in range(1, C.max_dim + 1):
        for p in range(m):
            bound = f"{unit}{m - 1}" if p == m - 1 else f"{mu}({m - 1},{p})"
            arity = star(Tree.linear(m), Tree.linear(m), m, p)
            C.add(CollectionCell(f"{mu}({m},{p})", m, bound, bound, arity, colour, colour))


def functor_name(family: str, m: int) -> str:
    """F{m}, H{m} for C^1 and C^2; alpha0(m), beta0(m) beyond"""
    return f"{family}({m})" if family.endswith("0") else f"{family}{m}"


def _add_functor(C: PointedCollection, family: str) -> None:
    for m in range(C.max_dim + 1):
        below = functor_name(family, m - 1) if m else None
        C.add(CollectionCell(functor_name(family, m), m, below, below, Tree.linear(m), "1", "2"))


def _add_transformation(C: PointedCollection, name: str, dim: int, src: str, tgt: str) -> None:
    C.add(CollectionCell(name, dim, src, tgt, Tree.root(dim), "1", "2"))


def build_complex(n: int, max_dim: int) -> PointedCollection:
    """C^n truncated at max_dim"""
    if n < 0:
        raise DimensionMismatch(f"no complex C^{n}")
    if n == 0:
        C = PointedCollection(("1",), max_dim, label="C0")
        _add_composition_system(C, "1", "u", "mu")
        return C.validate()
    C = PointedCollection(("1", "2"), max_dim, label=f"C{n}")
    _add_composition_system(C, "1", "u", "mu")
    _add_composition_system(C, "2", "v", "nu")
    if n == 1:
        _add_functor(C, "F")
    elif n == 2:
        _add_functor(C, "F")
        _add_functor(C, "H")
        _add_transformation(C, "tau", 1, "F0", "H0")
    else:
        _add_functor(C, "alpha0")
        _add_functor(C, "beta0")
        for p in range(1, n - 1):
            src = "alpha0(0)" if p == 1 else f"alpha({p - 1})"
            tgt = "beta0(0)" if p == 1 else f"beta({p - 1})"
            _add_transformation(C, f"alpha({p})", p, src, tgt)
            _add_transformation(C, f"beta({p})", p, src, tgt)
        _add_transformation(C, f"xi{n}", n - 1, f"alpha({n - 2})", f"beta({n - 2})")
    logger.debug("built C%d at max_dim %d with %d cells", n, max_dim, len(C.cells))
    return C.validate()


def principal_cell(n: int) -> str:
    """The cell of C^n hit by neither coface out of C^(n-1)"""
    if n == 1:
        return "F0"
    if n == 2:
        return "tau"
    if n >= 3:
        return f"xi{n}"
    raise DimensionMismatch("C^0 has no principal cell")


def coface(n: int, side: Side, max_dim: int) -> CollectionMorphism:
    """delta (source side) or kappa (target side) from C^n to C^(n+1)"""
    side = Side(side)
    source, target = build_complex(n, max_dim), build_complex(n + 1, max_dim)
    colour_map = {c: c for c in source.colours}
    cell_map = {name: name for name in source.cells}
    if n == 0:
        if side is Side.TARGET:
            colour_map = {"1": "2"}
            cell_map = {
                name: name.replace("mu", "nu") if name.startswith("mu") else "v" + name[1:]
                for name in source.cells
            }
    elif n == 1:
        if side is Side.TARGET:
            cell_map.update({f"F{m}": f"H{m}" for m in range(max_dim + 1)})
    elif n == 2:
        cell_map.update({f"F{m}": f"alpha0({m})" for m in range(max_dim + 1)})
        cell_map.update({f"H{m}": f"beta0({m})" for m in range(max_dim + 1)})
        cell_map["tau"] = "alpha(1)" if side is Side.SOURCE else "beta(1)"
    else:
        letter = "alpha" if side is Side.SOURCE else "beta"
        cell_map[f"xi{n}"] = f"{letter}({n - 1})"
    cell_map = {k: v for k, v in cell_map.items() if k in source.cells}
    return CollectionMorphism(source, target, colour_map, cell_map)


def coface_composite(j: int, i: int, side: Side, max_dim: int) -> CollectionMorphism:
    """The iterated coface C^j -> C^i; side picks the first step, later steps use delta"""
    if j > i:
        raise DimensionMismatch(f"no coface composite from C^{j} to C^{i}")
    if j == i:
        return identity(build_complex(j, max_dim))
    result = coface(j, side, max_dim)
    for k in range(j + 1, i):
        result = compose(coface(k, Side.SOURCE, max_dim), result)
    return result


def tensor_collections(C: PointedCollection, D: PointedCollection) -> PointedCollection:
    """T(C) x_{T(G)} D: pairs of a diagram of C-cells and a D-cell of matching arity"""
    if C.colours != D.colours:
        raise ValidationError("tensor needs collections over the same colours")
    max_dim = min(C.max_dim, D.max_dim)
    result = PointedCollection(C.colours, max_dim, label=f"{C.label}*{D.label}")
    names: Dict[Tuple[PastingDiagram, str], str] = {}

    def name_of(P: PastingDiagram, b: str) -> str:
        return f"{b}<{','.join(P.leaf_labels())}>"

    for dim in range(max_dim + 1):
        for b in D.cells_of_dim(dim):
            slots = leaves(b.arity)
            choices = [
                [c.name for c in C.cells_of_dim(h) if c.colour == b.arity_colour]
                for _, h in slots
            ]
            for labels in product(*choices):
                try:
                    P = fill(C, b.arity, labels)
                except BoundaryMismatch:
                    continue
                arity = substitute_trees(b.arity, [C.cell(x).arity for x in labels])
                src = tgt = None
                if dim > 0:
                    src = names.get((pd_boundary(P, dim - 1, Side.SOURCE), b.src))
                    tgt = names.get((pd_boundary(P, dim - 1, Side.TARGET), b.tgt))
                    if src is None or tgt is None:
                        continue
                name = name_of(P, b.name)
                names[(P, b.name)] = name
                result.add(CollectionCell(name, dim, src, tgt, arity, C.cell(labels[0]).arity_colour, b.colour))

    for (colour, dim), u in D.units.items():
        if dim <= max_dim:
            result.set_unit(colour, dim, f"{u}<{C.unit(colour, dim)}>")
    return result.validate()


def _fresh(name: str, taken: set) -> str:
    if name not in taken:
        return name
    stem = name.split("#")[0]
    k = 2
    while f"{stem}#{k}" in taken:
        k += 1
    return f"{stem}#{k}"


def _fresh_colour(name: str, taken: set) -> str:
    if name not in taken:
        return name
    k = 1
    while str(k) in taken:
        k += 1
    return str(k)


def pushout_collections(
    f: CollectionMorphism, g: CollectionMorphism
) -> Tuple[PointedCollection, CollectionMorphism, CollectionMorphism]:
    """Glue B = f.target and B' = g.target along the images of A

    B keeps its names; B' cells identified with B cells take the B names,
    the rest keep theirs when free and otherwise get ``#k`` suffixes.

    Raises:
        GluingMismatch: identified cells disagree on dimension, arity or boundary
    """
    A, B, B2 = f.source, f.target, g.target
    if g.source is not A and g.source.cells.keys() != A.cells.keys():
        raise GluingMismatch("pushout legs start from different collections")

    colours = UnionFind([("L", c) for c in B.colours] + [("R", c) for c in B2.colours])
    for c in A.colours:
        colours.union(("L", f.colour_map[c]), ("R", g.colour_map[c]))
    cells = UnionFind([("L", n) for n in B.cells] + [("R", n) for n in B2.cells])
    for a in A.cells:
        if a in f.cell_map and a in g.cell_map:
            cells.union(("L", f.cell_map[a]), ("R", g.cell_map[a]))

    colour_name: Dict[Tuple[str, str], str] = {}
    taken: set = set(B.colours)
    for group in colours.classes():
        left = [c for side, c in group if side == "L"]
        if left:
            name = left[0]
        else:
            name = _fresh_colour(group[0][1], taken)
            taken.add(name)
        for member in group:
            colour_name[member] = name

    cell_name: Dict[Tuple[str, str], str] = {}
    taken = set(B.cells)
    for group in cells.classes():
        left = [n for side, n in group if side == "L"]
        if left:
            name = left[0]
        else:
            name = _fresh(group[0][1], taken)
            taken.add(name)
        for member in group:
            cell_name[member] = name

    max_dim = min(B.max_dim, B2.max_dim)
    ordered_colours = tuple(dict.fromkeys(colour_name[("L", c)] for c in B.colours)) + tuple(
        dict.fromkeys(n for (side, _), n in colour_name.items() if side == "R" and n not in B.colours)
    )
    P = PointedCollection(ordered_colours, max_dim, label=f"{B.label}+{B2.label}")
    for side, source in (("L", B), ("R", B2)):
        for cell in source.cells.values():
            name = cell_name[(side, cell.name)]
            image = CollectionCell(
                name,
                cell.dim,
                cell_name[(side, cell.src)] if cell.src else None,
                cell_name[(side, cell.tgt)] if cell.tgt else None,
                cell.arity,
                colour_name[(side, cell.arity_colour)],
                colour_name[(side, cell.colour)],
            )
            known = P.cells.get(name)
            if known is None:
                P.add(image)
            elif known != image:
                raise GluingMismatch(f"{cell.name} and {known.name} are identified but differ")
        for (colour, dim), unit in source.units.items():
            if (colour_name[(side, colour)], dim) not in P.units:
                P.set_unit(colour_name[(side, colour)], dim, cell_name[(side, unit)])

    def leg(side: str, source: PointedCollection) -> CollectionMorphism:
        return CollectionMorphism(
            source,
            P,
            {c: colour_name[(side, c)] for c in source.colours},
            {n: cell_name[(side, n)] for n in source.cells},
        )

    logger.info("pushout %s has %d colours and %d cells", P.label, len(P.colours), len(P.cells))
    return P.validate(), leg("L", B), leg("R", B2)
