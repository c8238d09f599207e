"""Cells of the coendomorphism operad of the coglobular complex of operads

This module builds the operads B^t glued from the complex B^0, B^1, ... along
the factors of a tree t, the maps between them induced by cofaces, and the
cells of Coend(B): families of morphisms B^m -> B^(d^(n-m) t) that commute
with the cofaces. Composition cells (make_mu), the action of C^0 (cw_image),
contraction lifting and operadic composition of cells are built here.
"""
import logging
import re
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from .collection import build_complex, coface_composite, functor_name, principal_cell
from .config import LoopMode, Settings, Variant
from .contraction import find_contraction
from .errors import (
    BadLevel,
    ContractionUnavailable,
    DimensionMismatch,
    GluingMismatch,
    MissingImage,
    MissingReference,
    NotEligible,
    OmegaCoendError,
    TypingUnresolvable,
    ValidationError,
)
from .globular import Side
from .models import CheckReport
from .operads import (
    Bounds,
    OperadMorphism,
    OperadPresentation,
    Property,
    apply_morphism,
    compose_morphisms,
    free_presentation,
    identity_morphism,
    morphism_from_collection,
    pushout_operads,
)
from .terms import Term, TermAlgebra
from .trees import Sector, Tree, encode, leaves, lift_to, star, substitute_trees_with_maps, truncate

logger = logging.getLogger(__name__)

_TRANSFORMATION = re.compile(r"(alpha|beta)\((\d+)\)")

TreeKey = Tuple[Tuple[int, ...], Tuple[int, ...]]


def tree_key(t: Tree) -> TreeKey:
    """Leaf heights and junction levels; B^t depends on nothing else"""
    return tuple(h for _, h in leaves(t)), tuple(encode(t).bottom)


@dataclass
class TreeOperad:
    """B^t with the injections of its factors

    Attributes:
        heights: Leaf heights of t, one factor B^h per leaf
        junctions: Levels along which consecutive factors are glued
        injections: factor j -> presentation
        origins: For each cell of the presentation, the (factor, cell) pairs it comes from
    """

    heights: Tuple[int, ...]
    junctions: Tuple[int, ...]
    presentation: OperadPresentation
    injections: List[OperadMorphism]
    origins: Dict[str, List[Tuple[int, str]]] = field(default_factory=dict)
    colour_origins: Dict[str, List[Tuple[int, str]]] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.origins:
            return
        for j, injection in enumerate(self.injections):
            for name, image in injection.collection.cell_map.items():
                self.origins.setdefault(image, []).append((j, name))
            for colour, image in injection.collection.colour_map.items():
                self.colour_origins.setdefault(image, []).append((j, colour))


@dataclass
class CoendCell:
    """A cell of Coend at level n over the n-tree ``tree``

    Attributes:
        top: B^n -> B^tree
        levels: (source map, target map) for levels n-1 down to 0, the maps at
            level m going B^m -> B^(tree truncated to dim m)
    """

    n: int
    tree: Tree
    top: OperadMorphism
    levels: List[Tuple[OperadMorphism, OperadMorphism]]
    label: str = ""

    def maps(self, level: int) -> List[Tuple[str, OperadMorphism]]:
        if level == self.n:
            return [("top", self.top)]
        lo, hi = self.levels[self.n - 1 - level]
        return [("source", lo), ("target", hi)]


def same_morphism(f: OperadMorphism, g: OperadMorphism) -> bool:
    return f.colour_map == g.colour_map and f.images == g.images


def cells_equal(a: CoendCell, b: CoendCell) -> bool:
    if a.n != b.n or tree_key(a.tree) != tree_key(b.tree) or not same_morphism(a.top, b.top):
        return False
    return all(
        same_morphism(f, g) and same_morphism(f2, g2)
        for (f, f2), (g, g2) in zip(a.levels, b.levels)
    )


def _role(n: int, name: str) -> Tuple[str, int]:
    """Kind and level of a non-unit cell of C^n"""
    if name.startswith(("mu(", "nu(")):
        return "composition", 0
    if n == 1:
        return "source", 0
    if n == 2:
        if name == "tau":
            return "principal", 1
        return ("source" if name.startswith("F") else "target"), 0
    if name == principal_cell(n):
        return "principal", n - 1
    if name.startswith("alpha0("):
        return "source", 0
    if name.startswith("beta0("):
        return "target", 0
    match = _TRANSFORMATION.fullmatch(name)
    if match is None:
        raise MissingReference(f"{name} is not a cell of C^{n}")
    return ("source" if match.group(1) == "alpha" else "target"), int(match.group(2))


def _families(n: int) -> Tuple[str, str]:
    if n == 1:
        return "F", "F"
    if n == 2:
        return "F", "H"
    return "alpha0", "beta0"


def _typed_gamma(alg: TermAlgebra, a: Term, b: Term) -> Term:
    """gamma(a; b), or gamma(b; a) when only that reading is typed"""
    try:
        return alg.compose(a, [b])
    except ValidationError as first:
        try:
            result = alg.compose(b, [a])
        except ValidationError as exc:
            raise TypingUnresolvable(
                "neither composition order types", {"first": first.message, "second": exc.message}
            ) from exc
        logger.debug("composition typed with the arguments swapped")
        return result


def _typed_paste(alg: TermAlgebra, head: Term, x: Term, y: Term) -> Term:
    try:
        return alg.compose(head, [x, y])
    except ValidationError as first:
        try:
            result = alg.compose(head, [y, x])
        except ValidationError as exc:
            raise TypingUnresolvable(
                "neither pasting order types", {"first": first.message, "second": exc.message}
            ) from exc
        logger.debug("pasting typed with the labels swapped")
        return result


class CoendOperad:
    """Builder for the tree operads B^t and the cells of Coend(B)

    Every operad B^t shares one property, one set of bounds and one loop mode;
    complexes, cofaces and tree operads are built once and reused.

    Args:
        property: Free construction applied to every C^n
        bounds: Truncation of the presentations
        loop_mode: Loop reading used by the contraction search
        variant: Whiskering used by make_mu at p = 0
    """

    def __init__(
        self,
        property: Property = Property.C,
        bounds: Optional[Bounds] = None,
        loop_mode: LoopMode = LoopMode.FOUR_WAY,
        variant: Variant = Variant.LEFT,
    ) -> None:
        self.property = Property(property)
        self.bounds = bounds or Bounds()
        self.loop_mode = LoopMode(loop_mode)
        self.variant = Variant(variant)
        self._complexes: Dict[int, OperadPresentation] = {}
        self._cofaces: Dict[Tuple[int, int, Side], OperadMorphism] = {}
        self._trees: Dict[TreeKey, TreeOperad] = {}
        self._identities: Dict[int, CoendCell] = {}
        self._mu: Dict[Tuple[int, int, Variant], CoendCell] = {}

    @classmethod
    def from_settings(cls, settings: Settings, property: Property = Property.C) -> "CoendOperad":
        return cls(property, Bounds.from_settings(settings), settings.loop_mode, settings.variant)

    # the complex B^0, B^1, ...

    def complex(self, n: int) -> OperadPresentation:
        if n not in self._complexes:
            base = build_complex(n, self.bounds.max_dim)
            self._complexes[n] = free_presentation(
                base, self.property, self.bounds, loop_mode=self.loop_mode, label=f"B{n}"
            )
        return self._complexes[n]

    def coface(self, j: int, i: int, side: Side) -> OperadMorphism:
        """The coface composite B^j -> B^i whose first step is on ``side``"""
        side = Side(side)
        key = (j, i, side)
        if key not in self._cofaces:
            cm = coface_composite(j, i, side, self.bounds.max_dim)
            label = "delta" if side is Side.SOURCE else "kappa"
            self._cofaces[key] = morphism_from_collection(
                cm, self.complex(j), self.complex(i), f"{label}[{j},{i}]"
            )
        return self._cofaces[key]

    # tree operads

    def tree_operad(self, t: Tree) -> TreeOperad:
        """B^t: the factors B^h of t glued along their junction levels

        Raises:
            GluingMismatch: the pushout cannot identify the glued cells
        """
        key = tree_key(t)
        if key not in self._trees:
            self._trees[key] = self._build_tree_operad(*key)
        return self._trees[key]

    def _build_tree_operad(self, heights: Tuple[int, ...], junctions: Tuple[int, ...]) -> TreeOperad:
        if len(heights) == 1:
            P = self.complex(heights[0])
            return TreeOperad(heights, junctions, P, [identity_morphism(P)])
        rest = self._trees.get((heights[1:], junctions[1:]))
        if rest is None:
            rest = self._build_tree_operad(heights[1:], junctions[1:])
            self._trees[(heights[1:], junctions[1:])] = rest
        b = junctions[0]
        leg_left = self.coface(b, heights[0], Side.TARGET)
        leg_rest = compose_morphisms(rest.injections[0], self.coface(b, heights[1], Side.SOURCE))
        P, in_left, in_rest = pushout_operads(leg_left, leg_rest, self.bounds)
        P.label = "B[" + ",".join(map(str, heights)) + ";" + ",".join(map(str, junctions)) + "]"
        injections = [in_left] + [compose_morphisms(in_rest, inj) for inj in rest.injections]
        logger.info("tree operad %s with %d colours", P.label, len(P.base.colours))
        return TreeOperad(heights, junctions, P, injections)

    def _sector_embedding(self, T: TreeOperad, t: Tree, sector: Sector, h: int) -> OperadMorphism:
        """B^h -> B^t for a sector of dim h of t"""
        index = {path: j for j, (path, _) in enumerate(leaves(t))}
        node = t.node(sector.path)
        if not node:
            return T.injections[index[sector.path]]
        if sector.gap < len(node):
            side, path = Side.SOURCE, sector.path + (sector.gap,)
            while t.node(path):
                path = path + (0,)
        else:
            side, path = Side.TARGET, sector.path + (len(node) - 1,)
            while t.node(path):
                path = path + (len(t.node(path)) - 1,)
        j = index[path]
        return compose_morphisms(T.injections[j], self.coface(h, T.heights[j], side))

    def _glue(
        self, D: TreeOperad, target: OperadPresentation, factor_maps: Sequence[OperadMorphism], label: str
    ) -> OperadMorphism:
        """The morphism out of B^s agreeing with factor_maps[j] on factor j

        Raises:
            GluingMismatch: two factors send a shared cell to different terms
        """
        base = D.presentation.base
        images: Dict[str, Term] = {}
        for name, found in D.origins.items():
            if base.unit_key(name) is not None:
                continue
            seen: Optional[Term] = None
            for j, original in found:
                fm = factor_maps[j]
                image = apply_morphism(fm, fm.source.generator(original))
                if seen is None:
                    seen = image
                elif image != seen:
                    raise GluingMismatch(f"factors disagree on the image of {name}", {"cell": name})
            images[name] = seen
        colour_map: Dict[str, str] = {}
        for colour, found in D.colour_origins.items():
            mapped = {factor_maps[j].colour_map[c] for j, c in found}
            if len(mapped) > 1:
                raise GluingMismatch(f"factors disagree on the image of colour {colour}")
            colour_map[colour] = mapped.pop()
        return OperadMorphism(D.presentation, target, colour_map, images, label=label)

    def tree_coface(self, t: Tree, side: Side) -> OperadMorphism:
        """B^(dt) -> B^t, delta (source) or kappa (target) on each factor"""
        side = Side(side)
        if t.dim == 0:
            raise DimensionMismatch("a 0-tree has no boundary")
        boundary = truncate(t, 1)
        T, D = self.tree_operad(t), self.tree_operad(boundary)
        factor_maps = []
        for path, h in leaves(boundary):
            gap = 0 if side is Side.SOURCE else len(t.node(path))
            factor_maps.append(self._sector_embedding(T, t, Sector(path, gap), h))
        return self._glue(D, T.presentation, factor_maps, f"{side.value}[{t}]")

    # cells

    def morphism(
        self,
        n: int,
        t: Tree,
        images: Dict[str, Term],
        colour_map: Optional[Dict[str, str]] = None,
        label: str = "",
    ) -> OperadMorphism:
        """B^n -> B^t from explicit images; cells left out map to the same name"""
        source, target = self.complex(n), self.tree_operad(t).presentation
        full: Dict[str, Term] = {}
        for name in source.base.cells:
            if source.base.unit_key(name) is not None:
                continue
            if name in images:
                full[name] = images[name]
            elif name in target.base.cells:
                full[name] = target.generator(name)
            else:
                raise MissingImage(f"no image given for {name}", {"generator": name})
        colours = colour_map or {c: c for c in source.base.colours if c in target.base.colours}
        return OperadMorphism(source, target, dict(colours), full, label=label)

    def identity_cell(self, n: int) -> CoendCell:
        if n not in self._identities:
            levels = [(identity_morphism(self.complex(m)),) * 2 for m in range(n - 1, -1, -1)]
            self._identities[n] = CoendCell(
                n, Tree.linear(n), identity_morphism(self.complex(n)), levels, f"u{n}"
            )
        return self._identities[n]

    def boundary(self, c: CoendCell, side: Side) -> CoendCell:
        if c.n == 0:
            raise DimensionMismatch("a level-0 cell has no boundary")
        lo, hi = c.levels[0]
        top = lo if Side(side) is Side.SOURCE else hi
        return CoendCell(c.n - 1, truncate(c.tree, 1), top, c.levels[1:], f"{Side(side).value}({c.label})")

    def check_serial(self, c: CoendCell) -> CheckReport:
        """Audit the coface equations linking consecutive levels of c

        Every map at level m, composed with delta (kappa) out of B^(m-1), must
        equal the source (target) map at level m-1 followed by the tree coface.
        """
        report = CheckReport()
        if len(c.levels) != c.n:
            report.add("LevelCount", c.label, f"{len(c.levels)} levels below a level-{c.n} cell")
            return report
        for m in range(c.n, 0, -1):
            tree_m = truncate(c.tree, c.n - m)
            lower = c.levels[c.n - m]
            for side, below in zip((Side.SOURCE, Side.TARGET), lower):
                face = self.coface(m - 1, m, side)
                tree_face = self.tree_coface(tree_m, side)
                for label, f in c.maps(m):
                    subject = f"level {m} {label} {side.value}"
                    self._compare(report, subject, face, f, below, tree_face)
        return report

    def _compare(
        self,
        report: CheckReport,
        subject: str,
        face: OperadMorphism,
        f: OperadMorphism,
        below: OperadMorphism,
        tree_face: OperadMorphism,
    ) -> None:
        for colour in face.source.base.colours:
            report.checked += 1
            left = f.colour_map.get(face.colour_map[colour])
            right = tree_face.colour_map.get(below.colour_map.get(colour))
            if left is None or left != right:
                report.add("SerialMismatch", subject, f"colour {colour} goes to {left} and {right}")
        for name, image in face.images.items():
            report.checked += 1
            try:
                left = apply_morphism(f, image)
                right = apply_morphism(tree_face, apply_morphism(below, face.source.generator(name)))
            except OmegaCoendError as exc:
                report.add("SerialMismatch", subject, f"{name}: {exc.message}")
                continue
            if left != right:
                report.add("SerialMismatch", subject, f"{name} has two different images")

    def compose(self, outer: CoendCell, inners: Sequence[CoendCell]) -> CoendCell:
        """Graft inners[j] into the j-th leaf of outer's tree

        Raises:
            DimensionMismatch: a cell's level differs from the height of its leaf
            GluingMismatch: neighbouring inner cells do not share their boundary
        """
        found = leaves(outer.tree)
        if len(inners) != len(found):
            raise DimensionMismatch(f"{len(found)} leaves but {len(inners)} cells to graft")
        for (_, h), c in zip(found, inners):
            if c.n != h:
                raise DimensionMismatch(f"a level-{c.n} cell cannot fill a leaf of height {h}")
        result_tree, sector_maps = substitute_trees_with_maps(outer.tree, [c.tree for c in inners])
        R = self.tree_operad(result_tree)
        factor_maps = []
        for c, sector_map in zip(inners, sector_maps):
            S = self.tree_operad(c.tree)
            embeddings = [
                self._sector_embedding(R, result_tree, sector_map[Sector(path, 0)], h)
                for path, h in leaves(c.tree)
            ]
            embed = self._glue(S, R.presentation, embeddings, f"emb[{c.tree}]")
            factor_maps.append(compose_morphisms(embed, c.top))
        glue = self._glue(self.tree_operad(outer.tree), R.presentation, factor_maps, "graft")
        top = compose_morphisms(glue, outer.top)
        label = f"{outer.label}({', '.join(c.label for c in inners)})"
        if outer.n == 0:
            return CoendCell(0, result_tree, top, [], label)
        src = self.compose(self.boundary(outer, Side.SOURCE), self._boundary_inners(outer.tree, inners, Side.SOURCE))
        tgt = self.compose(self.boundary(outer, Side.TARGET), self._boundary_inners(outer.tree, inners, Side.TARGET))
        return CoendCell(outer.n, result_tree, top, [(src.top, tgt.top)] + src.levels, label)

    def _boundary_inners(self, t: Tree, inners: Sequence[CoendCell], side: Side) -> List[CoendCell]:
        index = {path: j for j, (path, _) in enumerate(leaves(t))}
        result = []
        for path, _ in leaves(truncate(t, 1)):
            node = t.node(path)
            if not node:
                result.append(inners[index[path]])
                continue
            child = path + ((0,) if side is Side.SOURCE else (len(node) - 1,))
            result.append(self.boundary(inners[index[child]], side))
        return result

    # composition cells and the action of C^0

    def make_mu(self, n: int, p: int, variant: Optional[Variant] = None) -> CoendCell:
        """The cell composing two level-n cells along level p

        For p >= 1 the principal and higher transformation cells map to their
        componentwise composite at level p-1; for p = 0 each functor maps to the
        composite functor and each transformation to one of the two whiskered
        composites, as picked by ``variant``.

        Raises:
            BadLevel: p is not in 0..n-1
            TypingUnresolvable: no argument order types a composite
        """
        if not 0 <= p < n:
            raise BadLevel(f"level {p} outside 0..{n - 1}")
        variant = Variant(variant or self.variant)
        key = (n, p, variant)
        if key in self._mu:
            return self._mu[key]
        t = star(Tree.linear(n), Tree.linear(n), n, p)
        T = self.tree_operad(t)
        first, second = T.injections
        alg = T.presentation.algebra
        B = self.complex(n)
        colour_map = {"1": first.colour_map["1"], "2": (second if p == 0 else first).colour_map["2"]}
        images: Dict[str, Term] = {}
        for name, cell in B.base.cells.items():
            if B.base.unit_key(name) is not None:
                continue
            x1, x2 = first.images[name], second.images[name]
            kind, level = _role(n, name)
            if kind == "composition":
                images[name] = x1 if first.colour_map[cell.colour] == colour_map[cell.colour] else x2
            elif p == 0:
                images[name] = self._horizontal(n, level, x1, x2, first, second, alg, variant)
            elif level < p - 1:
                images[name] = x1
            elif level == p - 1:
                images[name] = x1 if kind == "source" else x2
            else:
                images[name] = _typed_paste(alg, first.images[f"nu({level},{p - 1})"], x1, x2)
        top = OperadMorphism(B, T.presentation, colour_map, images, label=f"mu({n},{p})")
        lower = self.identity_cell(n - 1) if p == n - 1 else self.make_mu(n - 1, p, variant)
        cell = CoendCell(n, t, top, [(lower.top, lower.top)] + lower.levels, f"mu({n},{p})")
        logger.debug("built %s over %s", cell.label, t)
        self._mu[key] = cell
        return cell

    def _horizontal(
        self,
        n: int,
        level: int,
        x1: Term,
        x2: Term,
        first: OperadMorphism,
        second: OperadMorphism,
        alg: TermAlgebra,
        variant: Variant,
    ) -> Term:
        if level == 0:
            return _typed_gamma(alg, x2, x1)
        a, b = _families(n)
        nu = second.images[f"nu({level},0)"]
        if variant is Variant.LEFT:
            left = _typed_gamma(alg, second.images[functor_name(a, level)], x1)
            right = _typed_gamma(alg, x2, first.images[functor_name(b, 0)])
        else:
            left = _typed_gamma(alg, x2, first.images[functor_name(a, 0)])
            right = _typed_gamma(alg, second.images[functor_name(b, level)], x1)
        return _typed_paste(alg, nu, left, right)

    def cw_image(self, name: str) -> CoendCell:
        """The Coend cell of a generator of C^0: units go to identities, mu(n,p) to make_mu"""
        match = re.fullmatch(r"u(\d+)", name)
        if match:
            return self.identity_cell(int(match.group(1)))
        match = re.fullmatch(r"mu\((\d+),(\d+)\)", name)
        if match:
            return self.make_mu(int(match.group(1)), int(match.group(2)))
        raise MissingReference(f"{name} is not a generator of C0")

    # contractibility

    def lift_contraction(self, minus: CoendCell, plus: CoendCell) -> CoendCell:
        """A level-(n+1) cell from minus to plus over the degenerate tree

        Non-principal cells of C^(n+1) are images of a coface and go where
        minus (delta side) or plus (kappa side) sends their preimage; the
        principal cell goes to a contraction between the images of the
        principal cell of C^n.

        Raises:
            DimensionMismatch: the cells are at level 0 or at different levels
            NotEligible: the cells are not parallel
            ContractionUnavailable: the target operad has no such contraction
        """
        if minus.n != plus.n:
            raise DimensionMismatch(f"cells at levels {minus.n} and {plus.n}")
        if minus.n < 1:
            raise DimensionMismatch("lifting needs cells at level 1 or above")
        if tree_key(minus.tree) != tree_key(plus.tree) or minus.tree.dim != plus.tree.dim:
            raise NotEligible("the cells live over different trees")
        if not all(
            same_morphism(f, g) and same_morphism(f2, g2)
            for (f, f2), (g, g2) in zip(minus.levels, plus.levels)
        ):
            raise NotEligible("the cells are not parallel")
        n = minus.n + 1
        B = self.complex(n)
        target = minus.top.target
        preimage: Dict[str, Tuple[OperadMorphism, str]] = {}
        for side, cell in ((Side.TARGET, plus), (Side.SOURCE, minus)):
            for name, image in self.coface(n - 1, n, side).collection.cell_map.items():
                preimage[image] = (cell.top, name)
        principal = principal_cell(n)
        images: Dict[str, Term] = {}
        for name in B.base.cells:
            if B.base.unit_key(name) is not None:
                continue
            if name != principal:
                f, original = preimage[name]
                images[name] = f.images[original]
                continue
            below = principal_cell(n - 1)
            x, y = minus.top.images[below], plus.top.images[below]
            try:
                found = find_contraction(target, x, y)
            except NotEligible as exc:
                raise ContractionUnavailable(f"principal images are not eligible: {exc.message}") from exc
            if found is None:
                raise ContractionUnavailable(f"{target.label} does not connect the principal images")
            images[name] = found
        top = OperadMorphism(B, target, dict(minus.top.colour_map), images, label="lift")
        label = f"[{minus.label} | {plus.label}]"
        logger.info("lifted %s to level %d", label, n)
        return CoendCell(n, lift_to(minus.tree, n), top, [(minus.top, plus.top)] + minus.levels, label)
