"""Normal-form operad terms and their algebra

A term is a unit, a node (a head applied to a pasting of terms over the
head's arity), a contraction [x | y] or a reflexivity r(x). A bare generator
is the node whose pasting consists of units only. Every constructor in
TermAlgebra returns normal forms, so structural equality is normal-form
equality.
"""
import logging
from dataclasses import dataclass, field
from typing import Callable, Dict, FrozenSet, Optional, Sequence, Tuple, Union

from .collection import PointedCollection
from .errors import ArityMismatch, BoundaryMismatch, DimensionMismatch
from .globular import Side
from .pasting import PastingDiagram, fill, pd_boundary
from .trees import Tree, leaves, lift_to, sectors, substitute_trees_with_maps

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Unit:
    colour: str
    dim: int


@dataclass(frozen=True, eq=False)
class Contraction:
    source: "Term"
    target: "Term"
    _hash: int = field(init=False, repr=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "_hash", hash(("c", self.source, self.target)))

    def __hash__(self) -> int:
        return self._hash

    def __eq__(self, other: object) -> bool:
        if self is other:
            return True
        if not isinstance(other, Contraction):
            return False
        return self._hash == other._hash and self.source == other.source and self.target == other.target


@dataclass(frozen=True, eq=False)
class Reflex:
    base: "Term"
    dim: int
    _hash: int = field(init=False, repr=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "_hash", hash(("r", self.base, self.dim)))

    def __hash__(self) -> int:
        return self._hash

    def __eq__(self, other: object) -> bool:
        if self is other:
            return True
        if not isinstance(other, Reflex):
            return False
        return self._hash == other._hash and self.dim == other.dim and self.base == other.base


Head = Union[str, Contraction, Reflex, "Node", Unit]


@dataclass(frozen=True, eq=False)
class Node:
    head: Head
    inner: PastingDiagram
    _hash: int = field(init=False, repr=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "_hash", hash(("n", self.head, self.inner)))

    def __hash__(self) -> int:
        return self._hash

    def __eq__(self, other: object) -> bool:
        if self is other:
            return True
        if not isinstance(other, Node):
            return False
        return self._hash == other._hash and self.head == other.head and self.inner == other.inner


Term = Union[Unit, Node, Contraction, Reflex]
Arity = Tuple[Tree, str]


class TermAlgebra:
    """Typing, composition and normalisation of terms over a base collection"""

    def __init__(self, base: PointedCollection) -> None:
        self.base = base
        self._generators: Dict[str, Term] = {}
        self._arity: Dict[Term, Arity] = {}
        self._colour: Dict[Term, str] = {}
        self._boundary: Dict[Tuple[Term, Side], Term] = {}
        # set by strict presentations to their congruence
        self.equivalence: Optional[Callable[[Term, Term], bool]] = None

    def agree(self, a: Term, b: Term) -> bool:
        """Whether a and b may label one shared sector of a pasting"""
        return a == b or (self.equivalence is not None and self.equivalence(a, b))

    # GlobularStructure

    def cell_dim(self, t: Term) -> int:
        if isinstance(t, Unit):
            return t.dim
        if isinstance(t, Node):
            return t.inner.dim
        if isinstance(t, Contraction):
            return self.cell_dim(t.source) + 1
        return t.dim

    def source(self, t: Term) -> Term:
        return self.boundary(t, Side.SOURCE)

    def target(self, t: Term) -> Term:
        return self.boundary(t, Side.TARGET)

    # generators

    def generator(self, name: str) -> Term:
        """The term of a named cell of the base; unit cells give Unit terms"""
        found = self._generators.get(name)
        if found is not None:
            return found
        cell = self.base.cell(name)
        key = self.base.unit_key(name)
        if key is not None:
            term: Term = Unit(key[0], key[1])
        else:
            units = [Unit(cell.arity_colour, h) for _, h in leaves(cell.arity)]
            term = Node(name, fill(self, cell.arity, units))
        self._generators[name] = term
        return term

    def generators_of(self, t: Term) -> FrozenSet[str]:
        """Names of the base cells occurring in t, units excluded"""
        if isinstance(t, Unit):
            return frozenset()
        if isinstance(t, Contraction):
            return self.generators_of(t.source) | self.generators_of(t.target)
        if isinstance(t, Reflex):
            return self.generators_of(t.base)
        found = {t.head} if isinstance(t.head, str) else set(self.generators_of(t.head))
        for label in t.inner.leaf_labels():
            found |= self.generators_of(label)
        return frozenset(found)

    # typing

    def arity(self, t: Term) -> Arity:
        """(arity tree, input colour)"""
        known = self._arity.get(t)
        if known is not None:
            return known
        if isinstance(t, Unit):
            result = (Tree.linear(t.dim), t.colour)
        elif isinstance(t, Contraction):
            tree, colour = self.arity(t.source)
            result = (lift_to(tree, tree.dim + 1), colour)
        elif isinstance(t, Reflex):
            tree, colour = self.arity(t.base)
            result = (lift_to(tree, t.dim), colour)
        else:
            head_tree = self.head_arity(t.head)[0]
            labels = t.inner.leaf_labels()
            tree = substitute_trees_with_maps(head_tree, [self.arity(x)[0] for x in labels])[0]
            result = (tree, self.arity(labels[0])[1])
        self._arity[t] = result
        return result

    def head_arity(self, head: Head) -> Arity:
        if isinstance(head, str):
            cell = self.base.cell(head)
            return (cell.arity, cell.arity_colour)
        return self.arity(head)

    def colour(self, t: Term) -> str:
        """Output colour"""
        known = self._colour.get(t)
        if known is not None:
            return known
        if isinstance(t, Unit):
            result = t.colour
        elif isinstance(t, Contraction):
            result = self.colour(t.source)
        elif isinstance(t, Reflex):
            result = self.colour(t.base)
        elif isinstance(t.head, str):
            result = self.base.cell(t.head).colour
        else:
            result = self.colour(t.head)
        self._colour[t] = result
        return result

    def width(self, t: Term) -> int:
        return self.arity(t)[0].width

    def size(self, t: Term) -> int:
        """Generator occurrences, counting a contraction as its larger endpoint"""
        if isinstance(t, Unit):
            return 0
        if isinstance(t, Contraction):
            return max(self.size(t.source), self.size(t.target))
        if isinstance(t, Reflex):
            return self.size(t.base)
        head = 1 if isinstance(t.head, str) else self.size(t.head)
        return head + sum(self.size(x) for x in t.inner.leaf_labels())

    def is_root(self, t: Term) -> bool:
        return self.arity(t)[0].is_root_only

    # boundaries

    def boundary(self, t: Term, side: Side) -> Term:
        side = Side(side)
        key = (t, side)
        known = self._boundary.get(key)
        if known is not None:
            return known
        dim = self.cell_dim(t)
        if dim == 0:
            raise DimensionMismatch(f"the 0-cell {t!r} has no {side.value}")
        if isinstance(t, Unit):
            result: Term = Unit(t.colour, t.dim - 1)
        elif isinstance(t, Contraction):
            result = t.source if side is Side.SOURCE else t.target
        elif isinstance(t, Reflex):
            result = t.base if t.dim - 1 == self.cell_dim(t.base) else Reflex(t.base, t.dim - 1)
        else:
            head = self.head_boundary(t.head, side)
            result = self.gamma(head, pd_boundary(t.inner, dim - 1, side))
        self._boundary[key] = result
        return result

    def head_boundary(self, head: Head, side: Side) -> Term:
        if isinstance(head, str):
            cell = self.base.cell(head)
            name = cell.src if Side(side) is Side.SOURCE else cell.tgt
            if name is None:
                raise DimensionMismatch(f"generator {head} has no boundary")
            return self.generator(name)
        return self.boundary(head, side)

    # construction

    def head_term(self, head: Head) -> Term:
        return self.generator(head) if isinstance(head, str) else head

    def gamma(self, outer: Term, inner: PastingDiagram) -> Term:
        """Operadic composition, outer first

        Raises:
            ArityMismatch: inner's shape or colours do not match outer's arity
            BoundaryMismatch: the recomposed labels do not paste
        """
        tree, colour = self.arity(outer)
        if inner.shape != tree:
            raise ArityMismatch(f"pasting of shape {inner.shape} does not fit arity {tree}")
        labels = inner.leaf_labels()
        for label in labels:
            if self.colour(label) != colour:
                raise ArityMismatch(
                    f"label {label!r} has output colour {self.colour(label)}, arity wants {colour}"
                )
        if isinstance(outer, Unit):
            return labels[0]
        if isinstance(outer, (Contraction, Reflex)):
            if all(isinstance(x, Unit) for x in labels):
                return outer
            return Node(outer, self._repaste(inner))

        head_tree = self.head_arity(outer.head)[0]
        old = outer.inner.leaf_labels()
        _, maps = substitute_trees_with_maps(head_tree, [self.arity(x)[0] for x in old])
        fresh = []
        for label, mapping in zip(old, maps):
            label_tree = self.arity(label)[0]
            part = PastingDiagram(label_tree, tuple(inner.label(mapping[s]) for s in sectors(label_tree)), self)
            fresh.append(self.gamma(label, part))
        if all(isinstance(x, Unit) for x in fresh):
            return self.head_term(outer.head)
        return Node(outer.head, fill(self, head_tree, fresh))

    def _repaste(self, P: PastingDiagram) -> PastingDiagram:
        return P if P.over is self else PastingDiagram(P.shape, P.labels, self)

    def compose(self, outer: Term, labels: Sequence[Term]) -> Term:
        """gamma with the pasting filled in from leaf labels"""
        return self.gamma(outer, fill(self, self.arity(outer)[0], list(labels)))

    def contraction(self, x: Term, y: Term) -> Term:
        """[x | y], or the reflexivity on x when x = y

        Raises:
            DimensionMismatch, ArityMismatch, BoundaryMismatch
        """
        dim = self.cell_dim(x)
        if self.cell_dim(y) != dim:
            raise DimensionMismatch(f"cannot connect a {dim}-cell to a {self.cell_dim(y)}-cell")
        if self.arity(x) != self.arity(y) or self.colour(x) != self.colour(y):
            raise ArityMismatch("contraction endpoints must share arity and colour")
        if dim > 0 and (self.source(x) != self.source(y) or self.target(x) != self.target(y)):
            raise BoundaryMismatch("contraction endpoints must be parallel")
        if x == y:
            return self.reflex(x, dim + 1)
        return Contraction(x, y)

    def reflex(self, base: Term, dim: int) -> Term:
        if isinstance(base, Reflex):
            base = base.base
        if dim <= self.cell_dim(base):
            raise DimensionMismatch(f"cannot raise a {self.cell_dim(base)}-cell to dim {dim}")
        return Reflex(base, dim)

    def degenerate_pasting(self, P: PastingDiagram, dim: int) -> PastingDiagram:
        """The same labels read as a pasting of higher dimension"""
        return PastingDiagram(lift_to(P.shape, dim), P.labels, self)

    def normalize(self, t: Term) -> Term:
        """Rebuild t bottom-up through the normalising constructors; idempotent"""
        if isinstance(t, Unit):
            return t
        if isinstance(t, Contraction):
            return self.contraction(self.normalize(t.source), self.normalize(t.target))
        if isinstance(t, Reflex):
            return self.reflex(self.normalize(t.base), t.dim)
        head = self.head_term(t.head) if isinstance(t.head, str) else self.normalize(t.head)
        labels = [self.normalize(x) for x in t.inner.leaf_labels()]
        return self.gamma(head, fill(self, t.inner.shape, labels))
