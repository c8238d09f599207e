"""Root cells, the loop property, contraction search and bounded saturation

Saturation builds the stored cells of a presentation dimension by dimension.
The atoms of a dimension are its generators, reflexivities on units when the
property has reflexive units, and one contraction per ordered eligible pair
of the dimension below when the property is contractible. Each atom is then
composed with every boundary-compatible labelling of its arity leaves until
nothing new fits in the bounds. Strict properties then alternate congruence
closure with composition until neither adds anything.
"""
import logging
from dataclasses import dataclass
from itertools import product
from typing import Dict, FrozenSet, Iterator, List, Optional, Sequence, Set, Tuple

from .collection import PointedCollection
from .config import LoopMode
from .errors import BudgetExceeded, DimensionMismatch, NotEligible, OutOfBounds, ValidationError
from .globular import Side, iterated_boundary
from .models import CheckReport
from .operads import Bounds, OperadPresentation, Property
from .pasting import FreeCategory, PastingDiagram, eta, fill, substitute
from .terms import Contraction, Node, Reflex, Term, Unit
from .trees import encode, leaves

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class PairClass:
    x: Term
    y: Term
    dim: int
    is_root_pair: bool
    has_loop: bool
    eligible: bool


def is_root(P: OperadPresentation, t: Term) -> bool:
    """Whether t's arity is the fully degenerate tree

    Raises:
        DimensionMismatch: t is a 0-cell
    """
    if P.cell_dim(t) == 0:
        raise DimensionMismatch("root cells have dimension at least 1")
    return P.algebra.is_root(t)


def has_loop(P: OperadPresentation, x: Term, y: Term) -> bool:
    dim = P.cell_dim(x)
    if dim == 0 or P.cell_dim(y) != dim:
        raise DimensionMismatch(f"loop property needs two cells of equal positive dim, got {dim} and {P.cell_dim(y)}")
    sx, tx = iterated_boundary(P, x, 0, Side.SOURCE), iterated_boundary(P, x, 0, Side.TARGET)
    sy, ty = iterated_boundary(P, y, 0, Side.SOURCE), iterated_boundary(P, y, 0, Side.TARGET)
    if P.loop_mode is LoopMode.TWO_WAY:
        return P.same_class(sx, ty)
    return P.same_class(sx, sy) and P.same_class(sx, tx) and P.same_class(sx, ty)


def classify(P: OperadPresentation, x: Term, y: Term) -> PairClass:
    dim = P.cell_dim(x)
    if P.cell_dim(y) != dim:
        return PairClass(x, y, dim, False, False, False)
    if dim == 0:
        return PairClass(x, y, 0, False, False, P.same_class(x, y))
    root = P.algebra.is_root(x) and P.algebra.is_root(y)
    loop = has_loop(P, x, y)
    same_arity = P.algebra.arity(x) == P.algebra.arity(y) and P.algebra.colour(x) == P.algebra.colour(y)
    eligible = same_arity and P.parallel(x, y) and (not root or loop)
    return PairClass(x, y, dim, root, loop, eligible)


def eligible_pairs(P: OperadPresentation, k: int, include_ineligible: bool = False) -> List[PairClass]:
    """Ordered pairs of stored k-cells that may be connected

    With include_ineligible, parallel same-arity pairs that fail the root/loop
    filter are listed too, flagged as ineligible.
    """
    if k < 0 or k >= P.bounds.max_dim:
        raise DimensionMismatch(f"pairs at dim {k} need a dimension above them within max_dim {P.bounds.max_dim}")
    layer = P.cells_of_dim(k)
    if k == 0:
        return [PairClass(x, x, 0, False, False, True) for x in layer]
    found = []
    for group in _parallel_groups(P, layer).values():
        for x, y in product(group, repeat=2):
            pair = classify(P, x, y)
            if pair.eligible or include_ineligible:
                found.append(pair)
    return found


def _parallel_groups(P: OperadPresentation, layer: Sequence[Term]) -> Dict[tuple, List[Term]]:
    groups: Dict[tuple, List[Term]] = {}
    for t in layer:
        key = (P.algebra.arity(t), P.algebra.colour(t), P.class_of(P.source(t)), P.class_of(P.target(t)))
        groups.setdefault(key, []).append(t)
    return groups


# contraction search


def find_contraction(P: OperadPresentation, x: Term, y: Term) -> Optional[Term]:
    """A cell from x to y, when P provides one

    Contractible presentations answer with [x | y] when both endpoints live in
    one scope, or else with a contraction between the scope-local prefixes of
    x and y composed with the shared remainder. Strict ones answer with the
    reflexivity on the common class, and with None when saturation left x and
    y in different classes; the others only connect x to itself.

    Raises:
        NotEligible: (x, y) is not an eligible pair
        OutOfBounds: P is strict and x or y is not a stored cell
    """
    alg = P.algebra
    x, y = alg.normalize(x), alg.normalize(y)
    pair = classify(P, x, y)
    if not pair.eligible:
        raise NotEligible(f"cannot connect a pair of {pair.dim}-cells that is not eligible")
    dim = pair.dim
    if P.property.strict:
        for t in (x, y):
            if not P.is_stored(t):
                raise OutOfBounds(f"{t!r} is not a stored cell of {P.label}", {"term": repr(t)})
        if not P.same_class(x, y):
            return None
        return alg.reflex(P.class_of(x), dim + 1)
    if x == y:
        return alg.reflex(x, dim + 1)
    if not P.property.contractible:
        return None
    if P.scope_of(x, y) is not None:
        return alg.contraction(x, y)
    return _factorised_contraction(P, x, y)


def _prefix(P: OperadPresentation, t: Term, scope: FrozenSet[str]) -> Tuple[Term, PastingDiagram]:
    """Split t as gamma(a; Q) with a built from scope and Q its remainder"""
    alg = P.algebra
    if isinstance(t, Unit):
        return t, eta(alg, t)
    if alg.generators_of(t) <= scope:
        tree, colour = alg.arity(t)
        return t, fill(alg, tree, [Unit(colour, h) for _, h in leaves(tree)])
    if isinstance(t, Node) and (
        t.head in scope if isinstance(t.head, str) else alg.generators_of(t.head) <= scope
    ):
        head_tree = alg.head_arity(t.head)[0]
        parts = [_prefix(P, label, scope) for label in t.inner.leaf_labels()]
        a = alg.gamma(alg.head_term(t.head), fill(alg, head_tree, [p[0] for p in parts]))
        Q = substitute(fill(FreeCategory(alg), head_tree, [p[1] for p in parts]), alg)
        return a, Q
    return Unit(alg.colour(t), alg.cell_dim(t)), eta(alg, t)


def _factorised_contraction(P: OperadPresentation, x: Term, y: Term) -> Optional[Term]:
    alg = P.algebra
    for index, scope in enumerate(P.scopes):
        try:
            a, Qa = _prefix(P, x, scope)
            b, Qb = _prefix(P, y, scope)
        except ValidationError:
            continue
        if Qa != Qb or a == b or not classify(P, a, b).eligible:
            continue
        if alg.gamma(a, Qa) != x or alg.gamma(b, Qb) != y:
            continue
        cell = alg.contraction(a, b)
        logger.debug("contraction found through scope %d with a remainder of %d leaves", index, len(Qa.leaf_labels()))
        return alg.gamma(cell, alg.degenerate_pasting(Qa, alg.cell_dim(x) + 1))
    return None


# saturation


def _atoms(P: OperadPresentation, dim: int, below: Sequence[Term]) -> List[Term]:
    alg = P.algebra
    atoms: List[Term] = [alg.generator(c.name) for c in P.base.cells_of_dim(dim)]
    if dim == 0:
        return atoms
    if P.property.reflexive_units:
        for colour in P.base.colours:
            for m in range(dim):
                atoms.append(alg.reflex(Unit(colour, m), dim))
    if P.property.contractible:
        if dim == 1:
            atoms.extend(alg.reflex(x, 1) for x in below)
        else:
            for group in _parallel_groups(P, below).values():
                for x, y in product(group, repeat=2):
                    if P.scope_of(x, y) is None or not classify(P, x, y).eligible:
                        continue
                    atoms.append(alg.contraction(x, y))
    return atoms


def _labellings(P: OperadPresentation, head: Term, cells: Sequence[Sequence[Term]]) -> Iterator[List[Term]]:
    """Boundary-compatible leaf labellings of head's arity within the bounds"""
    alg = P.algebra
    tree, colour = alg.arity(head)
    slots = leaves(tree)
    junctions = encode(tree).bottom if len(slots) > 1 else ()
    size_left = P.bounds.max_size - alg.size(head)
    choices = [[c for c in cells[h] if alg.colour(c) == colour] for _, h in slots]
    chosen: List[Term] = []

    def extend(i: int, size: int, width: int) -> Iterator[List[Term]]:
        if i == len(slots):
            yield list(chosen)
            return
        for c in choices[i]:
            s, w = size + alg.size(c), width + alg.width(c)
            if s > size_left or w > P.bounds.max_width:
                continue
            if i > 0:
                b = junctions[i - 1]
                if not P.same_class(
                    iterated_boundary(alg, chosen[-1], b, Side.TARGET), iterated_boundary(alg, c, b, Side.SOURCE)
                ):
                    continue
            chosen.append(c)
            yield from extend(i + 1, s, w)
            chosen.pop()

    yield from extend(0, 0, 0)


def saturate(P: OperadPresentation) -> None:
    """Compute and install the stored cells of P

    Raises:
        BudgetExceeded: more than bounds.max_cells cells were produced
    """
    alg = P.algebra
    cells: List[List[Term]] = []
    seen: Set[Term] = set()
    total = 0
    for dim in range(P.bounds.max_dim + 1):
        layer: List[Term] = []
        cells.append(layer)

        def store(t: Term) -> bool:
            nonlocal total
            if t in seen or not P.in_bounds(t):
                return False
            seen.add(t)
            layer.append(t)
            total += 1
            if total > P.bounds.max_cells:
                raise BudgetExceeded(
                    f"saturation of {P.label} passed {P.bounds.max_cells} cells", dim, {"dim": dim}
                )
            return True

        atoms = _atoms(P, dim, cells[dim - 1] if dim else [])
        for colour in P.base.colours:
            store(Unit(colour, dim))
        for atom in atoms:
            store(atom)
        heads = list(dict.fromkeys(a for a in atoms if not isinstance(a, Unit) and a in seen))

        def grow() -> bool:
            added = False
            grown = True
            while grown:
                grown = False
                snapshot = cells[:dim] + [list(layer)]
                for head in heads:
                    for labels in _labellings(P, head, snapshot):
                        try:
                            term = alg.gamma(head, fill(alg, alg.arity(head)[0], labels))
                        except ValidationError:
                            continue
                        if store(term):
                            grown = added = True
            return added

        grow()
        # merging may make further junctions compatible
        while P.property.strict and _close_congruence(P, layer) and grow():
            pass
        logger.info("%s: %d cells at dim %d", P.label, len(layer), dim)
    P.install(cells)


def _signature(P: OperadPresentation, t: Term) -> Optional[tuple]:
    if isinstance(t, Node):
        head = t.head if isinstance(t.head, str) else P.class_of(t.head)
        return ("node", head, t.inner.shape, tuple(P.class_of(x) for x in t.inner.leaf_labels()))
    if isinstance(t, Reflex):
        return ("reflex", P.class_of(t.base), t.dim)
    return None


def _close_congruence(P: OperadPresentation, layer: Sequence[Term]) -> bool:
    """Merge eligible pairs of layer, then close under composition

    Returns whether any two classes were merged.
    """
    uf = P.congruence
    merged = False
    for t in layer:
        uf.add(t)
    if layer and P.cell_dim(layer[0]) > 0:
        for group in _parallel_groups(P, layer).values():
            first = group[0]
            if P.algebra.is_root(first) and not has_loop(P, first, first):
                continue
            for other in group[1:]:
                if not uf.same(first, other):
                    uf.union(first, other)
                    merged = True
    changed = True
    while changed:
        changed = False
        by_signature: Dict[tuple, Term] = {}
        for t in layer:
            sig = _signature(P, t)
            if sig is None:
                continue
            known = by_signature.setdefault(sig, t)
            if known is not t and not uf.same(known, t):
                uf.union(known, t)
                changed = merged = True
    return merged


def free_operad(
    base: PointedCollection, property: Property, bounds: Optional[Bounds] = None, **kwargs
) -> OperadPresentation:
    """The bounded free operad of a property over base, saturated

    Raises:
        BudgetExceeded: saturation passed bounds.max_cells
    """
    P = OperadPresentation(base, property, bounds, **kwargs)
    P.cells
    return P


def _contains_contraction(t: Term) -> bool:
    if isinstance(t, Contraction):
        return True
    if isinstance(t, Reflex):
        return _contains_contraction(t.base)
    if isinstance(t, Node):
        if not isinstance(t.head, str) and _contains_contraction(t.head):
            return True
        return any(_contains_contraction(x) for x in t.inner.leaf_labels())
    return False


def verify_property(P: OperadPresentation) -> CheckReport:
    """Audit P's property on its stored cells

    Contractible presentations must connect every eligible pair within a scope,
    strict ones must identify them, and whenever units are reflexive every
    unit must carry its reflexivities. Presentations without contractions
    must not store a cell built from one.
    """
    report = CheckReport()
    alg = P.algebra
    stored = {t for layer in P.cells for t in layer}
    for k in range(P.bounds.max_dim):
        for pair in eligible_pairs(P, k):
            report.checked += 1
            x, y = pair.x, pair.y
            if P.property.contractible:
                if P.scope_of(x, y) is None:
                    continue
                cell = alg.reflex(x, k + 1) if x == y else Contraction(x, y)
                if P.in_bounds(cell) and cell not in stored:
                    report.add("MissingContraction", f"dim {k}", f"no stored cell connects {x!r} to {y!r}")
            elif P.property.strict and not P.congruence.same(x, y):
                report.add("NotCongruent", f"dim {k}", f"eligible pair {x!r}, {y!r} is not identified")
    if not P.property.contractible:
        for layer in P.cells:
            for t in layer:
                report.checked += 1
                if _contains_contraction(t):
                    report.add("UnexpectedContraction", repr(t), f"{P.property.value} has no contraction cells")
    if P.property.reflexive_units:
        for colour in P.base.colours:
            for m in range(P.bounds.max_dim):
                for n in range(m + 1, P.bounds.max_dim + 1):
                    report.checked += 1
                    lifted = alg.reflex(Unit(colour, m), n)
                    if lifted not in stored:
                        report.add("MissingUnitReflexivity", f"u@{colour}({m})", f"no reflexivity at dim {n}")
                    elif alg.arity(lifted)[0].dim != n or alg.source(lifted) != alg.target(lifted):
                        report.add("UnitNotReflexive", f"u@{colour}({m})", f"reflexivity at dim {n} is not an endo-cell")
    logger.info("%s audit: %d checks, %d violations", P.label, report.checked, len(report.violations))
    return report
