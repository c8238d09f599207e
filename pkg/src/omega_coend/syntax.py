"""Text syntax for trees and terms

Trees::

    1(2)                      linear tree
    d[1,2](1(1))              degeneracy of a 1-tree to dim 2
    1(2) *[2,0] 1(2)          star along level 0, chains split at the lowest level
    tree{2; top=[2,2]; bot=[1]}

Terms, over a collection::

    nu(1,0)                   a generator, by name
    u@2(1)                    the unit of colour 2 at dim 1
    F1#2(nu(1,0)(F1, F1))     a generator applied to the leaf labels of its arity
    gamma(T; a *[1,0] b)      composition with an explicit pasting
    [x | y]                   contraction
    r[1,2](x)                 reflexivity on a 1-cell, raised to dim 2
"""
import logging
from typing import List, Optional, Sequence, Tuple

from lark import Lark, Token, Transformer, v_args
from lark.exceptions import UnexpectedInput, VisitError

from .errors import DimensionMismatch, OmegaCoendError, ParseError
from .pasting import PastingDiagram, fill
from .terms import Contraction, Reflex, Term, TermAlgebra, Unit
from .trees import Tree, decode, encode, lift_to, recompose, TreeMatrix

logger = logging.getLogger(__name__)

TREE_GRAMMAR = r"""
?start: chain
chain: atom (STAR atom)*
?atom: linear | degen | matrix | "(" chain ")"
linear: LINEAR INT ")"
degen: "d" "[" INT "," INT "]" "(" chain ")"
matrix: "tree" "{" INT ";" "top" "=" "[" ints "]" ";" "bot" "=" "[" ints "]" "}"
ints: (INT ("," INT)*)?

LINEAR.2: "1("
STAR: /\*\[\s*\d+\s*,\s*\d+\s*\]/

%import common.INT
%import common.WS
%ignore WS
"""

TERM_GRAMMAR = r"""
?start: term
?term: gamma | app | contraction | reflex | unit | name | "(" term ")"
gamma: GAMMA term ";" pasting ")"
app: NAME "(" term ("," term)* ")"
contraction: "[" term "|" term "]"
reflex: REFLEX INT "," INT "]" "(" term ")"
unit: UNIT COLOUR "(" INT ")"
name: NAME
pasting: term (STAR term)*

GAMMA.2: "gamma("
REFLEX.2: "r["
UNIT.2: "u@"
STAR: /\*\[\s*\d+\s*,\s*\d+\s*\]/
COLOUR: /[A-Za-z0-9_]+/
NAME: /[A-Za-z][A-Za-z0-9_]*(\(\d+(,\d+)?\))?(#[A-Za-z0-9_]+)?/

%import common.INT
%import common.WS
%ignore WS
"""

_tree_parser = Lark(TREE_GRAMMAR, parser="lalr")
_term_parser = Lark(TERM_GRAMMAR, parser="lalr")


def _star_levels(token: Token) -> Tuple[int, int]:
    n, p = token[2:-1].split(",")
    return int(n), int(p)


def _split_chain(items: Sequence) -> Tuple[list, List[int], Optional[int]]:
    operands, levels, dims = [items[0]], [], set()
    for i in range(1, len(items), 2):
        n, p = _star_levels(items[i])
        dims.add(n)
        levels.append(p)
        operands.append(items[i + 1])
    if len(dims) > 1:
        raise ParseError(f"a chain mixes ambient dimensions {sorted(dims)}")
    return operands, levels, dims.pop() if dims else None


class _TreeBuilder(Transformer):
    @v_args(inline=True)
    def linear(self, _, n):
        return Tree.linear(int(n))

    @v_args(inline=True)
    def degen(self, k, n, tree):
        if tree.dim != int(k):
            raise DimensionMismatch(f"d[{k},{n}] applied to a {tree.dim}-tree")
        return lift_to(tree, int(n))

    @v_args(inline=True)
    def matrix(self, n, top, bottom):
        return decode(TreeMatrix(int(n), tuple(top), tuple(bottom)))

    def ints(self, items):
        return [int(i) for i in items]

    def chain(self, items):
        operands, levels, n = _split_chain(items)
        if n is None:
            return operands[0]
        operands = [lift_to(t, n) if t.dim < n else t for t in operands]
        return recompose(operands, levels)


class _PendingPasting:
    """Operands and junction levels of a pasting whose ambient dimension is not known yet"""

    def __init__(self, operands: List[Term], levels: List[int], dim: Optional[int]) -> None:
        self.operands = operands
        self.levels = levels
        self.dim = dim

    def resolve(self, algebra: TermAlgebra, dim: int) -> PastingDiagram:
        if self.dim is not None and self.dim != dim:
            raise DimensionMismatch(f"pasting written at dim {self.dim} where dim {dim} is needed")
        factors = []
        for term in self.operands:
            k = algebra.cell_dim(term)
            if k > dim:
                raise DimensionMismatch(f"a {k}-cell cannot label a {dim}-pasting")
            factors.append(lift_to(Tree.linear(k), dim))
        shape = recompose(factors, self.levels)
        return fill(algebra, shape, self.operands)


class _TermBuilder(Transformer):
    def __init__(self, algebra: TermAlgebra) -> None:
        super().__init__()
        self.algebra = algebra

    @v_args(inline=True)
    def name(self, token):
        return self.algebra.generator(str(token))

    def app(self, items):
        head = self.algebra.generator(str(items[0]))
        return self.algebra.compose(head, items[1:])

    @v_args(inline=True)
    def unit(self, _, colour, dim):
        if str(colour) not in self.algebra.base.colours:
            raise ParseError(f"unknown colour {colour}")
        return Unit(str(colour), int(dim))

    @v_args(inline=True)
    def contraction(self, x, y):
        return self.algebra.contraction(x, y)

    @v_args(inline=True)
    def reflex(self, _, p, n, base):
        if self.algebra.cell_dim(base) != int(p):
            raise DimensionMismatch(f"r[{p},{n}] applied to a {self.algebra.cell_dim(base)}-cell")
        return self.algebra.reflex(base, int(n))

    def pasting(self, items):
        operands, levels, n = _split_chain(items)
        return _PendingPasting(operands, levels, n)

    @v_args(inline=True)
    def gamma(self, _, outer, pending):
        dim = self.algebra.arity(outer)[0].dim
        return self.algebra.gamma(outer, pending.resolve(self.algebra, dim))


def _run(parser: Lark, builder: Transformer, text: str):
    try:
        tree = parser.parse(text)
        return builder.transform(tree)
    except UnexpectedInput as exc:
        raise ParseError(
            f"cannot parse {text!r} at column {exc.column}",
            {"line": exc.line, "column": exc.column},
        ) from exc
    except VisitError as exc:
        if isinstance(exc.orig_exc, OmegaCoendError):
            raise exc.orig_exc from exc
        raise


def parse_tree(text: str) -> Tree:
    """Parse a tree expression

    Raises:
        ParseError: the text is not a tree expression
        MalformedMatrix, TruncationMismatch, BadLevel: the expression is ill-formed
    """
    return _run(_tree_parser, _TreeBuilder(), text)


def parse_term(text: str, algebra: TermAlgebra) -> Term:
    """Parse a term over algebra's base collection into normal form

    Raises:
        ParseError: the text is not a term
        MissingReference: an unknown generator name
        ArityMismatch, BoundaryMismatch, DimensionMismatch: the term is ill-typed
    """
    term = _run(_term_parser, _TermBuilder(algebra), text)
    logger.debug("parsed %r", text)
    return term


def format_tree(t: Tree) -> str:
    return str(encode(t))


def format_pasting(algebra: TermAlgebra, P: PastingDiagram) -> str:
    labels = [format_term(algebra, x) for x in P.leaf_labels()]
    if len(labels) == 1:
        return labels[0]
    bottom = encode(P.shape).bottom
    parts = [labels[0]]
    for b, label in zip(bottom, labels[1:]):
        parts.append(f"*[{P.dim},{b}] {label}")
    return " ".join(parts)


def format_term(algebra: TermAlgebra, t: Term) -> str:
    """Text form of a normal term; parse_term reads it back"""
    if isinstance(t, Unit):
        name = algebra.base.units.get((t.colour, t.dim))
        return name if name is not None else f"u@{t.colour}({t.dim})"
    if isinstance(t, Contraction):
        return f"[{format_term(algebra, t.source)} | {format_term(algebra, t.target)}]"
    if isinstance(t, Reflex):
        return f"r[{algebra.cell_dim(t.base)},{t.dim}]({format_term(algebra, t.base)})"
    if isinstance(t.head, str):
        if algebra.generator(t.head) == t:
            return t.head
        return f"{t.head}({', '.join(format_term(algebra, x) for x in t.inner.leaf_labels())})"
    return f"gamma({format_term(algebra, t.head)}; {format_pasting(algebra, t.inner)})"
