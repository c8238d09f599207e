"""omega-coend command line

Subcommands build trees, complexes, free operads, pushouts and Coend cells,
and print them as JSON or DOT. Engine errors are printed as ``CODE: message``
and set the exit status: 1 for verification failures, 2 for invalid input.
"""
import logging
import sys
from pathlib import Path
from typing import List, Optional

import click
from pydantic import BaseModel, TypeAdapter
from pydantic import ValidationError as PydanticValidationError

from . import __version__
from .cache import cached_free_operad
from .coend import CoendCell, CoendOperad
from .collection import build_complex
from .config import LoopMode, Settings, Variant
from .contraction import eligible_pairs, find_contraction, verify_property
from .errors import ContractionUnavailable, NotEligible, OmegaCoendError
from .export import (
    CoendCellDoc,
    PairDoc,
    PresentationDoc,
    coend_cell_from_doc,
    coend_cell_to_doc,
    collection_to_doc,
    collection_to_dot,
    globular_to_doc,
    pairs_to_doc,
    presentation_from_doc,
    presentation_to_doc,
    scheme_to_dot,
    tree_to_doc,
)
from .models import CheckReport
from .operads import Bounds, OperadPresentation, Property, check_morphism, equal_terms
from .report import generate_report, verify_worked_example
from .syntax import format_term, format_tree, parse_term, parse_tree
from .trees import TreeMatrix, decode, encode, leaves, lift_to, pasting_scheme, star

logger = logging.getLogger(__name__)


class EngineGroup(click.Group):
    """Click group that turns engine and settings errors into exit codes"""

    def invoke(self, ctx: click.Context):
        try:
            return super().invoke(ctx)
        except OmegaCoendError as exc:
            click.echo(f"{exc.code}: {exc.message}", err=True)
            ctx.exit(exc.exit_code)
        except PydanticValidationError as exc:
            click.echo(f"VALIDATION_ERROR: {exc.error_count()} invalid value(s)", err=True)
            for error in exc.errors():
                location = ".".join(str(part) for part in error["loc"])
                click.echo(f"  {location}: {error['msg']}", err=True)
            ctx.exit(2)


class Session:
    """Settings of one invocation plus the objects built from them"""

    def __init__(self, settings: Settings, property: Property, fmt: str) -> None:
        self.settings = settings
        self.property = property
        self.format = fmt
        self._coend: Optional[CoendOperad] = None

    @property
    def bounds(self) -> Bounds:
        return Bounds.from_settings(self.settings)

    @property
    def coend(self) -> CoendOperad:
        if self._coend is None:
            self._coend = CoendOperad.from_settings(self.settings, self.property)
        return self._coend

    def presentation(self, op: Optional[Path], n: Optional[int]) -> OperadPresentation:
        """The presentation stored in op, or else the free operad on C^n"""
        if op is not None:
            return presentation_from_doc(PresentationDoc.model_validate_json(op.read_text()))
        if n is None:
            raise click.UsageError("give --op FILE or --n N")
        base = build_complex(n, self.settings.max_dim)
        return OperadPresentation(
            base, self.property, self.bounds, loop_mode=self.settings.loop_mode, label=f"B{n}"
        )


pass_session = click.make_pass_decorator(Session)


def _emit(text: str, output: Optional[Path]) -> None:
    if output is None:
        click.echo(text)
    else:
        output.write_text(text + "\n")
        logger.info("wrote %s", output)


def _json(doc: BaseModel) -> str:
    return doc.model_dump_json(indent=2)


def _finish(report: CheckReport, report_file: Optional[Path], title: str, session: Session) -> None:
    """Print an audit, optionally write it as Markdown, exit 1 on violations"""
    click.echo(_json(report))
    if report_file is not None:
        report_file.write_text(generate_report(title, session.settings, {title: report}) + "\n")
    if not report.ok:
        sys.exit(1)


output_option = click.option(
    "-o", "--output", type=click.Path(dir_okay=False, path_type=Path), default=None, help="Write here instead of stdout"
)
report_option = click.option(
    "--report", "report_file", type=click.Path(dir_okay=False, path_type=Path), default=None,
    help="Also write a Markdown report",
)
op_option = click.option(
    "--op", type=click.Path(exists=True, dir_okay=False, path_type=Path), default=None,
    help="Presentation JSON from 'operad build'",
)
n_option = click.option("--n", "n", type=int, default=None, help="Use the free operad on C^n")


@click.group(cls=EngineGroup)
@click.version_option(__version__, prog_name="omega-coend")
@click.option("--property", "property_", type=click.Choice([p.value for p in Property]), default=Property.C.value,
              show_default=True, help="Free construction applied to collections")
@click.option("--max-dim", type=int, default=None, help="Highest cell dimension kept")
@click.option("--max-width", type=int, default=None, help="Most leaves in an arity")
@click.option("--max-size", type=int, default=None, help="Most generator occurrences in a cell")
@click.option("--max-cells", type=int, default=None, help="Saturation budget")
@click.option("--variant", type=click.Choice([v.value for v in Variant]), default=None,
              help="Whiskering used by the p = 0 composition cells")
@click.option("--loop-mode", type=click.Choice([m.value for m in LoopMode]), default=None,
              help="Reading of the loop property")
@click.option("--cache-dir", type=click.Path(file_okay=False, path_type=Path), default=None,
              help="Directory of cached presentations")
@click.option("--format", "fmt", type=click.Choice(["json", "dot"]), default="json", show_default=True)
@click.option("-v", "--verbose", is_flag=True, help="Log at DEBUG")
@click.pass_context
def cli(ctx, property_, max_dim, max_width, max_size, max_cells, variant, loop_mode, cache_dir, fmt, verbose):
    """Trees, free omega-operads and the coendomorphism operad"""
    settings = Settings.from_env(
        max_dim=max_dim,
        max_width=max_width,
        max_size=max_size,
        max_cells=max_cells,
        variant=variant,
        loop_mode=loop_mode,
        cache_dir=cache_dir,
        log_level="DEBUG" if verbose else None,
    )
    logging.basicConfig(
        level=settings.log_level.upper(),
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
        force=True,
    )
    ctx.obj = Session(settings, Property(property_), fmt)


# trees


@cli.group()
def tree():
    """Batanin trees in matrix form"""


@tree.command("star")
@click.option("--left", required=True, help="Left tree expression")
@click.option("--right", required=True, help="Right tree expression")
@click.option("--level", type=int, required=True, help="Gluing level p")
def tree_star(left, right, level):
    t, u = parse_tree(left), parse_tree(right)
    n = max(t.dim, u.dim)
    click.echo(format_tree(star(lift_to(t, n), lift_to(u, n), n, level)))


@tree.command("encode")
@click.argument("expression")
def tree_encode(expression):
    click.echo(_json(tree_to_doc(parse_tree(expression))))


@tree.command("decode")
@click.option("--dim", type=int, required=True)
@click.option("--top", required=True, help="Comma separated leaf heights")
@click.option("--bottom", default="", help="Comma separated junction levels")
def tree_decode(dim, top, bottom):
    def ints(text: str) -> tuple:
        return tuple(int(x) for x in text.split(",") if x.strip())

    t = decode(TreeMatrix(dim, ints(top), ints(bottom)))
    shape = {"dim": t.dim, "shape": t.shape, "leaves": [h for _, h in leaves(t)]}
    click.echo(TypeAdapter(dict).dump_json(shape, indent=2).decode())


@tree.command("scheme")
@click.argument("expression")
@output_option
@pass_session
def tree_scheme(session, expression, output):
    """The pasting scheme of a tree"""
    t = parse_tree(expression)
    if session.format == "dot":
        _emit(scheme_to_dot(t).source, output)
    else:
        _emit(_json(globular_to_doc(pasting_scheme(t))), output)


# collections


@cli.group("complex")
def complex_group():
    """The coglobular complex C^0, C^1, ..."""


@complex_group.command("emit")
@click.option("--n", "n", type=int, required=True)
@output_option
@pass_session
def complex_emit(session, n, output):
    C = build_complex(n, session.settings.max_dim)
    if session.format == "dot":
        _emit(collection_to_dot(C).source, output)
    else:
        _emit(_json(collection_to_doc(C)), output)


# operads


@cli.group()
def operad():
    """Free coloured omega-operads"""


@operad.command("build")
@n_option
@click.option("--cells/--no-cells", default=True, help="Include the saturated cells")
@output_option
@pass_session
def operad_build(session, n, cells, output):
    """Saturate the free operad on C^n"""
    if n is None:
        raise click.UsageError("--n is required")
    P = cached_free_operad(
        build_complex(n, session.settings.max_dim),
        session.property,
        session.bounds,
        cache_dir=session.settings.cache_dir,
        loop_mode=session.settings.loop_mode,
        label=f"B{n}",
    )
    click.echo(f"{P.label}: cells per dim {P.counts()}", err=True)
    _emit(_json(presentation_to_doc(P, include_cells=cells)), output)


@operad.command("normalize")
@click.argument("term")
@op_option
@n_option
@pass_session
def operad_normalize(session, term, op, n):
    P = session.presentation(op, n)
    t = parse_term(term, P.algebra)
    click.echo(format_term(P.algebra, P.algebra.normalize(t)))


@operad.command("equal")
@click.argument("left")
@click.argument("right")
@op_option
@n_option
@pass_session
def operad_equal(session, left, right, op, n):
    """Print whether two terms denote the same cell"""
    P = session.presentation(op, n)
    same = equal_terms(P, parse_term(left, P.algebra), parse_term(right, P.algebra))
    click.echo("true" if same else "false")


@operad.command("verify")
@op_option
@n_option
@report_option
@pass_session
def operad_verify(session, op, n, report_file):
    """Audit a presentation against its property"""
    P = session.presentation(op, n)
    _finish(verify_property(P), report_file, f"{P.label} ({P.property.value})", session)


@cli.command("pushout")
@click.option("--tree", "expression", required=True, help="Tree whose factors are glued, e.g. '1(1) *[1,0] 1(1)'")
@output_option
@pass_session
def pushout(session, expression, output):
    """The operad B^t glued from the complexes along the factors of a tree"""
    T = session.coend.tree_operad(parse_tree(expression))
    P = T.presentation
    if session.format == "dot":
        _emit(collection_to_dot(P.base).source, output)
    else:
        _emit(_json(presentation_to_doc(P)), output)


operad.add_command(pushout)


# contractions


@cli.group()
def contract():
    """Eligible pairs and contraction cells"""


@contract.command("pairs")
@click.option("--dim", "k", type=int, required=True)
@click.option("--all", "include_ineligible", is_flag=True, help="Also list pairs failing the root/loop filter")
@op_option
@n_option
@pass_session
def contract_pairs(session, k, include_ineligible, op, n):
    P = session.presentation(op, n)
    pairs: List[PairDoc] = pairs_to_doc(P, eligible_pairs(P, k, include_ineligible))
    click.echo(TypeAdapter(List[PairDoc]).dump_json(pairs, indent=2).decode())


@contract.command("find")
@click.option("--x", "x_text", required=True)
@click.option("--y", "y_text", required=True)
@op_option
@n_option
@click.option("--tree", "expression", default=None, help="Search in the tree operad B^t instead")
@pass_session
def contract_find(session, x_text, y_text, op, n, expression):
    """Print a cell from x to y"""
    if expression is not None:
        P = session.coend.tree_operad(parse_tree(expression)).presentation
    else:
        P = session.presentation(op, n)
    x, y = parse_term(x_text, P.algebra), parse_term(y_text, P.algebra)
    found = find_contraction(P, x, y)
    if found is None:
        raise ContractionUnavailable(f"{P.label} has no cell from {x_text} to {y_text}")
    click.echo(format_term(P.algebra, found))


# Coend cells


@cli.group()
def coend():
    """Cells of the coendomorphism operad"""


def _load_cell(session: Session, path: Path) -> CoendCell:
    return coend_cell_from_doc(CoendCellDoc.model_validate_json(path.read_text()), session.coend)


@coend.command("mu")
@click.option("--n", "n", type=int, required=True)
@click.option("--p", "p", type=int, required=True)
@click.option("--cell-variant", type=click.Choice([v.value for v in Variant]), default=None,
              help="Overrides --variant for this cell")
@output_option
@pass_session
def coend_mu(session, n, p, cell_variant, output):
    """The composition cell of level n along level p"""
    cell = session.coend.make_mu(n, p, Variant(cell_variant) if cell_variant else None)
    _emit(_json(coend_cell_to_doc(cell)), output)


@coend.command("cw")
@click.argument("name")
@output_option
@pass_session
def coend_cw(session, name, output):
    """The cell a generator of C^0 acts by"""
    _emit(_json(coend_cell_to_doc(session.coend.cw_image(name))), output)


@coend.command("lift")
@click.option("--minus", type=click.Path(exists=True, dir_okay=False, path_type=Path), required=True)
@click.option("--plus", type=click.Path(exists=True, dir_okay=False, path_type=Path), required=True)
@click.option("--tree", "expression", default=None, help="Expected tree of both cells")
@output_option
@pass_session
def coend_lift(session, minus, plus, expression, output):
    """A contraction cell between two parallel cells"""
    lo, hi = _load_cell(session, minus), _load_cell(session, plus)
    if expression is not None and encode(parse_tree(expression)) != encode(lo.tree):
        raise NotEligible(f"the cells live over {lo.tree}, not over {expression}")
    _emit(_json(coend_cell_to_doc(session.coend.lift_contraction(lo, hi))), output)


@coend.command("check")
@click.argument("path", type=click.Path(exists=True, dir_okay=False, path_type=Path))
@report_option
@pass_session
def coend_check(session, path, report_file):
    """Audit the coface equations and the typing of every map of a cell"""
    cell = _load_cell(session, path)
    report = session.coend.check_serial(cell)
    for level in range(cell.n, -1, -1):
        for _, f in cell.maps(level):
            report.merge(check_morphism(f))
    _finish(report, report_file, f"cell {cell.label or path.name}", session)


# worked example and export


@cli.command("verify-example")
@click.argument("example", type=click.Choice(["3-3"]))
@report_option
@pass_session
def verify_example(session, example, report_file):
    """Replay a worked example and print its certificate"""
    certificate = verify_worked_example(session.settings)
    for check in certificate.checks:
        click.echo(f"[{'pass' if check.passed else 'FAIL'}] {check.name}: {check.detail}")
    click.echo("PASS" if certificate.passed else "FAIL")
    if report_file is not None:
        report_file.write_text(
            generate_report(f"Worked example {example}", session.settings, certificate=certificate) + "\n"
        )
    if not certificate.passed:
        sys.exit(1)


@cli.group("export")
def export_group():
    """Write objects as JSON documents or DOT graphs"""


@export_group.command("tree")
@click.argument("expression")
@output_option
@pass_session
def export_tree(session, expression, output):
    t = parse_tree(expression)
    if session.format == "dot":
        _emit(scheme_to_dot(t).source, output)
    else:
        _emit(_json(tree_to_doc(t)), output)


@export_group.command("complex")
@click.option("--n", "n", type=int, required=True)
@output_option
@click.pass_context
def export_complex(ctx, n, output):
    ctx.invoke(complex_emit, n=n, output=output)


@export_group.command("presentation")
@n_option
@click.option("--tree", "expression", default=None, help="Export the tree operad B^t")
@output_option
@pass_session
def export_presentation(session, n, expression, output):
    if expression is not None:
        P = session.coend.tree_operad(parse_tree(expression)).presentation
    else:
        P = session.presentation(None, n)
    if session.format == "dot":
        _emit(collection_to_dot(P.base).source, output)
    else:
        _emit(_json(presentation_to_doc(P)), output)


@export_group.command("cell")
@click.argument("name")
@output_option
@pass_session
def export_cell(session, name, output):
    """A cell of C^0 acting on the complex, e.g. mu(2,1)"""
    _emit(_json(coend_cell_to_doc(session.coend.cw_image(name))), output)


def main() -> None:
    """Run the omega-coend CLI"""
    cli(prog_name="omega-coend")


if __name__ == "__main__":
    main()
