"""Report generation utilities for omega-coend

This module replays the worked example of a coherence cell in the two-fold
pushout B^1 + B^1 over B^0 as a certificate, and renders certificates and
audit reports as Markdown.
"""
import logging
from typing import Callable, Dict, List, Optional, Tuple

from pydantic import BaseModel, Field

from . import __version__
from .coend import CoendOperad
from .config import Settings
from .contraction import classify, find_contraction
from .errors import OmegaCoendError
from .models import CheckReport
from .operads import Bounds, Property
from .syntax import format_term, parse_term
from .trees import Tree, TreeMatrix, decode, lift_to, star

logger = logging.getLogger(__name__)

WORKED_X = "F1#2(nu(1,0)(F1, nu(1,0)(F1, F1)))"
WORKED_Y = "F1#2(nu(1,0)(nu(1,0)(F1, F1), F1))"
WORKED_CELL = "gamma([F1#2(nu(1,0)(v1, nu(1,0))) | F1#2(nu(1,0)(nu(1,0), v1))]; F1 *[2,0] F1 *[2,0] F1)"
WORKED_PUSHOUT_CELLS = ["u1", "mu(1,0)", "v1", "nu(1,0)", "F1", "v1#2", "nu(1,0)#2", "F1#2"]


class CertificateCheck(BaseModel):
    """One replayed step of an example

    Attributes:
        name: Short step identifier shown in the certificate table
        passed: Whether the step reproduced its expected value
        detail: What was observed, or the error code and message of a failed step
    """

    name: str
    passed: bool
    detail: str = ""


class Certificate(BaseModel):
    """Pass/fail record of a replayed example"""

    example: str
    checks: List[CertificateCheck] = Field(default_factory=list)

    @property
    def passed(self) -> bool:
        return bool(self.checks) and all(c.passed for c in self.checks)

    def record(self, name: str, step: Callable[[], Tuple[bool, str]]) -> bool:
        """Run one step; an engine error fails the step instead of escaping"""
        try:
            passed, detail = step()
        except OmegaCoendError as exc:
            passed, detail = False, f"{exc.code}: {exc.message}"
        self.checks.append(CertificateCheck(name=name, passed=passed, detail=detail))
        logger.debug("%s: %s", name, "pass" if passed else "fail")
        return passed


def verify_worked_example(settings: Optional[Settings] = None) -> Certificate:
    """Replay the coherence cell between the two bracketings x and y

    Builds the pushout for the tree 1(1) *[1,0] 1(1) under property C at
    max_dim 2 and width 4, checks the pushout and the typing of x and y, then
    asks the contraction search for the cell connecting them and compares it
    with its written form.
    """
    settings = settings or Settings()
    bounds = Bounds(max_dim=2, max_width=4, max_size=settings.max_size, max_cells=settings.max_cells)
    coend = CoendOperad(Property.C, bounds, settings.loop_mode, settings.variant)
    cert = Certificate(example="3-3")
    P = coend.tree_operad(star(Tree.linear(1), Tree.linear(1), 1, 0)).presentation
    alg = P.algebra

    cert.record("colours", lambda: (len(P.base.colours) == 3, ", ".join(P.base.colours)))
    dim1 = [c.name for c in P.base.cells_of_dim(1)]
    cert.record("pushout 1-cells", lambda: (sorted(dim1) == sorted(WORKED_PUSHOUT_CELLS), ", ".join(dim1)))

    terms: Dict[str, object] = {}

    def parse(name: str, text: str) -> Tuple[bool, str]:
        terms[name] = parse_term(text, alg)
        return True, format_term(alg, terms[name])

    if not cert.record("parse x", lambda: parse("x", WORKED_X)):
        return cert
    if not cert.record("parse y", lambda: parse("y", WORKED_Y)):
        return cert
    x, y = terms["x"], terms["y"]
    tree = decode(TreeMatrix(1, (1, 1, 1), (0, 0)))
    for name, t in (("x", x), ("y", y)):
        cert.record(
            f"arity of {name}",
            lambda t=t: (
                alg.arity(t) == (tree, "1") and alg.colour(t) == "3",
                f"{alg.arity(t)[0]} from colour {alg.arity(t)[1]} to {alg.colour(t)}",
            ),
        )
    cert.record("parallel", lambda: (P.parallel(x, y), "sources and targets agree"))

    def eligibility() -> Tuple[bool, str]:
        pair = classify(P, x, y)
        return pair.eligible, f"root pair {pair.is_root_pair}, loop {pair.has_loop}"

    cert.record("eligible", eligibility)

    def search() -> Tuple[bool, str]:
        terms["cell"] = find_contraction(P, x, y)
        found = terms["cell"]
        return found is not None, format_term(alg, found) if found is not None else "none"

    if not cert.record("coherence cell", search):
        return cert
    cell = terms["cell"]
    cert.record("source is x", lambda: (P.source(cell) == x, format_term(alg, P.source(cell))))
    cert.record("target is y", lambda: (P.target(cell) == y, format_term(alg, P.target(cell))))
    cert.record(
        "degenerate arity",
        lambda: (alg.arity(cell) == (lift_to(tree, 2), "1"), str(alg.arity(cell)[0])),
    )
    cert.record("matches the written cell", lambda: (parse_term(WORKED_CELL, alg) == cell, WORKED_CELL))
    logger.info("worked example: %s", "pass" if cert.passed else "fail")
    return cert


class ReportGenerator:
    """Generate Markdown reports from certificates and audit reports"""

    def __init__(
        self,
        title: str,
        settings: Settings,
        reports: Optional[Dict[str, CheckReport]] = None,
        certificate: Optional[Certificate] = None,
        facts: Optional[Dict[str, str]] = None,
    ) -> None:
        """Initialize report generator

        Args:
            title: Heading of the report
            settings: Settings the results were computed under
            reports: Named audit reports
            certificate: A replayed example
            facts: Extra key/value lines, such as cell counts
        """
        self.title = title
        self.settings = settings
        self.reports = reports or {}
        self.certificate = certificate
        self.facts = facts or {}

    def generate(self) -> str:
        """Generate complete Markdown report

        Returns:
            Complete Markdown report as string
        """
        sections = [
            self._header(),
            self._settings_section(),
            self._facts_section(),
            self._certificate_section(),
            self._reports_section(),
            self._verdict_section(),
            self._footer(),
        ]
        return "\n\n".join(filter(None, sections))

    @property
    def passed(self) -> bool:
        ok = all(r.ok for r in self.reports.values())
        if self.certificate is not None:
            ok = ok and self.certificate.passed
        return ok

    def _header(self) -> str:
        return f"# {self.title}"

    def _settings_section(self) -> str:
        s = self.settings
        lines = [
            "## Settings",
            "",
            f"- max_dim: {s.max_dim}",
            f"- max_width: {s.max_width}",
            f"- max_size: {s.max_size}",
            f"- loop_mode: {s.loop_mode.value}",
            f"- variant: {s.variant.value}",
        ]
        return "\n".join(lines)

    def _facts_section(self) -> str:
        if not self.facts:
            return ""
        lines = ["## Facts", ""]
        lines.extend(f"- {key}: {value}" for key, value in self.facts.items())
        return "\n".join(lines)

    def _certificate_section(self) -> str:
        """Generate one table row per certificate step"""
        if self.certificate is None:
            return ""
        lines = [
            f"## Certificate {self.certificate.example}",
            "",
            "| step | result | detail |",
            "|---|---|---|",
        ]
        for check in self.certificate.checks:
            result = "pass" if check.passed else "FAIL"
            detail = check.detail.replace("|", r"\|")
            lines.append(f"| {check.name} | {result} | `{detail}` |")
        return "\n".join(lines)

    def _reports_section(self) -> str:
        if not self.reports:
            return ""
        lines = ["## Audits", ""]
        for name, report in self.reports.items():
            lines.append(f"### {name}")
            lines.append("")
            lines.append(f"{report.checked} checks, {len(report.violations)} violations")
            if report.violations:
                lines.append("")
                for v in report.violations:
                    detail = f": {v.detail}" if v.detail else ""
                    lines.append(f"- **{v.kind}** {v.subject}{detail}")
            lines.append("")
        return "\n".join(lines).rstrip()

    def _verdict_section(self) -> str:
        return f"## Verdict\n\n**{'PASS' if self.passed else 'FAIL'}**"

    def _footer(self) -> str:
        return f"---\n\n*Generated by omega-coend {__version__}*"


def generate_report(
    title: str,
    settings: Settings,
    reports: Optional[Dict[str, CheckReport]] = None,
    certificate: Optional[Certificate] = None,
    facts: Optional[Dict[str, str]] = None,
) -> str:
    """Convenience function to generate a report

    Returns:
        Complete Markdown report as string
    """
    return ReportGenerator(title, settings, reports, certificate, facts).generate()
