"""
Problem files: the coordinates with the divisor, the distribution and the ideal, in `;`-separated sections.

    # a tangency example, n = 3
    vars x! y z;
    theta d/dy, d/dz;
    ideal y^2 + x*z^3 + x^4;
    center x,z;                      # optional, used by `admissible` and `blowup`
    options jet_order=8, seed=0      # optional driver options
"""

from __future__ import annotations

import logging
import re
from dataclasses import dataclass, field
from pathlib import Path

import pyparsing as pp

from folres.algebra.frame import Frame
from folres.algebra.poly import format_poly
from folres.exceptions import InputError, ParseError
from folres.foliation import Distribution
from folres.ideals import FGIdeal
from folres.io.grammar import format_names, parse_derivations, parse_error, parse_names, parse_polynomials, parse_variables

logger = logging.getLogger(__name__)

SECTIONS = ("vars", "theta", "ideal", "center", "options")
REQUIRED = ("vars", "theta", "ideal")

_KEYWORD = pp.one_of(SECTIONS, as_keyword=True)
_BODY = pp.Regex(r"[^;]*").set_parse_action(lambda s, loc, toks: [(loc, toks[0])])
_SECTION = pp.Group(_KEYWORD + pp.Optional(_BODY, default=None))
_PROBLEM = pp.Optional(pp.DelimitedList(_SECTION, ";", allow_trailing_delim=True)) + pp.StringEnd()


@dataclass(frozen=True)
class ProblemFile:
    """A foliated ideal sheaf at the origin of one chart: (frame with divisor, theta, I)."""

    frame: Frame
    theta: Distribution
    ideal: FGIdeal
    center: tuple[str, ...] | None = None
    options: dict[str, str] = field(default_factory=dict)
    source: str | None = None

    @property
    def dimension(self) -> int:
        return self.frame.dimension

    def to_text(self) -> str:
        """Canonical problem text; parsing it gives back the same problem."""
        lines = [
            f"vars {self.frame.describe()};",
            f"theta {', '.join(self.theta.formatted())};",
            f"ideal {', '.join(format_poly(g, self.frame) for g in self.ideal.generators)};",
        ]
        if self.center:
            lines.append(f"center {format_names(self.center)};")
        if self.options:
            lines.append("options " + ", ".join(f"{k}={v}" for k, v in self.options.items()) + ";")
        return "\n".join(lines) + "\n"


def _strip_comments(text: str) -> str:
    """Blank out `#` comments, keeping every offset in place."""
    return re.sub(r"#[^\n]*", lambda m: " " * len(m.group()), text)


def _reposition(exc: ParseError, document: str, base: int) -> ParseError:
    context = dict(exc.context)
    loc = base + int(context.pop("offset", 0))
    reason = context.pop("reason", exc.message)
    context.pop("line", None)
    context.pop("column", None)
    return parse_error(document, loc, reason, type(exc), **context)


def _parse_options(body: str, document: str, base: int) -> dict[str, str]:
    out: dict[str, str] = {}
    for chunk in body.split(","):
        if not chunk.strip():
            continue
        key, sep, value = chunk.partition("=")
        if not sep or not key.strip() or not value.strip():
            raise parse_error(document, base, f"option {chunk.strip()!r} is not of the form name=value")
        out[key.strip()] = value.strip()
    return out


def parse_problem(text: str, *, source: str | None = None) -> ProblemFile:
    """Validated problem, or a ParseError carrying the line and column of the offending text."""
    document = _strip_comments(text)
    try:
        tokens = _PROBLEM.parse_string(document, parse_all=True)
    except pp.ParseException as exc:
        raise parse_error(document, exc.loc, f"expected one of {', '.join(SECTIONS)}: {exc.msg}") from exc

    bodies: dict[str, tuple[int, str]] = {}
    for group in tokens:
        key, located = group[0], group[1]
        loc, body = located if located is not None else (len(document), "")
        if key in bodies:
            raise parse_error(document, loc, f"section {key!r} given twice")
        bodies[key] = (loc, body)
    for key in REQUIRED:
        if key not in bodies:
            raise ParseError(f"missing section {key!r}", context={"section": key})

    def section(key: str, parse):
        loc, body = bodies[key]
        try:
            return parse(body)
        except ParseError as exc:
            raise _reposition(exc, document, loc) from exc

    frame = section("vars", parse_variables)
    generators = section("ideal", lambda b: parse_polynomials(b, frame))
    if not generators:
        raise parse_error(document, bodies["ideal"][0], "ideal required")
    ideal = FGIdeal.of(frame, generators)
    fields = section("theta", lambda b: parse_derivations(b, frame))
    theta = Distribution.of(frame, fields)
    center = None
    if "center" in bodies:
        center = tuple(section("center", lambda b: parse_names(b, frame)))
    options = {}
    if "options" in bodies:
        loc, body = bodies["options"]
        options = _parse_options(body, document, loc)
    problem = ProblemFile(frame, theta, ideal, center, options, source)
    logger.debug(f"parsed problem in {frame.describe()}: theta={theta!r}, ideal={ideal!r}")
    return problem


def load_problem(path: Path) -> ProblemFile:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise InputError(f"cannot read problem file {path}", code="input.unreadable", context={"path": str(path)}) from exc
    return parse_problem(text, source=str(path))
