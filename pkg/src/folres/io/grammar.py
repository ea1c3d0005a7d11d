"""
Text grammar for polynomials and derivations over a chart frame.

    expr    :: term (('+' | '-') term)*
    term    :: factor (('*' | '/') factor)*
    factor  :: ('-' | '+') factor | atom ('^' integer)?
    atom    :: integer | 'd/d' name | name | '(' expr ')'

Coefficients are exact rationals: `3/2*x^2*y`. Division is by nonzero numbers, except that a derivation
coefficient may be divided by a polynomial that does not vanish at the origin: `(x)/(1+z)*d/dx`.
"""

from __future__ import annotations

from collections.abc import Callable, Iterable
from dataclasses import dataclass
from typing import Any

import pyparsing as pp
from sympy import Integer, Rational

from folres.algebra.frame import Frame, Poly
from folres.algebra.local import LocalElement
from folres.exceptions import NonRationalCoefficientError, NonUnitError, ParseError, UnknownVariableError
from folres.foliation.derivation import Derivation

pp.ParserElement.enable_packrat()

IDENTIFIER = pp.Regex(r"[A-Za-z_][A-Za-z0-9_]*")


@dataclass(frozen=True)
class Node:
    """Syntax tree node; `loc` is the offset of the node's text in the parsed string."""

    kind: str
    loc: int
    value: Any = None
    children: tuple[Node, ...] = ()


def _leaf(kind: str, convert: Callable[[str], Any] = str) -> Callable[[str, int, pp.ParseResults], Node]:
    def action(s: str, loc: int, toks: pp.ParseResults) -> Node:
        return Node(kind, loc, convert(toks[0]))

    return action


def _unary(s: str, loc: int, toks: pp.ParseResults) -> Node:
    op, operand = toks[0]
    return Node("neg" if op == "-" else "pos", loc, None, (operand,))


def _chain(s: str, loc: int, toks: pp.ParseResults) -> Node:
    """Left-associative `a op b op c` as nested binary nodes."""
    items = list(toks[0])
    node = items[0]
    for op, rhs in zip(items[1::2], items[2::2], strict=True):
        node = Node(op, loc, None, (node, rhs))
    return node


def _power(s: str, loc: int, toks: pp.ParseResults) -> Node:
    items = list(toks[0])
    node = items[-1]
    for base in reversed(items[:-2:2]):
        node = Node("^", loc, None, (base, node))
    return node


def _build_expression() -> pp.ParserElement:
    decimal = pp.Regex(r"\d+\.\d*|\.\d+|\d+[eE][+-]?\d+").set_parse_action(_leaf("decimal"))
    integer = pp.Regex(r"\d+").set_parse_action(_leaf("number", lambda t: Integer(int(t))))
    partial = pp.Regex(r"d/d([A-Za-z_][A-Za-z0-9_]*)").set_parse_action(_leaf("partial", lambda t: t[3:]))
    call = (IDENTIFIER + pp.Suppress(pp.nested_expr())).set_parse_action(_leaf("call"))
    name = IDENTIFIER.copy().set_parse_action(_leaf("var"))
    atom = decimal | integer | partial | call | name
    return pp.infix_notation(
        atom,
        [
            (pp.Literal("^"), 2, pp.OpAssoc.RIGHT, _power),
            (pp.one_of("- +"), 1, pp.OpAssoc.RIGHT, _unary),
            (pp.one_of("* /"), 2, pp.OpAssoc.LEFT, _chain),
            (pp.one_of("+ -"), 2, pp.OpAssoc.LEFT, _chain),
        ],
    )


EXPRESSION = _build_expression()
EXPRESSION_LIST = pp.Optional(pp.DelimitedList(EXPRESSION, ","))


def parse_error(text: str, loc: int, message: str, cls: type[ParseError] = ParseError, **extra: Any) -> ParseError:
    """ParseError positioned at offset `loc` of `text`."""
    line = pp.lineno(loc, text) if text else 1
    column = pp.col(loc, text) if text else 1
    return cls(
        f"{message} (line {line}, column {column})",
        context={"line": line, "column": column, "offset": loc, "reason": message, **extra},
    )


def parse_nodes(text: str, *, many: bool = False) -> list[Node]:
    """Syntax trees of one expression, or of a comma-separated list when `many`."""
    grammar = EXPRESSION_LIST if many else EXPRESSION
    try:
        result = (grammar + pp.StringEnd()).parse_string(text, parse_all=True)
    except pp.ParseException as exc:
        raise parse_error(text, exc.loc, f"syntax error: {exc.msg}") from exc
    return list(result)


class _Evaluator:
    """Folds a syntax tree into a LocalElement (function) or a {name: LocalElement} map (derivation)."""

    def __init__(self, frame: Frame, text: str, *, derivations: bool) -> None:
        self.frame = frame
        self.text = text
        self.derivations = derivations

    def error(self, node: Node, message: str, cls: type[ParseError] = ParseError, **extra: Any) -> ParseError:
        return parse_error(self.text, node.loc, message, cls, **extra)

    def scalar(self, value: Rational | int) -> LocalElement:
        return LocalElement.constant(self.frame, value)

    def eval(self, node: Node) -> LocalElement | dict[str, LocalElement]:
        kind = node.kind
        if kind == "number":
            return self.scalar(node.value)
        if kind == "decimal":
            raise self.error(node, f"coefficient {node.value!r} is not an exact rational", NonRationalCoefficientError)
        if kind == "call":
            raise self.error(node, f"function {node.value}(...) is not a polynomial", NonRationalCoefficientError)
        if kind == "var":
            if node.value not in self.frame.names:
                raise self.error(node, f"unknown variable {node.value!r}", UnknownVariableError, name=node.value)
            return LocalElement.from_poly(self.frame.gen(node.value))
        if kind == "partial":
            if not self.derivations:
                raise self.error(node, f"d/d{node.value} is not allowed in a polynomial")
            if node.value not in self.frame.names:
                raise self.error(node, f"unknown variable {node.value!r}", UnknownVariableError, name=node.value)
            return {node.value: self.scalar(1)}
        args = [self.eval(c) for c in node.children]
        if kind == "pos":
            return args[0]
        if kind == "neg":
            return _scale(args[0], self.scalar(-1))
        if kind in ("+", "-"):
            return self.add(node, args[0], args[1], -1 if kind == "-" else 1)
        if kind == "*":
            return self.mul(node, args[0], args[1])
        if kind == "/":
            return self.div(node, args[0], args[1])
        if kind == "^":
            return self.power(node, args[0], args[1])
        raise self.error(node, f"unexpected syntax {kind!r}")

    def add(self, node: Node, a: Any, b: Any, sign: int) -> LocalElement | dict[str, LocalElement]:
        if isinstance(a, dict) != isinstance(b, dict):
            raise self.error(node, "cannot add a function and a derivation")
        if isinstance(a, dict):
            out = dict(a)
            for n, c in b.items():
                out[n] = out.get(n, self.scalar(0)) + c * sign
            return out
        return a + b * sign

    def mul(self, node: Node, a: Any, b: Any) -> LocalElement | dict[str, LocalElement]:
        if isinstance(a, dict) and isinstance(b, dict):
            raise self.error(node, "cannot multiply two derivations")
        if isinstance(a, dict):
            return _scale(a, b)
        if isinstance(b, dict):
            return _scale(b, a)
        return a * b

    def div(self, node: Node, a: Any, b: Any) -> LocalElement | dict[str, LocalElement]:
        if isinstance(b, dict):
            raise self.error(node, "cannot divide by a derivation")
        if b.is_constant():
            if b.is_zero():
                raise self.error(node, "division by zero")
        elif not self.derivations:
            raise self.error(node, "division is only by nonzero rational numbers")
        try:
            inverse = self.scalar(1) / b
        except NonUnitError as exc:
            raise self.error(node, "denominator vanishes at the origin") from exc
        return _scale(a, inverse) if isinstance(a, dict) else a * inverse

    def power(self, node: Node, base: Any, exponent: Any) -> LocalElement:
        if isinstance(base, dict) or isinstance(exponent, dict):
            raise self.error(node, "derivations cannot be raised to a power")
        value = exponent.value_at_origin() if exponent.is_constant() else None
        if value is None or not value.is_integer or value < 0:
            raise self.error(node, "exponents must be non-negative integers")
        out = self.scalar(1)
        for _ in range(int(value)):
            out = out * base
        return out


def _scale(value: LocalElement | dict[str, LocalElement], factor: LocalElement) -> LocalElement | dict[str, LocalElement]:
    if isinstance(value, dict):
        return {n: c * factor for n, c in value.items()}
    return value * factor


def _as_poly(evaluator: _Evaluator, node: Node) -> Poly:
    value = evaluator.eval(node)
    if isinstance(value, dict):
        raise evaluator.error(node, "expected a polynomial, found a derivation")
    if not value.is_polynomial():
        raise evaluator.error(node, "expected a polynomial")
    return value.num


def _as_derivation(evaluator: _Evaluator, node: Node) -> Derivation:
    value = evaluator.eval(node)
    if not isinstance(value, dict):
        if value.is_zero():
            return Derivation.zero(evaluator.frame)
        raise evaluator.error(node, "expected a derivation such as x*d/dx")
    return Derivation.of(evaluator.frame, value)


def parse_polynomial(text: str, frame: Frame) -> Poly:
    """`3/2*x^2*y - z` as a polynomial of the frame."""
    (node,) = parse_nodes(text)
    return _as_poly(_Evaluator(frame, text, derivations=False), node)


def parse_polynomials(text: str, frame: Frame) -> list[Poly]:
    evaluator = _Evaluator(frame, text, derivations=False)
    return [_as_poly(evaluator, n) for n in parse_nodes(text, many=True)]


def parse_derivation(text: str, frame: Frame) -> Derivation:
    """`x*d/dx - y*d/dy` as a derivation of the frame."""
    (node,) = parse_nodes(text)
    return _as_derivation(_Evaluator(frame, text, derivations=True), node)


def parse_derivations(text: str, frame: Frame) -> list[Derivation]:
    evaluator = _Evaluator(frame, text, derivations=True)
    return [_as_derivation(evaluator, n) for n in parse_nodes(text, many=True)]


def parse_variables(text: str) -> Frame:
    """`x! y z` (or comma separated): names in order, a trailing `!` marks an exceptional coordinate."""
    entry = pp.Combine(IDENTIFIER + pp.Optional("!"))
    grammar = pp.OneOrMore(entry + pp.Optional(pp.Suppress(",")))
    try:
        tokens = list((grammar + pp.StringEnd()).parse_string(text, parse_all=True))
    except pp.ParseException as exc:
        raise parse_error(text, exc.loc, f"syntax error in variable list: {exc.msg}") from exc
    names = [t.rstrip("!") for t in tokens]
    duplicates = sorted({n for n in names if names.count(n) > 1})
    if duplicates:
        raise ParseError(f"variable {duplicates[0]!r} declared twice", context={"name": duplicates[0]})
    return Frame.of(names, (t.rstrip("!") for t in tokens if t.endswith("!")))


def parse_names(text: str, frame: Frame | None = None) -> list[str]:
    """Comma separated names such as a center `x,z`; checked against `frame` when given."""
    names = [n.strip() for n in text.split(",") if n.strip()]
    for n in names:
        if not IDENTIFIER.matches(n):
            raise ParseError(f"{n!r} is not a variable name", context={"name": n})
        if frame is not None and n not in frame.names:
            raise UnknownVariableError(f"unknown variable {n!r}", context={"name": n})
    return names


def format_names(names: Iterable[str]) -> str:
    return ",".join(names)
