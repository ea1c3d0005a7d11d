"""Helpers over sympy ring elements: cross-frame substitution, orders, monomial factors and formatting."""

from __future__ import annotations

from collections.abc import Iterable, Mapping, Sequence

from sympy import Rational
from sympy.polys.domains import QQ

from folres.algebra.frame import Frame, Poly
from folres.exceptions import AlgebraError, FrameMismatchError

Exponents = tuple[int, ...]


def to_rational(c: object) -> Rational:
    """Ground-domain coefficient to a sympy Rational."""
    return QQ.to_sympy(QQ.convert(c))


def derivative(f: Poly, frame: Frame, name: str) -> Poly:
    frame.require(f)
    return f.diff(frame.gen(name))


def value_at_origin(f: Poly) -> Rational:
    return to_rational(f.const())


def order_at_origin(f: Poly) -> int | None:
    """Lowest total degree among the terms of f; None for the zero polynomial."""
    if not f:
        return None
    return min(sum(m) for m in f.itermonoms())


def truncate(f: Poly, order: int) -> Poly:
    """Drop every term of total degree greater than `order`."""
    return f.ring.from_dict({m: c for m, c in f.iterterms() if sum(m) <= order})


def substitute(f: Poly, images: Sequence[Poly] | Mapping[str, Poly], source: Frame, target: Frame) -> Poly:
    """
    Compose f (in `source`) with a polynomial map sending each source variable to a `target` polynomial.

    A mapping may omit variables that keep their name in the target frame.
    """
    source.require(f)
    if isinstance(images, Mapping):
        ordered = [images[n] if n in images else target.gen(n) for n in source.names]
    else:
        ordered = list(images)
    if len(ordered) != source.dimension:
        raise FrameMismatchError("substitution must assign an image to every source variable")
    target.require(*ordered)

    powers: list[dict[int, Poly]] = [{0: target.one, 1: g} for g in ordered]

    def power(i: int, e: int) -> Poly:
        cache = powers[i]
        if e not in cache:
            half = power(i, e // 2)
            cache[e] = half * half if e % 2 == 0 else half * half * ordered[i]
        return cache[e]

    result = target.zero
    for monom, coeff in f.iterterms():
        term = target.constant(coeff)
        for i, e in enumerate(monom):
            if e:
                term = term * power(i, e)
        result += term
    return result


def monomial_factor(f: Poly, frame: Frame, names: Iterable[str] | None = None) -> Exponents:
    """Exponents of the largest monomial in `names` (default: all variables) dividing f; zeros for f = 0."""
    frame.require(f)
    allowed = set(frame.names if names is None else names)
    if not f:
        return tuple(0 for _ in frame.names)
    monoms = list(f.itermonoms())
    return tuple(min(m[i] for m in monoms) if n in allowed else 0 for i, n in enumerate(frame.names))


def common_monomial(polys: Iterable[Poly], frame: Frame, names: Iterable[str] | None = None) -> Exponents:
    """Exponents of the largest monomial in `names` dividing every nonzero poly."""
    factors = [monomial_factor(p, frame, names) for p in polys if p]
    if not factors:
        return tuple(0 for _ in frame.names)
    return tuple(min(col) for col in zip(*factors, strict=True))


def divide_monomial(f: Poly, exponents: Exponents) -> Poly:
    """Exact division of f by the monomial with the given exponents."""
    out = {}
    for m, c in f.iterterms():
        q = tuple(a - b for a, b in zip(m, exponents, strict=True))
        if min(q, default=0) < 0:
            raise AlgebraError("monomial does not divide the polynomial", code="algebra.not_divisible")
        out[q] = c
    return f.ring.from_dict(out)


def monomial_times_unit(f: Poly, frame: Frame, names: Iterable[str] | None = None) -> tuple[Exponents, Poly] | None:
    """Split f = x^a * U with U(0) != 0 and x^a a monomial in `names`, or None when no such split exists."""
    if not f:
        return None
    exps = monomial_factor(f, frame, names)
    unit = divide_monomial(f, exps)
    if unit.const() == 0:
        return None
    return exps, unit


def support(f: Poly, frame: Frame) -> tuple[str, ...]:
    """Variables occurring in f, in frame order."""
    present = [False] * frame.dimension
    for m in f.itermonoms():
        for i, e in enumerate(m):
            if e:
                present[i] = True
    return tuple(n for n, p in zip(frame.names, present, strict=True) if p)


def coefficients_in(f: Poly, frame: Frame, name: str) -> dict[int, Poly]:
    """Split f = sum_k name^k * c_k with every c_k free of `name`."""
    i = frame.index(name)
    buckets: dict[int, dict[Exponents, object]] = {}
    for m, c in f.iterterms():
        k = m[i]
        rest = m[:i] + (0,) + m[i + 1 :]
        buckets.setdefault(k, {})[rest] = c
    return {k: f.ring.from_dict(terms) for k, terms in buckets.items()}


def format_rational(c: object) -> str:
    r = to_rational(c)
    return str(r.p) if r.q == 1 else f"{r.p}/{r.q}"


def format_monomial(monom: Exponents, frame: Frame) -> str:
    parts = []
    for name, e in zip(frame.names, monom, strict=True):
        if e == 1:
            parts.append(name)
        elif e > 1:
            parts.append(f"{name}^{e}")
    return "*".join(parts)


def format_poly(f: Poly, frame: Frame) -> str:
    """Render f in the problem-file grammar, terms in descending graded reverse lexicographic order."""
    frame.require(f)
    if not f:
        return "0"
    chunks: list[str] = []
    for monom, coeff in f.terms():
        r = to_rational(coeff)
        negative = r < 0
        magnitude = -r if negative else r
        mono = format_monomial(monom, frame)
        if not mono:
            body = format_rational(magnitude)
        elif magnitude == 1:
            body = mono
        else:
            body = f"{format_rational(magnitude)}*{mono}"
        if not chunks:
            chunks.append(f"-{body}" if negative else body)
        else:
            chunks.append(f" - {body}" if negative else f" + {body}")
    return "".join(chunks)


def antiderivative(f: Poly, frame: Frame, name: str) -> Poly:
    """The primitive F of f in one variable with F vanishing on {name = 0}."""
    i = frame.index(name)
    out = {}
    for m, c in f.iterterms():
        k = m[i] + 1
        out[m[:i] + (k,) + m[i + 1 :]] = c / k
    return f.ring.from_dict(out)
