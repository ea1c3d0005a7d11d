"""Derivations with local-ring coefficients, Lie brackets and polynomial coordinate changes."""

from __future__ import annotations

from collections.abc import Mapping, Sequence
from dataclasses import dataclass

from sympy import Matrix, Rational

from folres.algebra.frame import Frame, Poly
from folres.algebra.local import LocalElement
from folres.algebra.poly import format_poly, substitute, to_rational
from folres.exceptions import FrameMismatchError, InputError

Coefficient = LocalElement | Poly | int | Rational


def _as_local(frame: Frame, value: Coefficient) -> LocalElement:
    if isinstance(value, LocalElement):
        if value.ring != frame.ring:
            raise FrameMismatchError("coefficient belongs to a different frame")
        return value
    if isinstance(value, Poly):
        frame.require(value)
        return LocalElement.from_poly(value)
    return LocalElement.constant(frame, value)


@dataclass(frozen=True)
class Derivation:
    """sum(coefficients[i] * d/d frame.names[i])."""

    frame: Frame
    coefficients: tuple[LocalElement, ...]

    def __post_init__(self) -> None:
        if len(self.coefficients) != self.frame.dimension:
            raise FrameMismatchError(
                "derivation needs one coefficient per frame variable",
                context={"expected": self.frame.dimension, "got": len(self.coefficients)},
            )

    @classmethod
    def of(cls, frame: Frame, coefficients: Sequence[Coefficient] | Mapping[str, Coefficient]) -> Derivation:
        if isinstance(coefficients, Mapping):
            unknown = set(coefficients) - set(frame.names)
            if unknown:
                raise InputError("derivation names unknown variables", context={"names": ",".join(sorted(unknown))})
            values = [coefficients.get(n, 0) for n in frame.names]
        else:
            values = list(coefficients)
        return cls(frame, tuple(_as_local(frame, c) for c in values))

    @classmethod
    def zero(cls, frame: Frame) -> Derivation:
        return cls.of(frame, [0] * frame.dimension)

    @classmethod
    def partial(cls, frame: Frame, name: str) -> Derivation:
        return cls.of(frame, {name: 1})

    @classmethod
    def diagonal(cls, frame: Frame, weights: Sequence[Rational | int]) -> Derivation:
        """sum(weights[i] * x_i * d/dx_i)."""
        return cls.of(frame, [frame.monomial(_unit_vector(frame.dimension, i), w) for i, w in enumerate(weights)])

    def coefficient(self, name: str) -> LocalElement:
        return self.coefficients[self.frame.index(name)]

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.coefficients)

    def is_polynomial(self) -> bool:
        return all(c.is_polynomial() for c in self.coefficients)

    def _check(self, other: Derivation) -> None:
        if other.frame.names != self.frame.names:
            raise FrameMismatchError("derivations live in different frames")

    def __add__(self, other: Derivation) -> Derivation:
        self._check(other)
        return Derivation(self.frame, tuple(a + b for a, b in zip(self.coefficients, other.coefficients, strict=True)))

    def __sub__(self, other: Derivation) -> Derivation:
        self._check(other)
        return Derivation(self.frame, tuple(a - b for a, b in zip(self.coefficients, other.coefficients, strict=True)))

    def __neg__(self) -> Derivation:
        return Derivation(self.frame, tuple(-c for c in self.coefficients))

    def scaled(self, factor: Coefficient) -> Derivation:
        f = _as_local(self.frame, factor)
        return Derivation(self.frame, tuple(f * c for c in self.coefficients))

    def with_frame(self, frame: Frame) -> Derivation:
        if frame.names != self.frame.names:
            raise FrameMismatchError("with_frame only relabels exceptional flags")
        return Derivation(frame, self.coefficients)

    def apply(self, f: LocalElement | Poly) -> LocalElement:
        """sum(c_i * df/dx_i)."""
        g = _as_local(self.frame, f)
        total = LocalElement.from_poly(self.frame.zero)
        for i, c in enumerate(self.coefficients):
            if not c.is_zero():
                total = total + c * g.derivative(i)
        return total

    def apply_poly(self, f: Poly) -> Poly:
        """A polynomial generating the same local ideal as the derivative of f (its numerator)."""
        return self.apply(f).scale_to_numerator()

    def value_at_origin(self) -> tuple[Rational, ...]:
        return tuple(c.value_at_origin() for c in self.coefficients)

    def is_singular(self) -> bool:
        return all(v == 0 for v in self.value_at_origin())

    def linear_part(self) -> Matrix:
        """Jacobian of the coefficient vector at the origin: row i holds d(c_i)/dx_j(0)."""
        n = self.frame.dimension
        rows = []
        for c in self.coefficients:
            row = []
            for j in range(n):
                row.append(c.derivative(j).value_at_origin())
            rows.append(row)
        return Matrix(n, n, lambda i, j: rows[i][j])

    def polynomial_multiple(self) -> Derivation:
        """The derivation times the product of its distinct denominators (a unit), so every coefficient is polynomial."""
        dens: list[Poly] = []
        for c in self.coefficients:
            if not c.is_polynomial() and c.den not in dens:
                dens.append(c.den)
        if not dens:
            return self
        factor = self.frame.one
        for d in dens:
            factor = factor * d
        return self.scaled(factor)

    def formatted(self) -> str:
        chunks: list[str] = []
        for name, c in zip(self.frame.names, self.coefficients, strict=True):
            if c.is_zero():
                continue
            op = f"d/d{name}"
            sign, body = _coefficient_text(c, self.frame)
            term = op if body == "1" else f"{body}*{op}"
            if not chunks:
                chunks.append(f"-{term}" if sign < 0 else term)
            else:
                chunks.append(f" - {term}" if sign < 0 else f" + {term}")
        return "".join(chunks) if chunks else "0"

    def __repr__(self) -> str:
        return f"Derivation({self.formatted()})"


def _unit_vector(n: int, i: int) -> tuple[int, ...]:
    return tuple(1 if k == i else 0 for k in range(n))


def _coefficient_text(c: LocalElement, frame: Frame) -> tuple[int, str]:
    if not c.is_polynomial():
        return 1, f"({format_poly(c.num, frame)})/({format_poly(c.den, frame)})"
    p = c.num
    if len(p) == 1:
        sign = -1 if to_rational(p.LC) < 0 else 1
        return sign, format_poly(p * sign, frame)
    return 1, f"({format_poly(p, frame)})"


def lie_bracket(a: Derivation, b: Derivation) -> Derivation:
    """[a, b] with coefficients a(b_i) - b(a_i)."""
    a._check(b)
    return Derivation(a.frame, tuple(a.apply(bc) - b.apply(ac) for ac, bc in zip(a.coefficients, b.coefficients, strict=True)))


@dataclass(frozen=True)
class CoordinateChange:
    """
    A polynomial automorphism of one chart frame: old = forward(new), new = inverse(old).

    Both lists are indexed by frame variables; coordinates keep their names across the change.
    """

    frame: Frame
    forward: tuple[Poly, ...]
    inverse: tuple[Poly, ...]

    @classmethod
    def identity(cls, frame: Frame) -> CoordinateChange:
        gens = tuple(frame.ring.gens)
        return cls(frame, gens, gens)

    @classmethod
    def translation(cls, frame: Frame, shifts: Mapping[str, Rational | int]) -> CoordinateChange:
        """old = new + shift for each listed variable."""
        forward = tuple(frame.gen(n) + frame.constant(shifts.get(n, 0)) for n in frame.names)
        inverse = tuple(frame.gen(n) - frame.constant(shifts.get(n, 0)) for n in frame.names)
        return cls(frame, forward, inverse)

    def is_identity(self) -> bool:
        return self.forward == tuple(self.frame.ring.gens)

    def then(self, other: CoordinateChange) -> CoordinateChange:
        """Apply self first, then other (other's old coordinates are self's new ones)."""
        forward = tuple(substitute(p, other.forward, self.frame, self.frame) for p in self.forward)
        inverse = tuple(substitute(p, self.inverse, self.frame, self.frame) for p in other.inverse)
        return CoordinateChange(self.frame, forward, inverse)

    def pull(self, f: Poly) -> Poly:
        """f written in the new coordinates."""
        return substitute(f, self.forward, self.frame, self.frame)

    def push_back(self, f: Poly) -> Poly:
        """f in new coordinates written in the old ones."""
        return substitute(f, self.inverse, self.frame, self.frame)

    def moved(self) -> tuple[str, ...]:
        gens = self.frame.ring.gens
        return tuple(n for n, p, g in zip(self.frame.names, self.forward, gens, strict=True) if p != g)

    def formatted(self) -> dict[str, str]:
        return {n: format_poly(p, self.frame) for n, p in zip(self.frame.names, self.forward, strict=True)}


def change_coordinates(d: Derivation, change: CoordinateChange) -> Derivation:
    """The derivation in the new coordinates: coefficient j is d(inverse_j) composed with forward."""
    frame = change.frame
    coefficients = []
    for psi in change.inverse:
        image = d.apply(psi)
        coefficients.append(image.substitute(change.forward, frame, frame))
    return Derivation(d.frame, tuple(coefficients))
