"""Elements of the local ring at the origin: polynomial fractions whose denominator is a unit."""

from __future__ import annotations

from collections.abc import Mapping, Sequence
from dataclasses import dataclass

from sympy import Rational
from sympy.polys.domains import QQ

from folres.algebra.frame import Frame, Poly
from folres.algebra.poly import divide_monomial, substitute, to_rational
from folres.exceptions import FrameMismatchError, NonUnitError

Scalar = int | Rational


@dataclass(frozen=True)
class LocalElement:
    """
    num/den with den(0) != 0, kept reduced: gcd(num, den) = 1 and den(0) = 1.

    Reduced form makes equality syntactic. Build through `of` or `from_poly`, never the raw constructor.
    """

    num: Poly
    den: Poly

    @classmethod
    def of(cls, num: Poly, den: Poly | None = None) -> LocalElement:
        if den is None:
            den = num.ring.one
        if num.ring != den.ring:
            raise FrameMismatchError("numerator and denominator live in different frames")
        if den.const() == 0:
            raise NonUnitError("denominator vanishes at the origin")
        if not num:
            return cls(num.ring.zero, num.ring.one)
        if den != num.ring.one:
            _, num, den = num.cofactors(den)
        c = den.const()
        if c != 1:
            num, den = num.quo_ground(c), den.quo_ground(c)
        return cls(num, den)

    @classmethod
    def from_poly(cls, f: Poly) -> LocalElement:
        return cls(f, f.ring.one)

    @classmethod
    def constant(cls, frame: Frame, value: Scalar) -> LocalElement:
        return cls.from_poly(frame.constant(value))

    @property
    def ring(self):
        return self.num.ring

    def is_zero(self) -> bool:
        return not self.num

    def is_polynomial(self) -> bool:
        return self.den == self.ring.one

    def is_constant(self) -> bool:
        return self.num.is_ground and self.den.is_ground

    def is_unit(self) -> bool:
        return self.num.const() != 0

    def value_at_origin(self) -> Rational:
        return to_rational(self.num.const())

    def _coerce(self, other: object) -> LocalElement:
        if isinstance(other, LocalElement):
            if other.ring != self.ring:
                raise FrameMismatchError("local elements live in different frames")
            return other
        if isinstance(other, Poly) and not isinstance(other, LocalElement):
            if other.ring != self.ring:
                raise FrameMismatchError("polynomial lives in a different frame")
            return LocalElement.from_poly(other)
        return LocalElement.from_poly(self.ring.ground_new(QQ.convert(other)))

    def __add__(self, other: object) -> LocalElement:
        o = self._coerce(other)
        if self.den == o.den:
            return LocalElement.of(self.num + o.num, self.den)
        return LocalElement.of(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self) -> LocalElement:
        return LocalElement(-self.num, self.den)

    def __sub__(self, other: object) -> LocalElement:
        return self + (-self._coerce(other))

    def __rsub__(self, other: object) -> LocalElement:
        return self._coerce(other) - self

    def __mul__(self, other: object) -> LocalElement:
        o = self._coerce(other)
        if self.is_zero() or o.is_zero():
            return LocalElement.from_poly(self.ring.zero)
        return LocalElement.of(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def derivative(self, index: int) -> LocalElement:
        x = self.ring.gens[index]
        if self.is_polynomial():
            return LocalElement.from_poly(self.num.diff(x))
        top = self.num.diff(x) * self.den - self.num * self.den.diff(x)
        return LocalElement.of(top, self.den * self.den)

    def unit_inverse(self) -> LocalElement:
        if not self.is_unit():
            raise NonUnitError("element vanishes at the origin and has no local inverse")
        return LocalElement.of(self.den, self.num)

    def __truediv__(self, other: object) -> LocalElement:
        return self * self._coerce(other).unit_inverse()

    def valuation(self, index: int) -> int | None:
        """Exponent of the largest power of variable `index` dividing the element; None for zero."""
        if self.is_zero():
            return None
        return min(m[index] for m in self.num.itermonoms())

    def divide_monomial(self, exponents: Sequence[int]) -> LocalElement:
        return LocalElement(divide_monomial(self.num, tuple(exponents)), self.den)

    def substitute(self, images: Sequence[Poly] | Mapping[str, Poly], source: Frame, target: Frame) -> LocalElement:
        num = substitute(self.num, images, source, target)
        if self.is_polynomial():
            return LocalElement.from_poly(num)
        den = substitute(self.den, images, source, target)
        if den.const() == 0:
            raise NonUnitError("substitution makes a denominator vanish at the target origin")
        return LocalElement.of(num, den)

    def scale_to_numerator(self) -> Poly:
        """The numerator: the element times the unit `den`, generating the same ideal locally."""
        return self.num
