"""Truncated power series: polynomials modulo total degree N+1."""

from __future__ import annotations

from dataclasses import dataclass

from folres.algebra.frame import Poly
from folres.algebra.poly import truncate
from folres.exceptions import FrameMismatchError, NonUnitError


@dataclass(frozen=True)
class Jet:
    poly: Poly
    order: int

    @classmethod
    def of(cls, poly: Poly, order: int) -> Jet:
        return cls(truncate(poly, order), order)

    def _check(self, other: Jet) -> int:
        if other.poly.ring != self.poly.ring:
            raise FrameMismatchError("jets live in different frames")
        return min(self.order, other.order)

    def __add__(self, other: Jet) -> Jet:
        return Jet.of(self.poly + other.poly, self._check(other))

    def __sub__(self, other: Jet) -> Jet:
        return Jet.of(self.poly - other.poly, self._check(other))

    def __mul__(self, other: Jet) -> Jet:
        order = self._check(other)
        return Jet.of(truncate(self.poly, order) * truncate(other.poly, order), order)

    def is_zero(self) -> bool:
        return not self.poly


def jet_inverse(u: Poly, order: int) -> Jet:
    """Degree-`order` truncation of 1/u, by Newton doubling v <- v(2 - u v)."""
    c = u.const()
    if c == 0:
        raise NonUnitError("series inverse needs a nonzero constant term")
    ring = u.ring
    v = ring.ground_new(ring.domain.one / c)
    precision = 1
    while precision <= order:
        precision = min(2 * precision, order + 1)
        uv = truncate(truncate(u, precision - 1) * v, precision - 1)
        v = truncate(v * (ring.ground_new(2) - uv), precision - 1)
    return Jet(v, order)
