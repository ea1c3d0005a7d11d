"""Splitting polynomials into eigen-blocks of diagonal fields and degree blocks of coordinate fields."""

from __future__ import annotations

from dataclasses import dataclass

from sympy import Rational

from folres.algebra.frame import Frame, Poly
from folres.algebra.poly import coefficients_in, to_rational
from folres.exceptions import UnsupportedDerivationError
from folres.foliation.derivation import Derivation
from folres.foliation.distribution import Distribution
from folres.ideals import FGIdeal


@dataclass(frozen=True)
class EigenBlock:
    """
    For a diagonal field, d(block) = eigenvalue * block. For a coordinate field d/dw the blocks are the
    w-degree pieces, reported with eigenvalue 0 and their `degree`.
    """

    eigenvalue: Rational
    block: Poly
    degree: int | None = None


def diagonal_weights(d: Derivation) -> tuple[Rational, ...] | None:
    """alpha when d = sum(alpha_i x_i d/dx_i) exactly, else None."""
    frame = d.frame
    weights = []
    for i, c in enumerate(d.coefficients):
        if c.is_zero():
            weights.append(Rational(0))
            continue
        if not c.is_polynomial() or len(c.num) != 1:
            return None
        monom = next(iter(c.num.itermonoms()))
        if monom != tuple(1 if k == i else 0 for k in range(frame.dimension)):
            return None
        weights.append(to_rational(c.num.LC))
    return tuple(weights)


def coordinate_direction(d: Derivation) -> str | None:
    """w when d is exactly d/dw."""
    for name in d.frame.names:
        if d == Derivation.partial(d.frame, name):
            return name
    return None


def eigen_blocks(d: Derivation, f: Poly) -> list[EigenBlock]:
    frame = d.frame
    frame.require(f)
    weights = diagonal_weights(d)
    if weights is not None:
        buckets: dict[Rational, dict] = {}
        for m, c in f.iterterms():
            zeta = sum((w * e for w, e in zip(weights, m, strict=True)), Rational(0))
            buckets.setdefault(zeta, {})[m] = c
        return [EigenBlock(z, f.ring.from_dict(buckets[z])) for z in sorted(buckets)]
    w = coordinate_direction(d)
    if w is not None:
        parts = coefficients_in(f, frame, w)
        index = frame.index(w)
        out = []
        for k in sorted(parts):
            shift = tuple(k if i == index else 0 for i in range(frame.dimension))
            out.append(EigenBlock(Rational(0), parts[k].mul_monom(shift), k))
        return out
    raise UnsupportedDerivationError(
        f"{d.formatted()} is neither diagonal nor a coordinate field", context={"derivation": d.formatted()}
    )


def _split(d: Derivation, f: Poly, frame: Frame) -> list[Poly]:
    """Pieces of f that generate, together, the d-invariant part of (f)."""
    w = coordinate_direction(d)
    if w is not None:
        # the w-coefficients c_k, i.e. (d^k f)|_{w=0} / k!
        return [c for _, c in sorted(coefficients_in(f, frame, w).items())]
    return [b.block for b in eigen_blocks(d, f)]


def invariant_generators(theta: Distribution, ideal: FGIdeal) -> FGIdeal:
    """
    Generators each scaled-invariant under every generator of theta: coordinate fields first (their
    Taylor coefficients), then each diagonal field splits the pieces into eigen-blocks.
    """
    frame = ideal.frame
    coordinate = [d for d in theta.generators if coordinate_direction(d) is not None]
    diagonal = [d for d in theta.generators if coordinate_direction(d) is None]
    for d in diagonal:
        if diagonal_weights(d) is None:
            raise UnsupportedDerivationError(
                f"{d.formatted()} is neither diagonal nor a coordinate field", context={"derivation": d.formatted()}
            )
    pieces = list(ideal.generators)
    for d in [*coordinate, *diagonal]:
        pieces = [p for g in pieces for p in _split(d, g, frame)]
    return FGIdeal.of(frame, pieces)
