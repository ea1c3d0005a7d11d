"""Singular distributions: generator lists of derivations tangent to a normal-crossings divisor."""

from __future__ import annotations

from collections.abc import Iterable, Sequence
from dataclasses import dataclass

from sympy import Matrix
from sympy.polys.matrices import DomainMatrix

from folres.algebra.frame import Frame, Poly
from folres.exceptions import FrameMismatchError, InputError
from folres.foliation.derivation import Derivation
from folres.ideals import LOCAL, FGIdeal, MembershipBackend, is_contained


@dataclass(frozen=True)
class SNCDivisor:
    """Union of the coordinate hyperplanes {x_i = 0} for i in `components`."""

    dimension: int
    components: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(set(self.components)) != len(self.components):
            raise InputError("divisor components must be distinct")
        if any(i < 0 or i >= self.dimension for i in self.components):
            raise InputError("divisor component outside the frame", context={"dimension": self.dimension})

    @classmethod
    def from_frame(cls, frame: Frame) -> SNCDivisor:
        return cls(frame.dimension, tuple(frame.index(n) for n in frame.exceptional_names))

    @classmethod
    def of(cls, frame: Frame, names: Iterable[str]) -> SNCDivisor:
        return cls(frame.dimension, tuple(sorted(frame.index(n) for n in set(names))))

    def names(self, frame: Frame) -> tuple[str, ...]:
        return tuple(frame.names[i] for i in self.components)


def tangent_to_hyperplane(d: Derivation, index: int) -> bool:
    c = d.coefficients[index]
    return c.is_zero() or (c.valuation(index) or 0) >= 1


def check_tangent(d: Derivation, divisor: SNCDivisor) -> bool:
    """True iff every component variable u has a d/du coefficient divisible by u."""
    if divisor.dimension != d.frame.dimension:
        raise FrameMismatchError("divisor and derivation have different dimensions")
    return all(tangent_to_hyperplane(d, i) for i in divisor.components)


def generic_rank(frame: Frame, generators: Sequence[Derivation]) -> int:
    """Rank of the coefficient matrix over the fraction field of the polynomial ring."""
    rows = [g.polynomial_multiple() for g in generators if not g.is_zero()]
    if not rows:
        return 0
    domain = frame.ring.to_domain()
    matrix = [[domain.convert(c.num) for c in g.coefficients] for g in rows]
    return DomainMatrix(matrix, (len(rows), frame.dimension), domain).to_field().rank()


@dataclass(frozen=True)
class Distribution:
    """
    Generators tangent to `divisor`. `dropped` holds transformed generators that could not be made tangent;
    when it is non-empty the generators may span less than the full strict transform.
    """

    frame: Frame
    generators: tuple[Derivation, ...]
    leaf_dimension: int
    divisor: SNCDivisor
    dropped: tuple[Derivation, ...] = ()

    @classmethod
    def of(
        cls,
        frame: Frame,
        generators: Iterable[Derivation],
        divisor: SNCDivisor | None = None,
        *,
        dropped: Iterable[Derivation] = (),
    ) -> Distribution:
        """Drop zero generators, require tangency to the divisor (default: the exceptional variables)."""
        gens = []
        for g in generators:
            if g.frame.names != frame.names:
                raise FrameMismatchError("generator belongs to a different frame")
            g = g.with_frame(frame)
            if not g.is_zero() and g not in gens:
                gens.append(g)
        div = divisor if divisor is not None else SNCDivisor.from_frame(frame)
        for g in gens:
            if not check_tangent(g, div):
                raise InputError(
                    f"generator {g.formatted()} is not tangent to the divisor",
                    code="foliation.not_tangent",
                    context={"divisor": ",".join(div.names(frame))},
                )
        return cls(frame, tuple(gens), generic_rank(frame, gens), div, tuple(dropped))

    @property
    def tangency_warning(self) -> bool:
        return bool(self.dropped)

    def __iter__(self):
        return iter(self.generators)

    def __len__(self) -> int:
        return len(self.generators)

    def with_frame(self, frame: Frame) -> Distribution:
        return Distribution.of(frame, [g.with_frame(frame) for g in self.generators])

    def tangent_variables(self) -> tuple[str, ...]:
        """Variables whose coordinate hyperplane every generator is tangent to (all exceptional ones included)."""
        return tuple(
            n for i, n in enumerate(self.frame.names) if all(tangent_to_hyperplane(g, i) for g in self.generators)
        )

    def regular_directions(self) -> tuple[str, ...]:
        """Variables w with d/dw literally among the generators."""
        out = []
        for g in self.generators:
            for n in self.frame.names:
                if g == Derivation.partial(self.frame, n):
                    out.append(n)
        return tuple(n for n in self.frame.names if n in out)

    def reduced(self) -> Distribution:
        """
        The same module with constant-coefficient generators in reduced row echelon form and each literal
        d/dw among them cleared from the w-column of the remaining generators.
        """
        frame = self.frame
        constant = [g for g in self.generators if all(c.is_constant() for c in g.coefficients)]
        rest = [g for g in self.generators if g not in constant]
        gens: list[Derivation] = []
        if constant:
            echelon, pivots = Matrix([[c.value_at_origin() for c in g.coefficients] for g in constant]).rref()
            gens = [Derivation.of(frame, list(echelon.row(k))) for k in range(len(pivots))]
        partials = [n for n in frame.names if any(g == Derivation.partial(frame, n) for g in gens)]
        for h in rest:
            for n in partials:
                c = h.coefficient(n)
                if not c.is_zero():
                    h = h - Derivation.partial(frame, n).scaled(c)
            gens.append(h)
        return Distribution.of(frame, gens, self.divisor)

    def formatted(self) -> list[str]:
        return [g.formatted() for g in self.generators]

    def __repr__(self) -> str:
        return f"Distribution({', '.join(self.formatted())}; d={self.leaf_dimension})"


def apply_ideal(theta: Distribution, ideal: FGIdeal) -> FGIdeal:
    """Every generator of theta applied to every generator of the ideal."""
    if theta.frame.names != ideal.frame.names:
        raise FrameMismatchError("distribution and ideal live in different frames")
    images: list[Poly] = [d.apply_poly(f) for d in theta.generators for f in ideal.generators]
    return FGIdeal.of(ideal.frame, images)


def is_invariant(theta: Distribution, ideal: FGIdeal, backend: MembershipBackend = LOCAL) -> bool:
    """theta[I] contained in I."""
    return is_contained(apply_ideal(theta, ideal), ideal, backend)
