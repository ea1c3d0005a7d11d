"""Finitely generated ideals over a chart frame, with cached global and local basis data."""

from __future__ import annotations

from collections.abc import Iterable
from dataclasses import dataclass, field
from typing import Literal

from folres.algebra.frame import Frame, Poly
from folres.algebra.poly import common_monomial, divide_monomial, format_poly
from folres.ideals.groebner import Tracked, tracked_groebner
from folres.ideals.mora import LocalTracked, standard_basis

Ordering = Literal["global", "local"]

DEFAULT_MORA_BUDGET = 20000


@dataclass(frozen=True)
class BasisData:
    ordering: Ordering
    basis: tuple[Poly, ...]
    reduced: bool


@dataclass(frozen=True, eq=False)
class FGIdeal:
    frame: Frame
    generators: tuple[Poly, ...]
    _cache: dict = field(default_factory=dict, repr=False)

    @classmethod
    def of(cls, frame: Frame, generators: Iterable[Poly]) -> FGIdeal:
        """Drop zeros and exact duplicates, keeping first-seen order."""
        seen: list[Poly] = []
        for g in generators:
            frame.require(g)
            if g and g not in seen:
                seen.append(g)
        return cls(frame, tuple(seen))

    @classmethod
    def unit(cls, frame: Frame) -> FGIdeal:
        return cls.of(frame, [frame.one])

    def __iter__(self):
        return iter(self.generators)

    def __len__(self) -> int:
        return len(self.generators)

    def is_zero(self) -> bool:
        return not self.generators

    def with_frame(self, frame: Frame) -> FGIdeal:
        """Same generators under a frame with the same names (e.g. new exceptional flags)."""
        if frame.names != self.frame.names:
            raise ValueError("with_frame only relabels exceptional flags")
        return FGIdeal(frame, self.generators)

    def tracked_global(self) -> list[Tracked]:
        if "global" not in self._cache:
            self._cache["global"] = tracked_groebner(self.generators)
        return self._cache["global"]

    def tracked_local(self, step_budget: int = DEFAULT_MORA_BUDGET) -> list[LocalTracked]:
        if "local" not in self._cache:
            self._cache["local"] = standard_basis(self.generators, step_budget)
        return self._cache["local"]

    def basis(self, ordering: Ordering = "global", step_budget: int = DEFAULT_MORA_BUDGET) -> BasisData:
        if ordering == "global":
            return BasisData("global", tuple(t.poly for t in self.tracked_global()), True)
        return BasisData("local", tuple(t.poly for t in self.tracked_local(step_budget)), False)

    def formatted(self) -> list[str]:
        return [format_poly(g, self.frame) for g in self.generators]

    def __repr__(self) -> str:
        return f"FGIdeal({', '.join(self.formatted())})"


def groebner(ideal: FGIdeal) -> BasisData:
    return ideal.basis("global")


def local_standard_basis(ideal: FGIdeal, step_budget: int = DEFAULT_MORA_BUDGET) -> BasisData:
    return ideal.basis("local", step_budget)


def ideal_sum(a: FGIdeal, b: FGIdeal) -> FGIdeal:
    a.frame.require(*b.generators)
    return FGIdeal.of(a.frame, [*a.generators, *b.generators])


def ideal_product(a: FGIdeal, b: FGIdeal) -> FGIdeal:
    a.frame.require(*b.generators)
    return FGIdeal.of(a.frame, [f * g for f in a.generators for g in b.generators])


def exceptional_factorization(ideal: FGIdeal, names: Iterable[str] | None = None) -> tuple[tuple[int, ...], FGIdeal]:
    """
    Split I = x^r * residual where x^r is the largest monomial in `names` (default: the exceptional
    variables) dividing every generator.
    """
    chosen = tuple(ideal.frame.exceptional_names if names is None else names)
    exps = common_monomial(ideal.generators, ideal.frame, chosen)
    residual = FGIdeal.of(ideal.frame, [divide_monomial(g, exps) for g in ideal.generators])
    return exps, residual
