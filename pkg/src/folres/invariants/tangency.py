"""The tangency sequence H(theta, I, n) and the (nu, type) invariant at a chart origin."""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Literal

from folres.exceptions import StageBudgetExhausted
from folres.foliation.distribution import Distribution, apply_ideal
from folres.ideals import LOCAL, FGIdeal, MembershipBackend, contains_one, exceptional_factorization, membership

logger = logging.getLogger(__name__)

DEFAULT_MAX_STAGES = 32


@dataclass(frozen=True)
class HSequence:
    """
    stages[0] = I and stages[n + 1] = stages[n] + theta[stages[n]].

    `stabilized_at` is the first n with stages[n + 1] = stages[n]; `unit_at` the first stage containing a
    unit at the origin (the sequence stops there).
    """

    stages: tuple[FGIdeal, ...]
    stabilized_at: int
    unit_at: int | None

    @property
    def last(self) -> FGIdeal:
        return self.stages[-1]


def h_sequence(
    theta: Distribution,
    ideal: FGIdeal,
    max_stage: int = DEFAULT_MAX_STAGES,
    backend: MembershipBackend = LOCAL,
) -> HSequence:
    stages = [ideal]
    n = 0
    while True:
        current = stages[-1]
        if contains_one(current, LOCAL):
            return HSequence(tuple(stages), n, n)
        fresh = [g for g in apply_ideal(theta, current).generators if not membership(g, current, backend)]
        if not fresh:
            return HSequence(tuple(stages), n, None)
        if n + 1 > max_stage:
            raise StageBudgetExhausted(
                f"tangency sequence did not stabilize within {max_stage} stages",
                context={"max_stages": max_stage, "ideal": repr(ideal)},
            )
        stages.append(FGIdeal.of(current.frame, [*current.generators, *fresh]))
        n += 1


@dataclass(frozen=True)
class TgInvariant:
    nu: int
    type: Literal[1, 2]
    closure: FGIdeal
    sequence: HSequence

    def as_tuple(self) -> tuple[int, int]:
        return (self.nu, self.type)


def tg_invariant(
    theta: Distribution,
    ideal: FGIdeal,
    max_stage: int = DEFAULT_MAX_STAGES,
    backend: MembershipBackend = LOCAL,
) -> TgInvariant:
    """
    nu is the first stage containing a unit (type 1) or the stabilization index (type 2); `closure` is
    Cl = H(theta, I, nu).
    """
    seq = h_sequence(theta, ideal, max_stage, backend)
    if seq.unit_at is not None:
        return TgInvariant(seq.unit_at, 1, seq.stages[seq.unit_at], seq)
    return TgInvariant(seq.stabilized_at, 2, seq.stages[seq.stabilized_at], seq)


@dataclass(frozen=True)
class OriginInvariant:
    """I = x^monomial * residual with x ranging over theta-tangent coordinates; the invariant is the residual's."""

    monomial: tuple[int, ...]
    residual: FGIdeal
    invariant: TgInvariant


def origin_invariant(
    theta: Distribution,
    ideal: FGIdeal,
    max_stage: int = DEFAULT_MAX_STAGES,
    backend: MembershipBackend = LOCAL,
) -> OriginInvariant:
    exps, residual = exceptional_factorization(ideal, theta.tangent_variables())
    inv = tg_invariant(theta, residual, max_stage, backend)
    logger.debug(f"origin invariant nu={inv.nu} type={inv.type} residual={residual!r}")
    return OriginInvariant(exps, residual, inv)
