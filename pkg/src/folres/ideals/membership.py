"""Membership, containment and equality of ideals under global, local or jet semantics."""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Literal

from folres.algebra.frame import Poly
from folres.algebra.poly import common_monomial, divide_monomial
from folres.exceptions import ConfigurationError, InternalInconsistency
from folres.ideals.groebner import normal_form
from folres.ideals.ideal import DEFAULT_MORA_BUDGET, FGIdeal
from folres.ideals.jet_oracle import jet_membership
from folres.ideals.mora import leading_term, local_certificate

logger = logging.getLogger(__name__)

BackendKind = Literal["global", "local", "jet"]


@dataclass(frozen=True)
class MembershipBackend:
    kind: BackendKind = "local"
    order: int | None = None
    step_budget: int = DEFAULT_MORA_BUDGET

    @classmethod
    def parse(cls, text: str, *, step_budget: int = DEFAULT_MORA_BUDGET) -> MembershipBackend:
        """Parse `global`, `local` or `jet:N`."""
        raw = text.strip().lower()
        if raw in ("global", "local"):
            return cls(raw, None, step_budget)  # type: ignore[arg-type]
        if raw.startswith("jet:"):
            try:
                order = int(raw[4:])
            except ValueError:
                order = -1
            if order < 0:
                raise ConfigurationError(f"invalid jet order in backend {text!r}", context={"backend": text})
            return cls("jet", order, step_budget)
        raise ConfigurationError(
            f"unknown membership backend {text!r}", context={"backend": text, "expected": "global|local|jet:N"}
        )

    def __str__(self) -> str:
        return f"jet:{self.order}" if self.kind == "jet" else self.kind


GLOBAL = MembershipBackend("global")
LOCAL = MembershipBackend("local")


@dataclass(frozen=True)
class Certificate:
    """unit * f = sum(cofactors[i] * generators[i]); unit is 1 for global certificates."""

    unit: Poly
    cofactors: tuple[Poly, ...]

    def holds(self, f: Poly, ideal: FGIdeal) -> bool:
        if self.unit.const() == 0 or len(self.cofactors) != len(ideal.generators):
            return False
        total = f.ring.zero
        for h, g in zip(self.cofactors, ideal.generators, strict=True):
            total += h * g
        return self.unit * f == total


def membership_certificate(f: Poly, ideal: FGIdeal, backend: MembershipBackend = LOCAL) -> Certificate | None:
    """Certificate of f in I under global or local semantics, re-verified before it is returned."""
    ideal.frame.require(f)
    ring = f.ring
    n = len(ideal.generators)
    if not f:
        return Certificate(ring.one, tuple(ring.zero for _ in range(n)))
    if ideal.is_zero():
        return None
    if backend.kind == "global":
        nf = normal_form(f, ideal.tracked_global(), n)
        if nf.poly:
            return None
        cert = Certificate(ring.one, tuple(nf.cof))
    elif backend.kind == "local":
        units = [k for k, g in enumerate(ideal.generators) if g.const() != 0]
        if units:
            k = units[0]
            cert = Certificate(ideal.generators[k], tuple(f if i == k else ring.zero for i in range(n)))
        else:
            found = local_certificate(f, ideal.tracked_local(backend.step_budget), n, backend.step_budget)
            if found is None:
                return None
            cert = Certificate(found[0], tuple(found[1]))
    else:
        raise ValueError("jet membership carries no certificate")
    if not cert.holds(f, ideal):
        raise InternalInconsistency(
            "membership certificate failed re-verification", context={"backend": str(backend)}
        )
    return cert


def membership(f: Poly, ideal: FGIdeal, backend: MembershipBackend = LOCAL) -> bool:
    if backend.kind == "jet":
        return jet_membership(f, ideal.generators, backend.order or 0)
    return membership_certificate(f, ideal, backend) is not None


def contains_one(ideal: FGIdeal, backend: MembershipBackend = GLOBAL) -> bool:
    """Global: the reduced basis is {1}. Local or jet: some generator is nonzero at the origin."""
    if ideal.is_zero():
        return False
    if backend.kind == "global":
        basis = ideal.tracked_global()
        return len(basis) == 1 and basis[0].poly == ideal.frame.one
    return any(g.const() != 0 for g in ideal.generators)


def is_contained(a: FGIdeal, b: FGIdeal, backend: MembershipBackend = LOCAL) -> bool:
    return all(membership(g, b, backend) for g in a.generators)


def ideal_equal(a: FGIdeal, b: FGIdeal, backend: MembershipBackend = LOCAL) -> bool:
    return is_contained(a, b, backend) and is_contained(b, a, backend)


def cross_check(f: Poly, ideal: FGIdeal, jet_order: int = 8) -> dict[str, bool]:
    """
    Run every backend on one query. Global-true implies local-true implies jet-true; any other
    disagreement is logged as a backend fault, the local-only pattern (x in (x + x^2)) at debug level.
    """
    verdicts = {
        "global": membership(f, ideal, GLOBAL),
        "local": membership(f, ideal, LOCAL),
        "jet": jet_membership(f, ideal.generators, jet_order),
    }
    if verdicts["global"] and not verdicts["local"]:
        logger.warning(f"backend disagreement: global member but not local ({ideal!r})")
    elif verdicts["local"] and not verdicts["jet"]:
        logger.warning(f"backend disagreement: local member but not in jet({jet_order}) ({ideal!r})")
    elif verdicts["local"] != verdicts["global"]:
        logger.debug(f"local-only membership in {ideal!r}")
    return verdicts


def monomial_generators(ideal: FGIdeal, backend: MembershipBackend = LOCAL) -> list[tuple[int, ...]] | None:
    """
    Minimal monomial generators when I*O is a monomial ideal, else None.

    Decided from the local standard basis: I*O is monomial iff every leading monomial lies in I*O.
    """
    if ideal.is_zero():
        return []
    frame = ideal.frame
    if contains_one(ideal, LOCAL):
        return [tuple(0 for _ in frame.names)]
    leads = [leading_term(t.poly)[0] for t in ideal.tracked_local(backend.step_budget)]
    for m in leads:
        if not membership(frame.monomial(m), ideal, LOCAL):
            return None
    minimal = []
    for m in sorted(set(leads), key=lambda e: (sum(e), e)):
        if not any(all(a <= b for a, b in zip(k, m, strict=True)) for k in minimal):
            minimal.append(m)
    return minimal


def principal_monomial(ideal: FGIdeal) -> tuple[int, ...] | None:
    """Exponents a with I*O = (x^a) at the origin, or None when the ideal is not of that shape."""
    if ideal.is_zero():
        return None
    exps = common_monomial(ideal.generators, ideal.frame)
    if any(divide_monomial(g, exps).const() != 0 for g in ideal.generators):
        return exps
    return None
