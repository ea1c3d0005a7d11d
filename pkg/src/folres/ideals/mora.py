"""
Standard bases in the local ring at the origin (Mora's tangent cone algorithm, negative degree
reverse lexicographic order).

Every element carries a representation over its sources so a vanishing normal form yields
`u * f = sum(h_i * g_i)` with `u` a unit.
"""

from __future__ import annotations

import logging
from collections.abc import Sequence
from dataclasses import dataclass

from folres.algebra.frame import Poly
from folres.exceptions import MoraBudgetExceeded
from folres.ideals.groebner import divides, lcm, quotient

logger = logging.getLogger(__name__)

Monom = tuple[int, ...]


def local_key(m: Monom) -> tuple:
    """Sort key of the local order: lower total degree first, then reverse lexicographic."""
    return (-sum(m), tuple(reversed([-e for e in m])))


def leading_term(f: Poly) -> tuple[Monom, object]:
    monom = max(f.itermonoms(), key=local_key)
    return monom, f[monom]


def ecart(f: Poly) -> int:
    lead, _ = leading_term(f)
    return max(sum(m) for m in f.itermonoms()) - sum(lead)


@dataclass
class LocalTracked:
    """poly = sum(rep[k] * sources[k]) over a fixed list of sources."""

    poly: Poly
    rep: list[Poly]

    @property
    def lm(self) -> Monom:
        return leading_term(self.poly)[0]

    @property
    def lc(self):
        return leading_term(self.poly)[1]

    def minus_multiple(self, other: LocalTracked) -> LocalTracked:
        """self - t * other, with t the term cancelling self's leading term."""
        monom, coeff = leading_term(self.poly)
        term = (quotient(monom, other.lm), coeff / other.lc)
        return LocalTracked(
            self.poly - other.poly.mul_term(term),
            [a - b.mul_term(term) for a, b in zip(self.rep, other.rep, strict=True)],
        )


class StepCounter:
    def __init__(self, budget: int) -> None:
        self.budget = budget
        self.steps = 0

    def tick(self) -> None:
        self.steps += 1
        if self.steps > self.budget:
            raise MoraBudgetExceeded(
                "Mora reduction exceeded its step budget", context={"budget": self.budget}
            )


def mora_normal_form(h: LocalTracked, basis: Sequence[LocalTracked], counter: StepCounter) -> LocalTracked:
    """
    Mora's normal form of h against `basis`.

    The result r satisfies r = sum(rep * sources) where the coefficient of h's own source is a unit
    whenever h entered with a unit coefficient there.
    """
    todo = list(basis)
    while h.poly:
        lm_h = h.lm
        candidates = [g for g in todo if divides(g.lm, lm_h)]
        if not candidates:
            break
        g = min(candidates, key=lambda t: ecart(t.poly))
        if ecart(g.poly) > ecart(h.poly):
            todo.append(h)
        h = h.minus_multiple(g)
        counter.tick()
    return h


def standard_basis(generators: Sequence[Poly], step_budget: int) -> list[LocalTracked]:
    """Local standard basis of the nonzero generators; element k satisfies poly = sum(rep[i] * gens[i])."""
    gens = [g for g in generators if g]
    if not gens:
        return []
    ring = gens[0].ring
    n = len(gens)
    counter = StepCounter(step_budget)
    basis = [
        LocalTracked(g, [ring.one if i == k else ring.zero for i in range(n)]) for k, g in enumerate(gens)
    ]
    pairs = [(i, j) for j in range(len(basis)) for i in range(j)]
    while pairs:
        pairs.sort(key=lambda p: (sum(lcm(basis[p[0]].lm, basis[p[1]].lm)), p))
        i, j = pairs.pop(0)
        a, b = basis[i], basis[j]
        m = lcm(a.lm, b.lm)
        ta = (quotient(m, a.lm), ring.domain.one / a.lc)
        tb = (quotient(m, b.lm), ring.domain.one / b.lc)
        s = LocalTracked(
            a.poly.mul_term(ta) - b.poly.mul_term(tb),
            [x.mul_term(ta) - y.mul_term(tb) for x, y in zip(a.rep, b.rep, strict=True)],
        )
        if not s.poly:
            continue
        # sources for the reduction: the s-polynomial itself, then the basis
        seed = LocalTracked(s.poly, [ring.one] + [ring.zero] * len(basis))
        lifted = [LocalTracked(t.poly, [ring.zero] + [ring.one if q == k else ring.zero for q in range(len(basis))])
                  for k, t in enumerate(basis)]
        r = mora_normal_form(seed, lifted, counter)
        if not r.poly:
            continue
        # r = r0 * s + sum(r_k * basis_k): rewrite over the generators
        rep = [r.rep[0] * x for x in s.rep]
        for k, t in enumerate(basis):
            coeff = r.rep[k + 1]
            if coeff:
                rep = [acc + coeff * y for acc, y in zip(rep, t.rep, strict=True)]
        new = LocalTracked(r.poly, rep)
        pairs.extend((k, len(basis)) for k in range(len(basis)))
        basis.append(new)
    logger.debug(f"local standard basis: {len(basis)} elements after {counter.steps} reduction steps")
    return _minimalize(basis)


def _minimalize(basis: list[LocalTracked]) -> list[LocalTracked]:
    keep = []
    for i, t in enumerate(basis):
        dominated = any(
            divides(o.lm, t.lm) and (o.lm != t.lm or j < i) for j, o in enumerate(basis) if j != i
        )
        if not dominated:
            keep.append(t)
    return keep


def local_certificate(
    f: Poly, basis: Sequence[LocalTracked], n_generators: int, step_budget: int
) -> tuple[Poly, list[Poly]] | None:
    """
    Decide f in I*O at the origin. On success return (u, h) with u(0) != 0 and u * f = sum(h_i * g_i)
    over the original generators; otherwise None.
    """
    ring = f.ring
    if not f:
        return ring.one, [ring.zero] * n_generators
    if not basis:
        return None
    counter = StepCounter(step_budget)
    seed = LocalTracked(f, [ring.one] + [ring.zero] * len(basis))
    lifted = [
        LocalTracked(t.poly, [ring.zero] + [ring.one if q == k else ring.zero for q in range(len(basis))])
        for k, t in enumerate(basis)
    ]
    r = mora_normal_form(seed, lifted, counter)
    if r.poly:
        return None
    # 0 = r0 * f + sum(r_k * basis_k)  =>  r0 * f = -sum(r_k * basis_k)
    unit = r.rep[0]
    h = [ring.zero] * n_generators
    for k, t in enumerate(basis):
        coeff = r.rep[k + 1]
        if coeff:
            h = [acc - coeff * y for acc, y in zip(h, t.rep, strict=True)]
    return unit, h
