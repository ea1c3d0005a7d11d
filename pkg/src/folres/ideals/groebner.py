"""
Buchberger completion under graded reverse lexicographic order, tracking how every basis element is
built from the input generators so membership can be certified.
"""

from __future__ import annotations

import logging
from collections.abc import Sequence
from dataclasses import dataclass

from sympy.polys.orderings import grevlex

from folres.algebra.frame import Poly

logger = logging.getLogger(__name__)

Monom = tuple[int, ...]


def divides(a: Monom, b: Monom) -> bool:
    return all(x <= y for x, y in zip(a, b, strict=True))


def lcm(a: Monom, b: Monom) -> Monom:
    return tuple(max(x, y) for x, y in zip(a, b, strict=True))


def quotient(b: Monom, a: Monom) -> Monom:
    return tuple(y - x for x, y in zip(a, b, strict=True))


def coprime(a: Monom, b: Monom) -> bool:
    return all(x == 0 or y == 0 for x, y in zip(a, b, strict=True))


@dataclass
class Tracked:
    """A polynomial together with cofactors over the input generators: poly = sum(cof[i] * gens[i])."""

    poly: Poly
    cof: list[Poly]

    def scaled(self, term: tuple[Monom, object]) -> Tracked:
        return Tracked(self.poly.mul_term(term), [c.mul_term(term) for c in self.cof])

    def minus(self, other: Tracked) -> Tracked:
        return Tracked(self.poly - other.poly, [a - b for a, b in zip(self.cof, other.cof, strict=True)])

    def monic(self) -> Tracked:
        lc = self.poly.LC
        if lc == 1:
            return self
        return Tracked(self.poly.quo_ground(lc), [c.quo_ground(lc) for c in self.cof])


def reduce_tracked(p: Tracked, basis: Sequence[Tracked]) -> Tracked:
    """Full reduction of p by `basis`; the result's cofactors keep p's representation exact."""
    ring = p.poly.ring
    remainder = Tracked(ring.zero, list(p.cof))
    work = Tracked(p.poly, [ring.zero] * len(p.cof))
    while work.poly:
        monom, coeff = work.poly.LT
        for b in basis:
            lm = b.poly.LM
            if divides(lm, monom):
                term = (quotient(monom, lm), coeff / b.poly.LC)
                step = b.scaled(term)
                work = Tracked(work.poly - step.poly, [w - s for w, s in zip(work.cof, step.cof, strict=True)])
                break
        else:
            lead = ring.term_new(monom, coeff)
            work = Tracked(work.poly - lead, work.cof)
            remainder = Tracked(remainder.poly + lead, remainder.cof)
    # p = remainder + sum(cof * basis): fold the basis usage (stored negated in work.cof) back in
    cof = [r + w for r, w in zip(remainder.cof, work.cof, strict=True)]
    return Tracked(remainder.poly, cof)


def _pair_key(basis: list[Tracked], pair: tuple[int, int]) -> tuple:
    i, j = pair
    m = lcm(basis[i].poly.LM, basis[j].poly.LM)
    return (sum(m), grevlex(m), i, j)


def tracked_groebner(generators: Sequence[Poly]) -> list[Tracked]:
    """
    Reduced, monic Gröbner basis of the nonzero `generators`, each element with cofactors over them.

    Pairs are taken by the normal strategy: smallest lcm degree, then grevlex, then index.
    """
    gens = [g for g in generators if g]
    if not gens:
        return []
    ring = gens[0].ring
    n = len(gens)

    def unit_vector(k: int) -> list[Poly]:
        return [ring.one if i == k else ring.zero for i in range(n)]

    basis: list[Tracked] = []
    pairs: set[tuple[int, int]] = set()
    for k, g in enumerate(gens):
        t = reduce_tracked(Tracked(g, unit_vector(k)), basis)
        if t.poly:
            _add(basis, pairs, t.monic())

    while pairs:
        pair = min(pairs, key=lambda p: _pair_key(basis, p))
        pairs.discard(pair)
        i, j = pair
        a, b = basis[i], basis[j]
        if coprime(a.poly.LM, b.poly.LM) or _chain_criterion(basis, pairs, i, j):
            continue
        m = lcm(a.poly.LM, b.poly.LM)
        s = a.scaled((quotient(m, a.poly.LM), ring.domain.one)).minus(b.scaled((quotient(m, b.poly.LM), ring.domain.one)))
        r = reduce_tracked(s, basis)
        if r.poly:
            _add(basis, pairs, r.monic())

    return _interreduce(basis)


def _chain_criterion(basis: list[Tracked], pairs: set[tuple[int, int]], i: int, j: int) -> bool:
    m = lcm(basis[i].poly.LM, basis[j].poly.LM)
    for k in range(len(basis)):
        if k in (i, j) or not divides(basis[k].poly.LM, m):
            continue
        if (min(i, k), max(i, k)) not in pairs and (min(j, k), max(j, k)) not in pairs:
            return True
    return False


def _add(basis: list[Tracked], pairs: set[tuple[int, int]], t: Tracked) -> None:
    k = len(basis)
    basis.append(t)
    pairs.update((i, k) for i in range(k))


def _interreduce(basis: list[Tracked]) -> list[Tracked]:
    minimal: list[Tracked] = []
    for i, t in enumerate(basis):
        lm = t.poly.LM
        dominated = any(
            divides(o.poly.LM, lm) and (o.poly.LM != lm or j < i) for j, o in enumerate(basis) if j != i
        )
        if not dominated:
            minimal.append(t)
    reduced = []
    for i, t in enumerate(minimal):
        others = [o for j, o in enumerate(minimal) if j != i]
        reduced.append(reduce_tracked(t, others).monic())
    reduced.sort(key=lambda t: grevlex(t.poly.LM), reverse=True)
    return reduced


def normal_form(f: Poly, basis: Sequence[Tracked], n_generators: int) -> Tracked:
    """Remainder r of f modulo the basis, returned with cofactors c such that f = r + sum(c[i] * gens[i])."""
    start = Tracked(f, [f.ring.zero] * n_generators)
    r = reduce_tracked(start, basis)
    return Tracked(r.poly, [-c for c in r.cof])
