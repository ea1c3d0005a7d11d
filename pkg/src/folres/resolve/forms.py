"""
Normal forms of an ideal along a regular direction d/dv of the distribution.

Weierstrass-Tschirnhaus form: the first generator is v^nu * U + sum(v^j * a_0j, j <= nu - 2) with U a unit and
v-free coefficients; every other generator is v^nu * top_i + sum(v^j * a_ij, j <= nu - 1). Prepared form: every
a_ij is a monomial times a unit, or zero. The drop ideal collects v^nu and the monomials v^j * u^r_ij.
"""

from __future__ import annotations

import logging
from collections.abc import Mapping
from dataclasses import dataclass, field
from itertools import product
from math import comb

from sympy import Rational

from folres.algebra.frame import Frame, Poly
from folres.algebra.jet import jet_inverse
from folres.algebra.poly import coefficients_in, format_poly, monomial_times_unit, to_rational, truncate
from folres.exceptions import InputError, InternalInconsistency, JetBudgetExhausted
from folres.foliation.derivation import CoordinateChange
from folres.foliation.distribution import Distribution
from folres.ideals import FGIdeal

logger = logging.getLogger(__name__)

Key = tuple[int, int]
Exponents = tuple[int, ...]


@dataclass(frozen=True)
class WTForm:
    """
    `coefficients[(i, j)]` is a_ij for j < nu (zeros omitted), `tops[i]` the part of generator i above v^nu
    divided by v^nu (tops[0] is the unit U). `changes` lists the coordinate changes, oldest first, that
    brought the input generators into this shape. With a jet shift (`exact` false) a_0,nu-1 may survive
    with order above the jet order.
    """

    frame: Frame
    v: str
    nu: int
    generators: tuple[Poly, ...]
    coefficients: Mapping[Key, Poly]
    tops: tuple[Poly, ...]
    changes: tuple[tuple[str, CoordinateChange], ...] = ()
    exact: bool = True

    def coefficient(self, i: int, j: int) -> Poly:
        return self.coefficients.get((i, j), self.frame.zero)

    def ideal(self) -> FGIdeal:
        return FGIdeal.of(self.frame, self.generators)

    def coefficient_product(self) -> Poly:
        """Product of the nonzero a_ij; 1 when there are none."""
        out = self.frame.one
        for key in sorted(self.coefficients):
            out = out * self.coefficients[key]
        return out


@dataclass(frozen=True)
class PreparedForm:
    """a_ij = u^exponents[(i, j)] * units[(i, j)], with a unit b_ij and a nonzero monomial."""

    wt: WTForm
    exponents: Mapping[Key, Exponents] = field(default_factory=dict)
    units: Mapping[Key, Poly] = field(default_factory=dict)


@dataclass(frozen=True)
class DropIdeal:
    """
    (v^nu, v^j * u^r_ij) over the variables F: the u-variables in frame order, then v. `terms` keeps each
    r_ij restricted to the u-variables.
    """

    variables: tuple[str, ...]
    ideal: FGIdeal
    terms: Mapping[Key, Exponents]
    nu: int

    @property
    def v(self) -> str:
        return self.variables[-1]


def _pure_power(g: Poly, frame: Frame, w: str, nu: int) -> Rational:
    """Coefficient of the pure power w^nu in g: d^nu g / dw^nu at the origin, divided by nu!."""
    i = frame.index(w)
    monom = tuple(nu if k == i else 0 for k in range(frame.dimension))
    return to_rational(g.get(monom, 0))


def choose_direction(theta: Distribution, ideal: FGIdeal, nu: int) -> tuple[str, int] | None:
    """First regular w (frame order) and first generator index k with d^nu g_k / dw^nu a unit."""
    frame = ideal.frame
    for w in theta.regular_directions():
        for k, g in enumerate(ideal.generators):
            if _pure_power(g, frame, w, nu) != 0:
                return w, k
    return None


def regular_shear(theta: Distribution, ideal: FGIdeal, nu: int) -> CoordinateChange | None:
    """
    Linear change w -> w + c_w * w0 among the regular coordinates after which d/dw0 has a unit nu-th
    derivative on some generator. The degree-nu part of a generator in the regular variables is a nonzero form
    P, and P(1, c) is nonzero at some c in {0..nu}^(k-1).
    """
    frame = ideal.frame
    regular = theta.regular_directions()
    if len(regular) < 2:
        return None
    idx = [frame.index(w) for w in regular]
    others = [i for i in range(frame.dimension) if i not in idx]
    for g in ideal.generators:
        form = {m: c for m, c in g.iterterms() if sum(m) == nu and all(m[i] == 0 for i in others)}
        if not form:
            continue
        for tail in product(range(nu + 1), repeat=len(regular) - 1):
            point = dict(zip(idx, (1, *tail), strict=True))
            value = sum((to_rational(c) * _monomial_value(m, point) for m, c in form.items()), Rational(0))
            if value == 0:
                continue
            gens = frame.ring.gens
            w0 = gens[idx[0]]
            forward = list(gens)
            inverse = list(gens)
            for i, c in zip(idx[1:], tail, strict=True):
                forward[i] = gens[i] + w0 * c
                inverse[i] = gens[i] - w0 * c
            return CoordinateChange(frame, tuple(forward), tuple(inverse))
    return None


def _monomial_value(m: Exponents, point: Mapping[int, int]) -> Rational:
    out = Rational(1)
    for i, e in enumerate(m):
        if e:
            out *= Rational(point[i]) ** e
    return out


def _shift_change(frame: Frame, v: str, phi: Poly) -> CoordinateChange:
    """old v = new v - phi, phi free of v."""
    i = frame.index(v)
    gens = frame.ring.gens
    forward = tuple(g - phi if k == i else g for k, g in enumerate(gens))
    inverse = tuple(g + phi if k == i else g for k, g in enumerate(gens))
    return CoordinateChange(frame, forward, inverse)


def _sub_leading(coeffs: Mapping[int, Poly], nu: int, phi: Poly, order: int | None) -> Poly:
    """Coefficient of v^(nu-1) after v -> v - phi: sum over k >= nu-1 of C(k, nu-1) c_k (-phi)^(k-nu+1)."""
    ring = phi.ring
    total = ring.zero
    for k in sorted(c for c in coeffs if c >= nu - 1):
        term = coeffs[k] * comb(k, nu - 1) * (-phi) ** (k - nu + 1)
        total += term if order is None else truncate(term, order)
    return total if order is None else truncate(total, order)


def jet_shift(coeffs: Mapping[int, Poly], nu: int, order: int) -> Poly:
    """
    phi of degree <= order with the v^(nu-1) coefficient of g(v - phi) vanishing modulo degree order + 1, by
    fixed-point iteration phi <- (c_(nu-1) + higher(phi)) / (nu * c_nu). Each pass fixes one more degree.
    """
    lead = coeffs[nu]
    ring = lead.ring
    inverse = jet_inverse(lead * nu, order).poly
    phi = ring.zero
    for _ in range(order + 1):
        rest = coeffs.get(nu - 1, ring.zero)
        for k in sorted(c for c in coeffs if c > nu):
            rest += truncate(coeffs[k] * comb(k, nu - 1) * (-phi) ** (k - nu + 1), order)
        new = truncate(truncate(rest, order) * inverse, order)
        if new == phi:
            break
        phi = new
    if _sub_leading(coeffs, nu, phi, order):
        raise JetBudgetExhausted(
            f"jet shift did not converge at order {order}", context={"jet_order": order, "nu": nu}
        )
    return phi


def tschirnhaus_shift(g: Poly, frame: Frame, v: str, nu: int, jet_order: int) -> tuple[CoordinateChange, bool]:
    """
    Translation of v removing the v^(nu-1) coefficient of g. Exact when g has v-degree nu with a constant
    leading coefficient; otherwise a jet shift. Returns the change and whether it is exact.
    """
    coeffs = coefficients_in(g, frame, v)
    if not coeffs.get(nu - 1):
        return CoordinateChange.identity(frame), True
    lead = coeffs.get(nu, frame.zero)
    if lead.const() == 0:
        raise InternalInconsistency(f"d^{nu}/d{v}^{nu} of the chosen generator is not a unit")
    if max(coeffs) == nu and lead.is_ground:
        phi = coeffs[nu - 1].quo_ground(lead.const() * nu)
        return _shift_change(frame, v, phi), True
    phi = jet_shift(coeffs, nu, jet_order)
    if not phi:
        return CoordinateChange.identity(frame), False
    return _shift_change(frame, v, phi), False


def split_generators(generators: tuple[Poly, ...], frame: Frame, v: str, nu: int) -> tuple[dict[Key, Poly], tuple[Poly, ...]]:
    """a_ij for j < nu and the tops (generator minus its low part, divided by v^nu)."""
    coefficients: dict[Key, Poly] = {}
    tops = []
    i_v = frame.index(v)
    for i, g in enumerate(generators):
        parts = coefficients_in(g, frame, v)
        top = {}
        for j, c in parts.items():
            if j < nu:
                coefficients[(i, j)] = c
            else:
                for m, a in c.iterterms():
                    top[m[:i_v] + (j - nu,) + m[i_v + 1 :]] = a
        tops.append(frame.ring.from_dict(top))
    return coefficients, tuple(tops)


def weierstrass_form(
    theta: Distribution,
    ideal: FGIdeal,
    nu: int,
    *,
    jet_order: int = 8,
    v: str | None = None,
) -> WTForm:
    """
    Choose v (or use the given one), shear the regular coordinates when no single d/dw works, move the
    generator with a unit d^nu/dv^nu first and translate v to clear its v^(nu-1) coefficient. `changes`
    records the coordinate changes; the generators are returned in the final coordinates.
    """
    if nu < 1:
        raise InputError("Weierstrass form needs nu >= 1", code="resolve.nu_zero", context={"nu": nu})
    frame = ideal.frame
    changes: list[tuple[str, CoordinateChange]] = []
    generators = ideal.generators
    if v is None:
        pick = choose_direction(theta, ideal, nu)
        if pick is None:
            shear = regular_shear(theta, ideal, nu)
            if shear is None:
                raise InternalInconsistency(
                    "type 1 at the origin but no regular direction has a unit derivative of order nu",
                    context={"nu": nu, "ideal": repr(ideal)},
                )
            changes.append(("shear", shear))
            generators = tuple(shear.pull(g) for g in generators)
            pick = choose_direction(theta, FGIdeal.of(frame, generators), nu)
            if pick is None:
                raise InternalInconsistency("regular shear did not produce a unit derivative")
        v, first = pick
    else:
        units = [k for k, g in enumerate(generators) if _pure_power(g, frame, v, nu) != 0]
        if not units:
            raise InternalInconsistency(f"no generator has a unit d^{nu}/d{v}^{nu}", context={"v": v, "nu": nu})
        # a generator already free of v^(nu-1) needs no shift
        first = next((k for k in units if not coefficients_in(generators[k], frame, v).get(nu - 1)), units[0])
    generators = (generators[first], *generators[:first], *generators[first + 1 :])
    shift, exact = tschirnhaus_shift(generators[0], frame, v, nu, jet_order)
    if not shift.is_identity():
        changes.append(("tschirnhaus", shift))
        generators = tuple(shift.pull(g) for g in generators)
    coefficients, tops = split_generators(generators, frame, v, nu)
    if exact and (0, nu - 1) in coefficients:
        raise InternalInconsistency("exact Tschirnhaus shift left a v^(nu-1) term")
    logger.debug(
        f"weierstrass form: v={v} nu={nu} g0={format_poly(generators[0], frame)} "
        f"changes={[label for label, _ in changes]}"
    )
    return WTForm(frame, v, nu, generators, coefficients, tops, tuple(changes), exact)


def prepared_form(wt: WTForm) -> PreparedForm:
    """Factor every a_ij as u^r * b with b a unit; raises InputError when some a_ij has no such split."""
    exponents: dict[Key, Exponents] = {}
    units: dict[Key, Poly] = {}
    for key, a in sorted(wt.coefficients.items()):
        split = monomial_times_unit(a, wt.frame, wt.frame.exceptional_names)
        if split is None or not any(split[0]):
            raise InputError(
                f"coefficient a{key} = {format_poly(a, wt.frame)} is not an exceptional monomial times a unit",
                code="resolve.not_prepared",
                context={"i": key[0], "j": key[1]},
            )
        exponents[key], units[key] = split
    return PreparedForm(wt, exponents, units)


def drop_ideal(pf: PreparedForm) -> DropIdeal:
    wt = pf.wt
    frame = wt.frame
    used = {frame.names[k] for r in pf.exponents.values() for k, e in enumerate(r) if e}
    u_names = tuple(n for n in frame.names if n in used and n != wt.v)
    variables = (*u_names, wt.v)
    i_v = frame.index(wt.v)
    gens = [frame.gen(wt.v) ** wt.nu]
    for (_, j), r in sorted(pf.exponents.items()):
        gens.append(frame.monomial(tuple(j if k == i_v else e for k, e in enumerate(r))))
    terms = {key: tuple(r[frame.index(n)] for n in u_names) for key, r in pf.exponents.items()}
    return DropIdeal(variables, FGIdeal.of(frame, gens), terms, wt.nu)
