"""Total, birational and strict transforms of ideals and distributions along chart edges."""

from __future__ import annotations

import logging
from typing import Literal

from sympy import Rational

from folres.algebra.local import LocalElement
from folres.blowup.chart import Edge
from folres.exceptions import CenterError, InternalInconsistency
from folres.foliation.derivation import Derivation, change_coordinates
from folres.foliation.distribution import Distribution, SNCDivisor, check_tangent, tangent_to_hyperplane
from folres.foliation.eigen import coordinate_direction, diagonal_weights
from folres.ideals import FGIdeal

logger = logging.getLogger(__name__)

TransformKind = Literal["total", "birational"]


def transform_ideal(ideal: FGIdeal, edge: Edge, kind: TransformKind = "total") -> FGIdeal:
    """
    Pull the generators back along the edge. The birational transform of a blow-up divides exactly one
    power of the new exceptional variable out of each generator.
    """
    total = edge.chart_map.pull_ideal(ideal)
    if kind == "total" or edge.kind != "blowup":
        return total
    frame = edge.chart_map.target
    pivot = frame.index(edge.chart_variable or "")
    unit = tuple(1 if i == pivot else 0 for i in range(frame.dimension))
    out = []
    for g in total.generators:
        if min(m[pivot] for m in g.itermonoms()) < 1:
            raise CenterError(
                "birational transform needs every generator to vanish on the center",
                code="blowup.center_order",
                context={"center": str(edge.center)},
            )
        out.append(LocalElement.from_poly(g).divide_monomial(unit).num)
    return FGIdeal.of(frame, out)


def _blowup_derivation(d: Derivation, edge: Edge) -> Derivation:
    """
    Chain-rule pullback normalized by a power of the new exceptional variable x0: every coefficient
    regular and the x0-coefficient divisible by x0.
    """
    cmap = edge.chart_map
    source, target = cmap.source, cmap.target
    center = edge.center.variables if edge.center else ()
    v0 = edge.chart_variable or ""
    i0 = target.index(v0)
    x0 = target.gen(v0)
    pulled = [cmap.pull_local(c) for c in d.coefficients]
    c0 = pulled[source.index(v0)]
    # scaled = x0 * (pulled-back field): polynomial-regular in every entry
    scaled = []
    for name, c in zip(source.names, pulled, strict=True):
        if name == v0:
            scaled.append(c * x0)
        elif name in center:
            scaled.append(c - c0 * target.gen(name))
        else:
            scaled.append(c * x0)
    vals = []
    for j, c in enumerate(scaled):
        if c.is_zero():
            continue
        val = c.valuation(i0) or 0
        vals.append(val - 1 if j == i0 else val)
    if not vals:
        return Derivation.zero(target)
    shift = min(vals)
    exps = tuple(shift if i == i0 else 0 for i in range(target.dimension))
    return Derivation(target, tuple(c.divide_monomial(exps) for c in scaled))


def closed_form_blowup(d: Derivation, edge: Edge) -> Derivation | None:
    """
    Transforms of coordinate and diagonal fields read off directly: d/dv0 -> x0 d/dx0 - sum(v d/dv),
    d/dv -> d/dv otherwise, and diagonal weights alpha_v -> alpha_v - alpha_v0 on the other center variables.
    """
    target = edge.chart_map.target
    center = edge.center.variables if edge.center else ()
    v0 = edge.chart_variable or ""
    w = coordinate_direction(d)
    if w is not None:
        if w != v0:
            return Derivation.partial(target, w)
        coeffs = {v0: target.gen(v0)}
        for v in center:
            if v != v0:
                coeffs[v] = -target.gen(v)
        return Derivation.of(target, coeffs)
    weights = diagonal_weights(d)
    if weights is None:
        return None
    a0 = weights[target.index(v0)]
    new = [
        (a - a0) if n in center and n != v0 else a for n, a in zip(target.names, weights, strict=True)
    ]
    return Derivation.diagonal(target, [Rational(a) for a in new])


def transform_derivation(d: Derivation, edge: Edge) -> Derivation:
    target = edge.chart_map.target
    if edge.kind == "blowup":
        generic = _blowup_derivation(d, edge)
        closed = closed_form_blowup(d, edge)
        if closed is not None and closed != generic:
            raise InternalInconsistency(
                "closed-form transform disagrees with the chain rule",
                context={"derivation": d.formatted(), "edge": edge.describe()},
            )
        return generic
    if edge.change is None:
        raise InternalInconsistency("coordinate edge without its coordinate change")
    return change_coordinates(d.with_frame(edge.change.frame), edge.change).with_frame(target)


def _cancel_residue(d: Derivation, partner: Derivation, index: int) -> Derivation | None:
    """d - q * partner with q a constant times an exceptional monomial, when that clears d's residue on {x_index = 0}."""
    frame = d.frame
    zero = {frame.names[index]: frame.zero}
    rd = d.coefficients[index].substitute(zero, frame, frame)
    rp = partner.coefficients[index].substitute(zero, frame, frame)
    if rp.is_zero():
        return None
    q, r = divmod(rd.num * rp.den, rp.num * rd.den)
    if r or len(q) != 1:
        return None
    (monom,) = q.itermonoms()
    if any(e and n not in frame.exceptional for n, e in zip(frame.names, monom, strict=True)):
        return None
    return d - partner.scaled(q)


def _make_tangent(d: Derivation, partners: list[Derivation], divisor: SNCDivisor) -> Derivation | None:
    current = d
    for _ in range(len(divisor.components) + 1):
        failing = [i for i in divisor.components if not tangent_to_hyperplane(current, i)]
        if not failing:
            return None if current.is_zero() else current
        step = next((s for p in partners if (s := _cancel_residue(current, p, failing[0])) is not None), None)
        if step is None:
            return None
        current = step
    return None


def transform_distribution(theta: Distribution, edge: Edge) -> Distribution:
    """
    Strict transform generator by generator. An image that is not tangent to the new divisor is combined
    with exceptional-monomial multiples of the other images; what still fails is kept in `dropped`.
    """
    target = edge.chart_map.target
    divisor = SNCDivisor.from_frame(target)
    images = [image for d in theta.generators if not (image := transform_derivation(d, edge)).is_zero()]
    kept: list[Derivation] = []
    dropped: list[Derivation] = []
    for k, image in enumerate(images):
        if check_tangent(image, divisor):
            kept.append(image)
            continue
        rescued = _make_tangent(image, images[:k] + images[k + 1 :], divisor)
        if rescued is None or rescued in kept:
            logger.warning(f"{edge.describe()}: dropped {image.formatted()}, not tangent to the divisor")
            dropped.append(image)
            continue
        logger.debug(f"{edge.describe()}: {image.formatted()} made tangent as {rescued.formatted()}")
        kept.append(rescued)
    return Distribution.of(target, kept, divisor, dropped=dropped)
