"""Generalized Fitting ideals of a distribution along an ideal and the admissibility test for blow-up centers."""

from __future__ import annotations

import logging
from dataclasses import dataclass
from itertools import combinations
from typing import Literal

from sympy.polys.matrices import DomainMatrix

from folres.algebra.frame import Poly
from folres.foliation.distribution import Distribution
from folres.ideals import GLOBAL, FGIdeal, contains_one, groebner, ideal_sum, is_contained

logger = logging.getLogger(__name__)

Component = Literal["unit", "contained", "neither"]


@dataclass(frozen=True)
class FittingData:
    """k x k determinants det[d_a(f_b)] over k-subsets of theta-generators and J-generators."""

    k: int
    determinants: tuple[Poly, ...]
    ideal: FGIdeal
    verdict_component: Component


def fitting_ideal(theta: Distribution, center: FGIdeal, k: int) -> FittingData:
    if k < 1:
        raise ValueError("Fitting index starts at 1")
    frame = center.frame
    domain = frame.ring.to_domain()
    dets: list[Poly] = []
    for ders in combinations(theta.generators, k):
        for funcs in combinations(center.generators, k):
            rows = []
            for d in ders:
                entries = [d.apply(f) for f in funcs]
                # clear denominators row by row; each factor is a unit
                scale = frame.one
                for e in entries:
                    if not e.is_polynomial():
                        scale = scale * e.den
                rows.append([domain.convert((e * scale).num) for e in entries])
            det = DomainMatrix(rows, (k, k), domain).det()
            if det not in dets:
                dets.append(det)
    ideal = FGIdeal.of(frame, dets)
    if contains_one(ideal_sum(ideal, center), GLOBAL):
        verdict: Component = "unit"
    elif is_contained(ideal, center, GLOBAL):
        verdict = "contained"
    else:
        verdict = "neither"
    return FittingData(k, tuple(dets), ideal, verdict)


@dataclass(frozen=True)
class AdmissibilityVerdict:
    """
    Admissible iff Gamma_k + I_C is the unit ideal for k <= k0 and Gamma_k lies in I_C for k > k0.

    On failure, `witness_k` is the first offending k and `witness` the reduced basis of Gamma_k + I_C.
    Clause one is read over the whole chart (the polynomial ring), not stalk by stalk.
    """

    admissible: bool
    k0: int | None
    components: tuple[Component, ...]
    witness_k: int | None = None
    witness: tuple[Poly, ...] = ()


def check_theta_admissible(theta: Distribution, center: FGIdeal) -> AdmissibilityVerdict:
    top = min(len(theta.generators), len(center.generators))
    components = tuple(fitting_ideal(theta, center, k).verdict_component for k in range(1, top + 1))
    k0 = 0
    while k0 < len(components) and components[k0] == "unit":
        k0 += 1
    for k in range(k0 + 1, top + 1):
        if components[k - 1] != "contained":
            data = fitting_ideal(theta, center, k)
            basis = groebner(ideal_sum(data.ideal, center)).basis
            logger.debug(f"center {center!r} fails admissibility at k={k}")
            return AdmissibilityVerdict(False, None, components, k, basis)
    return AdmissibilityVerdict(True, k0, components)
