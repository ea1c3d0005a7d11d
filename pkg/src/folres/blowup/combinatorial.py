"""
Principalization of monomial ideals by blow-ups of pairs of coordinate hyperplanes, computed on exponent
vectors alone.
"""

from __future__ import annotations

import logging
from collections.abc import Sequence

from folres.algebra.frame import Frame
from folres.algebra.poly import support
from folres.blowup.chart import Center, Chart, ChartNode, ChartTree, blowup_charts
from folres.exceptions import BranchBudgetExhausted, InputError
from folres.ideals import FGIdeal

logger = logging.getLogger(__name__)

Exps = tuple[int, ...]

DEFAULT_MAX_CHARTS = 4096


def _le(a: Exps, b: Exps) -> bool:
    return all(x <= y for x, y in zip(a, b, strict=True))


def is_principal(exponents: Sequence[Exps]) -> bool:
    """Some exponent vector divides all the others."""
    return any(all(_le(a, b) for b in exponents) for a in exponents)


def choose_center(exponents: Sequence[Exps], allowed: Sequence[int]) -> tuple[int, int] | None:
    """
    Variable pair to blow up: within the first incomparable generator pair, the variable with the largest
    positive exponent difference and the one with the largest negative difference (ties by position).
    """
    n = len(exponents)
    for i in range(n):
        for j in range(i + 1, n):
            a, b = exponents[i], exponents[j]
            if _le(a, b) or _le(b, a):
                continue
            diff = [a[k] - b[k] for k in range(len(a))]
            pos = max((k for k in allowed if diff[k] > 0), key=lambda k: (diff[k], -k))
            neg = max((k for k in allowed if diff[k] < 0), key=lambda k: (-diff[k], -k))
            return (min(pos, neg), max(pos, neg))
    return None


def chart_exponents(exponents: Sequence[Exps], pivot: int, other: int) -> tuple[Exps, ...]:
    """Exponents after the blow-up of {x_pivot = x_other = 0} in the pivot chart: e[pivot] += e[other]."""
    out = []
    for e in exponents:
        f = list(e)
        f[pivot] += e[other]
        out.append(tuple(f))
    return tuple(out)


def monomial_exponents(ideal: FGIdeal, names: Sequence[str]) -> tuple[Exps, ...]:
    frame = ideal.frame
    out = []
    for g in ideal.generators:
        if len(g) != 1 or not set(support(g, frame)) <= set(names):
            raise InputError(
                "principalization needs monomial generators in the chosen variables",
                code="blowup.non_monomial",
                context={"variables": ",".join(names)},
            )
        out.append(next(iter(g.itermonoms())))
    return tuple(out)


def principalize_monomial(
    chart: Chart,
    ideal: FGIdeal,
    variables: Sequence[str] | None = None,
    max_charts: int = DEFAULT_MAX_CHARTS,
) -> ChartTree:
    """
    Tree of blow-ups of pairs {x_a = x_b = 0}, a and b from `variables` (default: the exceptional
    ones), after which the total transform of the monomial ideal is principal in every leaf. Nodes carry
    the transformed exponent vectors.
    """
    frame: Frame = chart.frame
    names = tuple(frame.exceptional_names if variables is None else variables)
    allowed = [frame.index(n) for n in frame.names if n in names]
    start = monomial_exponents(ideal, names)
    tree = ChartTree.start(ChartNode(chart, ideal=ideal, exponents=start))
    stack = [chart.id]
    while stack:
        cid = stack.pop()
        node = tree.nodes[cid]
        exps = node.exponents or ()
        pair = choose_center(exps, allowed)
        if pair is None:
            node.leaf = True
            continue
        a, b = pair
        center = Center((frame.names[a], frame.names[b]))
        children = []
        for child, edge in blowup_charts(node.chart, center):
            pivot = child.frame.index(edge.chart_variable or "")
            other = b if pivot == a else a
            tree.add(edge, ChartNode(child, exponents=chart_exponents(exps, pivot, other)))
            children.append(child.id)
        if len(tree.nodes) > max_charts:
            raise BranchBudgetExhausted(
                f"principalization exceeded {max_charts} charts", context={"max_charts": max_charts}
            )
        stack.extend(reversed(children))
    depth = max((tree.depth(n.id) for n in tree.leaves()), default=0)
    logger.debug(f"principalized {len(start)} monomials: {len(tree.leaves())} leaves, depth {depth}")
    return tree
