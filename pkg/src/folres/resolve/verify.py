"""Independent re-check of a finished chart tree."""

from __future__ import annotations

import logging

from folres.blowup import ChartTree
from folres.foliation import check_monomial_form
from folres.ideals import GLOBAL, ideal_equal, principal_monomial
from folres.invariants import check_theta_admissible
from folres.models.verification import VerificationReport

logger = logging.getLogger(__name__)


def verify_resolution(tree: ChartTree) -> VerificationReport:
    """
    Recompute, from the stored charts alone, what a resolution promises: every blow-up center admissible
    for the parent distribution, every leaf ideal the root ideal pulled back and a monomial times a unit,
    every leaf distribution monomial, every fiber prediction met.
    """
    report = VerificationReport(root=tree.root)
    root = tree.nodes[tree.root]
    if root.ideal is None:
        report.add("FAIL", tree.root, "root chart carries no ideal", "tree")
        return report

    for edge in tree.edges:
        child_theta = tree.nodes[edge.child].theta
        if child_theta is not None and child_theta.tangency_warning:
            report.add(
                "WARN", edge.child, f"{len(child_theta.dropped)} transformed generator(s) not tangent to the divisor", "edge"
            )
        if edge.kind != "blowup" or edge.center is None:
            continue
        report.edges_checked += 1
        parent = tree.nodes[edge.parent]
        if parent.theta is None:
            report.add("FAIL", edge.child, f"parent {edge.parent} carries no distribution", "edge")
            continue
        verdict = check_theta_admissible(parent.theta, edge.center.ideal(parent.chart.frame))
        if not verdict.admissible:
            report.add("FAIL", edge.child, f"center ({edge.center}) is not admissible at {edge.parent}", "edge")
        elif edge.admissibility is not None and not edge.admissibility.admissible:
            report.add("FAIL", edge.child, f"stored verdict for ({edge.center}) says not admissible", "edge")

    for leaf in tree.leaves():
        report.leaves += 1
        if leaf.ideal is None or leaf.theta is None:
            report.add("FAIL", leaf.id, "leaf carries no ideal or distribution", "leaf")
            continue
        exps = principal_monomial(leaf.ideal)
        if exps is None:
            report.add("FAIL", leaf.id, f"pulled-back ideal {leaf.ideal!r} is not principal", "leaf")
        else:
            frame = leaf.chart.frame
            outside = [n for n, e in zip(frame.names, exps, strict=True) if e and not frame.is_exceptional(n)]
            if outside:
                report.add("WARN", leaf.id, f"principal monomial involves {','.join(outside)} outside the divisor", "leaf")
        kind = check_monomial_form(leaf.theta).kind
        if kind != "monomial":
            report.add("FAIL", leaf.id, f"leaf distribution is {kind}", "leaf")
        pulled = leaf.chart.root_map.pull_ideal(root.ideal)
        if not ideal_equal(pulled, leaf.ideal, GLOBAL):
            report.add("FAIL", leaf.id, "leaf ideal differs from the root ideal pulled back along the chart map", "leaf")

    for node in tree.nodes.values():
        for check in node.fiber_checks:
            report.fiber_checks += 1
            if not check.ok:
                report.add("FAIL", node.id, f"fiber prediction exceeded: {check.describe()}", "fiber")

    if report.is_valid:
        report.add(
            "PASS", tree.root, f"{report.leaves} leaves, {report.edges_checked} blow-ups, {report.fiber_checks} fiber checks", "tree"
        )
    else:
        logger.warning(f"verification failed at {report.first_failure.chart}: {report.first_failure.message}")  # type: ignore[union-attr]
    return report
