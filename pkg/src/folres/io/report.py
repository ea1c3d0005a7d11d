"""Chart trees to report records and back; report files on disk."""

from __future__ import annotations

import gzip
import json
import logging
from dataclasses import asdict
from pathlib import Path
from typing import Any

from pydantic import ValidationError
from sympy import Rational

from folres.algebra.frame import Frame
from folres.algebra.poly import format_poly, format_rational
from folres.blowup import Center, Chart, ChartMap, ChartNode, ChartTree, Edge
from folres.exceptions import ArtifactDecodeError, ArtifactWriteError, FolresException
from folres.foliation import CoordinateChange, Distribution
from folres.ideals import FGIdeal
from folres.invariants import AdmissibilityVerdict
from folres.io.grammar import parse_derivations, parse_polynomial, parse_polynomials, parse_variables
from folres.io.problem import ProblemFile
from folres.models.report import (
    AdmissibilityRecord,
    EdgeRecord,
    FiberCheckRecord,
    NodeRecord,
    PreparedRecord,
    ProblemSummary,
    Report,
)
from folres.resolve.driver import FiberCheck
from folres.resolve.forms import PreparedForm, WTForm, split_generators
from folres.typing import ChartId

logger = logging.getLogger(__name__)


def problem_summary(problem: ProblemFile) -> ProblemSummary:
    return ProblemSummary(
        variables=problem.frame.describe(),
        theta=problem.theta.formatted(),
        ideal=problem.ideal.formatted(),
        center=list(problem.center) if problem.center else None,
        source=problem.source,
    )


def admissibility_record(center: tuple[str, ...], verdict: AdmissibilityVerdict, frame: Frame) -> AdmissibilityRecord:
    return AdmissibilityRecord(
        center=list(center),
        admissible=verdict.admissible,
        k0=verdict.k0,
        components=list(verdict.components),
        witness_k=verdict.witness_k,
        witness=[format_poly(p, frame) for p in verdict.witness],
    )


def _key(key: tuple[int, int]) -> str:
    return f"{key[0]},{key[1]}"


def _prepared_record(pf: PreparedForm) -> PreparedRecord:
    wt = pf.wt
    return PreparedRecord(
        v=wt.v,
        nu=wt.nu,
        generators=[format_poly(g, wt.frame) for g in wt.generators],
        exponents={_key(k): list(e) for k, e in sorted(pf.exponents.items())},
        units={_key(k): format_poly(u, wt.frame) for k, u in sorted(pf.units.items())},
    )


def _fiber_record(check: FiberCheck) -> FiberCheckRecord:
    return FiberCheckRecord(
        vanishing=list(check.vanishing),
        gamma={n: format_rational(c) for n, c in check.gamma},
        subcase=check.subcase,
        bound=check.bound,
        observed=check.observed,
        ok=check.ok,
    )


def node_record(node: ChartNode, parent: ChartId | None) -> NodeRecord:
    frame = node.chart.frame
    return NodeRecord(
        id=node.id,
        parent=parent,
        variables=frame.describe(),
        theta=node.theta.formatted() if node.theta is not None else [],
        ideal=node.ideal.formatted() if node.ideal is not None else [],
        root_map=node.chart.root_map.formatted(),
        local_only=node.chart.local_only,
        invariant=node.invariant,
        monomial_verdict=node.monomial_verdict,
        step=node.step,
        leaf=node.leaf,
        principal_monomial=list(node.principal_monomial) if node.principal_monomial is not None else None,
        supported_in_divisor=node.supported_in_divisor,
        prepared=_prepared_record(node.prepared) if node.prepared is not None else None,
        fiber_checks=[_fiber_record(c) for c in node.fiber_checks],
        notes=list(node.notes),
    )


def edge_record(edge: Edge) -> EdgeRecord:
    source = edge.chart_map.source
    inverse = None
    if edge.kind == "coordinates" and edge.change is not None:
        inverse = {n: format_poly(p, source) for n, p in zip(source.names, edge.change.inverse, strict=True)}
    admissibility = None
    if edge.admissibility is not None and edge.center is not None:
        admissibility = admissibility_record(edge.center.variables, edge.admissibility, source)
    return EdgeRecord(
        kind=edge.kind,
        parent=edge.parent,
        child=edge.child,
        images=edge.chart_map.formatted(),
        inverse=inverse,
        center=list(edge.center.variables) if edge.center is not None else None,
        chart_variable=edge.chart_variable,
        point={n: format_rational(c) for n, c in edge.point},
        label=edge.label,
        admissibility=admissibility,
    )


def tree_records(tree: ChartTree) -> tuple[list[NodeRecord], list[EdgeRecord]]:
    parents = {e.child: e.parent for e in tree.edges}
    nodes = [node_record(n, parents.get(cid)) for cid, n in tree.nodes.items()]
    return nodes, [edge_record(e) for e in tree.edges]


# records back to a tree


def _images(record: dict[str, str], source: Frame, target: Frame) -> tuple:
    return tuple(parse_polynomial(record[n], target) for n in source.names)


def _rebuild_edge(record: EdgeRecord, parent: Chart, frame: Frame) -> Edge:
    source = parent.frame
    chart_map = ChartMap(source, frame, _images(record.images, source, frame))
    admissibility = None
    if record.admissibility is not None:
        a = record.admissibility
        admissibility = AdmissibilityVerdict(
            a.admissible,
            a.k0,
            tuple(a.components),  # type: ignore[arg-type]
            a.witness_k,
            tuple(parse_polynomial(w, source) for w in a.witness),
        )
    if record.kind == "blowup":
        if record.center is None or record.chart_variable is None:
            raise ArtifactDecodeError(f"blow-up edge {record.child} lacks its center", context={"chart": record.child})
        return Edge(
            "blowup", parent.id, ChartId(record.child), chart_map, Center(tuple(record.center)), record.chart_variable,
            label=record.label, admissibility=admissibility,
        )
    if record.kind == "restrict":
        shifts = {n: Rational(c) for n, c in record.point.items()}
        change = CoordinateChange.translation(source, shifts)
        return Edge(
            "restrict", parent.id, ChartId(record.child), chart_map, change=change, point=tuple(shifts.items()),
            label=record.label,
        )
    if record.inverse is None:
        raise ArtifactDecodeError(f"coordinate edge {record.child} lacks its inverse", context={"chart": record.child})
    change = CoordinateChange(source, chart_map.images, _images(record.inverse, source, source))
    return Edge("coordinates", parent.id, ChartId(record.child), chart_map, change=change, label=record.label)


def _rebuild_prepared(record: PreparedRecord, frame: Frame) -> PreparedForm:
    generators = tuple(parse_polynomial(g, frame) for g in record.generators)
    coefficients, tops = split_generators(generators, frame, record.v, record.nu)
    wt = WTForm(frame, record.v, record.nu, generators, coefficients, tops)

    def key(text: str) -> tuple[int, int]:
        i, j = text.split(",")
        return int(i), int(j)

    return PreparedForm(
        wt,
        {key(k): tuple(e) for k, e in record.exponents.items()},
        {key(k): parse_polynomial(u, frame) for k, u in record.units.items()},
    )


def _rebuild_node(record: NodeRecord, chart: Chart) -> ChartNode:
    frame = chart.frame
    node = ChartNode(
        chart,
        theta=Distribution.of(frame, parse_derivations(", ".join(record.theta), frame)),
        ideal=FGIdeal.of(frame, parse_polynomials(", ".join(record.ideal), frame)),
        invariant=tuple(record.invariant) if record.invariant is not None else None,  # type: ignore[arg-type]
        monomial_verdict=record.monomial_verdict,
        step=record.step,
        leaf=record.leaf,
        principal_monomial=tuple(record.principal_monomial) if record.principal_monomial is not None else None,
        supported_in_divisor=record.supported_in_divisor,
        notes=list(record.notes),
    )
    if record.prepared is not None:
        node.prepared = _rebuild_prepared(record.prepared, frame)
    for c in record.fiber_checks:
        node.fiber_checks.append(
            FiberCheck(
                ChartId(record.id), tuple(c.vanishing), tuple((n, Rational(v)) for n, v in c.gamma.items()),
                c.subcase, c.bound, c.observed,
            )
        )
    return node


def report_tree(report: Report) -> ChartTree:
    """The chart tree stored in a report; chart maps are recomposed from the edges."""
    if report.root is None or not report.nodes:
        raise ArtifactDecodeError("report carries no chart tree", context={"command": report.command})
    records = {n.id: n for n in report.nodes}
    try:
        root_record = records[report.root]
        root_frame = parse_variables(root_record.variables)
        tree = ChartTree.start(_rebuild_node(root_record, Chart.root(root_frame, report.root)))
        for e in report.edges:
            parent = tree.nodes[ChartId(e.parent)].chart
            child_record = records[e.child]
            frame = parse_variables(child_record.variables)
            edge = _rebuild_edge(e, parent, frame)
            chart = Chart(edge.child, frame, parent.root_map.then(edge.chart_map), parent.id, child_record.local_only)
            tree.add(edge, _rebuild_node(child_record, chart))
    except KeyError as exc:
        raise ArtifactDecodeError(f"report references unknown chart {exc.args[0]}", context={"chart": str(exc.args[0])}) from exc
    except FolresException as exc:
        if isinstance(exc, ArtifactDecodeError):
            raise
        raise ArtifactDecodeError(f"report content does not parse: {exc.message}", context=exc.context) from exc
    return tree


def statistics_dict(stats: Any) -> dict[str, Any]:
    return asdict(stats) if stats is not None else {}


# files


def save_report(report: Report, path: Path) -> None:
    """Write the report as indented JSON (`.json`) or gzipped JSON (`.json.gz`)."""
    path = Path(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        text = report_json(report)
        if path.suffix == ".gz":
            with open(path, "wb") as raw_f, gzip.GzipFile(filename="", mode="wb", fileobj=raw_f, mtime=0) as gz_f:
                gz_f.write(text.encode("utf-8"))
        else:
            path.write_text(text, encoding="utf-8")
        logger.debug(f"Saved {path}")
    except (OSError, TypeError, ValueError) as e:
        raise ArtifactWriteError(f"Failed to save {path}: {e}", context={"path": str(path)}) from e


def report_json(report: Report) -> str:
    return json.dumps(report.model_dump(mode="json"), indent=2) + "\n"


def load_report(path: Path) -> Report:
    path = Path(path)
    if not path.exists():
        raise ArtifactDecodeError(f"report not found: {path}", context={"path": str(path)})
    try:
        if path.suffix == ".gz":
            with gzip.open(path, "rt", encoding="utf-8") as f:
                payload = json.load(f)
        else:
            with open(path, encoding="utf-8") as f:
                payload = json.load(f)
        return Report.model_validate(payload)
    except (OSError, json.JSONDecodeError, ValidationError) as e:
        raise ArtifactDecodeError(f"Failed to load {path}: {e}", context={"path": str(path)}) from e
