"""Charts, centers, chart maps and the chart tree accumulated by blow-ups, coordinate changes and restrictions."""

from __future__ import annotations

from collections.abc import Iterable, Iterator, Mapping, Sequence
from dataclasses import dataclass, field
from typing import TYPE_CHECKING, Any, Literal

from sympy import Rational

from folres.algebra.frame import Frame, Poly
from folres.algebra.local import LocalElement
from folres.algebra.poly import format_poly, format_rational, substitute
from folres.exceptions import CenterError, InternalInconsistency
from folres.foliation.derivation import CoordinateChange
from folres.ideals import FGIdeal
from folres.typing import ChartId

if TYPE_CHECKING:
    from folres.foliation.distribution import Distribution
    from folres.invariants.fitting import AdmissibilityVerdict
    from folres.resolve.forms import PreparedForm

EdgeKind = Literal["blowup", "coordinates", "restrict"]


@dataclass(frozen=True)
class Center:
    """The coordinate subspace {v = 0 for v in variables}, listed in frame order."""

    variables: tuple[str, ...]

    @classmethod
    def of(cls, frame: Frame, names: Iterable[str]) -> Center:
        chosen = list(dict.fromkeys(n.strip() for n in names if n.strip()))
        if len(chosen) < 2:
            raise CenterError("a blow-up center needs at least two coordinates", context={"center": ",".join(chosen)})
        for n in chosen:
            if n not in frame.names:
                raise CenterError(f"center variable {n!r} is not a chart coordinate", context={"center": ",".join(chosen)})
        return cls(tuple(n for n in frame.names if n in chosen))

    def ideal(self, frame: Frame) -> FGIdeal:
        return FGIdeal.of(frame, [frame.gen(n) for n in self.variables])

    def __str__(self) -> str:
        return ",".join(self.variables)


@dataclass(frozen=True)
class ChartMap:
    """Source (parent) coordinates as polynomials in the target (child) coordinates."""

    source: Frame
    target: Frame
    images: tuple[Poly, ...]

    @classmethod
    def identity(cls, frame: Frame) -> ChartMap:
        return cls(frame, frame, tuple(frame.ring.gens))

    def pull(self, f: Poly) -> Poly:
        return substitute(f, self.images, self.source, self.target)

    def pull_local(self, f: LocalElement) -> LocalElement:
        return f.substitute(self.images, self.source, self.target)

    def pull_ideal(self, ideal: FGIdeal) -> FGIdeal:
        return FGIdeal.of(self.target, [self.pull(g) for g in ideal.generators])

    def then(self, other: ChartMap) -> ChartMap:
        """self: A -> B followed by other: B -> C, as a map A -> C."""
        if other.source.names != self.target.names:
            raise InternalInconsistency("chart maps do not compose", context={"left": str(self.target.names)})
        return ChartMap(self.source, other.target, tuple(other.pull(p) for p in self.images))

    def formatted(self) -> dict[str, str]:
        return {n: format_poly(p, self.target) for n, p in zip(self.source.names, self.images, strict=True)}


@dataclass(frozen=True)
class Chart:
    id: ChartId
    frame: Frame
    root_map: ChartMap
    parent: ChartId | None = None
    local_only: bool = False

    @classmethod
    def root(cls, frame: Frame, chart_id: str = "root") -> Chart:
        return cls(ChartId(chart_id), frame, ChartMap.identity(frame))


@dataclass(frozen=True)
class Edge:
    kind: EdgeKind
    parent: ChartId
    child: ChartId
    chart_map: ChartMap
    center: Center | None = None
    chart_variable: str | None = None
    change: CoordinateChange | None = None
    point: tuple[tuple[str, Rational], ...] = ()
    label: str = ""
    admissibility: AdmissibilityVerdict | None = None

    def describe(self) -> str:
        if self.kind == "blowup":
            return f"blow-up ({self.center}) {self.chart_variable}-chart"
        if self.kind == "restrict":
            return "restrict at " + ", ".join(f"{n}={format_rational(c)}" for n, c in self.point)
        return f"coordinates ({self.label})" if self.label else "coordinates"


def blowup_charts(chart: Chart, center: Center) -> list[tuple[Chart, Edge]]:
    """
    One chart per center variable v0: v0 stays, every other center variable v becomes v0 * v, the rest
    is unchanged. v0 becomes exceptional in its chart; coordinate names are kept.
    """
    frame = chart.frame
    center = Center.of(frame, center.variables)
    out = []
    for v0 in center.variables:
        target = frame.with_exceptional(v0)
        pivot = target.gen(v0)
        images = tuple(
            pivot * target.gen(n) if n in center.variables and n != v0 else target.gen(n) for n in frame.names
        )
        chart_map = ChartMap(frame, target, images)
        child_id = ChartId(f"{chart.id}/bl({center})@{v0}")
        child = Chart(child_id, target, chart.root_map.then(chart_map), chart.id, chart.local_only)
        out.append((child, Edge("blowup", chart.id, child_id, chart_map, center, v0)))
    return out


def blowup_chart(chart: Chart, center: Center, chart_variable: str) -> tuple[Chart, Edge]:
    for child, edge in blowup_charts(chart, center):
        if edge.chart_variable == chart_variable:
            return child, edge
    raise CenterError(f"{chart_variable!r} is not a variable of the center ({center})")


def coordinate_chart(chart: Chart, change: CoordinateChange, label: str) -> tuple[Chart, Edge]:
    """Child chart in the coordinates of `change`; the edge keeps the inverse for distributions."""
    frame = chart.frame
    if change.frame.names != frame.names:
        raise InternalInconsistency("coordinate change belongs to another frame")
    chart_map = ChartMap(frame, frame, change.forward)
    child_id = ChartId(f"{chart.id}/coord({label})")
    child = Chart(child_id, frame, chart.root_map.then(chart_map), chart.id, chart.local_only)
    return child, Edge("coordinates", chart.id, child_id, chart_map, change=change, label=label)


def recenter(chart: Chart, point: Mapping[str, Rational | int]) -> tuple[Chart, Edge]:
    """Open restriction around `point`: each listed coordinate x becomes x + point[x] and loses its exceptional flag."""
    frame = chart.frame
    shifts = {n: Rational(point[n]) for n in frame.names if n in point and point[n] != 0}
    target = frame.without_exceptional(*shifts)
    change = CoordinateChange.translation(frame, shifts)
    # same names, same ring: the translation images serve the target frame as they are
    chart_map = ChartMap(frame, target, change.forward)
    label = ",".join(f"{n}={format_rational(c)}" for n, c in shifts.items())
    child_id = ChartId(f"{chart.id}/at({label})")
    child = Chart(child_id, target, chart.root_map.then(chart_map), chart.id, True)
    edge = Edge("restrict", chart.id, child_id, chart_map, change=change, point=tuple(shifts.items()))
    return child, edge


@dataclass
class ChartNode:
    """A chart with the foliated data living on it; the driver fills the optional fields."""

    chart: Chart
    theta: Distribution | None = None
    ideal: FGIdeal | None = None
    invariant: tuple[int, int] | None = None
    monomial_verdict: str | None = None
    step: str = ""
    leaf: bool = False
    principal_monomial: tuple[int, ...] | None = None
    supported_in_divisor: bool | None = None
    exponents: tuple[tuple[int, ...], ...] | None = None
    prepared: PreparedForm | None = None
    fiber_checks: list[Any] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)

    @property
    def id(self) -> ChartId:
        return self.chart.id


@dataclass
class ChartTree:
    """Append-only tree of charts keyed by path-shaped ids."""

    root: ChartId
    nodes: dict[ChartId, ChartNode] = field(default_factory=dict)
    edges: list[Edge] = field(default_factory=list)

    @classmethod
    def start(cls, node: ChartNode) -> ChartTree:
        return cls(node.id, {node.id: node})

    def add(self, edge: Edge, node: ChartNode) -> ChartNode:
        if edge.parent not in self.nodes:
            raise InternalInconsistency("edge parent is not in the tree", context={"parent": edge.parent})
        if node.id in self.nodes:
            raise InternalInconsistency("duplicate chart id", context={"chart": node.id})
        self.nodes[node.id] = node
        self.edges.append(edge)
        return node

    def children(self, chart_id: ChartId) -> list[Edge]:
        return [e for e in self.edges if e.parent == chart_id]

    def parent_edge(self, chart_id: ChartId) -> Edge | None:
        return next((e for e in self.edges if e.child == chart_id), None)

    def path(self, chart_id: ChartId) -> list[Edge]:
        """Edges from the root down to the chart."""
        out: list[Edge] = []
        edge = self.parent_edge(chart_id)
        while edge is not None:
            out.append(edge)
            edge = self.parent_edge(edge.parent)
        return list(reversed(out))

    def depth(self, chart_id: ChartId) -> int:
        return len(self.path(chart_id))

    def leaves(self) -> list[ChartNode]:
        parents = {e.parent for e in self.edges}
        return [n for cid, n in self.nodes.items() if cid not in parents]

    def walk(self) -> Iterator[tuple[Edge | None, ChartNode]]:
        """Depth-first, children in insertion order."""
        stack: list[tuple[Edge | None, ChartId]] = [(None, self.root)]
        while stack:
            edge, cid = stack.pop()
            yield edge, self.nodes[cid]
            stack.extend((e, e.child) for e in reversed(self.children(cid)))

    def counts(self) -> dict[str, int]:
        out = {"blowup": 0, "coordinates": 0, "restrict": 0}
        for e in self.edges:
            out[e.kind] += 1
        return out


def lift_images(images: Sequence[Poly], source: Frame, target: Frame) -> tuple[Poly, ...]:
    """Re-express polynomials of `source` inside a frame containing the same names plus others."""
    gens = {n: target.gen(n) for n in source.names}
    return tuple(substitute(p, gens, source, target) for p in images)
