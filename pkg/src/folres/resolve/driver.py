"""
Local resolution driver: drop the type, reach a prepared normal form, drop nu, repeat at every new chart
origin until the pulled-back ideal is a monomial times a unit.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field, replace

import numpy as np
from sympy import Rational

from folres.algebra.frame import Frame, Poly
from folres.algebra.poly import format_rational, substitute, support
from folres.blowup import (
    Chart,
    ChartNode,
    ChartTree,
    Edge,
    blowup_chart,
    coordinate_chart,
    exponent_matrix,
    fiber_analysis,
    fiber_classes,
    principalize_monomial,
    recenter,
    transform_distribution,
    transform_ideal,
)
from folres.blowup.chart import lift_images
from folres.config import DriverOptions
from folres.exceptions import (
    BranchBudgetExhausted,
    FolresException,
    InputError,
    InternalInconsistency,
    SubclassAbort,
)
from folres.foliation import CoordinateChange, Derivation, Distribution, check_monomial_form
from folres.ideals import FGIdeal, monomial_generators, principal_monomial
from folres.invariants import OriginInvariant, check_theta_admissible, origin_invariant
from folres.resolve.forms import DropIdeal, PreparedForm, WTForm, drop_ideal, prepared_form, weierstrass_form
from folres.typing import ChartId
from folres.utils.timing import ExecutionStats, ExecutionTimer

logger = logging.getLogger(__name__)

Measure = tuple[int, int, int]
"""(dimension, nu, type) at a chart origin; a principal ideal counts as nu = 0, type 1."""


@dataclass(frozen=True)
class MeasureTransition:
    step: str
    parent: ChartId
    child: ChartId
    before: Measure
    after: Measure


@dataclass(frozen=True)
class FiberCheck:
    """Predicted bound against the invariant recomputed at one sampled point of a fiber class."""

    chart: ChartId
    vanishing: tuple[str, ...]
    gamma: tuple[tuple[str, Rational], ...]
    subcase: str
    bound: int
    observed: int

    @property
    def ok(self) -> bool:
        return self.observed <= self.bound

    def describe(self) -> str:
        point = ", ".join(f"{n}={format_rational(c)}" for n, c in self.gamma)
        return f"{self.chart} [{','.join(self.vanishing)}=0; {point}]: case {self.subcase}, {self.observed} <= {self.bound}"


@dataclass
class DriverCounters:
    charts: int = 1
    edges: dict[str, int] = field(default_factory=lambda: {"blowup": 0, "coordinates": 0, "restrict": 0})
    steps: dict[str, int] = field(default_factory=lambda: {"step1": 0, "weierstrass": 0, "step2": 0, "step3": 0})
    max_depth: int = 0
    recursions: int = 0
    projected_charts: int = 0
    transitions: list[MeasureTransition] = field(default_factory=list)

    def absorb(self, other: DriverCounters) -> None:
        """Fold in the counters of a lower-dimensional run."""
        self.recursions += 1 + other.recursions
        self.projected_charts += other.charts + other.projected_charts

    def as_dict(self) -> dict[str, object]:
        return {
            "charts": self.charts,
            "edges": dict(self.edges),
            "steps": dict(self.steps),
            "max_depth": self.max_depth,
            "recursions": self.recursions,
            "projected_charts": self.projected_charts,
            "transitions": len(self.transitions),
        }


@dataclass(frozen=True)
class ResolveResult:
    tree: ChartTree
    counters: DriverCounters
    stats: ExecutionStats
    fiber_checks: tuple[FiberCheck, ...]
    options: DriverOptions


@dataclass(frozen=True)
class Expectation:
    """What a step promises at the origins of its leaf charts: (nu, type) strictly below `bound`."""

    step: str
    source: ChartId
    before: Measure
    bound: tuple[int, int]
    prepared: str | None = None


class Resolver:
    """Owns one chart tree and grows it from the root by replaying planned edges on the real data."""

    def __init__(
        self,
        root: ChartNode,
        options: DriverOptions | None = None,
        *,
        timer: ExecutionTimer | None = None,
    ) -> None:
        if root.theta is None or root.ideal is None:
            raise InternalInconsistency("driver root needs a distribution and an ideal")
        self.options = options or DriverOptions()
        self.backend = self.options.backend
        self.timer = timer or ExecutionTimer()
        self.counters = DriverCounters()
        self.fiber_checks: list[FiberCheck] = []
        self.tree = ChartTree.start(root)
        self._rng = np.random.default_rng(self.options.seed)

    @property
    def root(self) -> ChartNode:
        return self.tree.nodes[self.tree.root]

    def result(self) -> ResolveResult:
        return ResolveResult(self.tree, self.counters, self.timer.to_model(), tuple(self.fiber_checks), self.options)

    # dispatch

    def resolve(self, cid: ChartId, expect: Expectation | None = None) -> None:
        node = self.tree.nodes[cid]
        if self.close_leaf(node):
            self._record(expect, node, (0, 1))
            return
        node = self.normalize(node)
        origin = self.origin(node)
        inv = origin.invariant
        self._record(expect, node, inv.as_tuple())
        if expect is not None and expect.prepared is not None and inv.as_tuple() == (expect.bound[0], 1):
            self.step3(node, self.prepare(node, origin, expect.prepared))
        elif inv.type == 2:
            self.step1(node, origin)
        else:
            self.weierstrass(node, origin)

    def origin(self, node: ChartNode) -> OriginInvariant:
        assert node.theta is not None and node.ideal is not None
        with self.timer.measure("invariants"):
            origin = origin_invariant(node.theta, node.ideal, self.options.max_stages, self.backend)
        node.invariant = origin.invariant.as_tuple()
        return origin

    def normalize(self, node: ChartNode) -> ChartNode:
        """Bring theta into monomial form, through a coordinates edge when the form needs new coordinates."""
        assert node.theta is not None
        with self.timer.measure("monomial"):
            verdict = check_monomial_form(node.theta)
        node.monomial_verdict = verdict.kind
        if verdict.form is None:
            raise SubclassAbort(
                f"distribution at {node.id} is not monomial: {verdict.reason}",
                context={"chart": node.id, "verdict": verdict.kind},
            )
        form = verdict.form
        if form.change.is_identity():
            node.theta = form.distribution()
            return node
        chart, edge = coordinate_chart(node.chart, form.change, "monomial")
        child = self._attach(node, chart, edge, theta=form.distribution())
        child.monomial_verdict = "monomial"
        child.step = "normalized"
        return child

    def close_leaf(self, node: ChartNode) -> bool:
        assert node.theta is not None and node.ideal is not None
        exps = principal_monomial(node.ideal)
        if exps is None:
            return False
        frame = node.chart.frame
        node.leaf = True
        node.step = "leaf"
        node.invariant = (0, 1)
        node.principal_monomial = exps
        node.supported_in_divisor = all(e == 0 or frame.is_exceptional(n) for n, e in zip(frame.names, exps, strict=True))
        node.monomial_verdict = check_monomial_form(node.theta).kind
        if not node.supported_in_divisor:
            logger.debug(f"{node.id}: principal leaf not supported in the divisor")
        return True

    def _record(self, expect: Expectation | None, node: ChartNode, value: tuple[int, int]) -> None:
        if expect is None:
            return
        after = (node.chart.frame.dimension, *value)
        if value >= expect.bound:
            raise InternalInconsistency(
                f"{expect.step} did not lower the invariant at {node.id}: {value} from {expect.before[1:]}",
                context={"chart": node.id, "step": expect.step, "source": expect.source},
            )
        self.counters.transitions.append(MeasureTransition(expect.step, expect.source, node.id, expect.before, after))

    def _measure(self, node: ChartNode, origin: OriginInvariant) -> Measure:
        return (node.chart.frame.dimension, *origin.invariant.as_tuple())

    # edges

    def _attach(self, parent: ChartNode, chart: Chart, edge: Edge, *, theta: Distribution | None = None) -> ChartNode:
        """Apply an edge to the parent's data, check admissibility of blow-ups and add the child."""
        assert parent.theta is not None and parent.ideal is not None
        if edge.kind == "blowup" and edge.center is not None:
            with self.timer.measure("admissibility"):
                verdict = check_theta_admissible(parent.theta, edge.center.ideal(parent.chart.frame))
            if not verdict.admissible:
                raise InternalInconsistency(
                    f"center ({edge.center}) is not admissible at {parent.id}",
                    context={"chart": parent.id, "center": str(edge.center), "k": verdict.witness_k},
                )
            edge = replace(edge, admissibility=verdict)
        ideal = transform_ideal(parent.ideal, edge)
        image = theta if theta is not None else transform_distribution(parent.theta, edge)
        node = self.tree.add(edge, ChartNode(chart, theta=image, ideal=ideal))
        self.counters.charts += 1
        self.counters.edges[edge.kind] += 1
        depth = self.tree.depth(node.id)
        self.counters.max_depth = max(self.counters.max_depth, depth)
        if len(self.tree.nodes) > self.options.max_branches:
            raise BranchBudgetExhausted(
                f"chart tree exceeded {self.options.max_branches} charts",
                context={"max_branches": self.options.max_branches, "chart": node.id},
            )
        if depth > self.options.max_depth:
            raise BranchBudgetExhausted(
                f"chart {node.id} is deeper than {self.options.max_depth}",
                code="budget.depth",
                context={"max_depth": self.options.max_depth},
            )
        return node

    def _replay(self, node: ChartNode, plan: ChartTree) -> list[ChartNode]:
        """Attach every edge of a plan rooted at `node`; returns the nodes at the plan's leaves."""
        for edge, planned in plan.walk():
            if edge is None:
                continue
            self._attach(self.tree.nodes[edge.parent], planned.chart, edge)
        return [self.tree.nodes[leaf.id] for leaf in plan.leaves()]

    # step 1

    def step1(self, node: ChartNode, origin: OriginInvariant, *, descend: bool = True) -> list[ChartNode]:
        """Principalize the monomial closure Cl = H(theta, I, nu) by blow-ups of pairs of tangent coordinates."""
        assert node.theta is not None
        self.counters.steps["step1"] += 1
        inv = origin.invariant
        frame = node.chart.frame
        with self.timer.measure("step1"):
            generators = monomial_generators(inv.closure, self.backend)
            if generators is None:
                raise SubclassAbort(
                    f"tangency closure at {node.id} is not a monomial ideal",
                    context={"chart": node.id, "closure": repr(inv.closure)},
                )
            closure = FGIdeal.of(frame, [frame.monomial(e) for e in generators])
            try:
                plan = principalize_monomial(node.chart, closure, node.theta.tangent_variables(), self.options.max_branches)
            except InputError as exc:
                raise InternalInconsistency(
                    "tangency closure has generators outside the tangent coordinates", context={"chart": node.id}
                ) from exc
            leaves = self._replay(node, plan)
        node.step = "step1"
        logger.debug(f"step1 at {node.id}: closure {closure!r}, {len(leaves)} leaves")
        if descend:
            expect = Expectation("step1", node.id, self._measure(node, origin), (inv.nu, 2))
            for leaf in leaves:
                self.resolve(leaf.id, expect)
        return leaves

    # Weierstrass-Tschirnhaus

    def weierstrass(
        self, node: ChartNode, origin: OriginInvariant, *, descend: bool = True
    ) -> tuple[WTForm, list[ChartNode]]:
        """Weierstrass-Tschirnhaus coordinates along a regular direction, then step 2."""
        assert node.theta is not None
        self.counters.steps["weierstrass"] += 1
        nu = origin.invariant.nu
        with self.timer.measure("weierstrass"):
            wt = weierstrass_form(node.theta, origin.residual, nu, jet_order=self.options.jet_order)
        target = node
        for label, change in wt.changes:
            chart, edge = coordinate_chart(target.chart, change, label)
            target = self._attach(target, chart, edge)
            target.step = label
        if wt.changes:
            before = target
            target = self.normalize(target)
            if target is not before:
                raise InternalInconsistency("coordinate shift left the distribution outside monomial form")
        logger.debug(f"weierstrass at {node.id}: v={wt.v} nu={nu} changes={[label for label, _ in wt.changes]}")
        return wt, self.step2(target, wt, before=self._measure(node, origin), descend=descend)

    # step 2

    def step2(self, node: ChartNode, wt: WTForm, *, before: Measure | None = None, descend: bool = True) -> list[ChartNode]:
        """
        Resolve the product of the coefficients a_ij in the frame without v, with theta minus d/dv, and lift
        every edge of that tree with the v-axis untouched.
        """
        assert node.theta is not None
        self.counters.steps["step2"] += 1
        frame = node.chart.frame
        v = wt.v
        if frame.dimension == 1:
            raise InternalInconsistency("a one-dimensional chart is always principal", context={"chart": node.id})
        with self.timer.measure("step2"):
            sub_frame = frame.drop(v)
            omega = _project_distribution(node.theta, v, sub_frame)
            product = _project_poly(wt.coefficient_product(), frame, sub_frame, v)
            sub_root = ChartNode(
                Chart.root(sub_frame, f"{node.id}/proj({v})"), theta=omega, ideal=FGIdeal.of(sub_frame, [product])
            )
            sub = Resolver(sub_root, self.options, timer=self.timer)
            try:
                sub.resolve(sub_root.id)
            except FolresException as exc:
                exc.context.setdefault("projected_dimension", sub_frame.dimension)
                raise
            self.counters.absorb(sub.counters)
            self.fiber_checks.extend(sub.fiber_checks)
            leaves = self._lift(node, sub.tree, v)
        node.step = "step2"
        logger.debug(f"step2 at {node.id}: projected tree with {len(sub.tree.nodes)} charts, {len(leaves)} leaves")
        if descend:
            measure = before or (frame.dimension, wt.nu, 1)
            expect = Expectation("step2", node.id, measure, (wt.nu, 2), prepared=v)
            for leaf in leaves:
                self.resolve(leaf.id, expect)
        return leaves

    def _lift(self, node: ChartNode, sub_tree: ChartTree, v: str) -> list[ChartNode]:
        mapping: dict[ChartId, ChartId] = {sub_tree.root: node.id}
        for edge, _ in sub_tree.walk():
            if edge is None:
                continue
            parent = self.tree.nodes[mapping[edge.parent]]
            chart, lifted = _lift_edge(parent.chart, edge, v)
            mapping[edge.child] = self._attach(parent, chart, lifted).id
        return [self.tree.nodes[mapping[leaf.id]] for leaf in sub_tree.leaves()]

    def prepare(self, node: ChartNode, origin: OriginInvariant, v: str) -> PreparedForm:
        """Prepared form at a chart reached by step 2, with the same v and nu."""
        assert node.theta is not None
        if v not in node.theta.regular_directions():
            raise InternalInconsistency(f"d/d{v} is no longer a generator at {node.id}", context={"chart": node.id})
        wt = weierstrass_form(node.theta, origin.residual, origin.invariant.nu, jet_order=self.options.jet_order, v=v)
        if wt.changes:
            raise InternalInconsistency(f"prepared chart {node.id} needs a further Tschirnhaus shift")
        try:
            pf = prepared_form(wt)
        except InputError as exc:
            raise InternalInconsistency(
                f"coefficients at {node.id} are not monomial times unit: {exc.message}", context={"chart": node.id}
            ) from exc
        node.prepared = pf
        return pf

    # step 3

    def step3(self, node: ChartNode, pf: PreparedForm, *, descend: bool = True) -> list[ChartNode]:
        """Principalize the drop ideal over F = (u-variables, v) and check every fiber class of the result."""
        self.counters.steps["step3"] += 1
        nu = pf.wt.nu
        node.prepared = pf
        with self.timer.measure("step3"):
            drop = drop_ideal(pf)
            plan = principalize_monomial(node.chart, drop.ideal, drop.variables, self.options.max_branches)
            leaves = self._replay(node, plan)
        node.step = "step3"
        logger.debug(f"step3 at {node.id}: drop ideal {drop.ideal!r} over {drop.variables}, {len(leaves)} leaves")
        if self.options.verify_fibers:
            with self.timer.measure("fibers"):
                for leaf in leaves:
                    self._check_fibers(plan, leaf, drop)
        if descend:
            expect = Expectation("step3", node.id, (node.chart.frame.dimension, nu, 1), (nu, 0))
            for leaf in leaves:
                self.resolve(leaf.id, expect)
        return leaves

    def _check_fibers(self, plan: ChartTree, leaf: ChartNode, drop: DropIdeal) -> None:
        names = drop.variables
        matrix = exponent_matrix(plan, leaf.id, names)
        gammas = self.options.gammas
        for vanishing in fiber_classes(matrix, names):
            free = [n for n in names if n not in vanishing]
            for _ in gammas:
                gamma = tuple(gammas[int(self._rng.integers(len(gammas)))] for _ in free)
                prediction = fiber_analysis(matrix, names, vanishing, drop.nu, drop.terms, gamma)
                observed = self.invariant_at(leaf, dict(zip(free, gamma, strict=True)))
                check = FiberCheck(
                    leaf.id, tuple(vanishing), tuple(zip(free, gamma, strict=True)), prediction.subcase,
                    prediction.bound, observed,
                )
                leaf.fiber_checks.append(check)
                self.fiber_checks.append(check)
                if not check.ok:
                    logger.warning(f"fiber prediction exceeded: {check.describe()}")

    def invariant_at(self, node: ChartNode, point: dict[str, Rational]) -> int:
        """nu at the point of the chart with the given coordinates (others zero); 0 where the ideal is principal."""
        assert node.theta is not None and node.ideal is not None
        _, edge = recenter(node.chart, point)
        ideal = transform_ideal(node.ideal, edge)
        if principal_monomial(ideal) is not None:
            return 0
        theta = transform_distribution(node.theta, edge)
        return origin_invariant(theta, ideal, self.options.max_stages, self.backend).invariant.nu

    def annotate(self, leaves: list[ChartNode], *, prepared: str | None = None, nu: int | None = None) -> None:
        """Invariant (and prepared form along `prepared`) at the origin of every leaf, without descending."""
        for leaf in leaves:
            if self.close_leaf(leaf):
                continue
            origin = self.origin(leaf)
            if prepared is not None and origin.invariant.as_tuple() == (nu, 1):
                self.prepare(leaf, origin, prepared)


def _v_free(f: Poly, frame: Frame, v: str) -> bool:
    return v not in support(f, frame)


def _project_distribution(theta: Distribution, v: str, sub_frame: Frame) -> Distribution:
    """The generators other than d/dv, restricted to {v = 0}; each must be free of v and of d/dv."""
    frame = theta.frame
    dv = Derivation.partial(frame, v)
    out = []
    for g in theta.generators:
        if g == dv:
            continue
        for n, c in zip(frame.names, g.coefficients, strict=True):
            if (n == v and not c.is_zero()) or not (_v_free(c.num, frame, v) and _v_free(c.den, frame, v)):
                raise InternalInconsistency(
                    f"generator {g.formatted()} does not descend to {{{v} = 0}}", context={"v": v}
                )
        coefficients = [c.substitute({v: sub_frame.zero}, frame, sub_frame) for n, c in zip(frame.names, g.coefficients, strict=True) if n != v]
        out.append(Derivation.of(sub_frame, coefficients))
    return Distribution.of(sub_frame, out)


def _project_poly(f: Poly, frame: Frame, sub_frame: Frame, v: str) -> Poly:
    if not _v_free(f, frame, v):
        raise InternalInconsistency(f"coefficient product depends on {v}", context={"v": v})
    return substitute(f, {v: sub_frame.zero}, frame, sub_frame)


def _lift_edge(parent: Chart, edge: Edge, v: str) -> tuple[Chart, Edge]:
    """The same edge on a chart carrying the extra coordinate v, which every map fixes."""
    if edge.kind == "blowup" and edge.center is not None and edge.chart_variable is not None:
        return blowup_chart(parent, edge.center, edge.chart_variable)
    if edge.kind == "restrict":
        return recenter(parent, dict(edge.point))
    if edge.change is None:
        raise InternalInconsistency("coordinate edge without its coordinate change")
    frame = parent.frame
    sub = edge.change.frame

    def lifted(images: tuple[Poly, ...]) -> tuple[Poly, ...]:
        by_name = dict(zip(sub.names, lift_images(images, sub, frame), strict=True))
        return tuple(by_name.get(n, frame.gen(n)) for n in frame.names)

    change = CoordinateChange(frame, lifted(edge.change.forward), lifted(edge.change.inverse))
    return coordinate_chart(parent, change, edge.label)


def _start(theta: Distribution, ideal: FGIdeal, options: DriverOptions | None) -> Resolver:
    if ideal.is_zero():
        raise InputError("ideal required", code="resolve.zero_ideal")
    theta = theta.with_frame(ideal.frame)
    return Resolver(ChartNode(Chart.root(ideal.frame), theta=theta, ideal=ideal), options)


def resolve_local(theta: Distribution, ideal: FGIdeal, options: DriverOptions | None = None) -> ResolveResult:
    """
    Resolve (theta, I) at the origin: a chart tree whose leaves carry a principal monomial pullback of I,
    reached by admissible blow-ups and coordinate changes.
    """
    resolver = _start(theta, ideal, options)
    with resolver.timer.measure("resolve"):
        resolver.resolve(resolver.root.id)
    result = resolver.result()
    logger.info(
        f"resolved {ideal!r}: {len(result.tree.nodes)} charts, {len(result.tree.leaves())} leaves, "
        f"{result.counters.recursions} projected runs"
    )
    return result


def _prepared_origin(resolver: Resolver) -> tuple[ChartNode, OriginInvariant]:
    if resolver.close_leaf(resolver.root):
        raise InputError("ideal is already principal at the origin", code="resolve.principal")
    node = resolver.normalize(resolver.root)
    return node, resolver.origin(node)


def step1_drop_type(theta: Distribution, ideal: FGIdeal, options: DriverOptions | None = None) -> ResolveResult:
    """One type-dropping step: principalize the tangency closure; leaves carry their new invariants."""
    resolver = _start(theta, ideal, options)
    node, origin = _prepared_origin(resolver)
    if origin.invariant.type != 2:
        raise InputError("dropping the type needs type 2 at the origin", code="resolve.wrong_type")
    with resolver.timer.measure("resolve"):
        leaves = resolver.step1(node, origin, descend=False)
        resolver.annotate(leaves)
    return resolver.result()


def step2_prepare(theta: Distribution, ideal: FGIdeal, options: DriverOptions | None = None) -> ResolveResult:
    """Weierstrass-Tschirnhaus form and the lifted resolution of its coefficients; leaves keeping nu get a prepared form."""
    resolver = _start(theta, ideal, options)
    node, origin = _prepared_origin(resolver)
    if origin.invariant.type != 1:
        raise InputError("preparation needs type 1 at the origin", code="resolve.wrong_type")
    nu = origin.invariant.nu
    with resolver.timer.measure("resolve"):
        wt, leaves = resolver.weierstrass(node, origin, descend=False)
        resolver.annotate(leaves, prepared=wt.v, nu=nu)
    return resolver.result()


def step3_drop_nu(theta: Distribution, ideal: FGIdeal, options: DriverOptions | None = None) -> ResolveResult:
    """One nu-dropping step on a prepared input: principalize the drop ideal and check the fibers."""
    resolver = _start(theta, ideal, options)
    node, origin = _prepared_origin(resolver)
    assert node.theta is not None
    inv = origin.invariant
    if inv.type != 1:
        raise InputError("dropping nu needs type 1 at the origin", code="resolve.wrong_type")
    wt = weierstrass_form(node.theta, origin.residual, inv.nu, jet_order=resolver.options.jet_order)
    if wt.changes:
        raise InputError(
            "input is not in Weierstrass-Tschirnhaus form at the origin",
            code="resolve.not_prepared",
            context={"changes": ",".join(label for label, _ in wt.changes)},
        )
    pf = prepared_form(wt)
    with resolver.timer.measure("resolve"):
        leaves = resolver.step3(node, pf, descend=False)
        resolver.annotate(leaves)
    return resolver.result()
