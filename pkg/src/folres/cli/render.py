from __future__ import annotations

from rich import box
from rich.console import Group, RenderableType
from rich.markup import escape
from rich.panel import Panel
from rich.table import Table
from rich.text import Text
from rich.tree import Tree

from folres.models.report import AdmissibilityRecord, InvariantsRecord, NodeRecord, Report
from folres.models.verification import VerificationReport

LEVEL_MARKUP = {
    "PASS": "[green]✓ PASS[/green]",
    "INFO": "[blue]ℹ INFO[/blue]",
    "WARN": "[yellow]⚠ WARN[/yellow]",
    "FAIL": "[red]✗ FAIL[/red]",
}


def render_report(report: Report) -> Group:
    renderables: list[RenderableType] = [
        Text.from_markup(f"[bold magenta]folres {escape(report.command)}[/]"),
        Text.from_markup(f"[dim]{escape(_problem_line(report))}[/]"),
    ]
    if report.invariants is not None:
        renderables.append(create_invariants_table(report.invariants))
    if report.admissibility is not None:
        renderables.append(create_admissibility_panel(report.admissibility))
    if report.nodes:
        renderables.append(create_chart_tree(report))
    if report.counters:
        renderables.append(create_counters_table(report.counters))
    if report.statistics.get("wall_time"):
        renderables.append(create_phase_table(report.statistics))
    if report.verification is not None:
        renderables.append(create_verification_panel(report.verification))
    return Group(*renderables)


def _problem_line(report: Report) -> str:
    p = report.problem
    theta = ", ".join(p.theta) or "0"
    return f"vars {p.variables} | theta ({theta}) | ideal ({', '.join(p.ideal)})"


def create_invariants_table(record: InvariantsRecord) -> Table:
    table = Table(
        title=f"residual: nu = {record.nu}, type {record.type}",
        box=box.SIMPLE_HEAVY,
        caption=f"stabilized at {record.stabilized_at}" + (f", unit at {record.unit_at}" if record.unit_at is not None else ""),
    )
    table.add_column("stage", justify="right")
    table.add_column("generators (reduced basis)")
    table.add_row("ideal", f"nu = {record.ideal_nu}, type {record.ideal_type} (before factoring)")
    for stage in record.stages:
        table.add_row(f"H({stage.index})", escape(", ".join(stage.generators)))
    if any(record.monomial):
        table.add_row("monomial", escape(str(tuple(record.monomial))))
    if record.monomial_verdict is not None:
        table.add_row("theta", record.monomial_verdict)
    return table


def create_admissibility_panel(record: AdmissibilityRecord) -> Panel:
    color = "green" if record.admissible else "red"
    lines = [f"components: {', '.join(record.components) or '-'}"]
    if record.admissible:
        lines.insert(0, f"[green]admissible[/green], k0 = {record.k0}")
    else:
        lines.insert(0, f"[red]not admissible[/red], fails at k = {record.witness_k}")
        lines.append(f"Gamma_k + I_C = ({escape(', '.join(record.witness))})")
    return Panel("\n".join(lines), title=f"center ({','.join(record.center)})", border_style=color)


def _node_label(node: NodeRecord) -> str:
    bits = [f"[bold]{escape(node.id)}[/bold]"]
    if node.invariant is not None:
        bits.append(f"(nu, type) = {tuple(node.invariant)}")
    if node.step:
        bits.append(f"[cyan]{escape(node.step)}[/cyan]")
    if node.leaf:
        mark = "[green]principal[/green]" if node.supported_in_divisor else "[yellow]principal, off divisor[/yellow]"
        bits.append(mark)
    label = "  ".join(bits)
    label += f"\n[dim]I = ({escape(', '.join(node.ideal))})[/dim]"
    if node.theta:
        label += f"\n[dim]theta = ({escape(', '.join(node.theta))})[/dim]"
    bad = [c for c in node.fiber_checks if not c.ok]
    if node.fiber_checks:
        color = "red" if bad else "green"
        label += f"\n[{color}]fiber checks {len(node.fiber_checks) - len(bad)}/{len(node.fiber_checks)}[/{color}]"
    return label


def create_chart_tree(report: Report) -> Tree:
    root_id = report.root or report.nodes[0].id
    nodes = {n.id: n for n in report.nodes}
    tree = Tree(_node_label(nodes[root_id]))
    branches = {root_id: tree}
    for edge in report.edges:
        parent = branches[edge.parent]
        if edge.kind == "blowup":
            via = f"blow-up ({','.join(edge.center or [])}) {edge.chart_variable}-chart"
            if edge.admissibility is not None and not edge.admissibility.admissible:
                via += " [red]not admissible[/red]"
        elif edge.kind == "restrict":
            via = "restrict at " + ", ".join(f"{n}={c}" for n, c in edge.point.items())
        else:
            via = f"coordinates ({edge.label})"
        branches[edge.child] = parent.add(f"[dim]{escape(via)}[/dim]\n" + _node_label(nodes[edge.child]))
    return tree


def create_counters_table(counters: dict) -> Table:
    table = Table(title="driver counters", box=box.SIMPLE)
    table.add_column("counter")
    table.add_column("value", justify="right")
    for key, value in counters.items():
        if isinstance(value, dict):
            value = ", ".join(f"{k}={v}" for k, v in value.items())
        table.add_row(key, escape(str(value)))
    return table


def create_phase_table(statistics: dict) -> Table:
    table = Table(title="phases", box=box.SIMPLE)
    table.add_column("phase")
    table.add_column("calls", justify="right")
    table.add_column("wall s", justify="right")
    calls = statistics.get("calls", {})
    for phase, seconds in sorted(statistics.get("wall_time", {}).items(), key=lambda kv: -kv[1]):
        table.add_row(phase, str(calls.get(phase, "")), f"{seconds:.3f}")
    return table


def create_verification_panel(report: VerificationReport) -> Panel:
    color = "green" if report.is_valid else "red"
    lines = []
    for issue in report.issues:
        category = f" [{issue.category}]" if issue.category else ""
        lines.append(f"{LEVEL_MARKUP[issue.level]}{escape(category)}: {escape(issue.message)}")
        lines.append(f"  Chart: [dim]{escape(issue.chart)}[/dim]")
    if not lines:
        lines.append("[green]✓ No issues found[/green]")
    return Panel("\n".join(lines), title=f"Verification: {escape(report.root)}", border_style=color)
