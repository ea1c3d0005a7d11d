from __future__ import annotations

import argparse
import logging
import sys
from dataclasses import replace
from pathlib import Path
from typing import Any

from rich.console import Console

from folres import __version__
from folres.algebra.poly import format_poly
from folres.blowup import Center, Chart, ChartNode, ChartTree, blowup_charts, transform_distribution, transform_ideal
from folres.cli.errors import exit_code, log_expected_error
from folres.cli.render import render_report
from folres.config import DriverOptions, resolve_options
from folres.exceptions import FolresException, InputError, VerificationFailure
from folres.foliation import check_monomial_form
from folres.ideals import groebner
from folres.invariants import check_theta_admissible, origin_invariant, tg_invariant
from folres.io import (
    admissibility_record,
    load_problem,
    load_report,
    parse_names,
    problem_summary,
    report_json,
    report_tree,
    save_report,
    statistics_dict,
    tree_records,
)
from folres.io.problem import ProblemFile
from folres.models.report import InvariantsRecord, Report, StageRecord
from folres.models.verification import VerificationReport
from folres.resolve import ResolveResult, resolve_local, step1_drop_type, step2_prepare, step3_drop_nu, verify_resolution
from folres.utils.logging import configure_script_logging
from folres.utils.timing import ExecutionTimer

logger = logging.getLogger(__name__)
console = Console()

COMMANDS = ("invariants", "admissible", "blowup", "resolve", "verify")
STEPS = {"1": step1_drop_type, "2": step2_prepare, "3": step3_drop_nu}


def main() -> None:
    configure_script_logging(use_rich=True)
    parser = _build_parser()
    args = parser.parse_args()
    command = _command(parser, args)

    try:
        if command == "invariants":
            handle_invariants(args)
        elif command == "admissible":
            handle_admissible(args)
        elif command == "blowup":
            handle_blowup(args)
        elif command == "resolve":
            handle_resolve(args)
        elif command == "verify":
            handle_verify(args)
    except FolresException as exc:
        log_expected_error(logger, command, exc)
        raise SystemExit(exit_code(exc)) from exc


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(description=f"folres CLI v{__version__}")
    parser.add_argument("--version", "-V", action="version", version=f"folres {__version__}")
    parser.add_argument("--command", choices=COMMANDS, help="Command to run; same as the positional form")
    _add_common_args(parser)
    subparsers = parser.add_subparsers(dest="subcommand")

    subparsers.add_parser("invariants", help="(nu, type) at the origin and the tangency stages")
    subparsers.add_parser("admissible", help="Fitting-ideal admissibility of a coordinate center")
    subparsers.add_parser("blowup", help="Blow up one center and show every chart")
    resolve = subparsers.add_parser("resolve", help="Run the local resolution driver")
    resolve.add_argument("--step", choices=sorted(STEPS), help="Run only one driver step at the origin")
    subparsers.add_parser("verify", help="Re-check the chart tree stored in a JSON report")
    for sub in subparsers.choices.values():
        _add_common_args(sub, suppress=True)
    parser.set_defaults(step=None)
    return parser


def _add_common_args(parser: argparse.ArgumentParser, *, suppress: bool = False) -> None:
    """The shared flags; subcommand copies use SUPPRESS so they only override what is given after the command."""

    def default(value: Any) -> Any:
        return argparse.SUPPRESS if suppress else value

    parser.add_argument("--input", type=Path, default=default(None), help="Problem file, or a JSON report for verify")
    parser.add_argument("--center", default=default(None), help="Center variables, e.g. x,z")
    parser.add_argument("--membership", default=default(None), help="global, local or jet:N")
    parser.add_argument("--jet-order", type=_positive_int, default=default(None))
    parser.add_argument("--max-stages", type=_positive_int, default=default(None))
    parser.add_argument("--max-branches", type=_positive_int, default=default(None))
    parser.add_argument("--max-depth", type=_positive_int, default=default(None))
    parser.add_argument("--seed", type=int, default=default(None))
    parser.add_argument("--output", type=Path, default=default(None), help="Also write the JSON report here")
    parser.add_argument("--format", choices=["text", "json"], default=default("text"))
    parser.add_argument("--config", type=Path, default=default(None), help="YAML options file (default folres.yaml)")


def _positive_int(value: str) -> int:
    parsed = int(value)
    if parsed < 1:
        raise argparse.ArgumentTypeError("must be positive")
    return parsed


def _command(parser: argparse.ArgumentParser, args: argparse.Namespace) -> str:
    if args.subcommand and args.command and args.subcommand != args.command:
        parser.error(f"--command {args.command} conflicts with {args.subcommand}")
    command = args.subcommand or args.command
    if command is None:
        parser.error("a command is required: " + ", ".join(COMMANDS))
    if args.input is None:
        parser.error("--input is required")
    return command


def _options(args: argparse.Namespace, problem: ProblemFile | None = None) -> DriverOptions:
    flags = {
        "membership": args.membership,
        "jet_order": args.jet_order,
        "max_stages": args.max_stages,
        "max_branches": args.max_branches,
        "max_depth": args.max_depth,
        "seed": args.seed,
    }
    from_problem = dict(problem.options) if problem is not None else {}
    if "fiber_samples" in from_problem:
        from_problem["fiber_samples"] = from_problem["fiber_samples"].split()
    return resolve_options(args.config, {**from_problem, **{k: v for k, v in flags.items() if v is not None}})


def _center(args: argparse.Namespace, problem: ProblemFile) -> Center:
    if args.center is not None:
        names = parse_names(args.center, problem.frame)
    elif problem.center:
        names = list(problem.center)
    else:
        raise InputError("a center is required (--center or a `center` section)", code="cli.center_required")
    return Center.of(problem.frame, names)


def _emit(report: Report, args: argparse.Namespace) -> None:
    if args.output is not None:
        save_report(report, args.output)
        logger.info(f"Wrote {args.output}")
    if args.format == "json":
        sys.stdout.write(report_json(report))
    else:
        console.print(render_report(report))


# handlers


def handle_invariants(args: argparse.Namespace) -> None:
    problem = load_problem(args.input)
    options = _options(args, problem)
    timer = ExecutionTimer()
    with timer.measure("invariants"):
        origin = origin_invariant(problem.theta, problem.ideal, options.max_stages, options.backend)
        inv = origin.invariant
        raw = tg_invariant(problem.theta, problem.ideal, options.max_stages, options.backend) if any(origin.monomial) else inv
    frame = problem.frame

    def basis(ideal) -> list[str]:
        return [format_poly(g, frame) for g in groebner(ideal).basis]

    record = InvariantsRecord(
        nu=inv.nu,
        type=inv.type,
        ideal_nu=raw.nu,
        ideal_type=raw.type,
        monomial=list(origin.monomial),
        residual=origin.residual.formatted(),
        stages=[StageRecord(index=k, generators=basis(stage)) for k, stage in enumerate(inv.sequence.stages)],
        stabilized_at=inv.sequence.stabilized_at,
        unit_at=inv.sequence.unit_at,
        closure=basis(inv.closure),
        monomial_verdict=check_monomial_form(problem.theta).kind,
    )
    report = Report(
        command="invariants",
        problem=problem_summary(problem),
        options=options.model_dump(mode="json"),
        invariants=record,
        statistics=statistics_dict(timer.to_model()),
    )
    _emit(report, args)


def handle_admissible(args: argparse.Namespace) -> None:
    problem = load_problem(args.input)
    options = _options(args, problem)
    center = _center(args, problem)
    timer = ExecutionTimer()
    with timer.measure("admissibility"):
        verdict = check_theta_admissible(problem.theta, center.ideal(problem.frame))
    report = Report(
        command="admissible",
        problem=problem_summary(problem),
        options=options.model_dump(mode="json"),
        admissibility=admissibility_record(center.variables, verdict, problem.frame),
        statistics=statistics_dict(timer.to_model()),
    )
    _emit(report, args)


def _annotate(node: ChartNode, options: DriverOptions) -> None:
    assert node.theta is not None and node.ideal is not None
    node.monomial_verdict = check_monomial_form(node.theta).kind
    node.invariant = origin_invariant(node.theta, node.ideal, options.max_stages, options.backend).invariant.as_tuple()


def handle_blowup(args: argparse.Namespace) -> None:
    """One blow-up: total transform of the ideal and transformed distribution on every chart."""
    problem = load_problem(args.input)
    options = _options(args, problem)
    center = _center(args, problem)
    timer = ExecutionTimer()
    root = ChartNode(Chart.root(problem.frame), theta=problem.theta, ideal=problem.ideal)
    tree = ChartTree.start(root)
    with timer.measure("admissibility"):
        verdict = check_theta_admissible(problem.theta, center.ideal(problem.frame))
    if not verdict.admissible:
        logger.warning(f"center ({center}) is not admissible; transforms are shown regardless")
    with timer.measure("blowup"):
        _annotate(root, options)
        for chart, edge in blowup_charts(root.chart, center):
            edge = replace(edge, admissibility=verdict)
            node = tree.add(
                edge,
                ChartNode(chart, theta=transform_distribution(problem.theta, edge), ideal=transform_ideal(problem.ideal, edge)),
            )
            _annotate(node, options)
    nodes, edges = tree_records(tree)
    report = Report(
        command="blowup",
        problem=problem_summary(problem),
        options=options.model_dump(mode="json"),
        root=tree.root,
        nodes=nodes,
        edges=edges,
        admissibility=admissibility_record(center.variables, verdict, problem.frame),
        statistics=statistics_dict(timer.to_model()),
    )
    _emit(report, args)


def handle_resolve(args: argparse.Namespace) -> None:
    problem = load_problem(args.input)
    options = _options(args, problem)
    if args.step is not None:
        result = STEPS[args.step](problem.theta, problem.ideal, options)
        _emit(_resolve_report(problem, result, None), args)
        return
    result = resolve_local(problem.theta, problem.ideal, options)
    verification = verify_resolution(result.tree)
    _emit(_resolve_report(problem, result, verification), args)
    if not verification.is_valid:
        raise VerificationFailure(
            "resolution tree failed verification",
            context={"chart": _failed_chart(verification)},
        )


def _resolve_report(problem: ProblemFile, result: ResolveResult, verification: VerificationReport | None) -> Report:
    nodes, edges = tree_records(result.tree)
    return Report(
        command="resolve",
        problem=problem_summary(problem),
        options=result.options.model_dump(mode="json"),
        root=result.tree.root,
        nodes=nodes,
        edges=edges,
        counters=result.counters.as_dict(),
        statistics=statistics_dict(result.stats),
        verification=verification,
    )


def handle_verify(args: argparse.Namespace) -> None:
    stored = load_report(args.input)
    tree = report_tree(stored)
    verification = verify_resolution(tree)
    report = stored.model_copy(update={"command": "verify", "verification": verification})
    _emit(report, args)
    if not verification.is_valid:
        raise VerificationFailure(
            f"stored tree in {args.input} failed verification",
            context={"chart": _failed_chart(verification)},
        )


def _failed_chart(verification: VerificationReport) -> str:
    issue = verification.first_failure
    return issue.chart if issue is not None else verification.root
