"""Problem files, the expression grammar and report artifacts."""

from folres.io.grammar import (
    parse_derivation,
    parse_derivations,
    parse_names,
    parse_polynomial,
    parse_polynomials,
    parse_variables,
)
from folres.io.problem import ProblemFile, load_problem, parse_problem
from folres.io.report import (
    admissibility_record,
    load_report,
    problem_summary,
    report_json,
    report_tree,
    save_report,
    statistics_dict,
    tree_records,
)

__all__ = [
    "ProblemFile",
    "admissibility_record",
    "load_problem",
    "load_report",
    "parse_derivation",
    "parse_derivations",
    "parse_names",
    "parse_polynomial",
    "parse_polynomials",
    "parse_problem",
    "parse_variables",
    "problem_summary",
    "report_json",
    "report_tree",
    "save_report",
    "statistics_dict",
    "tree_records",
]
