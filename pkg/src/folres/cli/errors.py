from __future__ import annotations

import logging

from folres.exceptions import BudgetExhausted, FolresException, SubclassAbort, VerificationFailure

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_SUBCLASS_ABORT = 2
EXIT_BUDGET = 3
EXIT_VERIFICATION = 4

# first match wins
EXIT_CODES: tuple[tuple[type[FolresException], int], ...] = (
    (SubclassAbort, EXIT_SUBCLASS_ABORT),
    (BudgetExhausted, EXIT_BUDGET),
    (VerificationFailure, EXIT_VERIFICATION),
)

BUDGET_HINTS = {
    "budget.stages": "raise --max-stages",
    "budget.branches": "raise --max-branches",
    "budget.jet_order": "raise --jet-order",
    "budget.mora_steps": "raise mora_step_budget in folres.yaml",
}

# parse positions are already spelled out in the message
_POSITION_KEYS = frozenset({"line", "column", "offset", "reason"})


def _flat(value: object) -> str:
    return str(value).replace("\n", " ").replace("\r", " ")


def format_cli_error(error: FolresException) -> str:
    """`[chart] message [code] (context) hint`, on one line."""
    context = dict(error.context)
    chart = context.pop("chart", None)
    bits = [f"[{chart}]"] if chart is not None else []
    bits.append(f"{_flat(error.message)} [{error.code}]")
    rest = {k: v for k, v in context.items() if k not in _POSITION_KEYS}
    if rest:
        bits.append("(" + ", ".join(f"{key}={_flat(value)}" for key, value in sorted(rest.items())) + ")")
    hint = BUDGET_HINTS.get(error.code)
    if hint is not None:
        bits.append(f"hint: {hint}")
    return " ".join(bits)


def exit_code(error: FolresException) -> int:
    return next((code for cls, code in EXIT_CODES if isinstance(error, cls)), EXIT_ERROR)


def log_expected_error(logger: logging.Logger, command: str, error: FolresException) -> None:
    """Aborts and exhausted budgets are outcomes of the run; everything else is an error."""
    level = logging.WARNING if isinstance(error, SubclassAbort | BudgetExhausted) else logging.ERROR
    logger.log(level, f"{command} failed: {format_cli_error(error)}")
