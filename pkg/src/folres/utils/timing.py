"""Per-phase wall and cpu clocks for a resolver run."""

from __future__ import annotations

import logging
import time
from collections import Counter
from collections.abc import Generator
from contextlib import contextmanager
from dataclasses import dataclass, field
from typing import Literal

logger = logging.getLogger(__name__)

Phase = Literal[
    "resolve",
    "invariants",
    "monomial",
    "admissibility",
    "blowup",
    "step1",
    "weierstrass",
    "step2",
    "step3",
    "fibers",
]


@dataclass(frozen=True)
class ExecutionStats:
    wall_time: dict[str, float] = field(default_factory=dict)
    cpu_time: dict[str, float] = field(default_factory=dict)
    calls: dict[str, int] = field(default_factory=dict)

    def slowest(self) -> str | None:
        return max(self.wall_time, key=self.wall_time.__getitem__, default=None)


class ExecutionTimer:
    """
    Wall and cpu seconds per resolver phase. The driver enters the same phase once per chart, so a phase
    reports its total over the run together with the number of times it was entered. Phases nest: a step
    measured inside "resolve" is counted in both.
    """

    def __init__(self) -> None:
        self.wall_times: dict[str, float] = {}
        self.cpu_times: dict[str, float] = {}
        self.calls: Counter[str] = Counter()

    @contextmanager
    def measure(self, phase: Phase) -> Generator[None, None, None]:
        wall_start = time.perf_counter()
        cpu_start = time.thread_time()
        try:
            yield
        finally:
            wall = time.perf_counter() - wall_start
            self.wall_times[phase] = self.wall_times.get(phase, 0.0) + wall
            self.cpu_times[phase] = self.cpu_times.get(phase, 0.0) + time.thread_time() - cpu_start
            self.calls[phase] += 1
            logger.debug(f"{phase} #{self.calls[phase]}: {wall:.4f}s")

    def to_model(self) -> ExecutionStats:
        return ExecutionStats(wall_time=dict(self.wall_times), cpu_time=dict(self.cpu_times), calls=dict(self.calls))
