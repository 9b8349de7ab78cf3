#!/usr/bin/env python3
"""
Stage Timing

Wall-clock timing of the stages of one CLI run (load, analyse, solve, write).
The summary lands in the report's `timing` field; the formatted table goes
to the log file.
"""

import time
from contextlib import contextmanager
from typing import Dict, Iterator, List


class PerformanceProfiler:
    """Accumulates wall-clock time per named stage"""

    def __init__(self):
        self.timings: Dict[str, float] = {}
        self._order: List[str] = []

    @contextmanager
    def measure(self, stage: str) -> Iterator[None]:
        """Time the enclosed block; repeated stages accumulate

        Usage:
            with profiler.measure("solve"):
                result = solve_posne(ig)
        """
        start = time.perf_counter()
        try:
            yield
        finally:
            if stage not in self.timings:
                self._order.append(stage)
                self.timings[stage] = 0.0
            self.timings[stage] += time.perf_counter() - start

    @property
    def total(self) -> float:
        return sum(self.timings.values())

    def summary_ms(self) -> Dict[str, float]:
        """Stage -> milliseconds (rounded to 0.1 ms), in first-seen order."""
        return {stage: round(self.timings[stage] * 1000, 1) for stage in self._order}

    def report(self, title: str = "Timing") -> str:
        if not self.timings:
            return f"{title}: no stages recorded"
        total = self.total
        lines = [f"{title}:"]
        for stage in self._order:
            elapsed = self.timings[stage]
            pct = (elapsed / total * 100) if total > 0 else 0
            lines.append(f"  {stage:20s}: {elapsed * 1000:9.1f}ms ({pct:5.1f}%)")
        lines.append(f"  {'total':20s}: {total * 1000:9.1f}ms")
        return "\n".join(lines)
