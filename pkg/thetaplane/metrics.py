# Copyright (c) 2026 Alessandro Orrù
# Licensed under MIT

import logging
import time
from contextlib import contextmanager
from dataclasses import dataclass, field

logger = logging.getLogger("[ METRICS ]")


# One named stage (a CLI command, one trivialization degree, ...): wall time of every
# run plus the number of coefficients it produced
@dataclass
class StageMetric:
    name: str
    runs_ms: list[float] = field(default_factory=list)
    coefficients: int = 0

    @property
    def count(self) -> int:
        return len(self.runs_ms)


    @property
    def total_ms(self) -> float:
        return sum(self.runs_ms)


    @property
    def min_ms(self) -> float:
        return min(self.runs_ms, default=float("inf"))


    @property
    def max_ms(self) -> float:
        return max(self.runs_ms, default=0.0)


    @property
    def avg_ms(self) -> float:
        return self.total_ms / self.count if self.runs_ms else 0.0


    def record(self, duration_ms: float) -> None:
        self.runs_ms.append(duration_ms)


class PerformanceMetrics:

    def __init__(self) -> None:
        self._stages: dict[str, StageMetric] = {}


    def _stage(self, name: str) -> StageMetric:
        return self._stages.setdefault(name, StageMetric(name=name))


    @contextmanager
    def measure(self, stage: str):
        start = time.monotonic()
        try:
            yield
        finally:
            duration_ms = (time.monotonic() - start) * 1000
            self._stage(stage).record(duration_ms)
            logger.debug("[PERF] %s: %.1fms", stage, duration_ms)


    def add_coefficients(self, stage: str, count: int) -> None:
        if count < 0:
            raise ValueError(f"coefficient count must be >= 0, got {count}")
        self._stage(stage).coefficients += count


    # Stage names in first-recorded order
    def stages(self) -> list[str]:
        return list(self._stages)


    def get_summary(self) -> dict[str, dict]:
        return {
            name: {
                "avg_ms": round(m.avg_ms, 1),
                "min_ms": round(m.min_ms, 1),
                "max_ms": round(m.max_ms, 1),
                "count": m.count,
                "coefficients": m.coefficients,
            }
            for name, m in self._stages.items()
        }


    def log_summary(self) -> None:
        if not self._stages:
            return
        total = sum(m.coefficients for m in self._stages.values())
        logger.debug("[PERF] %d stages, %d coefficients", len(self._stages), total)
        for name, m in self._stages.items():
            logger.debug(
                "[PERF]   %s: avg=%.1fms max=%.1fms runs=%d coefficients=%d",
                name, m.avg_ms, m.max_ms, m.count, m.coefficients,
            )


    def reset(self) -> None:
        self._stages.clear()
