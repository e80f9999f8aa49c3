"""
Process-pool execution for sweeps and seed ensembles.

Walk runs are CPU bound and independent, so they go to a ProcessPoolExecutor.
Results come back in submission order regardless of completion order, which
keeps every artifact deterministic.

Key features:
- Automatic worker count based on CPU cores
- Serial in-process fallback for one worker or one task
- Progress callback per completed task
- Per-task error capture in sweep reports
"""

from __future__ import annotations

import logging
import os
import time
from concurrent.futures import ProcessPoolExecutor, as_completed
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Optional, Sequence, TypeVar

logger = logging.getLogger(__name__)

T = TypeVar("T")
R = TypeVar("R")

ProgressCallback = Callable[[int, int], None]


# =============================================================================
# Data Classes
# =============================================================================


@dataclass
class LevelResult:
    """Outcome of one level of a sweep."""

    level: str
    success: bool
    duration_s: float
    final_sigma2_raw: Optional[float] = None
    final_sigma2_scaled: Optional[float] = None
    slope: Optional[float] = None
    error: Optional[str] = None
    error_type: Optional[str] = None
    series: Dict[str, List[float]] = field(default_factory=dict)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "level": self.level,
            "success": self.success,
            "duration_s": self.duration_s,
            "final_sigma2_raw": self.final_sigma2_raw,
            "final_sigma2_scaled": self.final_sigma2_scaled,
            "slope": self.slope,
            "error": self.error,
        }


@dataclass
class SweepReport:
    """Aggregated report of a level sweep."""

    mode: str
    steps: int
    results: List[LevelResult] = field(default_factory=list)
    total_duration_s: float = 0.0
    worker_count: int = 1

    @property
    def failed(self) -> List[LevelResult]:
        return [r for r in self.results if not r.success]

    @property
    def success_rate(self) -> float:
        if not self.results:
            return 1.0
        return (len(self.results) - len(self.failed)) / len(self.results)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "mode": self.mode,
            "steps": self.steps,
            "total_duration_s": self.total_duration_s,
            "worker_count": self.worker_count,
            "success_rate": self.success_rate,
            "levels": [r.to_dict() for r in self.results],
        }


# =============================================================================
# Execution
# =============================================================================


def optimal_workers() -> int:
    """Get optimal number of workers based on CPU count."""
    cpu_count = os.cpu_count() or 1
    return max(1, cpu_count - 1)


def map_parallel(
    worker: Callable[[T], R],
    items: Sequence[T],
    workers: Optional[int] = None,
    progress: Optional[ProgressCallback] = None,
) -> List[R]:
    """
    Apply a module-level ``worker`` to every item, in parallel when useful.

    Exceptions raised by a worker propagate to the caller.
    """
    total = len(items)
    count = min(workers or optimal_workers(), max(total, 1))

    if count <= 1:
        results = []
        for index, item in enumerate(items, start=1):
            results.append(worker(item))
            if progress:
                progress(index, total)
        return results

    ordered: List[Optional[R]] = [None] * total
    with ProcessPoolExecutor(max_workers=count) as executor:
        future_to_index = {executor.submit(worker, item): i for i, item in enumerate(items)}
        completed = 0
        for future in as_completed(future_to_index):
            ordered[future_to_index[future]] = future.result()
            completed += 1
            if progress:
                progress(completed, total)
    return ordered  # type: ignore[return-value]


def run_sweep(
    worker: Callable[[Dict[str, Any]], LevelResult],
    tasks: Sequence[Dict[str, Any]],
    mode: str,
    steps: int,
    workers: Optional[int] = None,
    progress: Optional[ProgressCallback] = None,
) -> SweepReport:
    """Run one task per level and collect a SweepReport."""
    start_time = time.perf_counter()
    count = min(workers or optimal_workers(), max(len(tasks), 1))
    results = map_parallel(worker, tasks, workers=count, progress=progress)
    report = SweepReport(
        mode=mode,
        steps=steps,
        results=results,
        total_duration_s=time.perf_counter() - start_time,
        worker_count=count,
    )
    for failure in report.failed:
        logger.error("Level %s failed: %s", failure.level, failure.error)
    return report
