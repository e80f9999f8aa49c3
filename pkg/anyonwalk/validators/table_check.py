"""
Table Check - verifies the closed-form moment table against the bracket oracle

Each (level, family, offset) moment is evaluated twice: from the closed-form
table and from the Kauffman-bracket state sum of the family's braid word.
The report passes when every difference is within tolerance.
"""

from __future__ import annotations

import logging
import time
from dataclasses import dataclass, field
from typing import Any, Dict, List, Sequence, Union

from anyonwalk.engine.anyon_model import format_level, make_model
from anyonwalk.engine.braid_oracle import markov_expectation
from anyonwalk.engine.moment_table import MomentFamily, family_word, table_moment

logger = logging.getLogger(__name__)

TABLE_TOLERANCE = 1e-10
DEFAULT_LEVELS: List[Union[int, float]] = [1, 2, 3, 4, 5, 10]
DEFAULT_OFFSETS = range(-6, 7)


@dataclass
class TableCheckRow:
    """One compared moment."""

    level: str
    family: str
    offset: int
    oracle: complex
    table: complex

    @property
    def diff(self) -> float:
        return abs(self.oracle - self.table)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "level": self.level,
            "family": self.family,
            "offset": self.offset,
            "oracle_re": self.oracle.real,
            "oracle_im": self.oracle.imag,
            "table_re": self.table.real,
            "table_im": self.table.imag,
            "diff": self.diff,
        }


@dataclass
class TableCheckReport:
    """Outcome of a table verification run."""

    rows: List[TableCheckRow] = field(default_factory=list)
    tolerance: float = TABLE_TOLERANCE
    duration_s: float = 0.0

    @property
    def max_diff(self) -> float:
        return max((row.diff for row in self.rows), default=0.0)

    @property
    def failures(self) -> List[TableCheckRow]:
        return [row for row in self.rows if row.diff > self.tolerance]

    @property
    def passed(self) -> bool:
        return not self.failures

    def to_dict(self) -> Dict[str, Any]:
        return {
            "passed": self.passed,
            "tolerance": self.tolerance,
            "max_diff": self.max_diff,
            "checked": len(self.rows),
            "failures": [row.to_dict() for row in self.failures],
        }

    def __str__(self) -> str:
        status = "PASSED" if self.passed else "FAILED"
        return (
            f"{status} | {len(self.rows)} moments | max |diff| {self.max_diff:.3e} "
            f"(tolerance {self.tolerance:.0e}) | {len(self.failures)} failures"
        )


def verify_table(
    levels: Sequence[Union[int, float]] = DEFAULT_LEVELS,
    offsets: Sequence[int] = DEFAULT_OFFSETS,
    tolerance: float = TABLE_TOLERANCE,
) -> TableCheckReport:
    """Compare oracle and table for every family, offset and level."""
    start = time.perf_counter()
    report = TableCheckReport(tolerance=tolerance)
    for level in levels:
        model = make_model(level)
        for family in MomentFamily:
            for offset in offsets:
                oracle = markov_expectation(family_word(family, offset), model)
                row = TableCheckRow(
                    level=format_level(level),
                    family=family.value,
                    offset=int(offset),
                    oracle=complex(oracle),
                    table=table_moment(family, offset, model),
                )
                if row.diff > tolerance:
                    logger.warning(
                        "k=%s %s Δ=%d: oracle %s vs table %s",
                        row.level,
                        row.family,
                        row.offset,
                        row.oracle,
                        row.table,
                    )
                report.rows.append(row)
    report.duration_s = time.perf_counter() - start
    logger.info("Table check: %s", report)
    return report
