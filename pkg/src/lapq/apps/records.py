"""One CSV row per experiment run."""

from __future__ import annotations

import csv
import io
from collections.abc import Iterable
from dataclasses import astuple, dataclass, fields

from ..predict import ErrorReport


@dataclass
class ExperimentRecord:
    algorithm: str
    n: int
    parameter: float | int | str
    seed: int
    clean_comparisons: int
    dirty_comparisons: int
    wall_time: float | None = None
    max_error: int = 0
    sum_log_error: float = 0.0

    def __post_init__(self) -> None:
        if self.clean_comparisons < 0 or self.dirty_comparisons < 0:
            raise ValueError("comparison counters must be non-negative")

    def with_errors(self, report: ErrorReport) -> ExperimentRecord:
        self.max_error = report.max_error
        self.sum_log_error = report.sum_log_error
        return self

    def row(self) -> list[str]:
        out = []
        for f, v in zip(fields(self), astuple(self)):
            if v is None:
                out.append("")
            elif f.name in ("wall_time", "sum_log_error"):
                out.append(f"{float(v):.6f}")
            else:
                out.append(str(v))
        return out


CSV_HEADER = [f.name for f in fields(ExperimentRecord)]


def to_csv(records: Iterable[ExperimentRecord]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for r in records:
        w.writerow(r.row())
    return buf.getvalue()
