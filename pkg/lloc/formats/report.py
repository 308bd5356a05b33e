"""
JSON reports and CSV benchmark rows
"""

import csv
import io
import json
from typing import Iterable, List

from ..models.schemas import BenchRow, SolveReport

REPORT_KEYS = (
    "chosen_pivot",
    "satisfied_fraction",
    "violated_count",
    "total_constraints",
    "exact",
    "config",
    "candidates",
    "timings_ms",
)

BENCH_COLUMNS = list(BenchRow.model_fields)


def report_dict(report: SolveReport, include_timings: bool = True) -> dict:
    data = report.model_dump(mode="json")
    ordered = {key: data[key] for key in REPORT_KEYS}
    if not include_timings:
        ordered.pop("timings_ms")
    return ordered


def report_json(report: SolveReport, include_timings: bool = True) -> str:
    """Fixed key order; without timings two runs with equal seeds are byte-identical"""
    return json.dumps(report_dict(report, include_timings), indent=2) + "\n"


def model_json(model) -> str:
    return json.dumps(model.model_dump(mode="json"), indent=2) + "\n"


def bench_csv(rows: Iterable[BenchRow]) -> str:
    buffer = io.StringIO()
    writer = csv.DictWriter(buffer, fieldnames=BENCH_COLUMNS, lineterminator="\n")
    writer.writeheader()
    for row in rows:
        data = row.model_dump(mode="json")
        if data["satisfied_fraction"] is None:
            data["satisfied_fraction"] = ""
        writer.writerow(data)
    return buffer.getvalue()


def parse_bench_csv(text: str) -> List[dict]:
    return list(csv.DictReader(io.StringIO(text)))
