"""Deterministic JSON / CSV / plain-text report emission."""

from __future__ import annotations

import csv
import dataclasses
import io
import json
import math
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, List, Optional, Sequence

import numpy as np

from . import SCHEMA_VERSION

FORMATS = ("json", "csv", "human")


@dataclass
class Report:
    """One experiment's output.

    ``results`` holds scalar outcomes, ``rows`` an optional table (for CSV
    and for per-point dumps). ``quantity`` names what was computed.
    """

    command: str
    quantity: str
    params: Dict[str, Any]
    seed: Optional[int] = None
    results: Dict[str, Any] = field(default_factory=dict)
    columns: Sequence[str] = ()
    rows: List[Sequence[Any]] = field(default_factory=list)
    passed: Optional[bool] = None


def plain(value: Any) -> Any:
    """Convert numpy scalars/arrays, Fractions and dataclasses into JSON-ready values."""
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        v = float(value)
        return v if math.isfinite(v) else repr(v)
    if isinstance(value, Fraction):
        return f"{value.numerator}/{value.denominator}" if value.denominator != 1 else str(value.numerator)
    if isinstance(value, np.ndarray):
        return [plain(v) for v in value.tolist()]
    if dataclasses.is_dataclass(value) and not isinstance(value, type):
        return {f.name: plain(getattr(value, f.name)) for f in dataclasses.fields(value)
                if f.repr}
    if isinstance(value, dict):
        return {str(k): plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [plain(v) for v in value]
    return value


def to_json(report: Report) -> str:
    body = {
        "version": SCHEMA_VERSION,
        "command": report.command,
        "quantity": report.quantity,
        "params": plain(report.params),
        "seed": report.seed,
        "passed": report.passed,
        "results": plain(report.results),
    }
    if report.columns:
        body["columns"] = list(report.columns)
        body["rows"] = plain(report.rows)
    return json.dumps(body, indent=2, ensure_ascii=True) + "\n"


def to_csv(report: Report) -> str:
    """RFC 4180 CSV (CRLF line ends). Without a table, results become key,value rows."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\r\n")
    if report.columns:
        w.writerow(report.columns)
        for row in report.rows:
            w.writerow([plain(v) for v in row])
    else:
        w.writerow(["key", "value"])
        for k, v in plain(report.results).items():
            w.writerow([k, json.dumps(v) if isinstance(v, (list, dict)) else v])
    return buf.getvalue()


def to_human(report: Report) -> str:
    lines = [f"{report.command}: {report.quantity}"]
    if report.passed is not None:
        lines.append(f"status: {'PASS' if report.passed else 'FAIL'}")
    for k, v in plain(report.results).items():
        lines.append(f"  {k}: {v}")
    if report.columns:
        lines.append("  " + "\t".join(report.columns))
        for row in report.rows:
            lines.append("  " + "\t".join(str(plain(v)) for v in row))
    return "\n".join(lines) + "\n"


def render(report: Report, fmt: str) -> str:
    if fmt == "json":
        return to_json(report)
    if fmt == "csv":
        return to_csv(report)
    if fmt == "human":
        return to_human(report)
    raise ValueError(f"unknown format {fmt!r}; choose from {FORMATS}")


def emit_report(report: Report, fmt: str = "json", path: Optional[str] = None) -> str:
    """Render ``report`` and write it to ``path`` (stdout when None). Returns the text.

    Raises:
        OSError: the file cannot be written; the message names the path.
    """
    text = render(report, fmt)
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        try:
            with open(path, "w", newline="", encoding="utf-8") as fh:
                fh.write(text)
        except OSError as exc:
            raise OSError(f"cannot write report to {path}: {exc.strerror}") from exc
    return text
