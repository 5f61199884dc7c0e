"""Experiment reports and their canonical serialization.

JSON output is produced by a small hand-rolled writer so the byte stream
is fully pinned: keys sorted, floats at 17 significant digits, no NaN or
infinity ever emitted.  Identical config and seed therefore give
byte-identical files.  CSV is reserved for plottable row dumps and always
carries a header row.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path

from . import __version__
from .errors import NumericsError


@dataclass
class ExperimentReport:
    config: dict
    results: dict
    tables: dict[str, list[dict]] = field(default_factory=dict)
    provenance: dict = field(default_factory=dict)

    def __post_init__(self):
        base = {"package": "cuspcorr", "version": __version__}
        base.update(self.provenance)
        self.provenance = base

    def to_document(self) -> dict:
        return {
            "config": self.config,
            "results": self.results,
            "tables": self.tables,
            "provenance": self.provenance,
        }


def format_float(x: float) -> str:
    if math.isnan(x) or math.isinf(x):
        raise NumericsError("NaN/inf forbidden in reports")
    return format(x, ".17g")


def _emit(obj, out: list[str]) -> None:
    if isinstance(obj, dict):
        out.append("{")
        for i, key in enumerate(sorted(obj)):
            if not isinstance(key, str):
                raise NumericsError("report keys must be strings")
            if i:
                out.append(", ")
            out.append(json.dumps(key))
            out.append(": ")
            _emit(obj[key], out)
        out.append("}")
    elif isinstance(obj, (list, tuple)):
        out.append("[")
        for i, item in enumerate(obj):
            if i:
                out.append(", ")
            _emit(item, out)
        out.append("]")
    elif isinstance(obj, bool):
        out.append("true" if obj else "false")
    elif isinstance(obj, int):
        out.append(str(obj))
    elif isinstance(obj, float):
        out.append(format_float(obj))
    elif isinstance(obj, str):
        out.append(json.dumps(obj))
    elif obj is None:
        out.append("null")
    elif isinstance(obj, complex):
        _emit({"re": obj.real, "im": obj.imag}, out)
    else:
        try:
            as_float = float(obj)
        except (TypeError, ValueError):
            raise NumericsError(f"unserializable value of type {type(obj).__name__}")
        out.append(format_float(as_float))


def dumps_canonical(doc) -> str:
    out: list[str] = []
    _emit(doc, out)
    return "".join(out) + "\n"


def write_report(report: ExperimentReport, path, format: str = "json") -> None:
    path = Path(path)
    if format == "json":
        path.write_text(dumps_canonical(report.to_document()), encoding="ascii")
    elif format == "csv":
        rows: list[dict] = []
        for name, table in sorted(report.tables.items()):
            for row in table:
                rows.append({"table": name, **row})
        if not rows:
            rows = [dict(report.results)] if report.results else []
        write_csv(path, rows)
    else:
        raise NumericsError(f"unknown report format {format!r}")


def read_report(path) -> dict:
    return json.loads(Path(path).read_text(encoding="ascii"))


def write_csv(path, rows: list[dict], columns: list[str] | None = None) -> None:
    """Rows of scalars; header always present (taken from the first row
    when columns are not given)."""
    import csv
    import io

    path = Path(path)
    if columns is None:
        columns = list(rows[0].keys()) if rows else []
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        cells = []
        for col in columns:
            v = row[col]
            cells.append(format_float(v) if isinstance(v, float) else str(v))
        writer.writerow(cells)
    path.write_text(buf.getvalue(), encoding="ascii")
