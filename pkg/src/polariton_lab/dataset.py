"""Tabular results with a metadata header, written as CSV or JSON.

Numbers are printed with 12 significant digits and nothing time-dependent
is recorded, so identical configurations give byte-identical files.
"""
from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

SIG_DIGITS = 12
CONFIG_KEY = "config"


def format_number(x: Any) -> str:
    if x is None:
        return ""
    if isinstance(x, bool):
        return "1" if x else "0"
    if isinstance(x, int):
        return str(x)
    if isinstance(x, float):
        if math.isnan(x):
            return "nan"
        out = f"{x:.{SIG_DIGITS}g}"
        return "0" if out == "-0" else out
    return str(x)


def _plain(x: Any) -> Any:
    if isinstance(x, dict):
        return {str(k): _plain(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_plain(v) for v in x]
    if hasattr(x, "item"):
        return x.item()
    return x


def _round_json(x: Any) -> Any:
    if isinstance(x, bool) or x is None or isinstance(x, (int, str)):
        return x
    if isinstance(x, float):
        if not math.isfinite(x):
            return str(x)
        return float(f"{x:.{SIG_DIGITS}g}") + 0.0
    if isinstance(x, dict):
        return {str(k): _round_json(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_round_json(v) for v in x]
    if hasattr(x, "item"):  # numpy scalar
        return _round_json(x.item())
    return str(x)


@dataclass
class Dataset:
    columns: list[str]
    rows: list[list[Any]] = field(default_factory=list)
    metadata: dict[str, Any] = field(default_factory=dict)
    report: dict[str, Any] | None = None  # single-point result, JSON only

    def column(self, name: str) -> list[Any]:
        k = self.columns.index(name)
        return [r[k] for r in self.rows]

    def to_csv(self) -> str:
        buf = io.StringIO()
        for key, value in self.metadata.items():
            text = json.dumps(_plain(value), sort_keys=True, separators=(",", ":"), ensure_ascii=False)
            buf.write(f"# {key}: {text}\n")
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(self.columns)
        for row in self.rows:
            writer.writerow([format_number(v) for v in row])
        return buf.getvalue()

    def to_json(self) -> str:
        doc: dict[str, Any] = {"metadata": _plain(self.metadata)}
        if self.report is not None:
            doc["report"] = _round_json(self.report)
        if self.columns:
            doc["columns"] = self.columns
            doc["rows"] = _round_json(self.rows)
        return json.dumps(doc, indent=2, ensure_ascii=False) + "\n"

    def write(self, path: str | Path, fmt: str = "csv") -> None:
        text = self.to_json() if fmt == "json" else self.to_csv()
        Path(path).write_text(text, encoding="utf-8")


def read_metadata(path: str | Path) -> dict[str, Any]:
    """Metadata block of a file written by :meth:`Dataset.write`."""
    text = Path(path).read_text(encoding="utf-8")
    if text.lstrip().startswith("{"):
        return json.loads(text)["metadata"]
    meta: dict[str, Any] = {}
    for line in text.splitlines():
        if not line.startswith("# "):
            break
        key, _, value = line[2:].partition(": ")
        meta[key] = json.loads(value)
    return meta


def read_csv(path: str | Path) -> Dataset:
    lines = Path(path).read_text(encoding="utf-8").splitlines()
    body = [ln for ln in lines if not ln.startswith("#")]
    reader = csv.reader(body)
    columns = next(reader)
    rows = []
    for rec in reader:
        row = []
        for v in rec:
            try:
                row.append(float(v) if v != "" else None)
            except ValueError:
                row.append(v)
        rows.append(row)
    return Dataset(columns, rows, read_metadata(path))
