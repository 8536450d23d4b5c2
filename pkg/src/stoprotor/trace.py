"""Column-oriented simulation traces with lossless CSV / JSON-lines IO.

A trace is a fixed column order, one row per sample, plus a small metadata
mapping rendered as ``# key: value`` comment lines ahead of the CSV header.
Floats are written with ``repr`` so a re-imported trace compares equal to
the original, and the writers use fixed newline and key ordering so
identical inputs produce byte-identical files.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field
from typing import Iterable, List, Sequence, Union

from .errors import ConfigurationError

Cell = Union[float, str]


@dataclass
class SimTrace:
    """Time-indexed record of one simulation run."""

    columns: List[str]
    rows: List[tuple] = field(default_factory=list)
    meta: dict = field(default_factory=dict)
    flags: List[str] = field(default_factory=list)

    def append(self, *values: Cell) -> None:
        if len(values) != len(self.columns):
            raise ConfigurationError(
                f"row has {len(values)} cells, trace has {len(self.columns)} columns")
        self.rows.append(tuple(values))

    def column(self, name: str) -> list:
        idx = self.columns.index(name)
        return [row[idx] for row in self.rows]

    def __len__(self) -> int:
        return len(self.rows)

    def __eq__(self, other) -> bool:
        if not isinstance(other, SimTrace):
            return NotImplemented
        return (self.columns == other.columns and self.rows == other.rows
                and self.meta == other.meta and self.flags == other.flags)


def _format_cell(value: Cell) -> str:
    if isinstance(value, str):
        return value
    return repr(float(value))


def _parse_cell(text: str) -> Cell:
    try:
        return float(text)
    except ValueError:
        return text


def _meta_lines(trace: SimTrace) -> List[str]:
    lines = [f"# {key}: {value}" for key, value in trace.meta.items()]
    if trace.flags:
        lines.append(f"# flags: {','.join(trace.flags)}")
    return lines


def to_csv_text(trace: SimTrace) -> str:
    buf = io.StringIO()
    for line in _meta_lines(trace):
        buf.write(line + "\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(trace.columns)
    for row in trace.rows:
        writer.writerow([_format_cell(v) for v in row])
    return buf.getvalue()


def to_jsonl_text(trace: SimTrace) -> str:
    lines = [json.dumps({"meta": trace.meta, "columns": trace.columns,
                         "flags": trace.flags}, sort_keys=True)]
    for row in trace.rows:
        lines.append(json.dumps(list(row), sort_keys=True))
    return "\n".join(lines) + "\n"


def from_csv_text(text: str) -> SimTrace:
    meta = {}
    flags: List[str] = []
    lines = text.splitlines()
    body_start = 0
    for i, line in enumerate(lines):
        if line.startswith("#"):
            stripped = line[1:].strip()
            if ":" in stripped:
                key, value = stripped.split(":", 1)
                if key.strip() == "flags":
                    flags = [f for f in value.strip().split(",") if f]
                else:
                    meta[key.strip()] = value.strip()
            body_start = i + 1
        else:
            body_start = i
            break
    reader = csv.reader(lines[body_start:])
    try:
        columns = next(reader)
    except StopIteration:
        raise ConfigurationError("trace file has no header row")
    trace = SimTrace(columns=columns, meta=meta, flags=flags)
    for row in reader:
        if not row:
            continue
        trace.append(*[_parse_cell(c) for c in row])
    return trace


def from_jsonl_text(text: str) -> SimTrace:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise ConfigurationError("empty trace file")
    head = json.loads(lines[0])
    trace = SimTrace(columns=list(head["columns"]), meta=dict(head.get("meta", {})),
                     flags=list(head.get("flags", [])))
    for line in lines[1:]:
        values = json.loads(line)
        trace.append(*[v if isinstance(v, str) else float(v) for v in values])
    return trace


def export_trace(trace: SimTrace, path: str, fmt: str = "csv") -> str:
    """Write a trace to ``path`` in ``csv`` or ``json`` (JSON-lines) form."""
    if fmt == "csv":
        text = to_csv_text(trace)
    elif fmt == "json":
        text = to_jsonl_text(trace)
    else:
        raise ConfigurationError(f"unknown trace format {fmt!r}")
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)
    return path


def import_trace(path: str, fmt: str = "csv") -> SimTrace:
    with open(path, "r", encoding="utf-8", newline="") as fh:
        text = fh.read()
    if fmt == "csv":
        return from_csv_text(text)
    if fmt == "json":
        return from_jsonl_text(text)
    raise ConfigurationError(f"unknown trace format {fmt!r}")
