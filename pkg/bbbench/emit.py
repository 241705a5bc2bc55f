"""Summary and trace files.

Summary columns are fixed: method,epsilon,status,iterations,final_distance,alpha0.
Floats are written with repr() in summaries and with 17 significant digits in traces,
so that both round-trip exactly.
"""
import csv
import io
import json
import math
import os
import os.path
from typing import List, Optional

import numpy as np

from bbtls.descent import IterationRecord, RunResult, RunStatus
from bbbench.benchmark import SummaryRow
from bbbench.exceptions import BenchIOError, BenchRuntimeError

SUMMARY_COLUMNS = ["method", "epsilon", "status", "iterations", "final_distance", "alpha0"]

_FORMAT_ALIASES = {"markdown": "md", "markdown-table": "md"}

_EXTENSIONS = {".csv": "csv", ".json": "json", ".md": "md"}


def _finite_or_none(value: Optional[float]) -> Optional[float]:
    return value if value is not None and math.isfinite(value) else None


def _format_float(value: Optional[float]) -> str:
    value = _finite_or_none(value)
    return "" if value is None else repr(float(value))


def _format_trace_float(value: Optional[float]) -> str:
    return "" if value is None else f"{value:.17g}"


def render_csv(rows: List[SummaryRow]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(SUMMARY_COLUMNS)
    for row in rows:
        writer.writerow([row.method, _format_float(row.epsilon), row.status, row.iterations,
                         _format_float(row.final_distance), _format_float(row.alpha0)])
    return buffer.getvalue()


def render_json(rows: List[SummaryRow]) -> str:
    """A list of records; a non-finite final_distance becomes null"""
    records = [{column: getattr(row, column) for column in SUMMARY_COLUMNS} for row in rows]
    for record in records:
        record["final_distance"] = _finite_or_none(record["final_distance"])
    return json.dumps(records, indent=2, allow_nan=False) + "\n"


def _cell(row: Optional[SummaryRow]) -> str:
    if row is None:
        return ""
    if row.status == RunStatus.converged.value:
        return str(row.iterations)
    if row.status == RunStatus.max_iter.value:
        return "--"
    return row.status


def render_markdown(rows: List[SummaryRow]) -> str:
    """Epsilons as rows, methods as columns. Non-converged runs show "--" (iteration cap) or
    their status. An alpha0 column is added when the rows cover more than one alpha0."""
    methods = list(dict.fromkeys(row.method for row in rows))
    keys = sorted({(row.epsilon, row.alpha0) for row in rows}, key=lambda key: (-key[0], key[1]))
    show_alpha0 = len({row.alpha0 for row in rows}) > 1
    cells = {(row.method, row.epsilon, row.alpha0): row for row in rows}

    header = ["epsilon"] + (["alpha0"] if show_alpha0 else []) + methods
    lines = ["| " + " | ".join(header) + " |",
             "|" + "|".join(["---"] * len(header)) + "|"]
    for epsilon, alpha0 in keys:
        entries = [f"{epsilon:g}"] + ([f"{alpha0:g}"] if show_alpha0 else [])
        entries += [_cell(cells.get((method, epsilon, alpha0))) for method in methods]
        lines.append("| " + " | ".join(entries) + " |")
    return "\n".join(lines) + "\n"


_RENDERERS = dict(csv=render_csv, json=render_json, md=render_markdown)


def resolve_format(format: Optional[str], path: Optional[str] = None) -> str:
    """Normalizes a format name, or infers it from the file extension if format is None"""
    if format is None and path is not None:
        format = _EXTENSIONS.get(os.path.splitext(path)[1].lower())
    format = _FORMAT_ALIASES.get(format, format)
    if format not in _RENDERERS:
        raise BenchRuntimeError(f"unknown summary format '{format}'")
    return format


def _write(path: str, content: str):
    try:
        dirname = os.path.dirname(path)
        if dirname:
            os.makedirs(dirname, exist_ok=True)
        with open(path, "w", newline="") as file:
            file.write(content)
    except OSError as exc:
        raise BenchIOError(f"can't write {path}", exc)


def emit_summary(rows: List[SummaryRow], format: str, path: str) -> str:
    """Writes the summary rows to path as csv, json or md. Returns the path.

    Raises:
        BenchIOError: if the file can't be written
    """
    if not rows:
        raise BenchRuntimeError("no summary rows to write")
    _write(path, _RENDERERS[resolve_format(format)](rows))
    return path


def read_summary(path: str, format: Optional[str] = None) -> List[SummaryRow]:
    """Reads back a csv or json summary written by emit_summary()"""
    format = resolve_format(format, path)
    try:
        with open(path, newline="") as file:
            if format == "csv":
                records = list(csv.DictReader(file))
                for record in records:
                    record["final_distance"] = record["final_distance"] or None
            elif format == "json":
                records = json.load(file)
            else:
                raise BenchRuntimeError(f"can't read back a summary in '{format}' format")
    except OSError as exc:
        raise BenchIOError(f"can't read {path}", exc)
    return [SummaryRow(**record) for record in records]


def emit_trace(result: RunResult, path: str) -> str:
    """Writes one row per iterate: k,x1..xn,f,grad_norm,alpha (alpha empty for k=0). Returns the path.

    Raises:
        BenchIOError: if the file can't be written
    """
    if not result.trace:
        raise BenchRuntimeError("empty trace")
    dim = result.trace[0].x.size
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(["k"] + [f"x{i+1}" for i in range(dim)] + ["f", "grad_norm", "alpha"])
    for record in result.trace:
        writer.writerow([record.k] + [_format_trace_float(float(value)) for value in record.x] +
                        [_format_trace_float(record.f_value), _format_trace_float(record.grad_norm),
                         _format_trace_float(record.alpha)])
    _write(path, buffer.getvalue())
    return path


def read_trace(path: str) -> List[IterationRecord]:
    """Reads back a trace written by emit_trace()"""
    try:
        with open(path, newline="") as file:
            reader = csv.reader(file)
            header = next(reader)
            rows = list(reader)
    except OSError as exc:
        raise BenchIOError(f"can't read {path}", exc)
    dim = len(header) - 4
    records = []
    for row in rows:
        records.append(IterationRecord(k=int(row[0]),
                                       x=np.array([float(value) for value in row[1:dim + 1]]),
                                       f_value=float(row[dim + 1]),
                                       grad_norm=float(row[dim + 2]) if row[dim + 2] else math.nan,
                                       alpha=float(row[dim + 3]) if row[dim + 3] else None))
    return records
