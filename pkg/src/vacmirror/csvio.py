"""CSV serialization of sweep results.

Layout: ``#``-prefixed metadata lines (``# key: <json>``), one header row,
then one row per grid point. Numbers are written with 17 significant
digits so every double round-trips exactly. Output never depends on the
locale.
"""
from __future__ import annotations

import csv
import io
import json

from .sweep_engine import SweepResult


def format_number(value) -> str:
    if isinstance(value, str):
        return value
    return format(float(value), ".17g")


def write_csv(result: SweepResult, stream) -> None:
    for key in sorted(result.metadata):
        stream.write(f"# {key}: {json.dumps(result.metadata[key], sort_keys=True)}\n")
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(result.columns)
    for record in result.records:
        writer.writerow([format_number(v) for v in record])


def to_csv_text(result: SweepResult) -> str:
    buf = io.StringIO()
    write_csv(result, buf)
    return buf.getvalue()


def read_csv(stream) -> SweepResult:
    """Parse text written by :func:`write_csv` back into a :class:`SweepResult`."""
    metadata = {}
    body = []
    for line in stream:
        if line.startswith("#"):
            key, _, value = line[1:].strip().partition(": ")
            metadata[key] = json.loads(value)
        else:
            body.append(line)
    rows = list(csv.reader(body))
    columns = tuple(rows[0])
    records = [tuple(float(v) for v in row) for row in rows[1:]]
    return SweepResult(columns, records, metadata)
