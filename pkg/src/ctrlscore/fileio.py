"""Matrix CSV and JSON report I/O.

Matrices are comma-separated, row-major, with an optional header row of
labels. Values are written with 17 significant digits so every float
round-trips exactly.
"""

from __future__ import annotations

import csv
import hashlib
import io
import json
import math
from pathlib import Path

import numpy as np

from ctrlscore.errors import ParseError

SCHEMA_VERSION = 1


def fmt(x: float) -> str:
    return format(float(x), ".17g")


def _is_number(tok: str) -> bool:
    try:
        float(tok)
    except ValueError:
        return False
    return True


def parse_matrix_text(text: str) -> tuple[np.ndarray, tuple[str, ...] | None]:
    """Parse matrix CSV text into ``(matrix, labels)``; raises :class:`ParseError`."""
    rows = [r for r in csv.reader(io.StringIO(text))]
    # (1-based line number, row) for non-blank, non-comment lines
    lines = [(k + 1, r) for k, r in enumerate(rows) if r and any(c.strip() for c in r) and not r[0].lstrip().startswith("#")]
    if not lines:
        raise ParseError("empty matrix file", 1, 1)
    labels = None
    first_line, first = lines[0]
    if not all(_is_number(c.strip()) for c in first):
        labels = tuple(c.strip() for c in first)
        lines = lines[1:]
        if not lines:
            raise ParseError("header row without data", first_line, 1)
    n = len(lines)
    out = np.empty((n, n))
    for r, (ln, row) in enumerate(lines):
        if len(row) != n:
            raise ParseError(f"expected {n} columns, found {len(row)}", ln, min(len(row), n) + 1)
        for c, tok in enumerate(row):
            try:
                v = float(tok.strip())
            except ValueError:
                raise ParseError(f"not a number: {tok.strip()!r}", ln, c + 1) from None
            if not math.isfinite(v):
                raise ParseError(f"non-finite value {tok.strip()!r}", ln, c + 1)
            out[r, c] = v
    if labels is not None and len(labels) != n:
        raise ParseError(f"header has {len(labels)} labels for a {n}x{n} matrix", first_line, 1)
    return out, labels


def read_matrix(path) -> tuple[np.ndarray, tuple[str, ...] | None]:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except UnicodeDecodeError as exc:
        raise ParseError(f"not UTF-8 text: {exc.reason}", 1, 1) from None
    return parse_matrix_text(text)


def matrix_to_text(M, labels=None) -> str:
    M = np.asarray(M, dtype=float)
    lines = []
    if labels is not None:
        lines.append(",".join(labels))
    lines.extend(",".join(fmt(x) for x in row) for row in M)
    return "\n".join(lines) + "\n"


def write_matrix(path, M, labels=None) -> None:
    Path(path).write_text(matrix_to_text(M, labels), encoding="utf-8")


def table_to_text(header, rows, footer: str | None = None) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([fmt(x) if isinstance(x, (float, np.floating)) else x for x in row])
    if footer:
        buf.write(f"# {footer}\n")
    return buf.getvalue()


def fingerprint(path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [_jsonable(v) for v in obj.tolist()]
    if isinstance(obj, (np.bool_, bool)):
        return bool(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        return x if math.isfinite(x) else None
    return obj


def dumps(report: dict) -> str:
    """Deterministic JSON text (sorted keys, shortest round-trip floats)."""
    return json.dumps(_jsonable(report), sort_keys=True, indent=2, allow_nan=False) + "\n"


def write_json(path, report: dict) -> None:
    Path(path).write_text(dumps(report), encoding="utf-8")
