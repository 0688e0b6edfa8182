"""CSV and JSON readers/writers for ticks, price grids, returns and results.

Input rows are ``timestamp,value[,volume]`` with an optional header line.
Timestamps are seconds since the epoch or ISO-8601 strings (naive ones are
taken as UTC). Floats are written with 17 significant digits so that output
files are byte-stable across runs.
"""

from __future__ import annotations

import io
import json
import math
import os
import sys
from datetime import datetime, timezone

import numpy as np

from .errors import InputError, InvalidPrice
from .series import PriceGrid, ReturnSeries, TickSeries, resample_locf


def parse_timestamp(text):
    try:
        return float(text)
    except ValueError:
        pass
    dt = datetime.fromisoformat(text.strip().replace("Z", "+00:00"))
    if dt.tzinfo is None:
        dt = dt.replace(tzinfo=timezone.utc)
    return dt.timestamp()


def _open(source):
    if hasattr(source, "read"):
        return source, False
    if source == "-":
        return sys.stdin, False
    try:
        return open(source, newline=""), True
    except OSError as exc:
        raise InputError(f"cannot read {source}: {exc.strerror}") from exc


def parse_rows(source, min_fields=2):
    """``(line_numbers, timestamps, values, extra)`` arrays from a CSV source.

    ``extra`` holds the optional third column (NaN where missing). A first
    line whose timestamp does not parse is treated as a header.
    """
    fh, close = _open(source)
    lines, times, values, extra = [], [], [], []
    header_allowed = True
    try:
        for lineno, raw in enumerate(fh, start=1):
            text = raw.strip()
            if not text or text.startswith("#"):
                continue
            fields = [f.strip() for f in text.split(",")]
            if len(fields) < min_fields:
                raise InputError(f"expected at least {min_fields} fields, got {len(fields)}", lineno)
            try:
                t = parse_timestamp(fields[0])
            except ValueError:
                if header_allowed:
                    header_allowed = False
                    continue
                raise InputError(f"unparseable timestamp {fields[0]!r}", lineno) from None
            try:
                v = float(fields[1])
                e = float(fields[2]) if len(fields) > 2 and fields[2] else math.nan
            except ValueError:
                raise InputError(f"unparseable number in {text!r}", lineno) from None
            header_allowed = False
            lines.append(lineno)
            times.append(t)
            values.append(v)
            extra.append(e)
    finally:
        if close:
            fh.close()
    if not lines:
        raise InputError("no data rows")
    return (np.array(lines), np.array(times, dtype=float), np.array(values, dtype=float),
            np.array(extra, dtype=float))


def _check_positive(lines, prices):
    bad = np.flatnonzero(~(prices > 0))
    if bad.size:
        i = bad[0]
        raise InvalidPrice(f"non-positive price {prices[i]!r}", int(lines[i]))


def read_ticks(source, source_label=None):
    lines, t, p, vol = parse_rows(source)
    _check_positive(lines, p)
    volumes = None if np.all(np.isnan(vol)) else vol
    label = source_label if source_label is not None else str(getattr(source, "name", source))
    return TickSeries.from_observations(t, p, volumes, label)


def _regular_step(lines, t, delta_t=None):
    if t.size < 2:
        return float(delta_t or 1.0)
    steps = np.diff(t)
    step = float(delta_t if delta_t is not None else steps[0])
    bad = np.flatnonzero(~np.isclose(steps, step, rtol=1e-9, atol=1e-6))
    if bad.size:
        raise InputError(f"grid spacing {steps[bad[0]]!r} differs from {step!r}",
                         int(lines[bad[0] + 1]))
    return step


def read_prices(source, delta_t=None):
    lines, t, p, _ = parse_rows(source)
    _check_positive(lines, p)
    step = _regular_step(lines, t, delta_t)
    return PriceGrid(t, p, step)


def read_returns(source, delta_t=None):
    lines, t, r, _ = parse_rows(source)
    bad = np.flatnonzero(~np.isfinite(r))
    if bad.size:
        raise InputError("non-finite return", int(lines[bad[0]]))
    step = _regular_step(lines, t, delta_t)
    return ReturnSeries(r, step, float(t[0]))


def read_events(source):
    fh, close = _open(source)
    events = []
    try:
        for lineno, raw in enumerate(fh, start=1):
            text = raw.strip()
            if not text or text.startswith("#"):
                continue
            ts, _, label = text.partition(",")
            try:
                events.append((parse_timestamp(ts), label.strip()))
            except ValueError:
                if events or lineno > 1:
                    raise InputError(f"unparseable event timestamp {ts!r}", lineno) from None
    finally:
        if close:
            fh.close()
    return events


def validate_input(path, kind="ticks", delta_t=None):
    """Diagnostics for an input file; the file is only read.

    Parse failures raise :class:`InputError`. Data problems (non-positive
    prices, time going backwards, duplicates, irregular grids) are returned
    as ``violations`` entries carrying their line numbers.
    """
    if kind not in ("ticks", "prices", "returns"):
        raise InputError(f"unknown input kind {kind!r}")
    lines, t, v, _ = parse_rows(path)
    violations = []

    def flag(kind_, idx, message):
        violations.append({"kind": kind_, "line": int(lines[idx]), "message": message})

    steps = np.diff(t)
    for i in np.flatnonzero(steps < 0):
        flag("NonMonotonicTimestamp", i + 1, f"timestamp {t[i + 1]!r} before {t[i]!r}")
    duplicates = int(np.count_nonzero(steps == 0))
    if kind in ("ticks", "prices"):
        for i in np.flatnonzero(~(v > 0)):
            flag("InvalidPrice", i, f"non-positive price {v[i]!r}")
    else:
        for i in np.flatnonzero(~np.isfinite(v)):
            flag("NonFiniteReturn", i, f"non-finite return {v[i]!r}")
    if kind != "ticks" and steps.size:
        step = delta_t if delta_t is not None else steps[0]
        irregular = ~np.isclose(steps, step, rtol=1e-9, atol=1e-6) & (steps != 0)
        for i in np.flatnonzero(irregular):
            flag("IrregularSpacing", i + 1, f"spacing {steps[i]!r} != {step!r}")
        for i in np.flatnonzero(steps == 0):
            flag("DuplicateTimestamp", i + 1, f"repeated timestamp {t[i]!r}")

    report = {
        "path": str(path),
        "kind": kind,
        "rows": int(t.size),
        "first_timestamp": float(t.min()),
        "last_timestamp": float(t.max()),
        "monotonicity_violations": int(np.count_nonzero(steps < 0)),
        "duplicate_timestamps": duplicates,
        "non_positive_prices": int(np.count_nonzero(~(v > 0))) if kind != "returns" else 0,
        "violations": violations,
    }
    pos = np.sort(t)
    gaps = np.diff(pos)
    if gaps.size:
        report["gap_stats"] = {
            "median": float(np.median(gaps)),
            "max": float(gaps.max()),
            "over_delta_t": int(np.count_nonzero(gaps > delta_t)) if delta_t else None,
        }
    if kind == "ticks" and delta_t and not any(x["kind"] == "InvalidPrice" for x in violations):
        grid = resample_locf(TickSeries.from_observations(t, v), delta_t)
        report["grid_points"] = len(grid)
        report["gap_count"] = grid.gap_count
    return report


# ---------------------------------------------------------------------------
# output


def format_float(v):
    if v is None:
        return ""
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    v = float(v)
    if math.isnan(v):
        return ""
    return format(v, ".17g")


def format_time(t):
    t = float(t)
    return str(int(t)) if t.is_integer() else format(t, ".17g")


def csv_text(header, rows):
    buf = io.StringIO()
    buf.write(",".join(header) + "\n")
    for row in rows:
        buf.write(",".join(c if isinstance(c, str) else format_float(c) for c in row) + "\n")
    return buf.getvalue()


def write_csv(path, header, rows):
    with open(path, "w", newline="") as fh:
        fh.write(csv_text(header, rows))


def _json(obj, indent, level):
    pad = " " * (indent * (level + 1))
    end = " " * (indent * level)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f'{pad}{_json(str(k), indent, level + 1)}: {_json(v, indent, level + 1)}'
                 for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, (list, tuple, np.ndarray)):
        if len(obj) == 0:
            return "[]"
        return "[" + ", ".join(_json(v, indent, level + 1) for v in obj) + "]"
    if isinstance(obj, str):
        return json.dumps(obj)
    if obj is None:
        return "null"
    if isinstance(obj, (bool, np.bool_)):
        return "true" if obj else "false"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    v = float(obj)
    if not math.isfinite(v):
        return "null"
    return format(v, ".17g")


def dumps_json(obj, indent=2):
    """JSON with every float at 17 significant digits; NaN/inf become null."""
    return _json(obj, indent, 0) + "\n"


def write_json(path, obj):
    with open(path, "w") as fh:
        fh.write(dumps_json(obj))


def ensure_dir(path):
    os.makedirs(path, exist_ok=True)
    return path
