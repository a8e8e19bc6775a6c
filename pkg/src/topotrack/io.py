"""Reading signal matrices and writing result tables.

Signal files are CSV with one row per time sample and one column per node.
A first row that is not entirely numeric is taken as a header of channel
names.
"""

from __future__ import annotations

import csv
import json
import math
from pathlib import Path

import numpy as np


class DataError(ValueError):
    """Malformed input data; the message names the file, row and column."""


def read_signal_matrix(path) -> tuple[np.ndarray, list[str]]:
    """Load a ``(T, N)`` signal matrix and its channel names."""
    path = Path(path)
    try:
        fh = open(path, newline="")
    except OSError as exc:
        raise DataError(f"{path}: cannot open ({exc.strerror})") from exc
    with fh:
        rows = list(csv.reader(fh))
    rows = [(i + 1, row) for i, row in enumerate(rows) if row and any(c.strip() for c in row)]
    if not rows:
        raise DataError(f"{path}: file is empty")

    names = None
    first_line, first = rows[0]
    if not all(_is_number(c) for c in first):
        names = [c.strip() for c in first]
        rows = rows[1:]
    if not rows:
        raise DataError(f"{path}: no data rows")
    width = len(names) if names is not None else len(rows[0][1])
    if width < 2:
        raise DataError(f"{path}: need at least two channels, found {width}")

    X = np.empty((len(rows), width))
    for r, (lineno, row) in enumerate(rows):
        if len(row) != width:
            raise DataError(f"{path}: row {lineno} has {len(row)} columns, expected {width}")
        for c, cell in enumerate(row):
            try:
                value = float(cell)
            except ValueError:
                raise DataError(f"{path}: row {lineno}, column {c + 1}: "
                                f"{cell.strip()!r} is not a number") from None
            if not math.isfinite(value):
                raise DataError(f"{path}: row {lineno}, column {c + 1}: non-finite value {cell.strip()!r}")
            X[r, c] = value
    if names is None:
        names = [f"ch{c + 1}" for c in range(width)]
    return X, names


def _is_number(cell: str) -> bool:
    try:
        float(cell)
    except ValueError:
        return False
    return True


def write_signal_matrix(path, X: np.ndarray, names=None) -> None:
    X = np.asarray(X, dtype=float)
    names = names or [f"ch{c + 1}" for c in range(X.shape[1])]
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(names)
        for row in X:
            writer.writerow([repr(float(v)) for v in row])


def zscore_columns(X: np.ndarray) -> np.ndarray:
    """Per-channel standardization; constant channels are only centered."""
    mu = X.mean(axis=0)
    sd = X.std(axis=0)
    sd[sd == 0] = 1.0
    return (X - mu) / sd


def _cell(value):
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    if isinstance(value, np.integer):
        return int(value)
    return value


def write_table(path, header, rows, fmt: str = "csv") -> Path:
    """Write rows as CSV (``fmt="csv"``) or a JSON list of objects (``fmt="json"``).

    ``path`` is given without suffix; the suffix follows the format.
    """
    path = Path(path).with_suffix("." + fmt)
    if fmt == "csv":
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(header)
            for row in rows:
                writer.writerow([_cell(v) for v in row])
    elif fmt == "json":
        records = [{k: _json_value(v) for k, v in zip(header, row)} for row in rows]
        with open(path, "w") as fh:
            json.dump(records, fh, indent=1)
            fh.write("\n")
    else:
        raise ValueError(f"unknown table format {fmt!r}")
    return path


def _json_value(v):
    if isinstance(v, (float, np.floating)):
        v = float(v)
        return v if math.isfinite(v) else None
    if isinstance(v, np.integer):
        return int(v)
    return v


def read_table(path) -> dict[str, list]:
    """Column-wise contents of a table written by :func:`write_table`.

    Numeric columns come back as floats; JSON ``null`` becomes NaN.
    """
    path = Path(path)
    if path.suffix == ".json":
        with open(path) as fh:
            records = json.load(fh)
        header = list(records[0]) if records else []
        cols = {h: [r[h] for r in records] for h in header}
    else:
        with open(path, newline="") as fh:
            reader = csv.reader(fh)
            header = next(reader)
            cols = {h: [] for h in header}
            for row in reader:
                for h, v in zip(header, row):
                    cols[h].append(v)
    for h, values in cols.items():
        try:
            cols[h] = [float("nan") if v is None or v == "" else float(v) for v in values]
        except (TypeError, ValueError):
            pass
    return cols


def write_json(path, payload: dict) -> None:
    with open(path, "w") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")
