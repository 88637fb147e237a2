"""Plain-text numeric datasets: one observation per row, optional header."""

from __future__ import annotations

import math
import re

import numpy as np

from .errors import DatasetParseError, InsufficientDataError

_WS = re.compile(r"\s+")


def _is_number(token: str) -> bool:
    try:
        float(token)
    except ValueError:
        return False
    return True


def _detect_delimiter(line: str):
    for delim in (",", "\t", ";"):
        if delim in line:
            return delim
    return None  # whitespace


def _split(line: str, delim):
    if delim is None:
        return _WS.split(line.strip())
    return [t.strip() for t in line.split(delim)]


def parse_dataset(text: str, delimiter=None) -> np.ndarray:
    """Parse delimiter-separated numeric text into an (n, d) array.

    Blank lines and ``#`` comments are skipped. The first data line is taken
    as a header when none of its fields are numeric. Errors name the
    1-based line number.
    """
    rows = []
    width = None
    header_checked = False
    delim = delimiter
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if delim is None and not header_checked:
            delim = _detect_delimiter(line)
        fields = _split(line, delim)
        if not header_checked:
            header_checked = True
            if not any(_is_number(f) for f in fields):
                width = len(fields)
                continue
        if width is not None and len(fields) != width:
            raise DatasetParseError(f"expected {width} columns, found {len(fields)}", lineno)
        width = len(fields)
        values = []
        for f in fields:
            try:
                v = float(f)
            except ValueError:
                raise DatasetParseError(f"non-numeric field {f!r}", lineno) from None
            if not math.isfinite(v):
                raise DatasetParseError(f"non-finite value {f!r}", lineno)
            values.append(v)
        rows.append(values)
    if not rows:
        raise InsufficientDataError("dataset contains no observations")
    return np.array(rows, dtype=float)


def read_dataset(path, delimiter=None) -> np.ndarray:
    with open(path, encoding="utf-8") as fh:
        return parse_dataset(fh.read(), delimiter)


def format_dataset(X, delimiter: str = ",", header=None) -> str:
    X = np.asarray(X, dtype=float)
    if X.ndim == 1:
        X = X[:, None]
    lines = []
    if header:
        lines.append(delimiter.join(header))
    for row in X:
        lines.append(delimiter.join(format(v, ".17g") for v in row))
    return "\n".join(lines) + "\n"


def write_dataset(X, path, delimiter: str = ",", header=None) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(format_dataset(X, delimiter, header))
