"""JSON/CSV emission with fixed 17-significant-digit float formatting.

The stdlib ``json`` module does not let us control float precision, and the
output contracts (CSV sweeps, report JSON) require byte-stable numbers that
round-trip exactly.  This module renders everything itself.
"""
from __future__ import annotations

import numpy as np


def fmt_float(x: float) -> str:
    """Shortest decimal with 17 significant digits; round-trips any double."""
    if isinstance(x, float) and (np.isnan(x) or np.isinf(x)):
        raise ValueError(f"non-finite value {x!r} cannot be serialized")
    return format(float(x), ".17g")


def _escape(s: str) -> str:
    out = []
    for ch in s:
        if ch == '"':
            out.append('\\"')
        elif ch == "\\":
            out.append("\\\\")
        elif ord(ch) < 0x20:
            out.append(f"\\u{ord(ch):04x}")
        else:
            out.append(ch)
    return "".join(out)


def dumps(obj) -> str:
    """Serialize to JSON with floats rendered via :func:`fmt_float`."""
    if obj is None:
        return "null"
    if obj is True:
        return "true"
    if obj is False:
        return "false"
    if isinstance(obj, str):
        return f'"{_escape(obj)}"'
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return fmt_float(float(obj))
    if isinstance(obj, np.ndarray):
        return dumps(obj.tolist())
    if isinstance(obj, (list, tuple)):
        return "[" + ",".join(dumps(v) for v in obj) + "]"
    if isinstance(obj, dict):
        items = []
        for k, v in obj.items():
            if not isinstance(k, str):
                raise TypeError(f"JSON object keys must be str, got {type(k)}")
            items.append(f'"{_escape(k)}":{dumps(v)}')
        return "{" + ",".join(items) + "}"
    raise TypeError(f"cannot serialize {type(obj)}")


def csv_cell(v) -> str:
    """Render one CSV cell: ints verbatim, floats at 17 significant digits."""
    if v is None:
        return ""
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return fmt_float(float(v))
    return str(v)


def csv_lines(header: list[str], rows) -> str:
    """Build a CSV document with a trailing newline and ``\\n`` separators."""
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(csv_cell(v) for v in row))
    return "\n".join(lines) + "\n"
