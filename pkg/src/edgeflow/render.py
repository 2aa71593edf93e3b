"""Deterministic text rendering for command outputs.

Integers print exactly; reals print with 17 significant digits, enough to
round-trip any double bit-exactly, so identical computations produce
byte-identical primary outputs.
"""

from __future__ import annotations

import json
from typing import Iterable, Sequence


def fmt_number(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, int):
        return str(v)
    if isinstance(v, float):
        return format(v, ".17g")
    return str(v)


def json_line(obj) -> str:
    """One canonical JSON line with floats at 17 significant digits."""
    parts: list[str] = []

    def enc(o):
        if o is None:
            parts.append("null")
        elif o is True:
            parts.append("true")
        elif o is False:
            parts.append("false")
        elif isinstance(o, int):
            parts.append(str(o))
        elif isinstance(o, float):
            parts.append(format(o, ".17g"))
        elif isinstance(o, str):
            parts.append(json.dumps(o))
        elif isinstance(o, dict):
            parts.append("{")
            for i, (k, v) in enumerate(o.items()):
                if i:
                    parts.append(",")
                parts.append(json.dumps(str(k)))
                parts.append(":")
                enc(v)
            parts.append("}")
        elif isinstance(o, (list, tuple)):
            parts.append("[")
            for i, v in enumerate(o):
                if i:
                    parts.append(",")
                enc(v)
            parts.append("]")
        else:
            try:
                import numpy as np

                if isinstance(o, np.integer):
                    parts.append(str(int(o)))
                    return
                if isinstance(o, np.floating):
                    parts.append(format(float(o), ".17g"))
                    return
                if isinstance(o, np.ndarray):
                    enc(o.tolist())
                    return
            except ImportError:  # pragma: no cover
                pass
            raise TypeError(f"cannot render {type(o)!r}")

    enc(obj)
    return "".join(parts)


def ndjson(objs: Iterable) -> str:
    return "".join(json_line(o) + "\n" for o in objs)


def csv_table(header: Sequence[str], rows: Iterable[Sequence]) -> str:
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(fmt_number(v) for v in row))
    return "\n".join(lines) + "\n"
