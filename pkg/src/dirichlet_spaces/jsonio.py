"""JSON output with every float written to 17 significant digits.

``format(x, ".17g")`` always re-parses to the same double, so files written
here round-trip losslessly.
"""

import json
import math

import numpy as np


def _float(x):
    x = float(x)
    if math.isnan(x):
        return "NaN"
    if math.isinf(x):
        return "Infinity" if x > 0 else "-Infinity"
    s = format(x, ".17g")
    if not any(c in s for c in ".en"):
        s += ".0"
    return s


def _encode(o, indent, level):
    if isinstance(o, (bool, np.bool_)):
        return "true" if o else "false"
    if o is None:
        return "null"
    if isinstance(o, (int, np.integer)):
        return str(int(o))
    if isinstance(o, (float, np.floating)):
        return _float(o)
    if isinstance(o, (complex, np.complexfloating)):
        return _encode({"re": o.real, "im": o.imag}, indent, level)
    if isinstance(o, str):
        return json.dumps(o)
    if isinstance(o, np.ndarray):
        o = o.tolist()
    if isinstance(o, dict):
        items = [(json.dumps(str(k)), v) for k, v in o.items()]
        if not items:
            return "{}"
        if indent is None:
            return "{" + ", ".join(f"{k}: {_encode(v, None, 0)}" for k, v in items) + "}"
        pad = " " * (indent * (level + 1))
        body = ",\n".join(f"{pad}{k}: {_encode(v, indent, level + 1)}" for k, v in items)
        return "{\n" + body + "\n" + " " * (indent * level) + "}"
    if isinstance(o, (list, tuple)):
        if not o:
            return "[]"
        if indent is None or all(not isinstance(v, (dict, list, tuple)) for v in o):
            return "[" + ", ".join(_encode(v, None, 0) for v in o) + "]"
        pad = " " * (indent * (level + 1))
        body = ",\n".join(pad + _encode(v, indent, level + 1) for v in o)
        return "[\n" + body + "\n" + " " * (indent * level) + "]"
    raise TypeError(f"not JSON serializable: {type(o).__name__}")


def dumps(obj, indent=None):
    return _encode(obj, indent, 0)
