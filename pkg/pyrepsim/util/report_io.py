"""
JSON and CSV output with every float printed with 17 significant digits,
enough to round-trip a float64 exactly.
"""
import csv
import io
import json
import math

import numpy as np


def format_float(value):
    value = float(value)
    if math.isnan(value) or math.isinf(value):
        # JSON has no literal for these
        return "null"
    return "%.17g" % value


def _encode(obj, indent, level):
    pad = "\n" + " " * (indent * (level + 1)) if indent else ""
    close = "\n" + " " * (indent * level) if indent else ""
    sep = "," + pad if indent else ", "

    if obj is None or isinstance(obj, (bool, np.bool_)):
        return json.dumps(None if obj is None else bool(obj))
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return format_float(obj)
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, np.ndarray):
        obj = obj.tolist()
    if isinstance(obj, dict) or hasattr(obj, "items"):
        if not obj:
            return "{}"
        members = ["%s: %s" % (json.dumps(str(k)), _encode(v, indent, level + 1)) for k, v in obj.items()]
        return "{" + pad + sep.join(members) + close + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        # rows of numbers stay on one line
        if all(not isinstance(v, (dict, list, tuple, np.ndarray)) for v in obj):
            return "[" + ", ".join(_encode(v, indent, level + 1) for v in obj) + "]"
        return "[" + pad + sep.join(_encode(v, indent, level + 1) for v in obj) + close + "]"
    raise TypeError("cannot serialize %r" % type(obj))


def dumps(obj, indent=2):
    """
    Serializes dicts, lists, strings, numbers and numpy values to JSON.

    Parameters
    ----------
    obj: object
    indent: int

    Returns
    ----------
    str
    """
    return _encode(obj, indent, 0)


def rows_to_csv(rows):
    """
    CSV text of a list of rows; fields with commas, quotes or newlines are quoted.
    """
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerows(rows)
    return out.getvalue()


def grid_to_csv(scores, labels_a, labels_b):
    """
    CSV table of a score grid with the row labels in the first column.
    """
    rows = [[""] + [str(label) for label in labels_b]]
    for label, row in zip(labels_a, np.asarray(scores)):
        rows.append([str(label)] + [format_float(v) for v in row])
    return rows_to_csv(rows)
