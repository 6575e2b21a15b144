"""JSON input for symbols and deterministic JSON output.

Accepted inputs:

    {"type": "fourier", "coeffs": [[n, re, im], ...]}
    {"type": "samples", "values": [v_0, ..., v_{P-1}], "band": K}

Sample values are numbers or [re, im] pairs on θ_p = 2πp/P.  The real flag
is inferred: conjugate symmetry to 1e-12 for coefficient input, exact
realness for samples.
"""

from __future__ import annotations

import json
import math
from pathlib import Path

import numpy as np

from .circlefn import FourierSeries, from_samples
from .errors import SteklovError


class InputFormatError(SteklovError, ValueError):
    """The input file does not follow the symbol schema."""


def _number(x, where):
    if isinstance(x, bool) or not isinstance(x, (int, float)):
        raise InputFormatError(f"{where}: expected a number, got {x!r}")
    if not math.isfinite(x):
        raise InputFormatError(f"{where}: non-finite value")
    return float(x)


def series_from_obj(obj) -> FourierSeries:
    if not isinstance(obj, dict) or "type" not in obj:
        raise InputFormatError("symbol must be an object with a 'type' field")
    kind = obj["type"]
    if kind == "fourier":
        rows = obj.get("coeffs")
        if not isinstance(rows, list) or not rows:
            raise InputFormatError("'coeffs' must be a non-empty list of [n, re, im]")
        coeffs = {}
        for i, row in enumerate(rows):
            if not isinstance(row, list) or len(row) not in (2, 3):
                raise InputFormatError(f"coeffs[{i}]: expected [n, re, im]")
            n = row[0]
            if isinstance(n, bool) or not isinstance(n, int):
                if isinstance(n, float) and n.is_integer():
                    n = int(n)
                else:
                    raise InputFormatError(f"coeffs[{i}]: frequency must be an integer")
            re = _number(row[1], f"coeffs[{i}]")
            im = _number(row[2], f"coeffs[{i}]") if len(row) == 3 else 0.0
            if n in coeffs:
                raise InputFormatError(f"frequency {n} listed twice")
            coeffs[n] = complex(re, im)
        return FourierSeries.from_dict(coeffs)
    if kind == "samples":
        vals = obj.get("values")
        band = obj.get("band")
        if not isinstance(vals, list) or not vals:
            raise InputFormatError("'values' must be a non-empty list")
        if isinstance(band, bool) or not isinstance(band, int) or band < 0:
            raise InputFormatError("'band' must be a nonnegative integer")
        out = []
        for i, v in enumerate(vals):
            if isinstance(v, list):
                if len(v) != 2:
                    raise InputFormatError(f"values[{i}]: expected [re, im]")
                out.append(complex(_number(v[0], f"values[{i}]"), _number(v[1], f"values[{i}]")))
            else:
                out.append(_number(v, f"values[{i}]"))
        arr = np.array(out)
        return from_samples(arr, band, real=bool(np.all(np.imag(arr) == 0)))
    raise InputFormatError(f"unknown symbol type {kind!r}")


def load_series(path) -> FourierSeries:
    try:
        obj = json.loads(Path(path).read_text(encoding="utf-8"))
    except OSError as e:
        raise InputFormatError(f"cannot read {path}: {e}") from e
    except json.JSONDecodeError as e:
        raise InputFormatError(f"{path}: invalid JSON ({e})") from e
    return series_from_obj(obj)


def series_to_obj(u: FourierSeries, drop_zeros=True):
    rows = [[int(n), float(v.real), float(v.imag)]
            for n, v in zip(u.freqs, u.coeffs) if not (drop_zeros and v == 0)]
    return {"type": "fourier", "coeffs": rows}


# --- deterministic output ----------------------------------------------------

def _fmt_float(x):
    if math.isnan(x):
        return '"nan"'
    if math.isinf(x):
        return '"inf"' if x > 0 else '"-inf"'
    if x == 0:
        return "0.0"  # also folds -0.0
    s = f"{x:.17g}"
    if "e" not in s and "." not in s and "n" not in s:
        s += ".0"
    return s


def _emit(obj, indent, level, out):
    pad = " " * (indent * (level + 1)) if indent else ""
    close = " " * (indent * level) if indent else ""
    nl = "\n" if indent else ""
    sep = "," + nl if indent else ", "
    if obj is None:
        out.append("null")
    elif isinstance(obj, (bool, np.bool_)):
        out.append("true" if obj else "false")
    elif isinstance(obj, (int, np.integer)):
        out.append(str(int(obj)))
    elif isinstance(obj, (float, np.floating)):
        out.append(_fmt_float(float(obj)))
    elif isinstance(obj, str):
        out.append(json.dumps(obj, ensure_ascii=False))
    elif isinstance(obj, dict):
        if not obj:
            out.append("{}")
            return
        out.append("{" + nl)
        for i, (k, v) in enumerate(obj.items()):
            if i:
                out.append(sep)
            out.append(pad + json.dumps(str(k)) + ": ")
            _emit(v, indent, level + 1, out)
        out.append(nl + close + "}")
    elif isinstance(obj, (list, tuple, np.ndarray)):
        seq = list(obj)
        # short numeric rows stay on one line
        flat = all(not isinstance(v, (dict, list, tuple, np.ndarray)) for v in seq)
        if not seq:
            out.append("[]")
        elif flat or not indent:
            out.append("[")
            for i, v in enumerate(seq):
                if i:
                    out.append(", ")
                _emit(v, 0, 0, out)
            out.append("]")
        else:
            out.append("[" + nl)
            for i, v in enumerate(seq):
                if i:
                    out.append(sep)
                out.append(pad)
                _emit(v, indent, level + 1, out)
            out.append(nl + close + "]")
    else:
        raise TypeError(f"cannot serialize {type(obj).__name__}")


def dumps(obj, indent=2) -> str:
    """JSON text with every float at 17 significant digits.

    Key order is insertion order, so equal inputs give byte-identical text.
    """
    out = []
    _emit(obj, indent, 0, out)
    return "".join(out) + "\n"
