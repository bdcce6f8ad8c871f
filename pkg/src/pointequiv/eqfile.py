"""Plain-text equation and transform files.

Equation file::

    # comment
    P = 0
    Q = -5/(12*x)
    S = sigma(y)*x^(5/4) + (4/3)*x^2
    functions: sigma
    assume: x>0
    point: x=2, y=1

Missing coefficients are zero.  A transform file has ``xt = ...`` and
``yt = ...`` lines for the new coordinates, and optionally ``x = ...`` and
``y = ...`` giving the old coordinates in terms of the new ones.
"""

from __future__ import annotations

from fractions import Fraction

from .expr.errors import ExprError
from .fields import Equation, coerce_value
from .transform import PointTransform

COEFFS = ("P", "Q", "R", "S")
TRANSFORM_KEYS = ("xt", "yt", "x", "y")


class InputError(Exception):
    """Malformed input, reported with file and line context."""

    def __init__(self, message, path="<input>", line=None):
        where = f"{path}:{line}" if line is not None else path
        super().__init__(f"{where}: {message}")


def _lines(text: str):
    for no, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield no, line


def _names(value: str) -> tuple:
    return tuple(n.strip() for n in value.replace(";", ",").split(",") if n.strip())


def _point(value: str, path, no) -> dict:
    out = {}
    for part in _names(value):
        if "=" not in part:
            raise InputError(f"bad point entry {part!r}", path, no)
        k, v = (s.strip() for s in part.split("=", 1))
        if k not in ("x", "y"):
            raise InputError(f"unknown coordinate {k!r}", path, no)
        try:
            out[k] = Fraction(v)
        except ValueError:
            raise InputError(f"point coordinates must be rational, got {v!r}", path, no)
    return out


def _split(text: str, path: str, keys: tuple):
    """(assignments as {key: (line, expr)}, directives as {name: (line, value)})."""
    assigns, directives = {}, {}
    for no, line in _lines(text):
        head, sep, rest = line.partition(":")
        if sep and "=" not in head:
            name = head.strip().lower()
            if name not in ("functions", "assume", "point"):
                raise InputError(f"unknown directive {name!r}", path, no)
            directives[name] = (no, rest.strip())
            continue
        key, sep, expr = line.partition("=")
        key = key.strip()
        if not sep or key not in keys:
            raise InputError(f"expected one of {', '.join(keys)} = <expr>, got {line!r}",
                             path, no)
        if key in assigns:
            raise InputError(f"{key} assigned twice", path, no)
        assigns[key] = (no, expr.strip())
    return assigns, directives


def _coerce(expr: str, functions, path, no):
    try:
        return coerce_value(expr, functions)
    except ExprError as e:
        raise InputError(str(e), path, no)


def parse_equation(text: str, path: str = "<input>") -> Equation:
    assigns, directives = _split(text, path, COEFFS)
    functions = _names(directives["functions"][1]) if "functions" in directives else ()
    assumptions = ("x>0",)
    if "assume" in directives:
        assumptions = _names(directives["assume"][1]) or ("x>0",)
    point = None
    if "point" in directives:
        no, value = directives["point"]
        point = _point(value, path, no)
    coeffs = {}
    for k in COEFFS:
        no, expr = assigns.get(k, (None, "0"))
        coeffs[k] = _coerce(expr, functions, path, no)
    return Equation(coeffs["P"], coeffs["Q"], coeffs["R"], coeffs["S"],
                    functions=functions, assumptions=tuple(assumptions), point=point)


def parse_transform(text: str, path: str = "<input>") -> PointTransform:
    assigns, directives = _split(text, path, TRANSFORM_KEYS)
    functions = _names(directives["functions"][1]) if "functions" in directives else ()
    for k in ("xt", "yt"):
        if k not in assigns:
            raise InputError(f"missing {k} = <expr>", path)
    vals = {k: _coerce(expr, functions, path, no) for k, (no, expr) in assigns.items()}
    if ("x" in vals) != ("y" in vals):
        raise InputError("the inverse needs both x = ... and y = ...", path)
    inverse = (vals["x"], vals["y"]) if "x" in vals else None
    try:
        return PointTransform(vals["xt"], vals["yt"], inverse).checked()
    except ExprError as e:
        raise InputError(str(e), path)


def read_equation(path: str) -> Equation:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as e:
        raise InputError(e.strerror or str(e), path)
    return parse_equation(text, path)


def read_transform(path: str) -> PointTransform:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as e:
        raise InputError(e.strerror or str(e), path)
    return parse_transform(text, path)


def format_equation(eq: Equation) -> str:
    lines = [f"{k} = {v}" for k, v in eq.to_strings().items()]
    if eq.functions:
        lines.append(f"functions: {', '.join(eq.functions)}")
    if eq.assumptions:
        lines.append(f"assume: {', '.join(eq.assumptions)}")
    if eq.point:
        lines.append("point: " + ", ".join(f"{k}={v}" for k, v in eq.point.items()))
    return "\n".join(lines) + "\n"
