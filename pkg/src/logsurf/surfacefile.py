"""JSON surface files: parsing, canonical emission, class expressions.

Rationals are always strings, ``"p/q"`` or ``"p"``, never JSON numbers with
a fractional part.  A file either spells out the lattice (raw mode) or gives
a ``construction``: a preset followed by blow-up and curve steps.
"""

from __future__ import annotations

import json
import re
from dataclasses import replace
from fractions import Fraction
from typing import Any, Mapping

from .errors import LogSurfaceError
from .ratlattice import DivClass, NSLattice
from .surface import (
    Assumptions,
    Curve,
    LogSurface,
    add_curve,
    blow_down,
    blow_up,
    contract,
    hirzebruch,
    projective_plane,
)

RAW_WARNING = "raw lattice: geometric realizability is asserted by the caller"


class ParseError(LogSurfaceError):
    pass


def format_rational(q: Fraction) -> str:
    q = Fraction(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def parse_rational(value: Any) -> Fraction:
    if isinstance(value, bool) or isinstance(value, float):
        raise ParseError(f"rational expected as 'p/q' string, got {value!r}")
    if isinstance(value, int):
        return Fraction(value)
    if not isinstance(value, str) or not re.fullmatch(r"\s*[+-]?\d+(/\d+)?\s*", value):
        raise ParseError(f"malformed rational {value!r}")
    try:
        return Fraction(value.strip())
    except ZeroDivisionError:
        raise ParseError(f"zero denominator in {value!r}") from None


def format_class(X: LogSurface, D: DivClass) -> str:
    """Write D as a combination of basis names, e.g. ``"H - 2E1"``."""
    return format_terms((c, n) for c, n in zip(D.coeffs, X.lattice.basis))


def format_terms(terms) -> str:
    out = []
    for c, name in terms:
        if c == 0:
            continue
        mag = abs(c)
        body = name if mag == 1 else f"{format_rational(mag)} {name}" if mag.denominator != 1 else f"{mag.numerator}{name}"
        if not out:
            out.append(body if c > 0 else f"-{body}")
        else:
            out.append(f"+ {body}" if c > 0 else f"- {body}")
    return " ".join(out) if out else "0"


_TERM = re.compile(r"\s*([+-])?\s*(\d+(?:/\d+)?)?\s*\*?\s*([A-Za-z_][A-Za-z0-9_']*)\s*")


def parse_class(X: LogSurface, expr: str) -> DivClass:
    """Parse ``"2H - E1"``, ``"f + 1/2 s"`` or ``"K"``.

    Names resolve to basis vectors first, then ``K`` (canonical class), then
    curve names.
    """
    if not isinstance(expr, str) or not expr.strip():
        raise ParseError(f"empty class expression {expr!r}")
    pos = 0
    out = DivClass.zero(X.rank)
    first = True
    text = expr.strip()
    while pos < len(text):
        m = _TERM.match(text, pos)
        if not m or m.end() == pos or (m.group(1) is None and not first):
            raise ParseError(f"cannot parse class expression {expr!r}")
        sign = -1 if m.group(1) == "-" else 1
        coeff = Fraction(m.group(2)) if m.group(2) else Fraction(1)
        name = m.group(3)
        if name in X.lattice.basis:
            cls = X.lattice.basis_class(name)
        elif name == "K":
            cls = X.lattice.canonical
        elif X.has_curve(name):
            cls = X.curve(name).cls
        else:
            raise ParseError(f"unknown name {name!r} in {expr!r}")
        out = out + cls * (sign * coeff)
        pos = m.end()
        first = False
    return out


def _require(doc: Mapping, key: str, kind):
    if key not in doc:
        raise ParseError(f"missing field {key!r}")
    if not isinstance(doc[key], kind):
        raise ParseError(f"field {key!r} has the wrong type")
    return doc[key]


def _preset(recipe: Mapping) -> LogSurface:
    name = _require(recipe, "preset", str)
    if name == "P2":
        return projective_plane(line=bool(recipe.get("line", True)))
    m = re.fullmatch(r"F(\d+)", name)
    if m:
        return hirzebruch(int(m.group(1)))
    raise ParseError(f"unknown preset {name!r}")


def _construct(recipe: Mapping) -> LogSurface:
    if not isinstance(recipe, Mapping):
        raise ParseError("construction must be an object")
    X = _preset(recipe)
    steps = recipe.get("steps", [])
    if not isinstance(steps, list):
        raise ParseError("construction steps must be a list")
    for step in steps:
        if not isinstance(step, Mapping):
            raise ParseError("construction step must be an object")
        if "blow_up" in step:
            mults = step["blow_up"]
            if not isinstance(mults, Mapping) or not all(isinstance(v, int) for v in mults.values()):
                raise ParseError("blow_up expects a map of integer multiplicities")
            X = blow_up(X, dict(mults), step.get("name"))
        elif "add_curve" in step:
            cls = parse_class(X, _require(step, "class", str))
            pa = step.get("pa")
            if pa is not None and not isinstance(pa, int):
                raise ParseError("pa must be an integer")
            X = add_curve(X, step["add_curve"], cls, pa)
        elif "blow_down" in step:
            X = blow_down(X, step["blow_down"])
        elif "contract" in step:
            X = contract(X, list(step["contract"]))
        else:
            raise ParseError(f"unknown construction step {sorted(step)}")
    return X


def _raw(doc: Mapping) -> LogSurface:
    basis = _require(doc, "basis", list)
    gram_rows = _require(doc, "gram", list)
    if not all(isinstance(r, list) for r in gram_rows):
        raise ParseError("gram must be a list of rows")
    if len(gram_rows) != len(basis) or any(len(r) != len(basis) for r in gram_rows):
        raise ParseError("gram must be square with one row per basis name")
    gram = tuple(tuple(parse_rational(x) for x in r) for r in gram_rows)
    canonical = _parse_vector(_require(doc, "canonical", list), len(basis))
    lat = NSLattice(gram, canonical, tuple(str(b) for b in basis))
    curves = []
    for entry in _require(doc, "curves", list):
        if not isinstance(entry, Mapping):
            raise ParseError("curve entries must be objects")
        pa = _require(entry, "pa", int)
        curves.append(
            Curve(
                _require(entry, "name", str),
                _parse_vector(_require(entry, "class", list), len(basis)),
                pa,
                bool(entry.get("exceptional", False)),
            )
        )
    return LogSurface(lat, tuple(curves))


def _parse_vector(values: list, n: int) -> DivClass:
    if len(values) != n:
        raise ParseError(f"vector of length {len(values)} where {n} expected")
    return DivClass(tuple(parse_rational(v) for v in values))


def surface_from_json(doc: Mapping) -> tuple[LogSurface, list[str]]:
    """Build a surface from a parsed document; returns it with any warnings.

    Construction errors that are geometric (bad multiplicities, contracting
    a non-negative-definite set) propagate as LogSurfaceError; shape errors
    raise ParseError.
    """
    if not isinstance(doc, Mapping):
        raise ParseError("top level must be an object")
    warnings = []
    if "construction" in doc:
        X = _construct(doc["construction"])
    else:
        X = _raw(doc)
        warnings.append(RAW_WARNING)
    boundary = doc.get("boundary", {})
    if not isinstance(boundary, Mapping):
        raise ParseError("boundary must be an object")
    contracted = doc.get("contracted", [])
    exempt = doc.get("boundary_exempt", [])
    if not isinstance(contracted, list) or not isinstance(exempt, list):
        raise ParseError("contracted and boundary_exempt must be lists")
    assumptions = doc.get("assumptions", {})
    if not isinstance(assumptions, Mapping):
        raise ParseError("assumptions must be an object")
    X = replace(
        X,
        boundary={**X.boundary, **{str(k): parse_rational(v) for k, v in boundary.items()}},
        contracted=X.contracted | frozenset(map(str, contracted)),
        boundary_exempt=X.boundary_exempt | frozenset(map(str, exempt)),
        assumptions=Assumptions(
            snc_resolution=bool(assumptions.get("snc", False)),
            curve_list_complete=bool(assumptions.get("complete", False)),
        ),
    )
    return X, warnings


def surface_to_json(X: LogSurface) -> dict:
    """Canonical raw-mode document for X."""
    L = X.lattice
    doc = {
        "basis": list(L.basis),
        "gram": [[format_rational(x) for x in row] for row in L.gram],
        "canonical": [format_rational(x) for x in L.canonical],
        "curves": [
            {
                "name": c.name,
                "class": [format_rational(x) for x in c.cls],
                "pa": c.pa,
                **({"exceptional": True} if c.exceptional else {}),
            }
            for c in X.curves
        ],
        "boundary": {n: format_rational(X.boundary[n]) for n in X.names if X.boundary.get(n)},
        "contracted": [n for n in X.names if n in X.contracted],
        "assumptions": {
            "snc": X.assumptions.snc_resolution,
            "complete": X.assumptions.curve_list_complete,
        },
    }
    exempt = [n for n in X.names if n in X.boundary_exempt]
    if exempt:
        doc["boundary_exempt"] = exempt
    return doc


def loads(text: str) -> tuple[LogSurface, list[str]]:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc}") from None
    return surface_from_json(doc)


def dumps(X: LogSurface) -> str:
    return json.dumps(surface_to_json(X), indent=2) + "\n"
