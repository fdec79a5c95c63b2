"""Surface definition files.

A surface file is JSON with one of three shapes::

    {"kind": "parametric", "params": ["u", "s"],
     "coords": [{"numer": "...", "denom": "..."}, "x-string", ...]}
    {"kind": "ruled", "params": ["u", "s"],
     "a0": "...", "a1": "...", "b0": ..., "b1": ..., "c0": ..., "c1": ...,
     "d1": ..., "d2": ..., "d3": ...}
    {"kind": "implicit", "F": "...", "vars": ["x", "y", "z"]}

``kind`` defaults to ``parametric``.  Coordinates given as a plain string
may be a polynomial or a quotient ``(p)/(q)``.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Union

from .algebra import MultiPoly, RationalFunction, format_poly, parse_rational_function
from .implicitize import RationalSurface, RuledSurface

RULED_KEYS = ("a0", "a1", "b0", "b1", "c0", "c1", "d1", "d2", "d3")


class SurfaceFileError(ValueError):
    pass


def surface_from_dict(data: dict) -> Union[RationalSurface, RuledSurface, MultiPoly]:
    kind = data.get("kind", "parametric")
    if kind == "implicit":
        names = tuple(data.get("vars", ("x", "y", "z")))
        if names != ("x", "y", "z"):
            raise SurfaceFileError("implicit surfaces must use the variables x, y, z")
        return MultiPoly.parse(data["F"], names)
    params = tuple(data.get("params", ("u", "s")))
    if len(params) != 2:
        raise SurfaceFileError("a surface needs exactly two parameters")
    if kind == "ruled":
        missing = [k for k in RULED_KEYS if k not in data]
        if missing:
            raise SurfaceFileError(f"ruled surface is missing {missing}")
        return RuledSurface(*(str(data[k]) for k in RULED_KEYS), params=params)
    if kind != "parametric":
        raise SurfaceFileError(f"unknown surface kind {kind!r}")
    coords = data.get("coords")
    if not isinstance(coords, list) or len(coords) != 3:
        raise SurfaceFileError("'coords' must list three coordinates")
    out = []
    for c in coords:
        if isinstance(c, dict):
            out.append(RationalFunction(MultiPoly.parse(str(c["numer"]), params),
                                        MultiPoly.parse(str(c.get("denom", "1")), params)))
        else:
            out.append(parse_rational_function(str(c), params))
    return RationalSurface(*out, params=params)


def load_surface(path) -> Union[RationalSurface, RuledSurface, MultiPoly]:
    try:
        data = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise SurfaceFileError(f"cannot read surface file {path}: {exc}") from exc
    if not isinstance(data, dict):
        raise SurfaceFileError("surface file must hold a JSON object")
    try:
        return surface_from_dict(data)
    except (KeyError, ValueError, SyntaxError) as exc:
        raise SurfaceFileError(f"bad surface file {path}: {exc}") from exc


def surface_to_dict(S: RationalSurface) -> dict:
    return {"kind": "parametric", "params": list(S.params),
            "coords": [{"numer": format_poly(c.numer), "denom": format_poly(c.denom)} for c in S.coords]}


def dump_json(obj) -> str:
    """Deterministic JSON text."""
    return json.dumps(obj, indent=1, sort_keys=True) + "\n"
