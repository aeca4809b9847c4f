"""Reading regions, circles and curves from JSON documents.

Numbers may be JSON numbers, exact rational strings such as ``"1/3"``, or
``[re, im]`` pairs where a complex value is allowed.
"""

from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path

import numpy as np

from .curves import AnalyticCurve, ComplexCircle, RationalCircle, RationalCurve, TrigCircle
from .errors import InputError
from .geometry import PolytopalRegion, Polytope, convex_hull


def parse_real(value) -> float:
    if isinstance(value, bool):
        raise InputError(f"expected a number, got {value!r}")
    if isinstance(value, (int, float)):
        return float(value)
    if isinstance(value, str):
        try:
            return float(Fraction(value.strip()))
        except (ValueError, ZeroDivisionError) as exc:
            raise InputError(f"cannot parse number {value!r}") from exc
    raise InputError(f"expected a number, got {value!r}")


def parse_complex(value) -> complex:
    if isinstance(value, (list, tuple)):
        if len(value) != 2:
            raise InputError(f"complex pairs need [re, im], got {value!r}")
        return complex(parse_real(value[0]), parse_real(value[1]))
    return complex(parse_real(value))


def _load(source):
    if isinstance(source, dict):
        return source
    path = Path(source)
    try:
        return json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: invalid JSON ({exc})") from exc


def region_from_dict(doc: dict) -> PolytopalRegion:
    try:
        dim = int(doc["dim"])
        parts_doc = doc["parts"]
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError("region needs 'dim' and 'parts'") from exc
    parts = []
    for k, part in enumerate(parts_doc):
        verts = np.array([[parse_real(x) for x in row] for row in part["vertices"]], dtype=float)
        if verts.ndim != 2 or verts.shape[1] != dim:
            raise InputError(f"part {k}: vertices must have {dim} coordinates")
        edges = part.get("edges")
        if edges is None:
            if dim > 3:
                raise InputError(f"part {k}: edges are required in dimension {dim}")
            parts.append(convex_hull(verts))
        else:
            parts.append(Polytope(verts, [tuple(e) for e in edges]))
    return PolytopalRegion(tuple(parts))


def load_region(source) -> PolytopalRegion:
    return region_from_dict(_load(source))


def region_to_dict(region: PolytopalRegion) -> dict:
    return {
        "dim": region.dim,
        "parts": [{"vertices": p.vertices.tolist(), "edges": [list(e) for e in p.edges]} for p in region.parts],
    }


def _circle(doc, dim=None) -> ComplexCircle:
    if "center" in doc:
        center = [parse_complex(c) for c in doc["center"]]
    elif dim is not None:
        center = [0j] * dim
    else:
        raise InputError("circle needs a 'center'")
    radius = parse_complex(doc.get("radius", 1.0))
    plane = tuple(doc.get("plane", (0, 1)))
    return ComplexCircle(np.array(center), radius, plane)


def circle_from_dict(doc: dict, dim=None) -> ComplexCircle:
    kind = doc.get("kind", "trig_circle")
    if kind not in ("trig_circle", "rational_circle"):
        raise InputError(f"expected a circle, got kind {kind!r}")
    return _circle(doc, dim)


def load_circle(source, dim=None) -> ComplexCircle:
    return circle_from_dict(_load(source), dim)


def curve_from_dict(doc: dict, dim=None):
    kind = doc.get("kind")
    if kind == "trig_circle":
        return TrigCircle(_circle(doc, dim))
    if kind == "rational_circle":
        return RationalCircle(_circle(doc, dim))
    if kind == "rational":
        comps = doc.get("components")
        if not comps:
            raise InputError("rational curve needs 'components'")
        nums = [[parse_complex(c) for c in comp["num"]] for comp in comps]
        dens = [[parse_complex(c) for c in comp.get("den", [1])] for comp in comps]
        return RationalCurve(nums, dens)
    if kind == "builtin":
        curve = AnalyticCurve(doc.get("name", ""))
        if "rho" in doc and float(doc["rho"]) != curve.order:
            raise InputError(f"builtin {curve.name!r} has order {curve.order}, file declares {doc['rho']}")
        return curve
    raise InputError(f"unknown curve kind {kind!r}")


def load_curve(source, dim=None):
    return curve_from_dict(_load(source), dim)
