"""JSON documents: schemas, parsing and serialisation."""
from __future__ import annotations

import json
from pathlib import Path
from typing import Any

import jsonschema

from . import fixtures
from .actions import FiniteAction
from .laurent import BmForm
from .nambu import NambuComponent, NambuData
from .surface import CoveredSurface, Curve, Face, SurfaceMap, SurfacePresentation

FIXTURE_PREFIX = "fixture:"


class InputError(ValueError):
    """A document does not parse or does not match its schema."""


_ID = {"type": "string", "minLength": 1}
_SIGN = {"enum": [1, -1]}
_SIGN_MAP = {"type": "object", "additionalProperties": _SIGN}
_ID_MAP = {"type": "object", "additionalProperties": _ID}

PRESENTATION_SCHEMA: dict[str, Any] = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "title": "surface presentation",
    "type": "object",
    "required": ["faces", "curves", "euler_char"],
    "additionalProperties": False,
    "properties": {
        "faces": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["id", "euler_char"],
                "additionalProperties": False,
                "properties": {
                    "id": _ID,
                    "euler_char": {"type": "integer"},
                    "boundary": {"type": "array", "items": _ID},
                },
            },
        },
        "curves": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["id", "sided", "attachments"],
                "additionalProperties": False,
                "properties": {
                    "id": _ID,
                    "sided": {"enum": ["two", "one"]},
                    "attachments": {
                        "type": "array",
                        "items": {"type": "array", "prefixItems": [_ID, _ID], "minItems": 2, "maxItems": 2},
                    },
                    "sign": _SIGN,
                },
            },
        },
        "euler_char": {"type": "integer"},
        "orientable": {"type": "boolean"},
    },
}

MAP_SCHEMA: dict[str, Any] = {
    "type": "object",
    "required": ["faces", "curves", "t", "u", "sigma"],
    "additionalProperties": False,
    "properties": {
        "name": {"type": "string"},
        "faces": _ID_MAP,
        "curves": _ID_MAP,
        "t": _SIGN_MAP,
        "u": _SIGN_MAP,
        "sigma": _SIGN_MAP,
    },
}

COVERED_SCHEMA: dict[str, Any] = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "title": "surface given by an orientable cover and its deck involution",
    "type": "object",
    "required": ["cover", "deck"],
    "additionalProperties": False,
    "properties": {"cover": PRESENTATION_SCHEMA, "deck": MAP_SCHEMA},
}

_SURFACE_REF = {"oneOf": [{"type": "string"}, PRESENTATION_SCHEMA]}

FORM_SCHEMA: dict[str, Any] = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "title": "b^m-form as Laurent periods and face volumes",
    "type": "object",
    "required": ["m", "periods", "volumes"],
    "additionalProperties": False,
    "properties": {
        "m": {"type": "integer", "minimum": 1},
        "periods": {"type": "object", "additionalProperties": {"type": "array", "items": {"type": "number"}}},
        "volumes": {"type": "object", "additionalProperties": {"type": "number"}},
        "surface": _SURFACE_REF,
    },
}

ACTION_SCHEMA: dict[str, Any] = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "title": "finite group action on a presentation",
    "type": "object",
    "required": ["elements"],
    "additionalProperties": False,
    "properties": {
        "elements": {"type": "array", "minItems": 1, "items": MAP_SCHEMA},
        "surface": _SURFACE_REF,
    },
}

NAMBU_SCHEMA: dict[str, Any] = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "title": "top-degree b^m-Nambu invariants",
    "type": "object",
    "required": ["n", "m", "orientable", "components"],
    "additionalProperties": False,
    "properties": {
        "n": {"type": "integer", "minimum": 2},
        "m": {"type": "integer", "minimum": 1},
        "orientable": {"type": "boolean"},
        "topology": {"type": "string"},
        "volume": {"type": ["number", "null"]},
        "components": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["id", "periods"],
                "additionalProperties": False,
                "properties": {
                    "id": _ID,
                    "label": {"type": "string"},
                    "periods": {"type": "array", "items": {"type": "number"}},
                },
            },
        },
    },
}

REPORT_SCHEMA: dict[str, Any] = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "title": "command report",
    "type": "object",
    "required": ["command", "status", "exit_code"],
    "properties": {
        "command": {"type": "string"},
        "status": {"enum": ["yes", "no", "ok", "invalid", "error"]},
        "exit_code": {"enum": [0, 1, 2]},
        "reason": {"type": "string"},
    },
}

SCHEMAS = {
    "presentation": PRESENTATION_SCHEMA,
    "covered_surface": COVERED_SCHEMA,
    "form": FORM_SCHEMA,
    "action": ACTION_SCHEMA,
    "nambu": NAMBU_SCHEMA,
    "report": REPORT_SCHEMA,
}


def check_schema(doc: Any, schema: dict, what: str) -> None:
    validator = jsonschema.Draft202012Validator(schema)
    errors = sorted(validator.iter_errors(doc), key=lambda e: list(e.absolute_path))
    if errors:
        err = errors[0]
        where = "/".join(str(x) for x in err.absolute_path) or "<root>"
        raise InputError(f"{what}: at {where}: {err.message}")


def read_json(path: str | Path) -> Any:
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except FileNotFoundError:
        raise InputError(f"no such file: {path}") from None
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: not valid JSON ({exc.msg} at line {exc.lineno})") from None


# -- presentations -----------------------------------------------------------


def presentation_from_dict(doc: dict) -> SurfacePresentation:
    check_schema(doc, PRESENTATION_SCHEMA, "presentation")
    faces = [Face(f["id"], f["euler_char"], f.get("boundary", [])) for f in doc["faces"]]
    curves = [
        Curve(c["id"], c["sided"], [tuple(a) for a in c["attachments"]], c.get("sign", 1)) for c in doc["curves"]
    ]
    return SurfacePresentation(faces, curves, doc["euler_char"], doc.get("orientable"))


def presentation_to_dict(p: SurfacePresentation) -> dict:
    doc = {
        "faces": [{"id": f.id, "euler_char": f.euler_char, "boundary": list(f.boundary_slots)} for f in p.faces],
        "curves": [
            {"id": c.id, "sided": c.sided.value, "attachments": [list(a) for a in c.attachments], "sign": c.gluing_sign}
            for c in p.curves
        ],
        "euler_char": p.euler_char,
    }
    if p.orientable is not None:
        doc["orientable"] = p.orientable
    return doc


def map_from_dict(doc: dict) -> SurfaceMap:
    check_schema(doc, MAP_SCHEMA, "map")
    return SurfaceMap(doc["faces"], doc["curves"], doc["t"], doc["u"], doc["sigma"], doc.get("name", ""))


def map_to_dict(g: SurfaceMap) -> dict:
    doc = {k: dict(sorted(getattr(g, k).items())) for k in ("faces", "curves", "t", "u", "sigma")}
    if g.name:
        doc["name"] = g.name
    return doc


def surface_from_dict(doc: dict) -> SurfacePresentation | CoveredSurface:
    if isinstance(doc, dict) and "cover" in doc:
        check_schema(doc, COVERED_SCHEMA, "covered surface")
        return CoveredSurface(presentation_from_dict(doc["cover"]), map_from_dict(doc["deck"]))
    return presentation_from_dict(doc)


def surface_to_dict(s: SurfacePresentation | CoveredSurface) -> dict:
    if isinstance(s, CoveredSurface):
        return {"cover": presentation_to_dict(s.cover), "deck": map_to_dict(s.deck)}
    return presentation_to_dict(s)


def load_surface(ref: str | dict, base: Path | None = None):
    """A surface from a path, an embedded document, or ``fixture:NAME``."""
    if isinstance(ref, dict):
        return surface_from_dict(ref)
    if ref.startswith(FIXTURE_PREFIX):
        try:
            return fixtures.get_surface(ref[len(FIXTURE_PREFIX):])
        except KeyError as exc:
            raise InputError(exc.args[0]) from None
    path = Path(ref)
    if base is not None and not path.is_absolute():
        path = base / path
    return surface_from_dict(read_json(path))


# -- forms -------------------------------------------------------------------


def form_from_dict(doc: dict) -> BmForm:
    check_schema(doc, FORM_SCHEMA, "form")
    try:
        return BmForm(doc["m"], doc["periods"], doc["volumes"])
    except ValueError as exc:
        raise InputError(f"form: {exc}") from None


def form_to_dict(omega: BmForm, surface: str | dict | None = None) -> dict:
    doc = {
        "m": omega.m,
        "periods": {c: list(a) for c, a in sorted(omega.periods.items())},
        "volumes": dict(sorted(omega.volumes.items())),
    }
    if surface is not None:
        doc["surface"] = surface
    return doc


def load_form(path: str, surface: str | None = None):
    """``(presentation, form)``; the surface comes from ``surface`` or the form's own ``surface`` key."""
    doc = read_json(path)
    omega = form_from_dict(doc)
    ref = surface if surface is not None else doc.get("surface")
    if ref is None:
        raise InputError(f"{path}: no surface given (add a 'surface' key or pass --surface)")
    base = None if surface is not None else Path(path).parent
    return load_surface(ref, base), omega


# -- actions -----------------------------------------------------------------


def action_from_dict(doc: dict) -> FiniteAction:
    check_schema(doc, ACTION_SCHEMA, "action")
    return FiniteAction([map_from_dict(e) for e in doc["elements"]])


def action_to_dict(G: FiniteAction, surface: str | dict | None = None) -> dict:
    doc = {"elements": [map_to_dict(g) for g in G]}
    if surface is not None:
        doc["surface"] = surface
    return doc


def load_action(ref: str):
    """``(presentation or None, action)``; ``fixture:NAME`` gives a built-in action with its surface."""
    if ref.startswith(FIXTURE_PREFIX):
        name = ref[len(FIXTURE_PREFIX):]
        if name not in fixtures.ACTIONS:
            raise InputError(f"unknown action fixture {name!r}; known: {', '.join(sorted(fixtures.ACTIONS))}")
        surf, gen = fixtures.ACTIONS[name]
        p = fixtures.get_surface(surf)
        return p, FiniteAction([SurfaceMap.identity(p), gen()])
    doc = read_json(ref)
    G = action_from_dict(doc)
    p = load_surface(doc["surface"], Path(ref).parent) if "surface" in doc else None
    return p, G


# -- Nambu data --------------------------------------------------------------


def nambu_from_dict(doc: dict) -> NambuData:
    check_schema(doc, NAMBU_SCHEMA, "nambu data")
    comps = [NambuComponent(c["id"], c["periods"], c.get("label", "")) for c in doc["components"]]
    return NambuData(doc["n"], doc["m"], comps, doc["orientable"], doc.get("volume"), doc.get("topology", ""))


def nambu_to_dict(d: NambuData) -> dict:
    return {
        "n": d.n,
        "m": d.m,
        "orientable": d.orientable,
        "topology": d.topology,
        "volume": d.regularized_volume,
        "components": [{"id": c.id, "label": c.label, "periods": list(c.periods)} for c in d.components],
    }


def dumps(doc: Any) -> str:
    return json.dumps(doc, sort_keys=True, indent=2)
