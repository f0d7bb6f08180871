"""JSON schemas (draft 2020-12) for every document the command line emits or reads."""
from __future__ import annotations

QOMEGA_STRING = {"type": "string", "minLength": 1}

POLY = {
    "type": "object",
    "required": ["vars", "terms"],
    "properties": {
        "vars": {"type": "array", "items": {"type": "string"}},
        "terms": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["coef", "exp"],
                "properties": {
                    "coef": QOMEGA_STRING,
                    "exp": {"type": "array", "items": {"type": "integer", "minimum": 0}},
                },
                "additionalProperties": False,
            },
        },
    },
    "additionalProperties": False,
}

PARAM_CURVE = {
    "type": "object",
    "required": ["kind", "label", "polys"],
    "properties": {
        "kind": {"const": "param"},
        "label": {"type": "string"},
        "polys": {"type": "array", "items": POLY, "minItems": 3, "maxItems": 3},
    },
}

IMPLICIT_CURVE = {
    "type": "object",
    "required": ["kind", "label", "poly"],
    "properties": {
        "kind": {"const": "implicit"},
        "label": {"type": "string"},
        "poly": POLY,
    },
}

CURVE = {"oneOf": [PARAM_CURVE, IMPLICIT_CURVE]}

STATE = {
    "type": "object",
    "required": ["order", "L0", "a", "S"],
    "properties": {
        "order": {"type": "integer", "minimum": 0},
        "L0": {"type": "array", "items": QOMEGA_STRING, "minItems": 3, "maxItems": 3},
        "form": {"enum": ["fnu", "printed"]},
        "a": {"type": "array", "items": {"type": "array", "items": QOMEGA_STRING, "minItems": 18, "maxItems": 18}},
        "S": {
            "type": "object",
            "patternProperties": {"^[1-9],[1-3]$": {"type": "array", "items": QOMEGA_STRING}},
            "additionalProperties": False,
        },
        "order_check": {"type": "object"},
    },
}

BALL = {
    "type": "object",
    "required": ["re", "im", "radius"],
    "properties": {"re": {"type": "string"}, "im": {"type": "string"}, "radius": {"type": "string"}},
}

POINT = {
    "type": "object",
    "required": ["exact", "coords"],
    "properties": {
        "exact": {"type": "boolean"},
        "coords": {"type": "array", "minItems": 3, "maxItems": 3},
    },
}

CENSUS = {
    "type": "object",
    "required": ["kind", "degrees", "precision_bits", "complete", "totals", "entries"],
    "properties": {
        "kind": {"enum": ["self", "pair", "full"]},
        "degrees": {"type": "array", "items": {"type": "integer"}},
        "precision_bits": {"type": "integer", "minimum": 64},
        "complete": {"type": "boolean"},
        "totals": {
            "type": "object",
            "required": ["points", "multiplicities", "all_ordinary"],
            "properties": {
                "points": {"type": "integer", "minimum": 0},
                "multiplicities": {"type": "object", "additionalProperties": {"type": "integer"}},
                "all_ordinary": {"type": "boolean"},
            },
        },
        "entries": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["point", "multiplicity", "ordinary", "parameters", "certification"],
                "properties": {
                    "point": POINT,
                    "multiplicity": {"type": "integer", "minimum": 1},
                    "ordinary": {"type": "boolean"},
                    "parameters": {"type": "array"},
                    "certification": {"enum": ["exact", "certified-numeric"]},
                },
            },
        },
        "clusters": {"type": "object"},
    },
}

CHECK = {
    "type": "object",
    "required": ["name", "ok"],
    "properties": {
        "name": {"type": "string"},
        "ok": {"type": "boolean"},
        "detail": {},
        "gating": {"type": "boolean"},
    },
}

REPORT = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "required": ["command", "status", "exit_code"],
    "properties": {
        "command": {"type": "string"},
        "status": {"enum": ["verified", "falsified", "refused", "error"]},
        "exit_code": {"enum": [0, 1, 2, 3]},
        "message": {"type": "string"},
        "checks": {"type": "array", "items": CHECK},
        "data": {},
    },
    "allOf": [
        {"if": {"properties": {"status": {"const": "verified"}}}, "then": {"properties": {"exit_code": {"const": 0}}}},
        {"if": {"properties": {"status": {"const": "falsified"}}}, "then": {"properties": {"exit_code": {"const": 1}}}},
        {"if": {"properties": {"status": {"const": "refused"}}}, "then": {"properties": {"exit_code": {"const": 2}}}},
        {"if": {"properties": {"status": {"const": "error"}}}, "then": {"properties": {"exit_code": {"const": 3}}}},
    ],
}

GALLERY_ENTRY = {
    "type": "object",
    "required": ["id", "provenance", "expected", "params", "implicit"],
    "properties": {
        "id": {"type": "string"},
        "provenance": {"type": "string"},
        "expected": {"type": "object"},
        "params": {"type": "array", "items": PARAM_CURVE},
        "implicit": {"type": "array", "items": IMPLICIT_CURVE},
        "data": {"type": "object"},
    },
}

ALL = {
    "report": REPORT,
    "curve": CURVE,
    "state": STATE,
    "census": CENSUS,
    "gallery_entry": GALLERY_ENTRY,
    "poly": POLY,
}
