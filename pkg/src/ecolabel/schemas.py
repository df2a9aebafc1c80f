"""Published JSON Schemas for the wire documents (served at /api/v1/schema).

CLI ``--json`` output and API responses validate against these; the
browser client renders labels schema-driven, so scale sizes other than
five need no frontend change.
"""

from __future__ import annotations

PHASES = ["training", "inference"]

GRADE_SCALE_SCHEMA = {
    "type": "object",
    "required": ["grades"],
    "properties": {
        "grades": {
            "type": "array",
            "items": {"type": "string", "minLength": 1},
            "minItems": 2,
        }
    },
}

DERIVATION_SCHEMA = {
    "type": "object",
    "required": ["kind"],
    "properties": {
        "kind": {"enum": ["none", "ratio", "harmonic_mean"]},
        "numerator": {"type": ["string", "null"]},
        "denominator": {"type": ["string", "null"]},
        "sources": {"type": "array", "items": {"type": "string"}},
    },
}

METRIC_DEFINITION_SCHEMA = {
    "type": "object",
    "required": ["id", "direction", "weight", "reference", "boundaries", "phases"],
    "properties": {
        "id": {"type": "string", "minLength": 1},
        "name": {"type": "string"},
        "description": {"type": "string"},
        "unit": {"type": "string"},
        "direction": {"enum": ["higher_better", "lower_better"]},
        "weight": {"type": "number", "minimum": 0},
        "reference": {"type": "number", "exclusiveMinimum": 0},
        "boundaries": {
            "type": "array",
            "items": {"type": "number", "exclusiveMinimum": 0},
            "minItems": 1,
        },
        "phases": {"type": "array", "items": {"enum": PHASES}, "minItems": 1},
        "derivation": DERIVATION_SCHEMA,
    },
}

EFFICIENCY_CONFIG_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "title": "EfficiencyConfig",
    "type": "object",
    "required": ["version", "phase", "scale", "metrics", "carbon_intensity"],
    "properties": {
        "version": {"type": "integer", "minimum": 1},
        "phase": {"enum": PHASES},
        "scale": GRADE_SCALE_SCHEMA,
        "metrics": {"type": "array", "items": METRIC_DEFINITION_SCHEMA, "minItems": 1},
        "carbon_intensity": {"type": "number", "exclusiveMinimum": 0},
        "created_at": {"type": "string"},
    },
}

RATED_METRIC_SCHEMA = {
    "type": "object",
    "required": ["metric_id", "weight_used", "missing"],
    "properties": {
        "metric_id": {"type": "string"},
        "value": {"type": ["number", "null"]},
        "index": {"type": ["number", "null"]},
        "grade": {"type": ["string", "null"]},
        "grade_position": {"type": ["integer", "null"], "minimum": 0},
        "weight_used": {"type": "number", "minimum": 0},
        "missing": {"type": "boolean"},
    },
}

ENERGY_LABEL_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "title": "EnergyLabel",
    "type": "object",
    "required": [
        "label_id",
        "model_id",
        "phase",
        "config_version",
        "rated_metrics",
        "overall_score",
        "overall_grade",
        "recommendations",
    ],
    "properties": {
        "label_id": {"type": "string"},
        "model_id": {"type": "string"},
        "phase": {"enum": PHASES},
        "config_version": {"type": "integer", "minimum": 1},
        "rated_metrics": {"type": "array", "items": RATED_METRIC_SCHEMA},
        "overall_score": {"type": "number", "minimum": 0},
        "overall_grade": {"type": "string", "minLength": 1},
        "recommendations": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["metric_id", "text"],
                "properties": {
                    "metric_id": {"type": "string"},
                    "text": {"type": "string"},
                },
            },
        },
        "created_at": {"type": "string"},
    },
}

SYNC_RUN_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "title": "SyncRun",
    "type": "object",
    "required": ["run_id", "provider_id", "created", "updated", "unchanged", "failed"],
    "properties": {
        "run_id": {"type": "string"},
        "provider_id": {"type": "string"},
        "started_at": {"type": "string"},
        "finished_at": {"type": "string"},
        "created": {"type": "integer", "minimum": 0},
        "updated": {"type": "integer", "minimum": 0},
        "unchanged": {"type": "integer", "minimum": 0},
        "failed": {
            "type": "array",
            "items": {
                "type": "array",
                "prefixItems": [{"type": "string"}, {"type": "string"}],
            },
        },
    },
}

ALL_SCHEMAS = {
    "energy_label": ENERGY_LABEL_SCHEMA,
    "efficiency_config": EFFICIENCY_CONFIG_SCHEMA,
    "sync_run": SYNC_RUN_SCHEMA,
}
