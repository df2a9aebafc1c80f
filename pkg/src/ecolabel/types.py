"""Domain types: grade scales, metric definitions, configs, reports, labels.

All values are immutable after construction; serialization is plain JSON
dicts so the same shapes travel through the REST API, the CLI ``--json``
output and the on-disk store.
"""

from __future__ import annotations

import uuid
from dataclasses import dataclass, field, replace
from datetime import datetime, timezone
from enum import Enum


def utcnow_iso() -> str:
    """Current UTC time as an ISO-8601 string (microsecond precision)."""
    return datetime.now(timezone.utc).isoformat()


def new_id() -> str:
    return uuid.uuid4().hex


class Phase(str, Enum):
    TRAINING = "training"
    INFERENCE = "inference"


class MetricDirection(str, Enum):
    HIGHER_BETTER = "higher_better"
    LOWER_BETTER = "lower_better"


class Provenance(str, Enum):
    FORM = "form"
    FILE = "file"
    PROBE = "probe"
    PROVIDER = "provider"


@dataclass(frozen=True)
class GradeScale:
    """Ordered grade identifiers, best first (default A..E)."""

    grades: tuple[str, ...] = ("A", "B", "C", "D", "E")

    def __len__(self) -> int:
        return len(self.grades)

    def position_of(self, grade: str) -> int:
        return self.grades.index(grade)

    def to_dict(self) -> dict:
        return {"grades": list(self.grades)}

    @classmethod
    def from_dict(cls, data: dict) -> "GradeScale":
        return cls(grades=tuple(data["grades"]))


@dataclass(frozen=True)
class DerivationRule:
    """How a metric value is derived from raw report fields.

    ``none`` metrics read their own field id directly; ``ratio`` divides
    two raw fields; ``harmonic_mean`` combines whichever source fields are
    present.
    """

    kind: str = "none"  # none | ratio | harmonic_mean
    numerator: str | None = None
    denominator: str | None = None
    sources: tuple[str, ...] = ()

    @classmethod
    def none(cls) -> "DerivationRule":
        return cls(kind="none")

    @classmethod
    def ratio(cls, numerator: str, denominator: str) -> "DerivationRule":
        return cls(kind="ratio", numerator=numerator, denominator=denominator)

    @classmethod
    def harmonic_mean(cls, sources: list[str] | tuple[str, ...]) -> "DerivationRule":
        return cls(kind="harmonic_mean", sources=tuple(sources))

    def input_fields(self) -> tuple[str, ...]:
        if self.kind == "ratio":
            return (self.numerator or "", self.denominator or "")
        if self.kind == "harmonic_mean":
            return self.sources
        return ()

    def to_dict(self) -> dict:
        if self.kind == "ratio":
            return {
                "kind": "ratio",
                "numerator": self.numerator,
                "denominator": self.denominator,
            }
        if self.kind == "harmonic_mean":
            return {"kind": "harmonic_mean", "sources": list(self.sources)}
        return {"kind": "none"}

    @classmethod
    def from_dict(cls, data: dict | None) -> "DerivationRule":
        if not data or data.get("kind", "none") == "none":
            return cls.none()
        if data["kind"] == "ratio":
            return cls.ratio(data["numerator"], data["denominator"])
        if data["kind"] == "harmonic_mean":
            return cls.harmonic_mean(data["sources"])
        raise ValueError(f"unknown derivation kind: {data['kind']!r}")


@dataclass(frozen=True)
class MetricDefinition:
    """One metric of the label: identity, direction, weighting and grading."""

    id: str
    name: str
    unit: str
    direction: MetricDirection
    weight: float
    reference: float
    boundaries: tuple[float, ...]
    phases: tuple[Phase, ...]
    description: str = ""
    derivation: DerivationRule = field(default_factory=DerivationRule.none)

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "name": self.name,
            "description": self.description,
            "unit": self.unit,
            "direction": self.direction.value,
            "weight": self.weight,
            "reference": self.reference,
            "boundaries": list(self.boundaries),
            "phases": [p.value for p in self.phases],
            "derivation": self.derivation.to_dict(),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "MetricDefinition":
        return cls(
            id=data["id"],
            name=data.get("name", data["id"]),
            description=data.get("description", ""),
            unit=data.get("unit", ""),
            direction=MetricDirection(data["direction"]),
            weight=float(data["weight"]),
            reference=float(data["reference"]),
            boundaries=tuple(float(b) for b in data["boundaries"]),
            phases=tuple(Phase(p) for p in data["phases"]),
            derivation=DerivationRule.from_dict(data.get("derivation")),
        )


@dataclass(frozen=True)
class EfficiencyConfig:
    """A versioned label definition for one phase."""

    version: int
    phase: Phase
    scale: GradeScale
    metrics: tuple[MetricDefinition, ...]
    carbon_intensity: float = 0.475  # kg CO2e per kWh
    created_at: str = field(default_factory=utcnow_iso)

    def metric(self, metric_id: str) -> MetricDefinition:
        for m in self.metrics:
            if m.id == metric_id:
                return m
        raise KeyError(metric_id)

    def known_field_ids(self) -> set[str]:
        """Metric ids plus every raw field a derivation reads."""
        fields: set[str] = set()
        for m in self.metrics:
            fields.add(m.id)
            fields.update(m.derivation.input_fields())
        fields.discard("")
        return fields

    def with_version(self, version: int) -> "EfficiencyConfig":
        return replace(self, version=version, created_at=utcnow_iso())

    def to_dict(self) -> dict:
        return {
            "version": self.version,
            "phase": self.phase.value,
            "scale": self.scale.to_dict(),
            "metrics": [m.to_dict() for m in self.metrics],
            "carbon_intensity": self.carbon_intensity,
            "created_at": self.created_at,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "EfficiencyConfig":
        return cls(
            version=int(data["version"]),
            phase=Phase(data["phase"]),
            scale=GradeScale.from_dict(data["scale"]),
            metrics=tuple(MetricDefinition.from_dict(m) for m in data["metrics"]),
            carbon_intensity=float(data.get("carbon_intensity", 0.475)),
            created_at=data.get("created_at", utcnow_iso()),
        )


@dataclass(frozen=True)
class PhaseReport:
    """Raw measured values for one model in one phase."""

    model_id: str
    phase: Phase
    raw_values: dict[str, float]
    provenance: Provenance
    collected_at: str = field(default_factory=utcnow_iso)

    def to_dict(self) -> dict:
        return {
            "model_id": self.model_id,
            "phase": self.phase.value,
            "raw_values": dict(self.raw_values),
            "provenance": self.provenance.value,
            "collected_at": self.collected_at,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "PhaseReport":
        return cls(
            model_id=data["model_id"],
            phase=Phase(data["phase"]),
            raw_values={k: float(v) for k, v in data["raw_values"].items()},
            provenance=Provenance(data.get("provenance", "form")),
            collected_at=data.get("collected_at", utcnow_iso()),
        )


@dataclass(frozen=True)
class RatedMetric:
    """Per-metric outcome inside a label; ``missing`` marks question-mark rows."""

    metric_id: str
    value: float | None
    index: float | None
    grade: str | None
    grade_position: int | None
    weight_used: float
    missing: bool

    @classmethod
    def absent(cls, metric_id: str) -> "RatedMetric":
        return cls(metric_id, None, None, None, None, 0.0, True)

    def to_dict(self) -> dict:
        return {
            "metric_id": self.metric_id,
            "value": self.value,
            "index": self.index,
            "grade": self.grade,
            "grade_position": self.grade_position,
            "weight_used": self.weight_used,
            "missing": self.missing,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "RatedMetric":
        return cls(
            metric_id=data["metric_id"],
            value=data.get("value"),
            index=data.get("index"),
            grade=data.get("grade"),
            grade_position=data.get("grade_position"),
            weight_used=float(data.get("weight_used", 0.0)),
            missing=bool(data["missing"]),
        )


@dataclass(frozen=True)
class Recommendation:
    metric_id: str
    text: str

    def to_dict(self) -> dict:
        return {"metric_id": self.metric_id, "text": self.text}


@dataclass(frozen=True)
class RecommendationRule:
    """Catalog entry: recommend ``text`` when the metric grades at or past the trigger."""

    metric_id: str
    trigger_position: int
    text: str

    def to_dict(self) -> dict:
        return {
            "metric_id": self.metric_id,
            "trigger_position": self.trigger_position,
            "text": self.text,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "RecommendationRule":
        return cls(
            metric_id=data["metric_id"],
            trigger_position=int(data["trigger_position"]),
            text=data["text"],
        )


@dataclass(frozen=True)
class EnergyLabel:
    """The computed efficiency label of one model in one phase."""

    label_id: str
    model_id: str
    phase: Phase
    config_version: int
    rated_metrics: tuple[RatedMetric, ...]
    overall_score: float
    overall_grade: str
    recommendations: tuple[Recommendation, ...]
    created_at: str = field(default_factory=utcnow_iso)

    def to_dict(self) -> dict:
        return {
            "label_id": self.label_id,
            "model_id": self.model_id,
            "phase": self.phase.value,
            "config_version": self.config_version,
            "rated_metrics": [r.to_dict() for r in self.rated_metrics],
            "overall_score": self.overall_score,
            "overall_grade": self.overall_grade,
            "recommendations": [r.to_dict() for r in self.recommendations],
            "created_at": self.created_at,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "EnergyLabel":
        return cls(
            label_id=data["label_id"],
            model_id=data["model_id"],
            phase=Phase(data["phase"]),
            config_version=int(data["config_version"]),
            rated_metrics=tuple(RatedMetric.from_dict(r) for r in data["rated_metrics"]),
            overall_score=float(data["overall_score"]),
            overall_grade=data["overall_grade"],
            recommendations=tuple(
                Recommendation(r["metric_id"], r["text"])
                for r in data.get("recommendations", [])
            ),
            created_at=data.get("created_at", utcnow_iso()),
        )
