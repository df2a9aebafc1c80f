"""Label computation engine.

Pure, deterministic pipeline from a raw measurement report to an energy
label: metric derivation, index normalization against reference values,
boundary grading and weighted aggregation. Every function here is stateless
and safe to call concurrently.

The index convention: 1.0 means "equal to the reference" and larger is
always better, regardless of metric direction. Indices are clamped to
``(INDEX_FLOOR, INDEX_CAP]`` so grading stays total; a zero value on a
lower-is-better metric earns the cap (zero consumption is a perfect score).
"""

from __future__ import annotations

import math
import statistics
from dataclasses import replace

from .errors import (
    EmptyPopulation,
    NoRatableMetrics,
    NonFiniteInput,
    PhaseMismatch,
)
from .types import (
    EfficiencyConfig,
    EnergyLabel,
    GradeScale,
    MetricDefinition,
    MetricDirection,
    PhaseReport,
    RatedMetric,
    Recommendation,
    RecommendationRule,
    new_id,
    utcnow_iso,
)

INDEX_CAP = 1e6
INDEX_FLOOR = 1e-6

# Per-metric derivation issue code (metric is then reported as missing).
DIVISION_BY_ZERO = "derivation_division_by_zero"


def validate_config(config: EfficiencyConfig) -> list[str]:
    """Check every config invariant; returns the list of violations (empty = ok).

    Violations are data, not failures: callers that need a hard stop wrap
    the result in :class:`~ecolabel.errors.InvalidConfig`.
    """
    violations: list[str] = []

    grades = config.scale.grades
    if len(grades) < 2:
        violations.append("scale must have at least 2 grades")
    if len(set(grades)) != len(grades):
        violations.append("grade identifiers must be unique")
    if any(not g for g in grades):
        violations.append("grade identifiers must be non-empty")

    if not isinstance(config.version, int) or config.version < 1:
        violations.append("version must be a positive integer")
    if not (config.carbon_intensity > 0 and math.isfinite(config.carbon_intensity)):
        violations.append("carbon_intensity must be a positive finite real")

    seen_ids: set[str] = set()
    for m in config.metrics:
        if m.id in seen_ids:
            violations.append(f"duplicate metric id {m.id!r}")
        seen_ids.add(m.id)
        violations.extend(_validate_metric(m, len(grades)))
        if config.phase not in m.phases:
            violations.append(f"metric {m.id!r} does not apply to phase {config.phase.value!r}")

    if not config.metrics:
        violations.append("config must define at least one metric")
    elif not any(m.weight > 0 for m in config.metrics):
        violations.append("at least one metric must have weight > 0")

    return violations


def _validate_metric(m: MetricDefinition, scale_len: int) -> list[str]:
    violations: list[str] = []
    if not m.id:
        violations.append("metric id must be non-empty")
    if not (m.weight >= 0 and math.isfinite(m.weight)):
        violations.append(f"metric {m.id!r}: weight must be >= 0 and finite")
    if not (m.reference > 0 and math.isfinite(m.reference)):
        violations.append(f"metric {m.id!r}: reference must be > 0 and finite")
    if not m.phases:
        violations.append(f"metric {m.id!r}: phases must be non-empty")

    b = m.boundaries
    if len(b) != scale_len - 1:
        violations.append(
            f"metric {m.id!r}: expected {scale_len - 1} boundaries for a "
            f"{scale_len}-grade scale, got {len(b)}"
        )
    if any(not (x > 0 and math.isfinite(x)) for x in b):
        violations.append(f"metric {m.id!r}: boundaries must be positive finite reals")
    if any(b[i] <= b[i + 1] for i in range(len(b) - 1)):
        violations.append(f"metric {m.id!r}: boundaries not strictly decreasing")

    d = m.derivation
    if d.kind == "ratio":
        if not d.numerator or not d.denominator:
            violations.append(f"metric {m.id!r}: ratio derivation needs numerator and denominator")
        elif d.numerator == d.denominator:
            violations.append(f"metric {m.id!r}: ratio fields must be distinct")
    elif d.kind == "harmonic_mean" and not d.sources:
        violations.append(f"metric {m.id!r}: harmonic_mean needs at least one source field")

    return violations


def derive_metrics(
    report: PhaseReport, config: EfficiencyConfig
) -> tuple[dict[str, float], dict[str, str]]:
    """Enrich the raw-value map with the config's derived metrics.

    Returns ``(values, issues)``. ``values`` carries every raw field plus
    each derivable metric; ``issues`` maps metric id to an issue code for
    ratios whose denominator was exactly zero (those metrics count as
    missing). A value supplied directly under a derived metric's own id is
    honored when the derivation inputs are absent, so pre-computed ratios
    and scores can be reported as-is.
    """
    raw = report.raw_values
    values = dict(raw)
    issues: dict[str, str] = {}

    for m in config.metrics:
        rule = m.derivation
        if rule.kind == "ratio":
            num = raw.get(rule.numerator)
            den = raw.get(rule.denominator)
            if num is None or den is None:
                continue
            if den == 0:
                issues[m.id] = DIVISION_BY_ZERO
                values.pop(m.id, None)
                continue
            values[m.id] = num / den
        elif rule.kind == "harmonic_mean":
            present = [raw[s] for s in rule.sources if s in raw]
            if not present:
                continue
            if any(x == 0 for x in present):
                values[m.id] = 0.0
            else:
                values[m.id] = len(present) / sum(1.0 / x for x in present)

    return values, issues


def compute_index(value: float, reference: float, direction: MetricDirection) -> float:
    """Normalize a metric value against its reference.

    higher_better -> value / reference; lower_better -> reference / value.
    Either way, > 1 means better than the reference. A lower_better zero
    returns the cap (perfect score); results clamp to (0, 1e6].
    """
    if not (math.isfinite(value) and math.isfinite(reference)):
        raise NonFiniteInput(f"non-finite index input: value={value}, reference={reference}")
    if reference <= 0:
        raise ValueError("reference must be > 0")
    if value < 0:
        raise ValueError("value must be >= 0")

    if direction == MetricDirection.HIGHER_BETTER:
        index = value / reference
    elif value == 0:
        index = INDEX_CAP
    else:
        index = reference / value

    return min(max(index, INDEX_FLOOR), INDEX_CAP)


def grade_index(
    index: float, boundaries: tuple[float, ...], scale: GradeScale
) -> tuple[str, int]:
    """Map an index onto the scale via decreasing thresholds.

    A boundary value is inclusive toward the better grade: an index exactly
    at a threshold earns the higher grade.
    """
    for position, threshold in enumerate(boundaries):
        if index >= threshold:
            return scale.grades[position], position
    position = len(boundaries)
    return scale.grades[position], position


def _round_half_to_worse(score: float) -> int:
    """Round a score to a grade position; exact halves go to the worse grade."""
    floor = math.floor(score)
    fraction = score - floor
    if fraction > 0.5:
        return floor + 1
    if fraction < 0.5:
        return floor
    return floor + 1


def aggregate_label(
    rated: list[RatedMetric] | tuple[RatedMetric, ...], scale: GradeScale
) -> tuple[float, str]:
    """Weighted mean of grade positions over the non-missing metrics.

    Missing metrics contribute nothing, which is exactly weight
    renormalization over the metrics that are present.
    """
    weight_total = 0.0
    weighted_positions = 0.0
    for r in rated:
        if r.missing:
            continue
        weight_total += r.weight_used
        weighted_positions += r.weight_used * r.grade_position

    if weight_total == 0:
        raise NoRatableMetrics("every metric is missing or has zero weight")

    score = weighted_positions / weight_total
    position = min(_round_half_to_worse(score), len(scale) - 1)
    return score, scale.grades[position]


def compute_label(
    report: PhaseReport,
    config: EfficiencyConfig,
    catalog: list[RecommendationRule] | tuple[RecommendationRule, ...] = (),
) -> EnergyLabel:
    """Compose the full pipeline into an energy label.

    Metrics absent from the (derived) report appear as missing rated
    metrics, the question-mark rows of the rendered label. Identical inputs
    yield identical labels apart from the generated id and timestamp.
    """
    if report.phase != config.phase:
        raise PhaseMismatch(
            f"report phase {report.phase.value!r} does not match "
            f"config phase {config.phase.value!r}"
        )

    values, _issues = derive_metrics(report, config)

    rated: list[RatedMetric] = []
    for m in config.metrics:
        value = values.get(m.id)
        if value is None:
            rated.append(RatedMetric.absent(m.id))
            continue
        index = compute_index(value, m.reference, m.direction)
        grade, position = grade_index(index, m.boundaries, config.scale)
        rated.append(
            RatedMetric(
                metric_id=m.id,
                value=value,
                index=index,
                grade=grade,
                grade_position=position,
                weight_used=m.weight,
                missing=False,
            )
        )

    overall_score, overall_grade = aggregate_label(rated, config.scale)

    positions = {r.metric_id: r.grade_position for r in rated if not r.missing}
    recommendations = tuple(
        Recommendation(rule.metric_id, rule.text)
        for rule in catalog
        if rule.metric_id in positions and positions[rule.metric_id] >= rule.trigger_position
    )

    return EnergyLabel(
        label_id=new_id(),
        model_id=report.model_id,
        phase=report.phase,
        config_version=config.version,
        rated_metrics=tuple(rated),
        overall_score=overall_score,
        overall_grade=overall_grade,
        recommendations=recommendations,
        created_at=utcnow_iso(),
    )


def calibrate_references(
    population: list[PhaseReport], config: EfficiencyConfig
) -> EfficiencyConfig:
    """Recalibrate each metric's reference to the population median.

    Only present, strictly positive derived values participate; a metric
    seen in no report keeps its reference. Returns a new config version and
    never mutates the input.
    """
    if not population:
        raise EmptyPopulation("calibration needs at least one report")

    derived = [derive_metrics(report, config)[0] for report in population]

    new_metrics = []
    for m in config.metrics:
        observed = [v[m.id] for v in derived if v.get(m.id, 0) > 0]
        if observed:
            new_metrics.append(replace(m, reference=statistics.median(observed)))
        else:
            new_metrics.append(m)

    return replace(
        config,
        version=config.version + 1,
        metrics=tuple(new_metrics),
        created_at=utcnow_iso(),
    )
