"""Partial config edits: merge a patch into a config, validate as a whole."""

from __future__ import annotations

from dataclasses import replace

from .errors import InvalidConfig
from .types import EfficiencyConfig, GradeScale, MetricDefinition, MetricDirection


def merge_config_patch(current: EfficiencyConfig, patch: dict) -> EfficiencyConfig:
    """Apply a partial edit (weights, references, boundaries, scale, metric
    add/remove, direction, carbon intensity) onto the current config.

    The merged result is returned unvalidated; callers run the full config
    validation before persisting, so a patch can never sneak an invariant
    violation past the whole-config check.
    """
    if not isinstance(patch, dict):
        raise InvalidConfig(["patch body must be an object"])

    scale = GradeScale.from_dict(patch["scale"]) if "scale" in patch else current.scale
    carbon = patch.get("carbon_intensity", current.carbon_intensity)

    metrics = {m.id: m for m in current.metrics}
    for metric_id in patch.get("remove_metrics", []):
        metrics.pop(metric_id, None)
    for entry in patch.get("add_metrics", []):
        try:
            metric = MetricDefinition.from_dict(entry)
        except (KeyError, TypeError, ValueError) as exc:
            raise InvalidConfig([f"added metric malformed: {exc}"]) from exc
        metrics[metric.id] = metric

    def patched(metric: MetricDefinition) -> MetricDefinition:
        changes: dict = {}
        if metric.id in patch.get("weights", {}):
            changes["weight"] = float(patch["weights"][metric.id])
        if metric.id in patch.get("references", {}):
            changes["reference"] = float(patch["references"][metric.id])
        boundaries = patch.get("boundaries")
        if isinstance(boundaries, list):
            changes["boundaries"] = tuple(float(b) for b in boundaries)
        elif isinstance(boundaries, dict) and metric.id in boundaries:
            changes["boundaries"] = tuple(float(b) for b in boundaries[metric.id])
        if metric.id in patch.get("directions", {}):
            changes["direction"] = MetricDirection(patch["directions"][metric.id])
        return replace(metric, **changes) if changes else metric

    return replace(
        current,
        scale=scale,
        carbon_intensity=carbon,
        metrics=tuple(patched(m) for m in metrics.values()),
    )
