"""Default label definitions: metric catalog, boundaries, recommendations.

Everything here is a starting point, not a standard: each value is
overridable through config versions (PUT/PATCH on the API, ``config set``
on the CLI) or recalibratable from a population of reports.
"""

from __future__ import annotations

import json
from importlib import resources

from .types import (
    DerivationRule,
    EfficiencyConfig,
    GradeScale,
    MetricDefinition,
    MetricDirection,
    Phase,
    RecommendationRule,
)

# Index thresholds that place a reference-equal model mid-scale ("C" on A-E)
# and demand 2x better than reference for the top grade.
DEFAULT_BOUNDARIES: tuple[float, ...] = (2.0, 1.25, 0.8, 0.5)

DEFAULT_CARBON_INTENSITY = 0.475  # kg CO2e per kWh, grid average

BOTH = (Phase.TRAINING, Phase.INFERENCE)

_CATALOG: tuple[MetricDefinition, ...] = (
    MetricDefinition(
        id="energy_consumption_kwh",
        name="Energy consumption",
        description="Energy consumed while training the model.",
        unit="kWh",
        direction=MetricDirection.LOWER_BETTER,
        weight=1.0,
        reference=50.0,
        boundaries=DEFAULT_BOUNDARIES,
        phases=(Phase.TRAINING,),
    ),
    MetricDefinition(
        id="downloads",
        name="Downloads",
        description="Reuse counter; a heavily reused model amortizes its training cost.",
        unit="count",
        direction=MetricDirection.HIGHER_BETTER,
        weight=1.0,
        reference=10_000.0,
        boundaries=DEFAULT_BOUNDARIES,
        phases=(Phase.TRAINING,),
    ),
    MetricDefinition(
        id="size_efficiency",
        name="Size efficiency",
        description="Model size obtained per kg of CO2e emitted.",
        unit="MB/kg",
        direction=MetricDirection.HIGHER_BETTER,
        weight=1.0,
        reference=100.0,
        boundaries=DEFAULT_BOUNDARIES,
        phases=BOTH,
        derivation=DerivationRule.ratio("model_size_mb", "co2e_kg"),
    ),
    MetricDefinition(
        id="dataset_efficiency",
        name="Dataset efficiency",
        description="Dataset size processed per kg of CO2e emitted.",
        unit="MB/kg",
        direction=MetricDirection.HIGHER_BETTER,
        weight=1.0,
        reference=1000.0,
        boundaries=DEFAULT_BOUNDARIES,
        phases=BOTH,
        derivation=DerivationRule.ratio("dataset_size_mb", "co2e_kg"),
    ),
    MetricDefinition(
        id="performance_score",
        name="Performance score",
        description="Harmonic mean of the reported quality metrics.",
        unit="score",
        direction=MetricDirection.HIGHER_BETTER,
        weight=1.0,
        reference=0.75,
        boundaries=DEFAULT_BOUNDARIES,
        phases=BOTH,
        derivation=DerivationRule.harmonic_mean(("accuracy", "f1", "rouge")),
    ),
    MetricDefinition(
        id="co2e_kg",
        name="CO2e emissions",
        description="Carbon footprint of the phase.",
        unit="kg",
        direction=MetricDirection.LOWER_BETTER,
        weight=1.0,
        reference=10.0,
        boundaries=DEFAULT_BOUNDARIES,
        phases=BOTH,
    ),
    MetricDefinition(
        id="file_size_mb",
        name="File size",
        description="Size of the deployed model file.",
        unit="MB",
        direction=MetricDirection.LOWER_BETTER,
        weight=1.0,
        reference=500.0,
        boundaries=DEFAULT_BOUNDARIES,
        phases=(Phase.INFERENCE,),
    ),
    MetricDefinition(
        id="power_draw_w",
        name="Power draw",
        description="Electrical power attributed to the serving hardware.",
        unit="W",
        direction=MetricDirection.LOWER_BETTER,
        weight=1.0,
        reference=150.0,
        boundaries=DEFAULT_BOUNDARIES,
        phases=(Phase.INFERENCE,),
    ),
    MetricDefinition(
        id="running_time_s",
        name="Running time",
        description="Wall-clock duration of the measured inference batch.",
        unit="s",
        direction=MetricDirection.LOWER_BETTER,
        weight=1.0,
        reference=1.0,
        boundaries=DEFAULT_BOUNDARIES,
        phases=(Phase.INFERENCE,),
    ),
    # Direction is configurable: as a throughput figure it would read
    # higher-is-better, as a compute-cost proxy lower-is-better.
    MetricDefinition(
        id="flops",
        name="FLOPS",
        description="Floating-point operations attributed to inference.",
        unit="FLOPS",
        direction=MetricDirection.LOWER_BETTER,
        weight=1.0,
        reference=1e9,
        boundaries=DEFAULT_BOUNDARIES,
        phases=(Phase.INFERENCE,),
    ),
)


def default_metrics(phase: Phase) -> tuple[MetricDefinition, ...]:
    return tuple(m for m in _CATALOG if phase in m.phases)


def default_config(phase: Phase, version: int = 1) -> EfficiencyConfig:
    """The out-of-the-box label definition for a phase."""
    return EfficiencyConfig(
        version=version,
        phase=phase,
        scale=GradeScale(),
        metrics=default_metrics(phase),
        carbon_intensity=DEFAULT_CARBON_INTENSITY,
    )


def default_recommendations() -> list[RecommendationRule]:
    """Load the shipped recommendation catalog (editable JSON, one rule per entry)."""
    raw = resources.files("ecolabel.data").joinpath("recommendations.json").read_text("utf-8")
    return [RecommendationRule.from_dict(entry) for entry in json.loads(raw)]


def load_recommendations(path: str) -> list[RecommendationRule]:
    """Load a user-supplied recommendation catalog from a JSON file."""
    with open(path, encoding="utf-8") as fh:
        return [RecommendationRule.from_dict(entry) for entry in json.load(fh)]
