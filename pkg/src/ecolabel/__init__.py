"""Energy-efficiency labels for ML models: compute, store, serve, customize."""

from .engine import (
    aggregate_label,
    calibrate_references,
    compute_index,
    compute_label,
    derive_metrics,
    grade_index,
    validate_config,
)
from .defaults import default_config, default_metrics, default_recommendations
from .types import (
    DerivationRule,
    EfficiencyConfig,
    EnergyLabel,
    GradeScale,
    MetricDefinition,
    MetricDirection,
    Phase,
    PhaseReport,
    Provenance,
    RatedMetric,
    Recommendation,
    RecommendationRule,
)

__version__ = "0.1.0"

__all__ = [
    "aggregate_label",
    "calibrate_references",
    "compute_index",
    "compute_label",
    "derive_metrics",
    "grade_index",
    "validate_config",
    "default_config",
    "default_metrics",
    "default_recommendations",
    "DerivationRule",
    "EfficiencyConfig",
    "EnergyLabel",
    "GradeScale",
    "MetricDefinition",
    "MetricDirection",
    "Phase",
    "PhaseReport",
    "Provenance",
    "RatedMetric",
    "Recommendation",
    "RecommendationRule",
    "__version__",
]
