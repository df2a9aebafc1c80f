"""The label definition is data, not code: reweight, rescale, recut.

Three what-if variations on the same measurement report:
  1. the stock definition,
  2. emissions weighted 3x,
  3. a 7-grade scale with tighter cuts.
"""

from dataclasses import replace

from ecolabel import (
    GradeScale,
    Phase,
    PhaseReport,
    Provenance,
    compute_label,
    default_config,
    validate_config,
)

report = PhaseReport(
    model_id="local:what-if",
    phase=Phase.TRAINING,
    raw_values={"co2e_kg": 35.0, "downloads": 125_000, "energy_consumption_kwh": 60.0},
    provenance=Provenance.FORM,
)

stock = default_config(Phase.TRAINING)
print("stock definition:     ", compute_label(report, stock).overall_grade)

# Variation 1: the QA manager decides emissions dominate the story.
heavy_co2 = replace(
    stock,
    metrics=tuple(
        replace(m, weight=3.0) if m.id == "co2e_kg" else m for m in stock.metrics
    ),
)
assert validate_config(heavy_co2) == []
print("co2e weighted 3x:     ", compute_label(report, heavy_co2).overall_grade)

# Variation 2: a finer 7-grade scale needs 6 boundaries per metric.
seven_cuts = (3.0, 2.0, 1.25, 0.8, 0.5, 0.25)
seven = replace(
    stock,
    scale=GradeScale(grades=("A", "B", "C", "D", "E", "F", "G")),
    metrics=tuple(replace(m, boundaries=seven_cuts) for m in stock.metrics),
)
assert validate_config(seven) == []
label = compute_label(report, seven)
print("7-grade scale:        ", label.overall_grade, f"(score {label.overall_score:.2f} on 0..6)")
