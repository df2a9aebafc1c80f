"""First contact: compute a training-phase energy label in a few lines.

The default label definition rates six training metrics on an A-E scale.
A value equal to a metric's reference lands mid-scale at "C"; being twice
as good as the reference earns an "A".
"""

from ecolabel import (
    Phase,
    PhaseReport,
    Provenance,
    compute_label,
    default_config,
    default_recommendations,
)

config = default_config(Phase.TRAINING)

# A fine-tuning run: low emissions, modest reuse, decent quality scores.
report = PhaseReport(
    model_id="local:sentiment-bert",
    phase=Phase.TRAINING,
    raw_values={
        "energy_consumption_kwh": 18.0,   # reference is 50 kWh -> better
        "co2e_kg": 8.5,                   # reference is 10 kg  -> slightly better
        "downloads": 3200,                # reference is 10k    -> worse
        "model_size_mb": 420.0,           # feeds size_efficiency = 420 / 8.5
        "accuracy": 0.91,
        "f1": 0.88,                       # accuracy+f1 -> performance_score
    },
    provenance=Provenance.FORM,
)

label = compute_label(report, config, default_recommendations())

print(f"model:   {label.model_id}")
print(f"overall: {label.overall_grade}  (score {label.overall_score:.2f} on 0..4)\n")
for rated in label.rated_metrics:
    if rated.missing:
        print(f"  {rated.metric_id:<24} ?  (not reported)")
    else:
        print(f"  {rated.metric_id:<24} {rated.grade}  index {rated.index:.2f}")

if label.recommendations:
    print("\nhow to improve:")
    for rec in label.recommendations:
        print(f"  - ({rec.metric_id}) {rec.text}")
