"""Label a training run straight from an emission tracker's CSV export.

Trackers append one row per run segment; ingestion sums them. Column names
are remappable, so any tool's export format works.
"""

import tempfile
from pathlib import Path

from ecolabel import Phase, compute_label, default_config
from ecolabel.ingest import FieldMapping, parse_emission_report, rows_to_report

EXPORT = """\
duration,emissions,energy_consumed,project_name
3600.0,0.8,2.1,nightly-finetune
3600.0,0.9,2.3,nightly-finetune
1800.0,0.4,1.0,nightly-finetune
"""

with tempfile.TemporaryDirectory() as tmp:
    path = Path(tmp) / "emissions.csv"
    path.write_text(EXPORT, encoding="utf-8")

    rows = parse_emission_report(path.read_bytes(), "csv")
    print(f"parsed {len(rows)} tracker rows; unmapped columns kept: {rows[0].extra}")

    report = rows_to_report(rows, "local:nightly-finetune", Phase.TRAINING)
    print("summed report:", report.raw_values)

    label = compute_label(report, default_config(Phase.TRAINING))
    print(f"label: {label.overall_grade} (score {label.overall_score:.2f})")

# A tracker that logs grams instead of kilograms? Attach a scale factor.
grams_mapping = FieldMapping(
    columns={"runtime_s": "running_time_s", "co2_g": "co2e_kg"},
    scales={"co2_g": 0.001},
)
rows = parse_emission_report(b"runtime_s,co2_g\n120,850\n", "csv", grams_mapping)
print("\ncustom mapping with g->kg scaling:", rows[0].values)
