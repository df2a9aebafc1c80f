"""Mirror a model-hub provider into the local repository, labels included.

The adapter contract is tiny (list ids, fetch one), so a directory of
recorded JSON documents works exactly like the live hub adapter. Re-running
the sync is a no-op while the provider data stays unchanged.
"""

import json
import tempfile
from pathlib import Path

from ecolabel import Phase, default_config
from ecolabel.connectors import FixtureAdapter, sync_provider
from ecolabel.repository import MemoryStore, Repository

MODELS = [
    {"model_id": "org/albert-base", "downloads": 410_000, "model_size_mb": 45.0,
     "evaluation_metrics": {"accuracy": 0.87}},
    {"model_id": "org/gpt-mini", "downloads": 95_000, "model_size_mb": 350.0,
     "evaluation_metrics": {"rouge": 0.31}},
    {"model_id": "org/unused-exp", "downloads": 3, "model_size_mb": 1100.0,
     "evaluation_metrics": {}},
]

with tempfile.TemporaryDirectory() as tmp:
    for doc in MODELS:
        name = doc["model_id"].replace("/", "__")
        (Path(tmp) / f"{name}.json").write_text(json.dumps(doc), encoding="utf-8")

    repository = Repository(MemoryStore())
    adapter = FixtureAdapter(tmp, provider_id="demo-hub")
    config = default_config(Phase.TRAINING)

    first = sync_provider(adapter, repository, config, min_delay_s=0.0)
    print(f"first run:  created={first.created} updated={first.updated} "
          f"unchanged={first.unchanged}")

    second = sync_provider(adapter, repository, config, min_delay_s=0.0)
    print(f"second run: created={second.created} updated={second.updated} "
          f"unchanged={second.unchanged}  (idempotent)")

    labels, total = repository.query_labels(provider="demo-hub")
    print(f"\n{total} labels in the repository:")
    for label in labels:
        print(f"  {label.model_id:<24} {label.overall_grade}")
