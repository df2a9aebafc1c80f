"""Provider adapters: pull model metadata from external hubs into the repository.

One adapter per platform. The sync procedure only sees the adapter
contract (``provider_id``, ``list_model_ids``, ``fetch_model``), so a
fixture-backed adapter reading recorded JSON documents and a live HTTP
adapter are interchangeable everywhere, tests included.
"""

from __future__ import annotations

import json
import math
import os
import threading
import time
from contextlib import contextmanager
from dataclasses import dataclass, field
from pathlib import Path

import httpx

from .engine import compute_label
from .errors import (
    EcoLabelError,
    MalformedProviderResponse,
    ModelNotFound,
    NoRatableMetrics,
    ProviderUnavailable,
    SyncAlreadyRunning,
    UnknownProvider,
)
from .repository import ModelRecord, Repository
from .types import (
    EfficiencyConfig,
    Phase,
    PhaseReport,
    Provenance,
    RecommendationRule,
    new_id,
    utcnow_iso,
)

# Evaluation-metric names recognized as performance-score sources (matched
# case-insensitively against provider metric names).
PERFORMANCE_SOURCES = ("accuracy", "f1", "rouge")

# File suffixes counted as model weights when inferring a total size.
WEIGHT_FILE_SUFFIXES = (
    ".safetensors", ".bin", ".h5", ".ckpt", ".pt", ".pth", ".onnx", ".gguf", ".msgpack",
)

MB = 2**20

HUGGINGFACE_BASE_URL_ENV = "ECOLABEL_HF_BASE_URL"


@dataclass(frozen=True)
class ProviderModelMetadata:
    """Normalized metadata for one provider model; absent fields stay absent."""

    provider_id: str
    model_id: str
    downloads: int = 0
    model_size_mb: float | None = None
    dataset_size_mb: float | None = None
    evaluation_metrics: dict[str, float] = field(default_factory=dict)
    tags: tuple[str, ...] = ()
    description: str = ""
    hardware: str | None = None
    fetched_at: str = field(default_factory=utcnow_iso)

    def __post_init__(self):
        if not self.model_id:
            raise MalformedProviderResponse("model_id must be non-empty")
        numerics = {"downloads": self.downloads}
        if self.model_size_mb is not None:
            numerics["model_size_mb"] = self.model_size_mb
        if self.dataset_size_mb is not None:
            numerics["dataset_size_mb"] = self.dataset_size_mb
        numerics.update(self.evaluation_metrics)
        for name, value in numerics.items():
            if not math.isfinite(value) or value < 0:
                raise MalformedProviderResponse(
                    f"model {self.model_id!r}: field {name!r} must be finite and >= 0"
                )

    def to_dict(self) -> dict:
        return {
            "provider_id": self.provider_id,
            "model_id": self.model_id,
            "downloads": self.downloads,
            "model_size_mb": self.model_size_mb,
            "dataset_size_mb": self.dataset_size_mb,
            "evaluation_metrics": dict(self.evaluation_metrics),
            "tags": list(self.tags),
            "description": self.description,
            "hardware": self.hardware,
            "fetched_at": self.fetched_at,
        }


class ProviderAdapter:
    """Contract a platform adapter must supply."""

    provider_id: str

    def list_model_ids(self, page: int, page_size: int) -> list[str]:
        raise NotImplementedError

    def fetch_model(self, model_id: str) -> ProviderModelMetadata:
        raise NotImplementedError


class FixtureAdapter(ProviderAdapter):
    """Adapter over a directory of recorded JSON documents, one per model.

    Each document mirrors :class:`ProviderModelMetadata` (``model_id`` plus
    any of downloads, model_size_mb, dataset_size_mb, evaluation_metrics,
    tags, description, hardware). Unparseable documents still list (by file
    stem) but fail on fetch, like a live platform serving a bad payload.
    """

    def __init__(self, directory: str, provider_id: str = "fixture"):
        self.provider_id = provider_id
        self._directory = Path(directory)

    def _index(self) -> dict[str, Path]:
        index: dict[str, Path] = {}
        for path in sorted(self._directory.glob("*.json")):
            try:
                doc = json.loads(path.read_text("utf-8"))
                model_id = doc["model_id"]
            except (json.JSONDecodeError, KeyError, TypeError, UnicodeDecodeError):
                model_id = path.stem
            index[model_id] = path
        return index

    def list_model_ids(self, page: int, page_size: int) -> list[str]:
        ids = sorted(self._index())
        start = page * page_size
        return ids[start : start + page_size]

    def fetch_model(self, model_id: str) -> ProviderModelMetadata:
        path = self._index().get(model_id)
        if path is None:
            raise ModelNotFound(f"no fixture for model {model_id!r}")
        try:
            doc = json.loads(path.read_text("utf-8"))
        except (json.JSONDecodeError, UnicodeDecodeError) as exc:
            raise MalformedProviderResponse(f"fixture {path.name} is not valid JSON") from exc
        if not isinstance(doc, dict):
            raise MalformedProviderResponse(f"fixture {path.name} must be a JSON object")
        try:
            return ProviderModelMetadata(
                provider_id=self.provider_id,
                model_id=doc.get("model_id", model_id),
                downloads=int(doc.get("downloads", 0)),
                model_size_mb=_opt_float(doc.get("model_size_mb")),
                dataset_size_mb=_opt_float(doc.get("dataset_size_mb")),
                evaluation_metrics={
                    k: float(v) for k, v in doc.get("evaluation_metrics", {}).items()
                },
                tags=tuple(doc.get("tags", ())),
                description=doc.get("description", ""),
                hardware=doc.get("hardware"),
            )
        except (TypeError, ValueError, AttributeError) as exc:
            raise MalformedProviderResponse(
                f"fixture {path.name} has malformed fields: {exc}"
            ) from exc


class HuggingFaceAdapter(ProviderAdapter):
    """Live adapter for the public Hugging Face hub HTTP API.

    The base URL is overridable (argument or ``ECOLABEL_HF_BASE_URL``) so
    tests can point it at a stub server; no test in this repository talks
    to the real hub.
    """

    provider_id = "huggingface"

    def __init__(self, base_url: str | None = None, timeout_s: float = 30.0):
        self.base_url = (
            base_url
            or os.environ.get(HUGGINGFACE_BASE_URL_ENV)
            or "https://huggingface.co"
        ).rstrip("/")
        self._timeout = timeout_s

    def _get(self, path: str, params: dict | None = None) -> httpx.Response:
        try:
            response = httpx.get(self.base_url + path, params=params, timeout=self._timeout)
        except httpx.HTTPError as exc:
            raise ProviderUnavailable(f"provider request failed: {exc}") from exc
        if response.status_code == 404:
            raise ModelNotFound(f"provider returned 404 for {path}")
        if response.status_code >= 500:
            raise ProviderUnavailable(f"provider returned {response.status_code} for {path}")
        if response.status_code != 200:
            raise MalformedProviderResponse(
                f"provider returned {response.status_code} for {path}"
            )
        return response

    def list_model_ids(self, page: int, page_size: int) -> list[str]:
        response = self._get(
            "/api/models", params={"limit": page_size, "skip": page * page_size}
        )
        try:
            entries = response.json()
            return [entry.get("id") or entry["modelId"] for entry in entries]
        except (json.JSONDecodeError, KeyError, TypeError, AttributeError) as exc:
            raise MalformedProviderResponse(f"unexpected model list payload: {exc}") from exc

    def fetch_model(self, model_id: str) -> ProviderModelMetadata:
        response = self._get(f"/api/models/{model_id}")
        try:
            doc = response.json()
        except json.JSONDecodeError as exc:
            raise MalformedProviderResponse(f"model detail is not JSON: {exc}") from exc
        if not isinstance(doc, dict):
            raise MalformedProviderResponse("model detail must be a JSON object")
        try:
            return ProviderModelMetadata(
                provider_id=self.provider_id,
                model_id=doc.get("id") or doc.get("modelId") or model_id,
                downloads=int(doc.get("downloads", 0)),
                model_size_mb=_size_from_siblings(doc.get("siblings")),
                dataset_size_mb=_opt_float(doc.get("dataset_size_mb")),
                evaluation_metrics=_metrics_from_card(doc.get("cardData")),
                tags=tuple(doc.get("tags", ())),
                description=doc.get("description", "") or "",
                hardware=doc.get("hardware"),
            )
        except (TypeError, ValueError, AttributeError) as exc:
            raise MalformedProviderResponse(
                f"model {model_id!r} detail has malformed fields: {exc}"
            ) from exc


def _opt_float(value) -> float | None:
    return None if value is None else float(value)


def _size_from_siblings(siblings) -> float | None:
    """Sum weight-file sizes (bytes) into MB; None when nothing is reported."""
    if not siblings:
        return None
    total = 0
    seen = False
    for entry in siblings:
        name = entry.get("rfilename", "")
        size = entry.get("size")
        if size is None or not name.endswith(WEIGHT_FILE_SUFFIXES):
            continue
        total += int(size)
        seen = True
    return total / MB if seen else None


def _metrics_from_card(card_data) -> dict[str, float]:
    """Extract {metric name: value} pairs from a hub model-index card block."""
    metrics: dict[str, float] = {}
    if not isinstance(card_data, dict):
        return metrics
    for model_entry in card_data.get("model-index", []) or []:
        for result in model_entry.get("results", []) or []:
            for metric in result.get("metrics", []) or []:
                name = metric.get("type") or metric.get("name")
                value = metric.get("value")
                if isinstance(name, str) and isinstance(value, (int, float)):
                    metrics[name] = float(value)
    return metrics


class AdapterRegistry:
    """Registered adapters, unique per provider id."""

    def __init__(self):
        self._adapters: dict[str, ProviderAdapter] = {}

    def register(self, adapter: ProviderAdapter) -> None:
        if adapter.provider_id in self._adapters:
            raise ValueError(f"provider {adapter.provider_id!r} already registered")
        self._adapters[adapter.provider_id] = adapter

    def get(self, provider_id: str) -> ProviderAdapter:
        try:
            return self._adapters[provider_id]
        except KeyError:
            raise UnknownProvider(f"no adapter registered for {provider_id!r}") from None

    def providers(self) -> list[str]:
        return sorted(self._adapters)


def fetch_model_metadata(
    adapter: ProviderAdapter,
    model_id: str,
    attempts: int = 3,
    backoff_s: float = 0.1,
) -> ProviderModelMetadata:
    """Fetch with bounded retry; only transient provider failures are retried."""
    for attempt in range(attempts):
        try:
            return adapter.fetch_model(model_id)
        except ProviderUnavailable:
            if attempt == attempts - 1:
                raise
            time.sleep(backoff_s * 2**attempt)
    raise AssertionError("unreachable")


def metadata_to_report(meta: ProviderModelMetadata, phase: Phase) -> PhaseReport:
    """Map provider metadata onto report fields the efficiency metrics read."""
    values: dict[str, float] = {"downloads": float(meta.downloads)}
    if meta.model_size_mb is not None:
        values["model_size_mb"] = meta.model_size_mb
    if meta.dataset_size_mb is not None:
        values["dataset_size_mb"] = meta.dataset_size_mb
    for name, value in meta.evaluation_metrics.items():
        lowered = name.lower()
        if lowered in PERFORMANCE_SOURCES:
            values[lowered] = value
    return PhaseReport(
        model_id=f"{meta.provider_id}:{meta.model_id}",
        phase=phase,
        raw_values=values,
        provenance=Provenance.PROVIDER,
    )


@dataclass(frozen=True)
class SyncRun:
    """Outcome of one provider synchronization."""

    run_id: str
    provider_id: str
    started_at: str
    finished_at: str
    created: int
    updated: int
    unchanged: int
    failed: tuple[tuple[str, str], ...]  # (model_id, error code)

    def to_dict(self) -> dict:
        return {
            "run_id": self.run_id,
            "provider_id": self.provider_id,
            "started_at": self.started_at,
            "finished_at": self.finished_at,
            "created": self.created,
            "updated": self.updated,
            "unchanged": self.unchanged,
            "failed": [list(f) for f in self.failed],
        }


_sync_guard = threading.Lock()
_active_syncs: set[str] = set()


@contextmanager
def _sync_lock(provider_id: str):
    with _sync_guard:
        if provider_id in _active_syncs:
            raise SyncAlreadyRunning(f"a sync for {provider_id!r} is already running")
        _active_syncs.add(provider_id)
    try:
        yield
    finally:
        with _sync_guard:
            _active_syncs.discard(provider_id)


def sync_provider(
    adapter: ProviderAdapter,
    repository: Repository,
    config: EfficiencyConfig,
    limit: int | None = None,
    catalog: tuple[RecommendationRule, ...] | list[RecommendationRule] = (),
    min_delay_s: float = 0.1,
    retry_attempts: int = 3,
    backoff_s: float = 0.1,
    page_size: int = 100,
) -> SyncRun:
    """Page through the provider, upsert records, label what is ratable.

    Idempotent by content hash: a second run over unchanged provider data
    creates nothing and stores no new labels. Individual model failures are
    recorded and never abort the run; only a failure of the very first page
    fetch raises.
    """
    with _sync_lock(adapter.provider_id):
        started_at = utcnow_iso()
        created = updated = unchanged = 0
        failed: list[tuple[str, str]] = []
        visited = 0
        page = 0
        first_request = True

        while True:
            if not first_request and min_delay_s > 0:
                time.sleep(min_delay_s)
            try:
                model_ids = adapter.list_model_ids(page, page_size)
            except EcoLabelError as exc:
                if page == 0:
                    raise ProviderUnavailable(
                        f"first page fetch from {adapter.provider_id!r} failed: {exc.message}"
                    ) from exc
                break  # partial run: keep what earlier pages produced
            first_request = False
            if not model_ids:
                break

            for model_id in model_ids:
                if limit is not None and visited >= limit:
                    break
                visited += 1
                if min_delay_s > 0:
                    time.sleep(min_delay_s)
                try:
                    meta = fetch_model_metadata(adapter, model_id, retry_attempts, backoff_s)
                    record = ModelRecord.build(
                        adapter.provider_id, meta.model_id, metadata=meta.to_dict()
                    )
                    outcome = repository.upsert_model(record)
                    if outcome == "created":
                        created += 1
                    elif outcome == "updated":
                        updated += 1
                    else:
                        unchanged += 1
                    if outcome in ("created", "updated"):
                        report = metadata_to_report(meta, config.phase)
                        try:
                            label = compute_label(report, config, catalog)
                            repository.save_label(label)
                        except NoRatableMetrics:
                            pass  # nothing ratable; record kept without a label
                except EcoLabelError as exc:
                    failed.append((model_id, exc.code))

            if limit is not None and visited >= limit:
                break
            page += 1

        run = SyncRun(
            run_id=new_id(),
            provider_id=adapter.provider_id,
            started_at=started_at,
            finished_at=utcnow_iso(),
            created=created,
            updated=updated,
            unchanged=unchanged,
            failed=tuple(failed),
        )
        repository.save_sync_run(run)
        return run
