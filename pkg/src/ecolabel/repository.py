"""Persistence layer: model records, labels, versioned configs, sync runs.

The domain never touches a backend directly; everything goes through
:class:`Repository`, which works against any :class:`StoreBackend`. Two
backends ship: an in-memory store for tests and an embedded single-file
JSON store whose commits are write-temp-then-atomic-rename, so a crash at
any byte boundary leaves the previously committed state readable.
"""

from __future__ import annotations

import hashlib
import json
import os
import tempfile
import threading
from dataclasses import dataclass, field

from . import engine
from .defaults import default_config
from .errors import InvalidConfig, NotFound, StorageFailure
from .types import EfficiencyConfig, EnergyLabel, Phase, utcnow_iso

FAMILIES = ("models", "labels", "configs", "sync_runs")

FORMAT_VERSION = 1

LOCAL_PROVIDER = "local"


def qualify_model_id(model_id: str) -> str:
    """Model keys are ``provider:model_id``; bare ids belong to the local provider."""
    if ":" in model_id:
        return model_id
    return f"{LOCAL_PROVIDER}:{model_id}"


def metadata_content_hash(metadata: dict) -> str:
    """Deterministic hash of normalized metadata; volatile fields excluded."""
    normalized = {k: v for k, v in metadata.items() if k != "fetched_at"}
    canonical = json.dumps(normalized, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()


@dataclass(frozen=True)
class ModelRecord:
    """A model known to the platform, local or synced from a provider."""

    provider_id: str
    model_id: str
    display_name: str
    metadata: dict
    content_hash: str
    created_at: str = field(default_factory=utcnow_iso)
    updated_at: str = field(default_factory=utcnow_iso)

    @property
    def key(self) -> str:
        return f"{self.provider_id}:{self.model_id}"

    @classmethod
    def build(cls, provider_id: str, model_id: str, metadata: dict,
              display_name: str | None = None) -> "ModelRecord":
        return cls(
            provider_id=provider_id,
            model_id=model_id,
            display_name=display_name or model_id,
            metadata=metadata,
            content_hash=metadata_content_hash(metadata),
        )

    def to_dict(self) -> dict:
        return {
            "provider_id": self.provider_id,
            "model_id": self.model_id,
            "display_name": self.display_name,
            "metadata": self.metadata,
            "content_hash": self.content_hash,
            "created_at": self.created_at,
            "updated_at": self.updated_at,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "ModelRecord":
        return cls(
            provider_id=data["provider_id"],
            model_id=data["model_id"],
            display_name=data["display_name"],
            metadata=data["metadata"],
            content_hash=data["content_hash"],
            created_at=data["created_at"],
            updated_at=data["updated_at"],
        )


class StoreBackend:
    """Contract every backend honors: keyed JSON documents per entity family.

    Writes are serialized through ``lock``; the repository also takes the
    lock around read-modify-write sequences so versions and upserts stay
    atomic across concurrent callers.
    """

    lock: threading.RLock

    def get(self, family: str, key: str) -> dict | None:
        raise NotImplementedError

    def put(self, family: str, key: str, doc: dict) -> None:
        raise NotImplementedError

    def delete(self, family: str, key: str) -> None:
        raise NotImplementedError

    def scan(self, family: str) -> dict[str, dict]:
        """Snapshot of a whole family (key -> document)."""
        raise NotImplementedError


class MemoryStore(StoreBackend):
    """Dict-backed store; state lives and dies with the process."""

    def __init__(self):
        self.lock = threading.RLock()
        self._entities: dict[str, dict[str, dict]] = {f: {} for f in FAMILIES}

    def get(self, family, key):
        with self.lock:
            doc = self._entities[family].get(key)
            return json.loads(json.dumps(doc)) if doc is not None else None

    def put(self, family, key, doc):
        with self.lock:
            self._entities[family][key] = json.loads(json.dumps(doc))

    def delete(self, family, key):
        with self.lock:
            self._entities[family].pop(key, None)

    def scan(self, family):
        with self.lock:
            return json.loads(json.dumps(self._entities[family]))


class FileStore(StoreBackend):
    """Single-file embedded store with atomic-rename commits.

    The on-disk document carries a format-version header and is migrated on
    open when older formats appear.
    """

    def __init__(self, path: str):
        self.lock = threading.RLock()
        self.path = str(path)
        self._entities: dict[str, dict[str, dict]] = {f: {} for f in FAMILIES}
        self._load()

    def _load(self):
        if not os.path.exists(self.path):
            return
        try:
            with open(self.path, encoding="utf-8") as fh:
                raw = fh.read()
        except OSError as exc:
            raise StorageFailure(f"cannot read store file {self.path}: {exc}") from exc
        if not raw.strip():
            return  # empty file: treat as a fresh store
        try:
            data = json.loads(raw)
        except json.JSONDecodeError as exc:
            raise StorageFailure(f"store file {self.path} is corrupt: {exc}") from exc
        if not isinstance(data, dict) or "format_version" not in data:
            raise StorageFailure(f"store file {self.path} has no format-version header")
        data = self._migrate(data)
        entities = data.get("entities", {})
        for family in FAMILIES:
            self._entities[family] = dict(entities.get(family, {}))

    def _migrate(self, data: dict) -> dict:
        version = data["format_version"]
        if version > FORMAT_VERSION:
            raise StorageFailure(
                f"store format {version} is newer than supported {FORMAT_VERSION}"
            )
        # No older formats exist yet; migration steps chain here when they do.
        return data

    def _commit(self):
        payload = json.dumps(
            {"format_version": FORMAT_VERSION, "entities": self._entities},
            sort_keys=True,
        )
        directory = os.path.dirname(os.path.abspath(self.path)) or "."
        try:
            fd, tmp_path = tempfile.mkstemp(dir=directory, prefix=".store-", suffix=".tmp")
            try:
                with os.fdopen(fd, "w", encoding="utf-8") as fh:
                    fh.write(payload)
                    fh.flush()
                    os.fsync(fh.fileno())
                os.replace(tmp_path, self.path)
            except BaseException:
                if os.path.exists(tmp_path):
                    os.unlink(tmp_path)
                raise
        except OSError as exc:
            raise StorageFailure(f"cannot write store file {self.path}: {exc}") from exc

    def get(self, family, key):
        with self.lock:
            doc = self._entities[family].get(key)
            return json.loads(json.dumps(doc)) if doc is not None else None

    def put(self, family, key, doc):
        with self.lock:
            previous = self._entities[family].get(key)
            self._entities[family][key] = json.loads(json.dumps(doc))
            try:
                self._commit()
            except BaseException:
                # Keep memory consistent with what is actually on disk.
                if previous is None:
                    self._entities[family].pop(key, None)
                else:
                    self._entities[family][key] = previous
                raise

    def delete(self, family, key):
        with self.lock:
            previous = self._entities[family].pop(key, None)
            if previous is None:
                return
            try:
                self._commit()
            except BaseException:
                self._entities[family][key] = previous
                raise

    def scan(self, family):
        with self.lock:
            return json.loads(json.dumps(self._entities[family]))


class Repository:
    """Domain-facing persistence API over any store backend.

    Seeds a version-1 default config per phase on first open so the service
    answers config queries out of the box.
    """

    def __init__(self, store: StoreBackend, seed_defaults: bool = True,
                 auto_stub_models: bool = True):
        self._store = store
        self._auto_stub = auto_stub_models
        if seed_defaults:
            with store.lock:
                for phase in Phase:
                    if self._max_config_version(phase) == 0:
                        self.save_config(default_config(phase))

    # --- models -----------------------------------------------------------

    def upsert_model(self, record: ModelRecord) -> str:
        """Insert or refresh a model record; returns created/updated/unchanged."""
        with self._store.lock:
            existing = self._store.get("models", record.key)
            if existing is None:
                now = utcnow_iso()
                doc = record.to_dict()
                doc["created_at"] = now
                doc["updated_at"] = now
                self._store.put("models", record.key, doc)
                return "created"
            if existing["content_hash"] == record.content_hash:
                return "unchanged"
            doc = record.to_dict()
            doc["created_at"] = existing["created_at"]
            doc["updated_at"] = utcnow_iso()
            self._store.put("models", record.key, doc)
            return "updated"

    def get_model(self, key: str) -> ModelRecord:
        doc = self._store.get("models", qualify_model_id(key))
        if doc is None:
            raise NotFound(f"model {key!r} not found")
        return ModelRecord.from_dict(doc)

    def list_models(self, provider: str | None = None, page: int = 1,
                    page_size: int = 50) -> tuple[list[ModelRecord], int]:
        docs = list(self._store.scan("models").values())
        if provider is not None:
            docs = [d for d in docs if d["provider_id"] == provider]
        docs.sort(key=lambda d: (d["updated_at"], d["provider_id"] + ":" + d["model_id"]))
        docs.reverse()
        return self._page([ModelRecord.from_dict(d) for d in docs], page, page_size)

    def delete_model(self, key: str) -> None:
        """Remove a model and cascade-delete its labels."""
        key = qualify_model_id(key)
        with self._store.lock:
            if self._store.get("models", key) is None:
                raise NotFound(f"model {key!r} not found")
            for label_id, doc in self._store.scan("labels").items():
                if doc["model_id"] == key:
                    self._store.delete("labels", label_id)
            self._store.delete("models", key)

    # --- labels -----------------------------------------------------------

    def save_label(self, label: EnergyLabel) -> str:
        """Append a label to the history of its (model, phase); labels are never rewritten."""
        with self._store.lock:
            model_key = qualify_model_id(label.model_id)
            if self._store.get("models", model_key) is None:
                if not self._auto_stub:
                    raise NotFound(f"model {label.model_id!r} not found")
                provider_id, _, bare_id = model_key.partition(":")
                stub = ModelRecord.build(provider_id, bare_id, metadata={})
                self.upsert_model(stub)
            doc = label.to_dict()
            doc["model_id"] = model_key
            self._store.put("labels", label.label_id, doc)
            return label.label_id

    def get_label(self, label_id: str) -> EnergyLabel:
        doc = self._store.get("labels", label_id)
        if doc is None:
            raise NotFound(f"label {label_id!r} not found")
        return EnergyLabel.from_dict(doc)

    def query_labels(
        self,
        model_id: str | None = None,
        phase: Phase | None = None,
        grade: str | None = None,
        provider: str | None = None,
        page: int = 1,
        page_size: int = 50,
    ) -> tuple[list[EnergyLabel], int]:
        """Filtered, stably ordered label page (newest first) plus total count."""
        docs = list(self._store.scan("labels").values())
        if model_id is not None:
            wanted = qualify_model_id(model_id)
            docs = [d for d in docs if d["model_id"] == wanted]
        if phase is not None:
            docs = [d for d in docs if d["phase"] == phase.value]
        if grade is not None:
            docs = [d for d in docs if d["overall_grade"] == grade]
        if provider is not None:
            docs = [d for d in docs if d["model_id"].partition(":")[0] == provider]
        docs.sort(key=lambda d: (d["created_at"], d["label_id"]))
        docs.reverse()
        return self._page([EnergyLabel.from_dict(d) for d in docs], page, page_size)

    # --- configs ----------------------------------------------------------

    def save_config(self, config: EfficiencyConfig) -> int:
        """Persist a new immutable config version; returns the assigned version."""
        violations = engine.validate_config(config)
        if violations:
            raise InvalidConfig(violations)
        with self._store.lock:
            version = self._max_config_version(config.phase) + 1
            stored = config.with_version(version)
            self._store.put("configs", f"{config.phase.value}:{version}", stored.to_dict())
            return version

    def current_config(self, phase: Phase) -> EfficiencyConfig:
        version = self._max_config_version(phase)
        if version == 0:
            raise NotFound(f"no config stored for phase {phase.value!r}")
        return self.config_version(phase, version)

    def config_version(self, phase: Phase, version: int) -> EfficiencyConfig:
        doc = self._store.get("configs", f"{phase.value}:{version}")
        if doc is None:
            raise NotFound(f"config {phase.value} v{version} not found")
        return EfficiencyConfig.from_dict(doc)

    def config_versions(self, phase: Phase) -> list[int]:
        versions = [
            int(key.split(":", 1)[1])
            for key in self._store.scan("configs")
            if key.startswith(phase.value + ":")
        ]
        return sorted(versions)

    def _max_config_version(self, phase: Phase) -> int:
        versions = self.config_versions(phase)
        return versions[-1] if versions else 0

    # --- sync runs ----------------------------------------------------------

    def save_sync_run(self, run) -> str:
        self._store.put("sync_runs", run.run_id, run.to_dict())
        return run.run_id

    def list_sync_runs(self, provider: str | None = None) -> list[dict]:
        docs = list(self._store.scan("sync_runs").values())
        if provider is not None:
            docs = [d for d in docs if d["provider_id"] == provider]
        docs.sort(key=lambda d: (d["started_at"], d["run_id"]))
        docs.reverse()
        return docs

    # --- utilities ----------------------------------------------------------

    def content_hash(self, families: tuple[str, ...] = ("models", "labels", "configs")) -> str:
        """Hash of the domain data; sync-run telemetry excluded by default."""
        snapshot = {family: self._store.scan(family) for family in families}
        canonical = json.dumps(snapshot, sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(canonical.encode("utf-8")).hexdigest()

    @staticmethod
    def _page(items: list, page: int, page_size: int) -> tuple[list, int]:
        if not 1 <= page_size <= 500:
            raise ValueError("page_size must be in [1, 500]")
        if page < 1:
            raise ValueError("page must be >= 1")
        start = (page - 1) * page_size
        return items[start : start + page_size], len(items)
