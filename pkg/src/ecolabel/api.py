"""REST service exposing every platform capability under /api/v1.

Label generation stays open; config writes, sync triggers and deletions
require the QA manager's bearer token. Every non-2xx response body is an
error envelope ``{code, message, details?}``.
"""

from __future__ import annotations

import hmac
import json
import os
from dataclasses import dataclass, field, replace

from fastapi import Depends, FastAPI, File, Form, Request, UploadFile
from fastapi.exceptions import RequestValidationError
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse, Response
from starlette.exceptions import HTTPException as StarletteHTTPException

from . import engine, ingest, schemas
from .configpatch import merge_config_patch
from .connectors import (
    AdapterRegistry,
    FixtureAdapter,
    HuggingFaceAdapter,
    sync_provider,
)
from .defaults import default_recommendations, load_recommendations
from .errors import (
    EcoLabelError,
    EmptyPopulation,
    EmptyRows,
    EndpointUnreachable,
    Forbidden,
    InvalidConfig,
    InvalidSpec,
    MalformedFile,
    MalformedProviderResponse,
    MissingColumn,
    ModelNotFound,
    NegativeValue,
    NoRatableMetrics,
    NonFiniteInput,
    NonFiniteValue,
    NonNumericValue,
    NoSuccessfulCalls,
    NotFound,
    PhaseMismatch,
    ProviderUnavailable,
    StorageFailure,
    SyncAlreadyRunning,
    Unauthorized,
    UnknownProvider,
)
from .probe import ProbeSample, ProbeSpec, probe_to_report, run_probe
from .repository import FileStore, MemoryStore, Repository, StoreBackend, qualify_model_id
from .types import EfficiencyConfig, Phase

API_PREFIX = "/api/v1"

QA_TOKEN_ENV = "ECOLABEL_QA_TOKEN"
STORE_PATH_ENV = "ECOLABEL_STORE"

_STATUS_BY_ERROR: dict[type[EcoLabelError], int] = {
    InvalidConfig: 400,
    NonFiniteInput: 400,
    PhaseMismatch: 400,
    EmptyPopulation: 400,
    MalformedFile: 400,
    MissingColumn: 400,
    NonNumericValue: 400,
    NegativeValue: 400,
    NonFiniteValue: 400,
    InvalidSpec: 400,
    NoRatableMetrics: 422,
    EmptyRows: 422,
    ModelNotFound: 404,
    NotFound: 404,
    UnknownProvider: 404,
    SyncAlreadyRunning: 409,
    Unauthorized: 401,
    Forbidden: 403,
    ProviderUnavailable: 502,
    MalformedProviderResponse: 502,
    EndpointUnreachable: 502,
    NoSuccessfulCalls: 502,
    StorageFailure: 500,
}


@dataclass
class ApiSettings:
    """Everything the service needs at startup; env-overridable via from_env."""

    qa_token: str = ""
    store_path: str | None = None
    store: StoreBackend | None = None
    fixtures: dict[str, str] = field(default_factory=dict)  # provider id -> directory
    hf_base_url: str | None = None
    register_huggingface: bool = True
    sync_min_delay_s: float = 0.1
    sync_retry_attempts: int = 3
    sync_backoff_s: float = 0.1
    catalog_path: str | None = None

    @classmethod
    def from_env(cls) -> "ApiSettings":
        return cls(
            qa_token=os.environ.get(QA_TOKEN_ENV, ""),
            store_path=os.environ.get(STORE_PATH_ENV),
        )


def _envelope(status: int, code: str, message: str, details: dict | None = None) -> JSONResponse:
    body: dict = {"code": code, "message": message}
    if details:
        body["details"] = details
    return JSONResponse(status_code=status, content=body)


def create_app(settings: ApiSettings | None = None) -> FastAPI:
    settings = settings or ApiSettings.from_env()

    store = settings.store
    if store is None:
        store = FileStore(settings.store_path) if settings.store_path else MemoryStore()
    repository = Repository(store)

    registry = AdapterRegistry()
    if settings.register_huggingface:
        registry.register(HuggingFaceAdapter(base_url=settings.hf_base_url))
    for provider_id, directory in settings.fixtures.items():
        registry.register(FixtureAdapter(directory, provider_id=provider_id))

    catalog = (
        load_recommendations(settings.catalog_path)
        if settings.catalog_path
        else default_recommendations()
    )

    app = FastAPI(title="ecolabel", version="0.1.0", docs_url="/api/docs")
    app.add_middleware(
        CORSMiddleware, allow_origins=["*"], allow_methods=["*"], allow_headers=["*"]
    )
    app.state.repository = repository
    app.state.registry = registry
    app.state.catalog = catalog

    # --- error envelopes ---------------------------------------------------

    @app.exception_handler(EcoLabelError)
    async def domain_error_handler(request: Request, exc: EcoLabelError):
        status = _STATUS_BY_ERROR.get(type(exc), 400)
        return _envelope(status, exc.code, exc.message, exc.details or None)

    @app.exception_handler(StarletteHTTPException)
    async def http_error_handler(request: Request, exc: StarletteHTTPException):
        return _envelope(exc.status_code, "http_error", str(exc.detail))

    @app.exception_handler(RequestValidationError)
    async def request_error_handler(request: Request, exc: RequestValidationError):
        return _envelope(400, "invalid_request", "request does not match the endpoint schema",
                         {"errors": json.loads(json.dumps(exc.errors(), default=str))})

    @app.exception_handler(ValueError)
    async def value_error_handler(request: Request, exc: ValueError):
        return _envelope(400, "invalid_request", str(exc))

    # --- auth ---------------------------------------------------------------

    def qa_required(request: Request) -> None:
        header = request.headers.get("authorization", "")
        if not header.lower().startswith("bearer ") or not header[7:].strip():
            raise Unauthorized("missing bearer token")
        token = header[7:].strip()
        if not settings.qa_token or not hmac.compare_digest(token, settings.qa_token):
            raise Forbidden("token is not authorized for QA functions")

    # --- helpers ------------------------------------------------------------

    def parse_phase(phase: str) -> Phase:
        try:
            return Phase(phase)
        except ValueError:
            raise NotFound(f"unknown phase {phase!r}") from None

    def generate_and_save(body: dict, phase: Phase) -> JSONResponse:
        if not isinstance(body, dict) or "raw_values" not in body or "model_id" not in body:
            raise ValueError("body must contain model_id and raw_values")
        config = repository.current_config(phase)
        report, warnings = ingest.validate_form_payload(
            body["raw_values"], phase, config
        )
        report = replace(report, model_id=qualify_model_id(str(body["model_id"])))
        label = engine.compute_label(report, config, catalog)
        repository.save_label(label)
        payload = label.to_dict()
        if warnings:
            payload["warnings"] = warnings
        return JSONResponse(status_code=201, content=payload)

    # --- label generation ----------------------------------------------------

    @app.post(API_PREFIX + "/labels/training")
    async def post_training_label(request: Request):
        return generate_and_save(await request.json(), Phase.TRAINING)

    @app.post(API_PREFIX + "/labels/inference")
    async def post_inference_label(request: Request):
        return generate_and_save(await request.json(), Phase.INFERENCE)

    @app.post(API_PREFIX + "/labels/training/file")
    async def post_training_label_file(
        file: UploadFile = File(...),
        model_id: str = Form(...),
        mapping: str | None = Form(None),
        format: str | None = Form(None),
    ):
        field_mapping = None
        if mapping:
            try:
                field_mapping = ingest.FieldMapping.from_dict(json.loads(mapping))
            except (json.JSONDecodeError, ValueError, TypeError) as exc:
                raise MalformedFile(f"mapping is not valid: {exc}") from exc
        fmt = format or ("json" if (file.filename or "").endswith(".json") else "csv")
        rows = ingest.parse_emission_report(await file.read(), fmt, field_mapping)
        report = ingest.rows_to_report(rows, qualify_model_id(model_id), Phase.TRAINING)
        config = repository.current_config(Phase.TRAINING)
        label = engine.compute_label(report, config, catalog)
        repository.save_label(label)
        return JSONResponse(status_code=201, content=label.to_dict())

    @app.post(API_PREFIX + "/labels/inference/probe")
    async def post_probe_label(request: Request):
        body = await request.json()
        if not isinstance(body, dict) or "model_id" not in body:
            raise InvalidSpec("body must contain model_id and the probe spec")
        config = repository.current_config(Phase.INFERENCE)
        spec = _probe_spec_from_body(body, config)
        result = run_probe(spec)
        report = probe_to_report(result, qualify_model_id(str(body["model_id"])))
        label = engine.compute_label(report, config, catalog)
        repository.save_label(label)
        payload = label.to_dict()
        payload["probe"] = result.to_dict()
        return JSONResponse(status_code=201, content=payload)

    # --- label / model queries ------------------------------------------------

    @app.get(API_PREFIX + "/labels/{label_id}")
    def get_label(label_id: str):
        return repository.get_label(label_id).to_dict()

    @app.get(API_PREFIX + "/labels")
    def list_labels(
        model_id: str | None = None,
        phase: str | None = None,
        grade: str | None = None,
        provider: str | None = None,
        page: int = 1,
        page_size: int = 50,
    ):
        labels, total = repository.query_labels(
            model_id=model_id,
            phase=parse_phase(phase) if phase else None,
            grade=grade,
            provider=provider,
            page=page,
            page_size=page_size,
        )
        return {
            "items": [l.to_dict() for l in labels],
            "total": total,
            "page": page,
            "page_size": page_size,
        }

    @app.get(API_PREFIX + "/models")
    def list_models(provider: str | None = None, page: int = 1, page_size: int = 50):
        models, total = repository.list_models(provider=provider, page=page, page_size=page_size)
        return {
            "items": [m.to_dict() for m in models],
            "total": total,
            "page": page,
            "page_size": page_size,
        }

    @app.get(API_PREFIX + "/models/{model_id:path}/labels")
    def get_model_labels(model_id: str, phase: str | None = None,
                         page: int = 1, page_size: int = 50):
        repository.get_model(model_id)  # 404 for unknown ids
        labels, total = repository.query_labels(
            model_id=model_id,
            phase=parse_phase(phase) if phase else None,
            page=page,
            page_size=page_size,
        )
        return {
            "items": [l.to_dict() for l in labels],
            "total": total,
            "page": page,
            "page_size": page_size,
        }

    @app.delete(API_PREFIX + "/models/{model_id:path}", dependencies=[Depends(qa_required)])
    def delete_model(model_id: str):
        repository.delete_model(model_id)
        return Response(status_code=204)

    @app.get(API_PREFIX + "/models/{model_id:path}")
    def get_model(model_id: str):
        return repository.get_model(model_id).to_dict()

    # --- configs ---------------------------------------------------------------

    @app.get(API_PREFIX + "/configs/{phase}")
    def get_config(phase: str):
        return repository.current_config(parse_phase(phase)).to_dict()

    @app.get(API_PREFIX + "/configs/{phase}/versions")
    def get_config_versions(phase: str):
        return {"versions": repository.config_versions(parse_phase(phase))}

    @app.get(API_PREFIX + "/configs/{phase}/versions/{version}")
    def get_config_version(phase: str, version: int):
        return repository.config_version(parse_phase(phase), version).to_dict()

    @app.put(API_PREFIX + "/configs/{phase}", dependencies=[Depends(qa_required)])
    async def put_config(phase: str, request: Request):
        parsed = parse_phase(phase)
        body = await request.json()
        body["phase"] = parsed.value
        body.setdefault("version", 1)
        try:
            config = EfficiencyConfig.from_dict(body)
        except (KeyError, TypeError, ValueError) as exc:
            raise InvalidConfig([f"config body malformed: {exc}"]) from exc
        version = repository.save_config(config)
        return repository.config_version(parsed, version).to_dict()

    @app.patch(API_PREFIX + "/configs/{phase}", dependencies=[Depends(qa_required)])
    async def patch_config(phase: str, request: Request):
        parsed = parse_phase(phase)
        current = repository.current_config(parsed)
        merged = merge_config_patch(current, await request.json())
        version = repository.save_config(merged)
        return repository.config_version(parsed, version).to_dict()

    @app.post(API_PREFIX + "/configs/{phase}/preview")
    async def preview_config(phase: str, request: Request):
        parsed = parse_phase(phase)
        body = await request.json()
        if not isinstance(body, dict) or "candidate_config" not in body or "sample_report" not in body:
            raise InvalidConfig(["body must contain candidate_config and sample_report"])
        candidate = dict(body["candidate_config"])
        candidate["phase"] = parsed.value
        candidate.setdefault("version", 1)
        try:
            config = EfficiencyConfig.from_dict(candidate)
        except (KeyError, TypeError, ValueError) as exc:
            raise InvalidConfig([f"candidate config malformed: {exc}"]) from exc
        violations = engine.validate_config(config)
        if violations:
            raise InvalidConfig(violations)
        sample = body["sample_report"]
        report, _warnings = ingest.validate_form_payload(
            sample.get("raw_values", sample), parsed, config
        )
        report = replace(report, model_id=str(sample.get("model_id", "preview")))
        label = engine.compute_label(report, config, catalog)
        return label.to_dict()

    # --- sync ---------------------------------------------------------------------

    @app.post(API_PREFIX + "/sync/{provider}", dependencies=[Depends(qa_required)])
    def trigger_sync(provider: str, limit: int | None = None):
        adapter = registry.get(provider)
        run = sync_provider(
            adapter,
            repository,
            repository.current_config(Phase.TRAINING),
            limit=limit,
            catalog=catalog,
            min_delay_s=settings.sync_min_delay_s,
            retry_attempts=settings.sync_retry_attempts,
            backoff_s=settings.sync_backoff_s,
        )
        return JSONResponse(status_code=202, content=run.to_dict())

    # --- schemas --------------------------------------------------------------------

    @app.get(API_PREFIX + "/schema")
    def get_schemas():
        return schemas.ALL_SCHEMAS

    return app


def _probe_spec_from_body(body: dict, config) -> ProbeSpec:
    """Build a ProbeSpec from a request body; config supplies the CO2e intensity fallback."""
    raw_samples = body.get("samples", [])
    if not isinstance(raw_samples, list):
        raise InvalidSpec("samples must be a list")
    samples = []
    for entry in raw_samples:
        if isinstance(entry, str):
            samples.append(ProbeSample(entry.encode("utf-8")))
        elif isinstance(entry, dict) and "body" in entry:
            samples.append(
                ProbeSample(
                    str(entry["body"]).encode("utf-8"),
                    entry.get("content_type", "application/json"),
                )
            )
        else:
            raise InvalidSpec("each sample must be a string body or {body, content_type}")

    intensity = body.get("carbon_intensity_kg_per_kwh")
    if intensity is None and body.get("power_profile_w") is not None:
        intensity = config.carbon_intensity

    return ProbeSpec(
        endpoint_url=str(body.get("endpoint_url", "")),
        samples=tuple(samples),
        http_method=str(body.get("http_method", "POST")),
        headers=dict(body.get("headers", {})),
        repetitions=int(body.get("repetitions", 1)),
        warmup=int(body.get("warmup", 1)),
        timeout_s=float(body.get("timeout_s", 30.0)),
        power_profile_w=body.get("power_profile_w"),
        carbon_intensity_kg_per_kwh=intensity,
    )


