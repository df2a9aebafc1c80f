"""Command-line front door: labels, probes, sync, config management, serve.

All commands link the domain modules directly against the configured store
(no HTTP round-trip) except ``serve``, which runs the REST service.

Exit codes: 0 success, 1 domain error (error envelope JSON on stderr),
2 usage error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import replace
from pathlib import Path

from . import engine, ingest
from .api import QA_TOKEN_ENV, STORE_PATH_ENV, ApiSettings, create_app
from .configpatch import merge_config_patch
from .connectors import FixtureAdapter, HuggingFaceAdapter, sync_provider
from .defaults import default_recommendations
from .errors import EcoLabelError, UnknownProvider
from .probe import ProbeSample, ProbeSpec, probe_to_report, run_probe
from .repository import FileStore, Repository, qualify_model_id
from .types import EnergyLabel, Phase, PhaseReport, Provenance

DEFAULT_STORE = "ecolabel-store.json"


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except EcoLabelError as exc:
        print(json.dumps(exc.to_envelope()), file=sys.stderr)
        return 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ecolabel",
        description="Energy-efficiency labels for ML models, from the command line.",
    )
    parser.add_argument(
        "--store",
        default=os.environ.get(STORE_PATH_ENV, DEFAULT_STORE),
        help="path of the embedded store file",
    )
    parser.add_argument("--json", action="store_true", help="machine-readable output")
    commands = parser.add_subparsers(dest="command", required=True)

    label = commands.add_parser("label", help="generate an energy label")
    label_phase = label.add_subparsers(dest="phase", required=True)

    training = label_phase.add_parser("training")
    training.add_argument("--model", required=True)
    source = training.add_mutually_exclusive_group(required=True)
    source.add_argument("--values", help="comma-separated field=value pairs")
    source.add_argument("--file", help="emission-tracker export to ingest")
    training.add_argument("--format", choices=["csv", "json"], default=None)
    training.add_argument("--mapping", help="JSON file remapping export columns")
    training.set_defaults(func=cmd_label_training)

    inference = label_phase.add_parser("inference")
    inference.add_argument("--model", required=True)
    isource = inference.add_mutually_exclusive_group(required=True)
    isource.add_argument("--values", help="comma-separated field=value pairs")
    isource.add_argument("--probe-endpoint", help="deployed model URL to probe")
    inference.add_argument("--samples", help="file with request body (or JSON array of bodies)")
    inference.add_argument("--power-watts", type=float, default=None)
    inference.add_argument("--repetitions", type=int, default=1)
    inference.add_argument("--warmup", type=int, default=1)
    inference.add_argument("--timeout", type=float, default=30.0)
    inference.set_defaults(func=cmd_label_inference)

    sync = commands.add_parser("sync", help="pull models from a provider platform")
    sync.add_argument("provider")
    sync.add_argument("--limit", type=int, default=None)
    sync.add_argument("--fixtures", help="directory of recorded model documents")
    sync.add_argument("--delay", type=float, default=0.1, help="seconds between requests")
    sync.set_defaults(func=cmd_sync)

    config = commands.add_parser("config", help="inspect or edit the label definition")
    config_cmd = config.add_subparsers(dest="config_command", required=True)

    show = config_cmd.add_parser("show")
    show.add_argument("--phase", required=True, choices=[p.value for p in Phase])
    show.add_argument("--version", type=int, default=None)
    show.set_defaults(func=cmd_config_show)

    cset = config_cmd.add_parser("set")
    cset.add_argument("--phase", required=True, choices=[p.value for p in Phase])
    cset.add_argument("--weight", action="append", default=[], metavar="METRIC=W")
    cset.add_argument("--reference", action="append", default=[], metavar="METRIC=R")
    cset.add_argument(
        "--boundaries",
        action="append",
        default=[],
        metavar="[METRIC=]T1,T2,...",
        help="new thresholds for one metric, or for all when no metric is named",
    )
    cset.add_argument("--scale", help="comma-separated grade identifiers, best first")
    cset.add_argument("--carbon-intensity", type=float, default=None)
    cset.set_defaults(func=cmd_config_set)

    calibrate = config_cmd.add_parser("calibrate")
    calibrate.add_argument("--phase", required=True, choices=[p.value for p in Phase])
    calibrate.set_defaults(func=cmd_config_calibrate)

    serve = commands.add_parser("serve", help="run the REST service")
    serve.add_argument("--port", type=int, default=8000)
    serve.add_argument("--host", default="127.0.0.1")
    serve.add_argument("--qa-token", default=os.environ.get(QA_TOKEN_ENV, ""))
    serve.set_defaults(func=cmd_serve)

    return parser


def _repository(args) -> Repository:
    return Repository(FileStore(args.store))


def _parse_values(spec: str) -> dict[str, float]:
    values: dict[str, float] = {}
    for pair in spec.split(","):
        field_id, _, raw = pair.partition("=")
        if not field_id or not raw:
            raise ValueError(f"bad field=value pair: {pair!r}")
        values[field_id.strip()] = float(raw)
    return values


def _print_label(label: EnergyLabel, as_json: bool, extra: dict | None = None) -> None:
    if as_json:
        payload = label.to_dict()
        if extra:
            payload.update(extra)
        print(json.dumps(payload, indent=2))
        return
    print(f"model   {label.model_id}")
    print(f"phase   {label.phase.value}   (config v{label.config_version})")
    print(f"overall {label.overall_grade}   score {label.overall_score:.3f}")
    print()
    print(f"  {'metric':<24} {'value':>14} {'index':>10}  grade")
    for r in label.rated_metrics:
        if r.missing:
            print(f"  {r.metric_id:<24} {'?':>14} {'?':>10}  ?")
        else:
            print(f"  {r.metric_id:<24} {r.value:>14.4g} {r.index:>10.4g}  {r.grade}")
    if label.recommendations:
        print()
        for rec in label.recommendations:
            print(f"  [{rec.metric_id}] {rec.text}")


def cmd_label_training(args) -> int:
    repository = _repository(args)
    config = repository.current_config(Phase.TRAINING)
    if args.values:
        payload = _parse_values(args.values)
        report, warnings = ingest.validate_form_payload(payload, Phase.TRAINING, config)
        report = replace(report, model_id=qualify_model_id(args.model))
        for warning in warnings:
            print(f"warning: {warning}", file=sys.stderr)
    else:
        mapping = None
        if args.mapping:
            mapping = ingest.FieldMapping.from_dict(
                json.loads(Path(args.mapping).read_text("utf-8"))
            )
        fmt = args.format or ("json" if args.file.endswith(".json") else "csv")
        rows = ingest.parse_emission_report(Path(args.file).read_bytes(), fmt, mapping)
        report = ingest.rows_to_report(rows, qualify_model_id(args.model), Phase.TRAINING)
    label = engine.compute_label(report, config, default_recommendations())
    repository.save_label(label)
    _print_label(label, args.json)
    return 0


def cmd_label_inference(args) -> int:
    repository = _repository(args)
    config = repository.current_config(Phase.INFERENCE)
    extra = None
    if args.values:
        payload = _parse_values(args.values)
        report, warnings = ingest.validate_form_payload(payload, Phase.INFERENCE, config)
        report = replace(report, model_id=qualify_model_id(args.model))
        for warning in warnings:
            print(f"warning: {warning}", file=sys.stderr)
    else:
        if not args.samples:
            print("error: --probe-endpoint requires --samples", file=sys.stderr)
            return 2
        spec = ProbeSpec(
            endpoint_url=args.probe_endpoint,
            samples=_load_samples(args.samples),
            repetitions=args.repetitions,
            warmup=args.warmup,
            timeout_s=args.timeout,
            power_profile_w=args.power_watts,
            carbon_intensity_kg_per_kwh=(
                config.carbon_intensity if args.power_watts is not None else None
            ),
        )
        result = run_probe(spec)
        report = probe_to_report(result, qualify_model_id(args.model))
        extra = {"probe": result.to_dict()}
    label = engine.compute_label(report, config, default_recommendations())
    repository.save_label(label)
    _print_label(label, args.json, extra)
    return 0


def _load_samples(path: str) -> tuple[ProbeSample, ...]:
    raw = Path(path).read_bytes()
    try:
        parsed = json.loads(raw)
    except json.JSONDecodeError:
        return (ProbeSample(raw),)
    if isinstance(parsed, list):
        return tuple(
            ProbeSample(
                (s if isinstance(s, str) else json.dumps(s)).encode("utf-8")
            )
            for s in parsed
        )
    return (ProbeSample(raw),)


def cmd_sync(args) -> int:
    repository = _repository(args)
    if args.fixtures:
        adapter = FixtureAdapter(args.fixtures, provider_id=args.provider)
    elif args.provider == "huggingface":
        adapter = HuggingFaceAdapter()
    else:
        raise UnknownProvider(
            f"no adapter for {args.provider!r}; pass --fixtures for a recorded provider"
        )
    run = sync_provider(
        adapter,
        repository,
        repository.current_config(Phase.TRAINING),
        limit=args.limit,
        catalog=default_recommendations(),
        min_delay_s=args.delay,
    )
    if args.json:
        print(json.dumps(run.to_dict(), indent=2))
    else:
        print(
            f"sync {run.provider_id}: created {run.created}, updated {run.updated}, "
            f"unchanged {run.unchanged}, failed {len(run.failed)}"
        )
        for model_id, code in run.failed:
            print(f"  failed {model_id}: {code}")
    return 0


def cmd_config_show(args) -> int:
    repository = _repository(args)
    phase = Phase(args.phase)
    if args.version is not None:
        config = repository.config_version(phase, args.version)
    else:
        config = repository.current_config(phase)
    if args.json:
        print(json.dumps(config.to_dict(), indent=2))
    else:
        print(f"config {phase.value} v{config.version}  scale {'-'.join(config.scale.grades)}")
        print(f"  {'metric':<24} {'direction':<14} {'weight':>7} {'reference':>12}  boundaries")
        for m in config.metrics:
            bounds = ", ".join(f"{b:g}" for b in m.boundaries)
            print(
                f"  {m.id:<24} {m.direction.value:<14} {m.weight:>7g} "
                f"{m.reference:>12g}  [{bounds}]"
            )
    return 0


def cmd_config_set(args) -> int:
    repository = _repository(args)
    phase = Phase(args.phase)
    patch: dict = {}
    if args.weight:
        patch["weights"] = dict(_parse_values(",".join(args.weight)))
    if args.reference:
        patch["references"] = dict(_parse_values(",".join(args.reference)))
    if args.boundaries:
        patch["boundaries"] = _parse_boundaries(args.boundaries)
    if args.scale:
        patch["scale"] = {"grades": [g.strip() for g in args.scale.split(",")]}
    if args.carbon_intensity is not None:
        patch["carbon_intensity"] = args.carbon_intensity
    merged = merge_config_patch(repository.current_config(phase), patch)
    version = repository.save_config(merged)
    if args.json:
        print(json.dumps(repository.config_version(phase, version).to_dict(), indent=2))
    else:
        print(f"saved config {phase.value} v{version}")
    return 0


def _parse_boundaries(entries: list[str]) -> list | dict:
    per_metric: dict[str, list[float]] = {}
    for entry in entries:
        if "=" in entry:
            metric_id, _, row = entry.partition("=")
            per_metric[metric_id] = [float(x) for x in row.split(",")]
        else:
            return [float(x) for x in entry.split(",")]  # one global threshold row
    return per_metric


def cmd_config_calibrate(args) -> int:
    repository = _repository(args)
    phase = Phase(args.phase)
    config = repository.current_config(phase)
    population = _population_from_labels(repository, phase)
    calibrated = engine.calibrate_references(population, config)
    version = repository.save_config(calibrated)
    if args.json:
        print(json.dumps(repository.config_version(phase, version).to_dict(), indent=2))
    else:
        print(f"calibrated config {phase.value} v{version} over {len(population)} label(s)")
    return 0


def _population_from_labels(repository: Repository, phase: Phase) -> list[PhaseReport]:
    """Rebuild a report population from stored labels' rated values."""
    labels, _total = repository.query_labels(phase=phase, page=1, page_size=500)
    population = []
    for label in labels:
        values = {
            r.metric_id: r.value for r in label.rated_metrics if not r.missing
        }
        if values:
            population.append(
                PhaseReport(
                    model_id=label.model_id,
                    phase=phase,
                    raw_values=values,
                    provenance=Provenance.FORM,
                )
            )
    return population


def cmd_serve(args) -> int:
    import uvicorn

    settings = ApiSettings(qa_token=args.qa_token, store_path=args.store)
    app = create_app(settings)
    try:
        uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
    except SystemExit as exc:  # uvicorn exits nonzero on startup failure
        return 1 if exc.code else 0
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
