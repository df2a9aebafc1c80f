"""Turn external measurement artifacts into validated phase reports.

Two paths: emission-tracker export files (CSV or JSON, column names
remappable) and raw form payloads. Both end in a
:class:`~ecolabel.types.PhaseReport` ready for the label engine.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field

from .errors import (
    EmptyRows,
    MalformedFile,
    MissingColumn,
    NegativeValue,
    NonFiniteValue,
    NonNumericValue,
)
from .types import EfficiencyConfig, Phase, PhaseReport, Provenance

# Canonical report field ids filled by the default tracker columns.
DURATION_FIELD = "running_time_s"
EMISSIONS_FIELD = "co2e_kg"
ENERGY_FIELD = "energy_consumption_kwh"


@dataclass(frozen=True)
class FieldMapping:
    """Source column name -> report field id, with optional unit scaling.

    The defaults follow the de-facto emission-tracker CSV convention
    (``duration``, ``emissions``, ``energy_consumed``); override ``columns``
    to ingest any tool's export. ``scales`` multiplies a source column after
    parsing (e.g. grams to kg with 0.001).
    """

    columns: dict[str, str] = field(
        default_factory=lambda: {
            "duration": DURATION_FIELD,
            "emissions": EMISSIONS_FIELD,
            "energy_consumed": ENERGY_FIELD,
        }
    )
    scales: dict[str, float] = field(default_factory=dict)

    def __post_init__(self):
        targets = list(self.columns.values())
        if len(set(targets)) != len(targets):
            raise ValueError("mapping target field ids must be unique")

    @classmethod
    def from_dict(cls, data: dict) -> "FieldMapping":
        scales = {k: float(v) for k, v in data.get("scales", {}).items()}
        if data.get("columns"):
            return cls(columns=dict(data["columns"]), scales=scales)
        return cls(scales=scales)


@dataclass(frozen=True)
class EmissionReportRow:
    """One normalized record of a tracker export.

    ``values`` holds every mapped column keyed by report field id; the
    three named fields are convenience views of the canonical targets.
    Unmapped columns are preserved verbatim in ``extra`` (no silent drops).
    """

    duration_s: float
    emissions_kg: float
    energy_kwh: float
    values: dict[str, float]
    extra: dict[str, str] = field(default_factory=dict)

    @classmethod
    def from_values(cls, values: dict[str, float], extra: dict[str, str]) -> "EmissionReportRow":
        return cls(
            duration_s=values.get(DURATION_FIELD, 0.0),
            emissions_kg=values.get(EMISSIONS_FIELD, 0.0),
            energy_kwh=values.get(ENERGY_FIELD, 0.0),
            values=values,
            extra=extra,
        )


def parse_emission_report(
    data: bytes,
    format: str = "csv",
    mapping: FieldMapping | None = None,
) -> list[EmissionReportRow]:
    """Parse a tracker export (CSV with header, or flat JSON object/array).

    Every mapped source column must be present in every record; unmapped
    columns land in each row's ``extra`` map as strings.
    """
    mapping = mapping or FieldMapping()
    try:
        text = data.decode("utf-8")
    except UnicodeDecodeError as exc:
        raise MalformedFile(f"file is not valid UTF-8: {exc}") from exc

    if format == "csv":
        records = _csv_records(text)
    elif format == "json":
        records = _json_records(text)
    else:
        raise MalformedFile(f"unsupported format {format!r} (expected csv or json)")

    rows: list[EmissionReportRow] = []
    for row_number, record in enumerate(records, start=1):
        values: dict[str, float] = {}
        extra: dict[str, str] = {}
        for column, raw in record.items():
            target = mapping.columns.get(column)
            if target is None:
                extra[column] = raw
                continue
            try:
                value = float(raw)
            except (TypeError, ValueError) as exc:
                raise NonNumericValue(
                    f"row {row_number}, column {column!r}: {raw!r} is not a number",
                    details={"row": row_number, "column": column},
                ) from exc
            if not math.isfinite(value) or value < 0:
                raise NonNumericValue(
                    f"row {row_number}, column {column!r}: value must be finite and >= 0",
                    details={"row": row_number, "column": column},
                )
            values[target] = value * mapping.scales.get(column, 1.0)
        missing = [c for c in mapping.columns if c not in record]
        if missing:
            raise MissingColumn(
                f"row {row_number} lacks mapped column(s): {', '.join(sorted(missing))}",
                details={"row": row_number, "columns": sorted(missing)},
            )
        rows.append(EmissionReportRow.from_values(values, extra))
    return rows


def _csv_records(text: str) -> list[dict[str, str]]:
    reader = csv.reader(io.StringIO(text))
    try:
        table = list(reader)
    except csv.Error as exc:
        raise MalformedFile(f"CSV parse error: {exc}") from exc
    if not table:
        raise MalformedFile("CSV file has no header row")
    header = table[0]
    if len(set(header)) != len(header):
        raise MalformedFile("CSV header has duplicate column names")
    records = []
    for line in table[1:]:
        if not line or all(cell == "" for cell in line):
            continue
        if len(line) != len(header):
            raise MalformedFile(f"CSV row has {len(line)} cells, header has {len(header)}")
        records.append(dict(zip(header, line)))
    return records


def _json_records(text: str) -> list[dict[str, str]]:
    try:
        parsed = json.loads(text)
    except json.JSONDecodeError as exc:
        raise MalformedFile(f"JSON parse error: {exc}") from exc
    if isinstance(parsed, dict):
        parsed = [parsed]
    if not isinstance(parsed, list) or any(not isinstance(r, dict) for r in parsed):
        raise MalformedFile("JSON must be a flat object or an array of flat objects")
    return [{k: v for k, v in record.items()} for record in parsed]


def rows_to_report(
    rows: list[EmissionReportRow], model_id: str, phase: Phase
) -> PhaseReport:
    """Sum row values componentwise into one report (trackers emit a row per segment)."""
    if not rows:
        raise EmptyRows("no data rows to aggregate")
    totals: dict[str, float] = {}
    for row in rows:
        for field_id, value in row.values.items():
            totals[field_id] = totals.get(field_id, 0.0) + value
    return PhaseReport(
        model_id=model_id,
        phase=phase,
        raw_values=totals,
        provenance=Provenance.FILE,
    )


def serialize_rows(rows: list[EmissionReportRow], mapping: FieldMapping | None = None) -> bytes:
    """Write rows back to CSV with the same mapping (round-trip counterpart of parse)."""
    mapping = mapping or FieldMapping()
    target_to_column = {t: c for c, t in mapping.columns.items()}
    extra_columns = sorted({k for row in rows for k in row.extra})
    header = [target_to_column[t] for t in sorted(target_to_column)] + extra_columns

    buffer = io.StringIO()
    writer = csv.writer(buffer)
    writer.writerow(header)
    for row in rows:
        cells = []
        for target in sorted(target_to_column):
            column = target_to_column[target]
            scale = mapping.scales.get(column, 1.0)
            cells.append(repr(row.values.get(target, 0.0) / scale))
        cells.extend(row.extra.get(c, "") for c in extra_columns)
        writer.writerow(cells)
    return buffer.getvalue().encode("utf-8")


def validate_form_payload(
    payload: dict[str, float], phase: Phase, config: EfficiencyConfig
) -> tuple[PhaseReport, list[str]]:
    """Validate a raw form payload into a report plus non-fatal warnings.

    Negative or non-finite values are rejected outright; field ids the
    config does not know (neither metric ids nor derivation inputs) are
    accepted but flagged.
    """
    known = config.known_field_ids()
    warnings: list[str] = []
    values: dict[str, float] = {}

    for field_id, raw in payload.items():
        try:
            value = float(raw)
        except (TypeError, ValueError):
            raise NonFiniteValue(f"field {field_id!r}: {raw!r} is not a number")
        if not math.isfinite(value):
            raise NonFiniteValue(f"field {field_id!r} must be finite")
        if value < 0:
            raise NegativeValue(f"field {field_id!r} must be >= 0")
        if field_id not in known:
            warnings.append(f"unknown field {field_id!r} (not used by the current config)")
        values[field_id] = value

    report = PhaseReport(
        model_id="", phase=phase, raw_values=values, provenance=Provenance.FORM
    )
    return report, warnings
