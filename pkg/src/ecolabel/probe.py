"""One-click inference measurement: drive an HTTP endpoint, time the calls.

Software cannot read wall power, so energy is derived from a user-supplied
device power profile (nameplate watts): energy_kwh = W x seconds / 3.6e9.
Calls run strictly sequentially so latency samples never contend.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

import httpx

from .errors import EndpointUnreachable, InvalidSpec, NoSuccessfulCalls
from .types import Phase, PhaseReport, Provenance, utcnow_iso


@dataclass(frozen=True)
class ProbeSample:
    body: bytes
    content_type: str = "application/json"


@dataclass(frozen=True)
class ProbeSpec:
    endpoint_url: str
    samples: tuple[ProbeSample, ...]
    http_method: str = "POST"
    headers: dict[str, str] = field(default_factory=dict)
    repetitions: int = 1
    warmup: int = 1
    timeout_s: float = 30.0
    power_profile_w: float | None = None
    carbon_intensity_kg_per_kwh: float | None = None

    def __post_init__(self):
        if not self.endpoint_url:
            raise InvalidSpec("endpoint_url must be non-empty")
        if not self.samples:
            raise InvalidSpec("at least one request sample is required")
        if self.repetitions < 1:
            raise InvalidSpec("repetitions must be >= 1")
        if self.warmup < 0:
            raise InvalidSpec("warmup must be >= 0")
        if not self.timeout_s > 0:
            raise InvalidSpec("timeout_s must be > 0")
        if self.power_profile_w is not None and not self.power_profile_w > 0:
            raise InvalidSpec("power_profile_w must be > 0 when given")
        if (
            self.carbon_intensity_kg_per_kwh is not None
            and not self.carbon_intensity_kg_per_kwh > 0
        ):
            raise InvalidSpec("carbon_intensity_kg_per_kwh must be > 0 when given")


@dataclass(frozen=True)
class ProbeResult:
    per_call_latencies_s: tuple[float, ...]
    total_running_time_s: float
    mean_latency_s: float
    failures: int
    energy_kwh: float | None
    co2e_kg: float | None
    power_draw_w: float | None
    collected_at: str

    def to_dict(self) -> dict:
        return {
            "per_call_latencies_s": list(self.per_call_latencies_s),
            "total_running_time_s": self.total_running_time_s,
            "mean_latency_s": self.mean_latency_s,
            "failures": self.failures,
            "energy_kwh": self.energy_kwh,
            "co2e_kg": self.co2e_kg,
            "power_draw_w": self.power_draw_w,
            "collected_at": self.collected_at,
        }


def run_probe(spec: ProbeSpec) -> ProbeResult:
    """Execute warmup calls (unmeasured) then repetitions x samples measured calls.

    Non-2xx responses, timeouts and connection errors count as failures and
    never abort the probe; the probe errors out only when every measured
    call failed.
    """
    latencies: list[float] = []
    failures = 0

    with httpx.Client(timeout=spec.timeout_s) as client:
        for i in range(spec.warmup):
            sample = spec.samples[i % len(spec.samples)]
            _timed_call(client, spec, sample)  # result intentionally discarded

        for _ in range(spec.repetitions):
            for sample in spec.samples:
                latency = _timed_call(client, spec, sample)
                if latency is None:
                    failures += 1
                else:
                    latencies.append(latency)

    if not latencies:
        raise EndpointUnreachable(
            f"all {failures} measured calls to {spec.endpoint_url} failed"
        )

    total = sum(latencies)
    energy = None
    co2e = None
    if spec.power_profile_w is not None:
        # power [W] x time [s] / 3_600_000 gives kWh
        energy = spec.power_profile_w * total / 3_600_000.0
        if spec.carbon_intensity_kg_per_kwh is not None:
            co2e = energy * spec.carbon_intensity_kg_per_kwh

    return ProbeResult(
        per_call_latencies_s=tuple(latencies),
        total_running_time_s=total,
        mean_latency_s=total / len(latencies),
        failures=failures,
        energy_kwh=energy,
        co2e_kg=co2e,
        power_draw_w=spec.power_profile_w,
        collected_at=utcnow_iso(),
    )


def _timed_call(client: httpx.Client, spec: ProbeSpec, sample: ProbeSample) -> float | None:
    """One wall-clock-timed request; None on timeout, transport error or non-2xx."""
    headers = dict(spec.headers)
    headers.setdefault("content-type", sample.content_type)
    started = time.perf_counter()
    try:
        response = client.request(
            spec.http_method, spec.endpoint_url, content=sample.body, headers=headers
        )
    except httpx.HTTPError:
        return None
    elapsed = time.perf_counter() - started
    if not 200 <= response.status_code < 300:
        return None
    return elapsed


def probe_to_report(result: ProbeResult, model_id: str) -> PhaseReport:
    """Map a probe result onto an inference-phase report."""
    if not result.per_call_latencies_s:
        raise NoSuccessfulCalls("probe produced no successful calls")
    values: dict[str, float] = {"running_time_s": result.total_running_time_s}
    if result.power_draw_w is not None:
        values["power_draw_w"] = result.power_draw_w
    if result.co2e_kg is not None:
        values["co2e_kg"] = result.co2e_kg
    return PhaseReport(
        model_id=model_id,
        phase=Phase.INFERENCE,
        raw_values=values,
        provenance=Provenance.PROBE,
    )
