"""One-click inference measurement against a deployed model endpoint.

A throwaway local server stands in for the deployment. The probe warms it
up, times sequential calls, and derives energy from a device power profile
(software cannot read wall power, so watts come from the hardware spec).
"""

import threading
import time
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer

from ecolabel import Phase, compute_label, default_config
from ecolabel.probe import ProbeSample, ProbeSpec, probe_to_report, run_probe


class FakeModelServer(BaseHTTPRequestHandler):
    def do_POST(self):
        self.rfile.read(int(self.headers.get("content-length", 0)))
        time.sleep(0.03)  # pretend to run the model
        self.send_response(200)
        self.send_header("content-length", "2")
        self.end_headers()
        self.wfile.write(b"ok")

    def log_message(self, *args):
        pass


server = ThreadingHTTPServer(("127.0.0.1", 0), FakeModelServer)
threading.Thread(target=server.serve_forever, daemon=True).start()
url = f"http://127.0.0.1:{server.server_address[1]}/predict"

spec = ProbeSpec(
    endpoint_url=url,
    samples=(ProbeSample(b'{"text": "is this efficient?"}'),),
    repetitions=10,
    warmup=2,
    power_profile_w=65.0,                # e.g. the accelerator's TDP
    carbon_intensity_kg_per_kwh=0.475,   # grid average
)
result = run_probe(spec)
server.shutdown()

print(f"measured calls: {len(result.per_call_latencies_s)}  failures: {result.failures}")
print(f"mean latency:   {result.mean_latency_s * 1000:.1f} ms")
print(f"total runtime:  {result.total_running_time_s:.3f} s")
print(f"energy:         {result.energy_kwh:.3e} kWh  ->  {result.co2e_kg:.3e} kg CO2e")

report = probe_to_report(result, "local:probed-model")
label = compute_label(report, default_config(Phase.INFERENCE))
print(f"\ninference label: {label.overall_grade} (score {label.overall_score:.2f})")
for rated in label.rated_metrics:
    marker = "?" if rated.missing else rated.grade
    print(f"  {rated.metric_id:<20} {marker}")
