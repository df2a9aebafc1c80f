"""Tour the REST service: generate, query, customize, all over HTTP.

Starts the service on a loopback port, exercises the open label endpoints
and the QA-token-protected config endpoints, then shuts down.
"""

import tempfile
import threading
import time

import httpx
import uvicorn

from ecolabel.api import ApiSettings, create_app

QA_TOKEN = "demo-qa-token"

with tempfile.TemporaryDirectory() as tmp:
    app = create_app(ApiSettings(qa_token=QA_TOKEN, store_path=f"{tmp}/store.json"))
    server = uvicorn.Server(
        uvicorn.Config(app, host="127.0.0.1", port=0, log_level="error")
    )
    thread = threading.Thread(target=server.run, daemon=True)
    thread.start()
    while not server.started:
        time.sleep(0.05)
    port = server.servers[0].sockets[0].getsockname()[1]
    base = f"http://127.0.0.1:{port}/api/v1"

    with httpx.Client() as http:
        # anyone can generate and read labels
        label = http.post(
            f"{base}/labels/training",
            json={"model_id": "tour-model", "raw_values": {"co2e_kg": 4.2, "downloads": 80000}},
        ).json()
        print("created label:", label["overall_grade"], "->", label["label_id"])
        print("fetched back: ", http.get(f"{base}/labels/{label['label_id']}").json()["overall_grade"])

        # config writes need the QA manager's token
        denied = http.patch(f"{base}/configs/training", json={"weights": {"co2e_kg": 2.0}})
        print("PATCH without token:", denied.status_code, denied.json()["code"])

        granted = http.patch(
            f"{base}/configs/training",
            json={"weights": {"co2e_kg": 2.0}},
            headers={"Authorization": f"Bearer {QA_TOKEN}"},
        )
        print("PATCH with token: new config version", granted.json()["version"])

        # the what-if preview computes without persisting anything
        config = http.get(f"{base}/configs/training").json()
        preview = http.post(
            f"{base}/configs/training/preview",
            json={
                "candidate_config": config,
                "sample_report": {"raw_values": {"co2e_kg": 4.2, "downloads": 80000}},
            },
        ).json()
        print("preview under edited config:", preview["overall_grade"])

    server.should_exit = True
    thread.join(timeout=5)
    print("server stopped, store persisted on disk")
