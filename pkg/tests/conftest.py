"""Shared fixtures: stub HTTP servers, provider fixture corpora, app factory."""

import json
import socket
import sys
import threading
import time
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))  # make oracles importable

from ecolabel.api import ApiSettings, create_app
from ecolabel.repository import MemoryStore


def free_port() -> int:
    with socket.socket() as sock:
        sock.bind(("127.0.0.1", 0))
        return sock.getsockname()[1]


class _SlowEchoHandler(BaseHTTPRequestHandler):
    """Inference stub: sleeps a fixed delay, counts every request it serves."""

    delay_s = 0.05
    counter = None  # shared list, len() = requests served

    def do_POST(self):
        length = int(self.headers.get("content-length", 0))
        self.rfile.read(length)
        time.sleep(self.delay_s)
        self.counter.append(self.path)
        body = b'{"ok": true}'
        self.send_response(200)
        self.send_header("content-type", "application/json")
        self.send_header("content-length", str(len(body)))
        self.end_headers()
        self.wfile.write(body)

    do_GET = do_POST

    def log_message(self, *args):
        pass


@pytest.fixture
def stub_inference_server():
    """(url, request_log) of a local endpoint answering after a 50 ms sleep."""
    port = free_port()
    requests_served: list = []

    handler = type("Handler", (_SlowEchoHandler,), {"counter": requests_served})
    server = ThreadingHTTPServer(("127.0.0.1", port), handler)
    thread = threading.Thread(target=server.serve_forever, daemon=True)
    thread.start()
    yield f"http://127.0.0.1:{port}/predict", requests_served
    server.shutdown()
    server.server_close()


FIXTURE_MODELS = {
    "bert-fixture-1": {
        "model_id": "bert-fixture-1",
        "downloads": 1000,
        "model_size_mb": 420.0,
        "evaluation_metrics": {"accuracy": 0.91, "F1": 0.88},
        "tags": ["text-classification"],
        "description": "encoder fine-tuned on sentiment data",
    },
    "gpt-fixture-2": {
        "model_id": "gpt-fixture-2",
        "downloads": 250000,
        "model_size_mb": 1300.0,
        "dataset_size_mb": 52000.0,
        "evaluation_metrics": {"rouge": 0.36},
        "tags": ["text-generation"],
        "description": "small decoder for summarization",
    },
    "vit-fixture-3": {
        "model_id": "vit-fixture-3",
        "downloads": 54000,
        "model_size_mb": 330.0,
        "evaluation_metrics": {"Accuracy": 0.84},
        "tags": ["image-classification"],
        "description": "vision transformer baseline",
    },
    "tiny-fixture-4": {
        "model_id": "tiny-fixture-4",
        "downloads": 12,
        "model_size_mb": 17.5,
        "evaluation_metrics": {},
        "tags": [],
        "description": "distilled tiny variant",
    },
    "blank-fixture-5": {
        "model_id": "blank-fixture-5",
        "downloads": 0,
        "tags": [],
        "description": "no published artifacts yet",
    },
}


@pytest.fixture
def fixture_dir(tmp_path):
    """Directory of five well-formed recorded provider documents."""
    directory = tmp_path / "provider-fixtures"
    directory.mkdir()
    for name, doc in FIXTURE_MODELS.items():
        (directory / f"{name}.json").write_text(json.dumps(doc), encoding="utf-8")
    return directory


@pytest.fixture
def broken_fixture_dir(fixture_dir):
    """Same corpus with one malformed document injected."""
    (fixture_dir / "broken-fixture-6.json").write_text("{not json", encoding="utf-8")
    return fixture_dir


QA_TOKEN = "test-qa-token"


def make_app(**overrides):
    settings = ApiSettings(
        qa_token=QA_TOKEN,
        store=overrides.pop("store", None) or MemoryStore(),
        register_huggingface=overrides.pop("register_huggingface", False),
        sync_min_delay_s=0.0,
        sync_backoff_s=0.0,
        **overrides,
    )
    return create_app(settings)


@pytest.fixture
def app():
    return make_app()


@pytest.fixture
def client(app):
    from fastapi.testclient import TestClient

    with TestClient(app) as test_client:
        yield test_client
