"""REST API tests over the in-process test client."""

import io
import json

import pytest

from ecolabel import connectors
from ecolabel.repository import FAMILIES

from conftest import QA_TOKEN, make_app
from test_engine import all_at_reference_report


def qa_headers(token=QA_TOKEN):
    return {"Authorization": f"Bearer {token}"}


def at_reference_values(client):
    config = client.get("/api/v1/configs/training").json()
    report = all_at_reference_report_from_config(config)
    return report


def all_at_reference_report_from_config(config_doc):
    refs = {m["id"]: m["reference"] for m in config_doc["metrics"]}
    raw = {
        "energy_consumption_kwh": refs["energy_consumption_kwh"],
        "downloads": refs["downloads"],
        "co2e_kg": refs["co2e_kg"],
        "model_size_mb": refs["size_efficiency"] * refs["co2e_kg"],
        "dataset_size_mb": refs["dataset_efficiency"] * refs["co2e_kg"],
        "accuracy": refs["performance_score"],
        "f1": refs["performance_score"],
        "rouge": refs["performance_score"],
    }
    return raw


class TestTrainingLabelEndpoint:
    def test_all_at_reference_grades_c(self, client):
        raw = at_reference_values(client)
        response = client.post(
            "/api/v1/labels/training", json={"model_id": "demo", "raw_values": raw}
        )
        assert response.status_code == 201
        body = response.json()
        assert body["overall_grade"] == "C"
        assert body["overall_score"] == 2.0

    def test_label_retrievable_after_post(self, client):
        response = client.post(
            "/api/v1/labels/training",
            json={"model_id": "demo", "raw_values": {"co2e_kg": 5.0}},
        )
        label_id = response.json()["label_id"]
        fetched = client.get(f"/api/v1/labels/{label_id}")
        assert fetched.status_code == 200
        assert fetched.json() == response.json()

    def test_empty_raw_values_not_ratable(self, client):
        response = client.post(
            "/api/v1/labels/training", json={"model_id": "demo", "raw_values": {}}
        )
        assert response.status_code == 422
        assert response.json()["code"] == "no_ratable_metrics"

    def test_negative_value_rejected(self, client):
        response = client.post(
            "/api/v1/labels/training",
            json={"model_id": "demo", "raw_values": {"co2e_kg": -1.0}},
        )
        assert response.status_code == 400
        assert response.json()["code"] == "negative_value"

    def test_unknown_field_warns(self, client):
        response = client.post(
            "/api/v1/labels/training",
            json={"model_id": "demo", "raw_values": {"co2e_kg": 1.0, "zzz": 3.0}},
        )
        assert response.status_code == 201
        assert any("zzz" in w for w in response.json()["warnings"])


class TestFileUploadEndpoint:
    CSV = b"duration,emissions,energy_consumed\n120.0,0.05,0.3\n"

    def test_fixture_csv_gives_label(self, client):
        response = client.post(
            "/api/v1/labels/training/file",
            files={"file": ("emissions.csv", io.BytesIO(self.CSV), "text/csv")},
            data={"model_id": "uploaded"},
        )
        assert response.status_code == 201
        body = response.json()
        by_id = {r["metric_id"]: r for r in body["rated_metrics"]}
        assert by_id["co2e_kg"]["value"] == 0.05
        assert by_id["energy_consumption_kwh"]["value"] == 0.3

    def test_header_only_csv_not_ratable(self, client):
        response = client.post(
            "/api/v1/labels/training/file",
            files={"file": ("empty.csv", io.BytesIO(b"duration,emissions,energy_consumed\n"), "text/csv")},
            data={"model_id": "uploaded"},
        )
        assert response.status_code == 422

    def test_binary_junk_rejected(self, client):
        response = client.post(
            "/api/v1/labels/training/file",
            files={"file": ("junk.csv", io.BytesIO(b"\xff\xfe\x00"), "text/csv")},
            data={"model_id": "uploaded"},
        )
        assert response.status_code == 400
        assert response.json()["code"] == "malformed_file"

    def test_custom_mapping(self, client):
        csv = b"runtime,co2\n60,0.01\n"
        mapping = json.dumps({"columns": {"runtime": "running_time_s", "co2": "co2e_kg"}})
        response = client.post(
            "/api/v1/labels/training/file",
            files={"file": ("x.csv", io.BytesIO(csv), "text/csv")},
            data={"model_id": "uploaded", "mapping": mapping},
        )
        assert response.status_code == 201


class TestInferenceEndpoints:
    def test_values_path_mirrors_training(self, client):
        response = client.post(
            "/api/v1/labels/inference",
            json={"model_id": "demo", "raw_values": {"running_time_s": 1.0}},
        )
        assert response.status_code == 201
        assert response.json()["phase"] == "inference"

    def test_probe_endpoint(self, client, stub_inference_server):
        url, served = stub_inference_server
        response = client.post(
            "/api/v1/labels/inference/probe",
            json={
                "model_id": "probe-demo",
                "endpoint_url": url,
                "samples": ['{"x": 1}'],
                "repetitions": 3,
                "warmup": 1,
                "power_profile_w": 100.0,
            },
        )
        assert response.status_code == 201
        body = response.json()
        assert len(body["probe"]["per_call_latencies_s"]) == 3
        rated = {r["metric_id"]: r for r in body["rated_metrics"]}
        assert not rated["running_time_s"]["missing"]
        assert not rated["power_draw_w"]["missing"]
        assert not rated["co2e_kg"]["missing"]  # intensity defaulted from config

    def test_unreachable_endpoint_502(self, client):
        response = client.post(
            "/api/v1/labels/inference/probe",
            json={
                "model_id": "x",
                "endpoint_url": "http://127.0.0.1:9/unreachable",
                "samples": ["{}"],
                "warmup": 0,
            },
        )
        assert response.status_code == 502
        assert response.json()["code"] == "endpoint_unreachable"

    def test_zero_samples_400(self, client):
        response = client.post(
            "/api/v1/labels/inference/probe",
            json={"model_id": "x", "endpoint_url": "http://e", "samples": []},
        )
        assert response.status_code == 400
        assert response.json()["code"] == "invalid_spec"


class TestQueries:
    def test_unknown_label_404(self, client):
        response = client.get("/api/v1/labels/nope")
        assert response.status_code == 404
        assert set(response.json()) >= {"code", "message"}

    def test_models_and_per_model_labels(self, client):
        client.post("/api/v1/labels/training", json={"model_id": "q1", "raw_values": {"co2e_kg": 1.0}})
        client.post("/api/v1/labels/training", json={"model_id": "q1", "raw_values": {"co2e_kg": 2.0}})
        models = client.get("/api/v1/models").json()
        assert models["total"] == 1
        assert models["items"][0]["provider_id"] == "local"
        labels = client.get("/api/v1/models/local:q1/labels").json()
        assert labels["total"] == 2

    def test_labels_unknown_model_404(self, client):
        assert client.get("/api/v1/models/local:ghost/labels").status_code == 404

    def test_grade_filter_matches_scan(self, client):
        for co2 in (1.0, 10.0, 100.0):  # grades A, C, E at reference 10
            client.post(
                "/api/v1/labels/training",
                json={"model_id": f"g{co2}", "raw_values": {"co2e_kg": co2}},
            )
        everything = client.get("/api/v1/labels").json()
        a_only = client.get("/api/v1/labels", params={"grade": "A"}).json()
        expected = [l["label_id"] for l in everything["items"] if l["overall_grade"] == "A"]
        assert [l["label_id"] for l in a_only["items"]] == expected
        assert a_only["total"] == 1


class TestConfigEndpoints:
    def test_get_current_config(self, client):
        response = client.get("/api/v1/configs/training")
        assert response.status_code == 200
        assert response.json()["version"] == 1

    def test_unknown_phase_404(self, client):
        assert client.get("/api/v1/configs/bogus").status_code == 404

    def test_put_requires_token(self, client):
        config = client.get("/api/v1/configs/training").json()
        assert client.put("/api/v1/configs/training", json=config).status_code == 401

    def test_wrong_token_403(self, client):
        config = client.get("/api/v1/configs/training").json()
        response = client.put(
            "/api/v1/configs/training", json=config, headers=qa_headers("wrong")
        )
        assert response.status_code == 403

    def test_put_creates_new_version(self, client):
        config = client.get("/api/v1/configs/training").json()
        config["carbon_intensity"] = 0.3
        response = client.put(
            "/api/v1/configs/training", json=config, headers=qa_headers()
        )
        assert response.status_code == 200
        assert response.json()["version"] == 2
        v1 = client.get("/api/v1/configs/training/versions/1").json()
        assert v1["carbon_intensity"] == 0.475

    def test_patch_weight_bumps_version(self, client):
        response = client.patch(
            "/api/v1/configs/training",
            json={"weights": {"co2e_kg": 3.0}},
            headers=qa_headers(),
        )
        assert response.status_code == 200
        body = response.json()
        assert body["version"] == 2
        weight = next(m["weight"] for m in body["metrics"] if m["id"] == "co2e_kg")
        assert weight == 3.0

    def test_patch_invalid_boundaries_rejected(self, client):
        response = client.patch(
            "/api/v1/configs/training",
            json={"boundaries": [0.5, 0.8, 1.25, 2.0]},
            headers=qa_headers(),
        )
        assert response.status_code == 400
        assert response.json()["code"] == "invalid_config"
        assert client.get("/api/v1/configs/training").json()["version"] == 1

    def test_patch_to_seven_grade_scale(self, client):
        response = client.patch(
            "/api/v1/configs/training",
            json={
                "scale": {"grades": ["A", "B", "C", "D", "E", "F", "G"]},
                "boundaries": [3.0, 2.0, 1.25, 0.8, 0.5, 0.25],
            },
            headers=qa_headers(),
        )
        assert response.status_code == 200
        assert len(response.json()["scale"]["grades"]) == 7
        label = client.post(
            "/api/v1/labels/training",
            json={"model_id": "seven", "raw_values": {"co2e_kg": 10000.0}},
        ).json()
        assert label["overall_grade"] == "G"

    def test_metric_add_and_remove(self, client):
        response = client.patch(
            "/api/v1/configs/training",
            json={
                "remove_metrics": ["downloads"],
                "add_metrics": [
                    {
                        "id": "gpu_hours",
                        "direction": "lower_better",
                        "weight": 2.0,
                        "reference": 10.0,
                        "boundaries": [2.0, 1.25, 0.8, 0.5],
                        "phases": ["training"],
                    }
                ],
            },
            headers=qa_headers(),
        )
        assert response.status_code == 200
        ids = [m["id"] for m in response.json()["metrics"]]
        assert "gpu_hours" in ids and "downloads" not in ids


class TestPreview:
    def test_candidate_equals_current_matches_persisted_path(self, client):
        config = client.get("/api/v1/configs/training").json()
        raw = all_at_reference_report_from_config(config)
        preview = client.post(
            "/api/v1/configs/training/preview",
            json={"candidate_config": config, "sample_report": {"raw_values": raw}},
        )
        assert preview.status_code == 200
        persisted = client.post(
            "/api/v1/labels/training", json={"model_id": "p", "raw_values": raw}
        ).json()
        a, b = preview.json(), persisted
        for volatile in ("label_id", "created_at", "model_id"):
            a.pop(volatile), b.pop(volatile)
        b.pop("warnings", None)
        assert a == b

    def test_preview_does_not_persist(self, app, client):
        repository = app.state.repository
        before = repository.content_hash(families=FAMILIES)
        config = client.get("/api/v1/configs/training").json()
        client.post(
            "/api/v1/configs/training/preview",
            json={
                "candidate_config": config,
                "sample_report": {"raw_values": {"co2e_kg": 1.0}},
            },
        )
        assert repository.content_hash(families=FAMILIES) == before

    def test_doubling_weight_shifts_score(self, client):
        config = client.get("/api/v1/configs/training").json()
        raw = {"co2e_kg": 100.0, "downloads": 10000.0}  # co2e grades E(4), downloads C(2)
        base = client.post(
            "/api/v1/configs/training/preview",
            json={"candidate_config": config, "sample_report": {"raw_values": raw}},
        ).json()
        assert base["overall_score"] == pytest.approx(3.0)  # (4 + 2) / 2
        for metric in config["metrics"]:
            if metric["id"] == "co2e_kg":
                metric["weight"] = 2.0
        shifted = client.post(
            "/api/v1/configs/training/preview",
            json={"candidate_config": config, "sample_report": {"raw_values": raw}},
        ).json()
        assert shifted["overall_score"] == pytest.approx((2 * 4 + 2) / 3)

    def test_invalid_candidate_400(self, client):
        config = client.get("/api/v1/configs/training").json()
        for metric in config["metrics"]:
            metric["weight"] = 0.0
        response = client.post(
            "/api/v1/configs/training/preview",
            json={"candidate_config": config, "sample_report": {"raw_values": {}}},
        )
        assert response.status_code == 400


class TestSyncEndpoint:
    def test_sync_fixture_provider(self, fixture_dir):
        app = make_app(fixtures={"fixture": str(fixture_dir)})
        from fastapi.testclient import TestClient

        with TestClient(app) as client:
            response = client.post("/api/v1/sync/fixture", headers=qa_headers())
            assert response.status_code == 202
            body = response.json()
            assert body["created"] == 5
            assert client.get("/api/v1/models").json()["total"] == 5

    def test_requires_token(self, client):
        assert client.post("/api/v1/sync/fixture").status_code == 401

    def test_unknown_provider_404(self, client):
        response = client.post("/api/v1/sync/nope", headers=qa_headers())
        assert response.status_code == 404

    def test_concurrent_sync_conflict(self, fixture_dir):
        app = make_app(fixtures={"fixture": str(fixture_dir)})
        from fastapi.testclient import TestClient

        with TestClient(app) as client:
            with connectors._sync_lock("fixture"):
                response = client.post("/api/v1/sync/fixture", headers=qa_headers())
            assert response.status_code == 409
            assert response.json()["code"] == "sync_already_running"

    def test_limit_parameter(self, fixture_dir):
        app = make_app(fixtures={"fixture": str(fixture_dir)})
        from fastapi.testclient import TestClient

        with TestClient(app) as client:
            response = client.post("/api/v1/sync/fixture?limit=2", headers=qa_headers())
            assert response.json()["created"] == 2


class TestDeleteModel:
    def test_delete_cascades_and_404s(self, client):
        client.post("/api/v1/labels/training", json={"model_id": "victim", "raw_values": {"co2e_kg": 1.0}})
        response = client.delete("/api/v1/models/local:victim", headers=qa_headers())
        assert response.status_code == 204
        assert client.get("/api/v1/models/local:victim/labels").status_code == 404

    def test_delete_unknown_404(self, client):
        assert client.delete("/api/v1/models/local:ghost", headers=qa_headers()).status_code == 404

    def test_delete_requires_token(self, client):
        assert client.delete("/api/v1/models/local:x").status_code == 401


class TestContracts:
    def test_get_endpoints_do_not_mutate(self, app, client):
        client.post("/api/v1/labels/training", json={"model_id": "m", "raw_values": {"co2e_kg": 1.0}})
        repository = app.state.repository
        before = repository.content_hash(families=FAMILIES)
        label_id = client.get("/api/v1/labels").json()["items"][0]["label_id"]
        client.get("/api/v1/configs/training")
        client.get("/api/v1/configs/training/versions/1")
        client.get("/api/v1/models")
        client.get("/api/v1/models/local:m/labels")
        client.get(f"/api/v1/labels/{label_id}")
        client.get("/api/v1/schema")
        client.get("/api/v1/labels/nope")
        assert repository.content_hash(families=FAMILIES) == before

    def test_every_non_2xx_is_an_envelope(self, client):
        cases = [
            client.get("/api/v1/labels/nope"),
            client.post("/api/v1/labels/training", json={"model_id": "m", "raw_values": {}}),
            client.put("/api/v1/configs/training", json={}),
            client.post("/api/v1/sync/nope", headers=qa_headers()),
            client.get("/api/v1/no/such/route"),
            client.post("/api/v1/labels/training", json={"bad": "shape"}),
        ]
        for response in cases:
            assert response.status_code >= 400
            body = response.json()
            assert set(body) >= {"code", "message"}, body

    def test_label_schema_published_and_valid(self, client):
        import jsonschema

        schemas = client.get("/api/v1/schema").json()
        label = client.post(
            "/api/v1/labels/training",
            json={"model_id": "s", "raw_values": {"co2e_kg": 1.0}},
        ).json()
        jsonschema.validate(label, schemas["energy_label"])
        config = client.get("/api/v1/configs/training").json()
        jsonschema.validate(config, schemas["efficiency_config"])
