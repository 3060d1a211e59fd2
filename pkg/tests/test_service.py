"""Tests for the HTTP prediction service."""

import numpy as np
import pytest
from fastapi.testclient import TestClient

from menuperf.features import HashEmbedding, WaisScore, assemble_features
from menuperf.recurrent import TrainConfig, init_weights, predict_session, save_weights
from menuperf.service import ModelStore, create_app
from menuperf.taxonomy import MenuLevel, SelectionTask, bundled_taxonomy


def seeded_weights(seed: int = 0):
    cfg = TrainConfig(seed=seed)
    w = init_weights(cfg)
    w.target_mean = np.array([2.0, 3.0])
    w.target_std = np.array([0.7, 1.1])
    return w


@pytest.fixture()
def model_dir(tmp_path):
    d = tmp_path / "models"
    d.mkdir()
    save_weights(seeded_weights(), d / "demo.w")
    return d


@pytest.fixture()
def client(model_dir):
    app = create_app(model_dir=model_dir)
    return TestClient(app)


def task_payload(depth: int = 2, target_index: int = 1) -> dict:
    level = {"items": ["alpha", "beta", "gamma"], "target_index": target_index}
    return {"levels": [dict(level) for _ in range(depth)]}


def predict_body(**overrides) -> dict:
    body = {
        "model": "demo.w",
        "wais": {"symbol_search": 30, "symbol_coding": 70},
        "tasks": [task_payload()],
    }
    body.update(overrides)
    return body


class TestHealthAndModels:
    def test_health_ok(self, client):
        r = client.get("/health")
        assert r.status_code == 200
        body = r.json()
        assert body["status"] == "ok"
        ids = [m["id"] for m in body["models"]]
        assert ids == ["demo.w"]
        assert body["models"][0]["loadable"] is True
        assert body["models"][0]["window"] == 15

    def test_health_without_models(self, tmp_path):
        app = create_app(model_dir=tmp_path / "empty")
        r = TestClient(app).get("/health")
        assert r.status_code == 200
        assert r.json() == {"status": "no model", "models": []}

    def test_models_lists_only_weight_files(self, model_dir):
        (model_dir / "notes.txt").write_text("not a model")
        app = create_app(model_dir=model_dir)
        r = TestClient(app).get("/models")
        assert [m["id"] for m in r.json()["models"]] == ["demo.w"]

    def test_unloadable_file_reported(self, model_dir):
        (model_dir / "junk.w").write_bytes(b"garbage")
        app = create_app(model_dir=model_dir)
        body = TestClient(app).get("/health").json()
        by_id = {m["id"]: m for m in body["models"]}
        assert by_id["junk.w"]["loadable"] is False
        assert body["status"] == "ok"  # demo.w still usable


class TestPredict:
    def test_prediction_matches_library(self, client, model_dir):
        r = client.post("/predict", json=predict_body(tasks=[task_payload(), task_payload(3)]))
        assert r.status_code == 200
        body = r.json()
        assert body["model"] == "demo.w"
        assert len(body["predictions"]) == 2

        from menuperf.recurrent import load_weights

        weights = load_weights(model_dir / "demo.w")
        wais = WaisScore(30, 70)
        provider = HashEmbedding()
        tasks = [
            SelectionTask(levels=[MenuLevel(["alpha", "beta", "gamma"], 1)] * 2),
            SelectionTask(levels=[MenuLevel(["alpha", "beta", "gamma"], 1)] * 3),
        ]
        feats = [assemble_features(t, wais, provider) for t in tasks]
        want = predict_session(feats, weights)
        for got, p in zip(body["predictions"], want):
            assert got["ce"] == p.ce
            assert got["pt"] == p.pt

    def test_history_shifts_window(self, client):
        bare = client.post("/predict", json=predict_body()).json()["predictions"]
        with_history = client.post(
            "/predict",
            json=predict_body(history=[task_payload(3, 0)]),
        ).json()["predictions"]
        assert len(with_history) == 1
        assert with_history[0] != bare[0]

    def test_history_predictions_not_returned(self, client):
        body = predict_body(history=[task_payload(), task_payload()], tasks=[task_payload(3)])
        preds = client.post("/predict", json=body).json()["predictions"]
        assert len(preds) == 1

    def test_unknown_model_404(self, client):
        r = client.post("/predict", json=predict_body(model="missing.w"))
        assert r.status_code == 404
        assert "missing.w" in r.json()["error"]

    def test_path_traversal_404(self, client):
        r = client.post("/predict", json=predict_body(model="../demo.w"))
        assert r.status_code == 404

    def test_locked_model_409(self, client, model_dir):
        (model_dir / "demo.w.lock").write_text("1234")
        r = client.post("/predict", json=predict_body())
        assert r.status_code == 409
        assert "locked" in r.json()["error"]

    def test_wais_out_of_range_400(self, client):
        r = client.post(
            "/predict",
            json=predict_body(wais={"symbol_search": 64, "symbol_coding": 0}),
        )
        assert r.status_code == 400
        assert "invalid request" in r.json()["error"]

    def test_depth_one_task_400(self, client):
        r = client.post("/predict", json=predict_body(tasks=[task_payload(depth=1)]))
        assert r.status_code == 400
        assert "depth" in r.json()["error"]

    def test_depth_four_task_400(self, client):
        r = client.post("/predict", json=predict_body(tasks=[task_payload(depth=4)]))
        assert r.status_code == 400

    def test_target_index_out_of_range_400(self, client):
        r = client.post("/predict", json=predict_body(tasks=[task_payload(target_index=7)]))
        assert r.status_code == 400

    def test_bad_label_400(self, client):
        payload = {"levels": [
            {"items": ["ok", "bad|pipe"], "target_index": 0},
            {"items": ["x", "y"], "target_index": 1},
        ]}
        r = client.post("/predict", json=predict_body(tasks=[payload]))
        assert r.status_code == 400

    def test_empty_tasks_400(self, client):
        r = client.post("/predict", json=predict_body(tasks=[]))
        assert r.status_code == 400

    def test_missing_field_400(self, client):
        body = predict_body()
        del body["wais"]
        r = client.post("/predict", json=body)
        assert r.status_code == 400
        assert "wais" in r.json()["error"]

    def test_oversized_history_400(self, client):
        r = client.post("/predict", json=predict_body(history=[task_payload()] * 201))
        assert r.status_code == 400

    def test_client_prompt_is_informational(self, client):
        a = task_payload()
        b = task_payload()
        b["prompt"] = "whatever the client wants to call it"
        ra = client.post("/predict", json=predict_body(tasks=[a])).json()
        rb = client.post("/predict", json=predict_body(tasks=[b])).json()
        assert ra["predictions"] == rb["predictions"]

    def test_model_reload_after_change(self, client, model_dir):
        import os
        import time

        before = client.post("/predict", json=predict_body()).json()["predictions"]
        new = seeded_weights(seed=99)
        save_weights(new, model_dir / "demo.w")
        # ensure a distinct mtime even on coarse filesystems
        stamp = time.time() + 2
        os.utime(model_dir / "demo.w", (stamp, stamp))
        after = client.post("/predict", json=predict_body()).json()["predictions"]
        assert before != after


class TestTasksSample:
    def test_sample_returns_tasks(self, client):
        r = client.post("/tasks/sample", json={"depth": 2, "count": 3, "seed": 1})
        assert r.status_code == 200
        tasks = r.json()["tasks"]
        assert len(tasks) == 3
        for t in tasks:
            assert len(t["levels"]) == 2
            assert t["prompt"]

    def test_sample_deterministic(self, client):
        a = client.post("/tasks/sample", json={"seed": 5, "count": 2}).json()
        b = client.post("/tasks/sample", json={"seed": 5, "count": 2}).json()
        assert a == b

    def test_bad_depth_400(self, client):
        r = client.post("/tasks/sample", json={"depth": 9})
        assert r.status_code == 400

    def test_count_capped(self, client):
        r = client.post("/tasks/sample", json={"count": 1001})
        assert r.status_code == 400


class TestModelStore:
    def test_resolve_rejects_traversal(self, model_dir):
        store = ModelStore(model_dir)
        with pytest.raises(KeyError):
            store._resolve("../x.w")

    def test_get_unknown_raises_keyerror(self, model_dir):
        store = ModelStore(model_dir)
        with pytest.raises(KeyError):
            store.get("nope.w")

    def test_cache_hit_returns_same_object(self, model_dir):
        store = ModelStore(model_dir)
        a = store.get("demo.w")
        b = store.get("demo.w")
        assert a is b

    def test_missing_dir_lists_nothing(self, tmp_path):
        store = ModelStore(tmp_path / "absent")
        assert store.list_files() == []
