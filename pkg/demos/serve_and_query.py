"""
Serving predictions over HTTP
=============================

The prediction service wraps a directory of trained weight files behind a
small JSON API. This walkthrough trains a throwaway model, mounts the app
in-process with a test client, and exercises every endpoint. A real
deployment runs the same app with `menuperf serve --model-dir models`.
"""

import tempfile
from pathlib import Path

from fastapi.testclient import TestClient

from menuperf import (
    HashEmbedding,
    TrainConfig,
    build_training_set,
    bundled_taxonomy,
    generate_corpus,
    save_weights,
    train,
)
from menuperf.service import create_app

taxonomy = bundled_taxonomy()
train_sessions, _ = generate_corpus(taxonomy, n_train_users=6, n_test_users=1, seed=0)
provider = HashEmbedding()
config = TrainConfig(epochs=40)
weights, _ = train(build_training_set(train_sessions, provider), config)

with tempfile.TemporaryDirectory() as d:
    model_dir = Path(d)
    save_weights(weights, model_dir / "demo.w")
    app = create_app(model_dir=model_dir, taxonomy=taxonomy, provider=provider)
    client = TestClient(app)

    # GET /health reports whether any model is usable.
    print("GET /health ->", client.get("/health").json()["status"])

    # GET /models lists weight files with their dimensions.
    meta = client.get("/models").json()["models"][0]
    print(f"GET /models -> {meta['id']}: window {meta['window']}, hidden {meta['hidden_dim']}")

    # POST /tasks/sample draws selection tasks from the served taxonomy,
    # handy for building a what-if request without local files.
    sampled = client.post("/tasks/sample", json={"depth": 2, "count": 2, "seed": 4}).json()
    for t in sampled["tasks"]:
        print("sampled task:", t["prompt"])

    # POST /predict scores a menu design for one user profile. `tasks` is the
    # sequence to predict; `history` (optional) lists tasks the user already
    # performed, which shifts the practice window without being re-predicted.
    body = {
        "model": "demo.w",
        "wais": {"symbol_search": 38, "symbol_coding": 85},
        "tasks": sampled["tasks"],
    }
    response = client.post("/predict", json=body).json()
    for t, p in zip(sampled["tasks"], response["predictions"]):
        print(f"  {t['prompt']}: CE {p['ce']:.2f}  PT {p['pt']:.2f} s")

    # Schema violations come back as 400 with one explanatory line.
    bad = client.post("/predict", json={**body, "wais": {"symbol_search": 999, "symbol_coding": 0}})
    print("out-of-range WAIS ->", bad.status_code, bad.json()["error"])
