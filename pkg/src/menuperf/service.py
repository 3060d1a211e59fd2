"""HTTP prediction service.

Endpoints:
    GET  /health        status ("ok" or "no model") plus model metadata
    GET  /models        weight files available in the model directory
    POST /predict       per-task (ce, pt) predictions for a menu design
    POST /tasks/sample  sample selection tasks from the served taxonomy

/predict is read-only and side-effect free; any number of calls may run
concurrently against an immutable loaded model. Models are loaded lazily from
the model directory and cached; a cache entry is swapped atomically when the
file changes on disk. A `<model>.lock` file next to a weight file marks an
exclusive training job and yields 409 for that model.

Request and response bodies are JSON; schema violations return 400 with a
single explanatory message.
"""

from __future__ import annotations

import threading
from pathlib import Path

from fastapi import FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse
from pydantic import BaseModel, Field

from .evaluation import DEFAULT_NORMALIZERS
from .features import (
    EmbeddingProvider,
    HashEmbedding,
    OrganizationNormalizers,
    WaisScore,
    assemble_features,
)
from .recurrent import ModelError, load_weights, predict_session
from .taxonomy import (
    MenuLevel,
    SelectionTask,
    Taxonomy,
    TaxonomyError,
    bundled_taxonomy,
    sample_task,
)

__all__ = ["create_app", "ModelStore"]


class LevelIn(BaseModel):
    items: list[str] = Field(min_length=1)
    target_index: int = Field(ge=0)


class TaskIn(BaseModel):
    levels: list[LevelIn] = Field(min_length=1)
    prompt: str | None = None  # informational; predictions derive from levels alone

    def to_task(self) -> SelectionTask:
        levels = [MenuLevel(items=list(lv.items), target_index=lv.target_index) for lv in self.levels]
        return SelectionTask(levels=levels)


class WaisIn(BaseModel):
    symbol_search: int = Field(ge=0, le=63)
    symbol_coding: int = Field(ge=0, le=135)

    def to_wais(self) -> WaisScore:
        return WaisScore(self.symbol_search, self.symbol_coding)


class PredictRequest(BaseModel):
    model: str
    wais: WaisIn
    tasks: list[TaskIn] = Field(min_length=1)
    history: list[TaskIn] = Field(default_factory=list, max_length=200)


class SampleRequest(BaseModel):
    depth: int = 2
    count: int = Field(default=1, ge=1, le=1000)
    seed: int = 0
    max_items: int = Field(default=8, ge=2, le=64)


class ModelStore:
    """Lazy, thread-safe cache of weight files keyed by file name.

    Entries are invalidated by (mtime, size); reloading swaps the immutable
    weights object atomically under the lock, so concurrent /predict calls
    either see the old snapshot or the new one, never a mix.
    """

    def __init__(self, model_dir):
        self.model_dir = Path(model_dir)
        self._lock = threading.Lock()
        self._cache: dict[str, tuple[tuple, object]] = {}

    def list_files(self) -> list[Path]:
        if not self.model_dir.is_dir():
            return []
        return sorted(p for p in self.model_dir.iterdir() if p.suffix == ".w")

    def _resolve(self, model_id: str) -> Path:
        # forbid path traversal; model ids are bare file names
        name = Path(model_id).name
        if name != model_id:
            raise KeyError(model_id)
        return self.model_dir / name

    def locked(self, model_id: str) -> bool:
        path = self._resolve(model_id)
        return path.with_name(path.name + ".lock").exists()

    def get(self, model_id: str):
        path = self._resolve(model_id)
        try:
            stat = path.stat()
        except FileNotFoundError:
            raise KeyError(model_id)
        key = (stat.st_mtime_ns, stat.st_size)
        with self._lock:
            entry = self._cache.get(model_id)
            if entry is not None and entry[0] == key:
                return entry[1]
        weights = load_weights(path)
        with self._lock:
            self._cache[model_id] = (key, weights)
        return weights


def _task_payload(task: SelectionTask) -> dict:
    return {
        "prompt": task.prompt,
        "levels": [
            {"items": list(lv.items), "target_index": lv.target_index} for lv in task.levels
        ],
    }


def create_app(
    model_dir="models",
    taxonomy: Taxonomy | None = None,
    provider: EmbeddingProvider | None = None,
    normalizers: OrganizationNormalizers = DEFAULT_NORMALIZERS,
) -> FastAPI:
    store = ModelStore(model_dir)
    taxonomy = taxonomy or bundled_taxonomy()
    provider = provider or HashEmbedding()
    app = FastAPI(title="menuperf", docs_url=None, redoc_url=None)
    # read-only service without credentials; lets browser tools call it cross-origin
    app.add_middleware(CORSMiddleware, allow_origins=["*"], allow_methods=["*"], allow_headers=["*"])

    def _error(status: int, message: str) -> JSONResponse:
        return JSONResponse(status_code=status, content={"error": message})

    @app.exception_handler(RequestValidationError)
    async def _on_validation(request: Request, exc: RequestValidationError):
        first = exc.errors()[0] if exc.errors() else {}
        where = ".".join(str(p) for p in first.get("loc", ()))
        return _error(400, f"invalid request: {where}: {first.get('msg', 'schema violation')}")

    def _model_meta(path: Path) -> dict:
        meta = {"id": path.name, "locked": store.locked(path.name)}
        try:
            w = store.get(path.name)
        except (ModelError, OSError):
            meta["loadable"] = False
            return meta
        meta.update(
            loadable=True,
            input_dim=w.input_dim,
            hidden_dim=w.hidden_dim,
            output_dim=w.output_dim,
            window=w.window,
        )
        return meta

    @app.get("/health")
    def health():
        files = store.list_files()
        models = [_model_meta(p) for p in files]
        usable = [m for m in models if m.get("loadable")]
        return {"status": "ok" if usable else "no model", "models": models}

    @app.get("/models")
    def models():
        return {"models": [_model_meta(p) for p in store.list_files()]}

    @app.post("/predict")
    def predict(req: PredictRequest):
        try:
            if store.locked(req.model):
                return _error(409, f"model {req.model} is locked by a training job")
            weights = store.get(req.model)
        except KeyError:
            return _error(404, f"unknown model: {req.model}")
        except ModelError as e:
            return _error(400, f"model file unreadable: {e}")
        try:
            wais = req.wais.to_wais()
            sequence = [t.to_task() for t in req.history] + [t.to_task() for t in req.tasks]
            for task in sequence:
                task.validate()
        except ValueError as e:
            return _error(400, f"invalid request: {e}")
        feats = [assemble_features(t, wais, provider, normalizers) for t in sequence]
        preds = predict_session(feats, weights)[len(req.history) :]
        return {
            "model": req.model,
            "predictions": [{"ce": p.ce, "pt": p.pt} for p in preds],
        }

    @app.post("/tasks/sample")
    def tasks_sample(req: SampleRequest):
        try:
            tasks = [
                sample_task(taxonomy, req.depth, seed=req.seed + k, max_items=req.max_items)
                for k in range(req.count)
            ]
        except TaxonomyError as e:
            return _error(400, str(e))
        return {"tasks": [_task_payload(t) for t in tasks]}

    return app
