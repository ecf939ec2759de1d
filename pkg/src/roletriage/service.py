"""HTTP facade: recommendations, feedback capture, training jobs, registry.

Recommendation is synchronous (milliseconds), training runs in a single
background job (minutes).  The active model is swapped atomically; every
request observes exactly one model version.  All error bodies are
``{"code": ..., "message": ...}``.
"""
from __future__ import annotations

import hashlib
import itertools
import threading
from pathlib import Path

from fastapi import FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse, Response
from pydantic import BaseModel, Field

from .corpus import RoleLabel, load_path
from .errors import EmptyTitleAfterCleaning, UnknownRole
from .evaluation import evaluate_holdout
from .models import Hyperparameters, MODEL_KINDS, train_model
from .corpus import split_train_validation
from .recommender import recommend_top_k
from .registry import FeedbackLog, ModelRegistry
from .seeding import derive_seed

DEFAULT_K = 3


class RecommendRequest(BaseModel):
    project_id: str
    title: str = Field(min_length=1)
    k: int | None = Field(default=None, ge=1)


class FeedbackRequest(BaseModel):
    project_id: str
    title: str
    recommended_role: str
    accepted: bool
    override_role: str | None = None
    model_version: str
    timestamp: str | None = None
    idempotency_key: str | None = None


class TrainRequest(BaseModel):
    corpus_path: str
    kind: str
    name: str | None = None
    activate: bool = True
    hyperparams: dict = Field(default_factory=dict)


def _error(status: int, code: str, message: str) -> JSONResponse:
    return JSONResponse(status_code=status, content={"code": code, "message": message})


class _ActiveModel:
    """Atomic holder for (name, version, model)."""

    def __init__(self):
        self._lock = threading.Lock()
        self._value = None

    def get(self):
        with self._lock:
            return self._value

    def set(self, value):
        with self._lock:
            self._value = value


def create_app(registry_dir: str | Path, feedback_path: str | Path,
               default_k: int = DEFAULT_K) -> FastAPI:
    app = FastAPI(title="roletriage", docs_url=None, redoc_url=None)
    registry = ModelRegistry(registry_dir)
    feedback_log = FeedbackLog(feedback_path)
    active = _ActiveModel()
    train_lock = threading.Lock()
    jobs: dict[str, dict] = {}
    job_counter = itertools.count(1)

    name = registry.active_name()
    if name is not None:
        meta = registry.metadata(name)
        active.set((name, meta["model_version"], registry.load(name)))

    app.state.registry = registry
    app.state.feedback_log = feedback_log
    app.state.jobs = jobs
    app.state.train_lock = train_lock

    @app.exception_handler(RequestValidationError)
    async def malformed_body(request: Request, exc: RequestValidationError):
        return _error(400, "malformed_body", str(exc.errors()[:1]))

    @app.get("/api/health")
    def health():
        current = active.get()
        return {"status": "ok", "active_model": current[0] if current else None}

    @app.post("/api/recommend")
    def handle_recommend(body: RecommendRequest):
        current = active.get()  # one model version per request
        if current is None:
            return _error(503, "no_active_model", "no model has been trained or activated")
        name, version, model = current
        role_names = model.project_roles.get(body.project_id)
        unknown_project = role_names is None
        if unknown_project:
            roles = set(RoleLabel)
        else:
            roles = {RoleLabel.from_name(r) for r in role_names}
        try:
            rec = recommend_top_k(model, body.title, roles, body.k or default_k)
        except EmptyTitleAfterCleaning as exc:
            return _error(422, "empty_title_after_cleaning", str(exc))
        return {
            "chosen": rec.chosen.label,
            "alternatives": [
                {"role": role.label, "confidence": conf} for role, conf in rec.ranked
            ],
            "fallback_applied": rec.fallback_applied,
            "unknown_project": unknown_project,
            "model_version": version,
            "model_kind": rec.model_kind,
        }

    @app.post("/api/feedback", status_code=204)
    def handle_feedback(body: FeedbackRequest):
        if body.accepted == (body.override_role is not None):
            return _error(
                400, "feedback_invariant",
                "override_role must be present exactly when accepted is false",
            )
        try:
            RoleLabel.from_name(body.recommended_role)
            if body.override_role is not None:
                RoleLabel.from_name(body.override_role)
        except UnknownRole as exc:
            return _error(400, "unknown_role", str(exc))
        event = body.model_dump()
        if event["timestamp"] is None:
            from datetime import datetime, timezone

            event["timestamp"] = datetime.now(timezone.utc).isoformat()
        feedback_log.append(event)
        return Response(status_code=204)

    def _run_training(job: dict, req: TrainRequest):
        job["status"] = "running"
        try:
            corpus = load_path(req.corpus_path)
            hp = Hyperparameters(**req.hyperparams)
            train, valid = split_train_validation(
                corpus, 0.67, derive_seed(hp.seed, "service-split")
            )
            model = train_model(req.kind, train, hp)
            # fallback metadata must cover every project, not only train-split ones
            model.project_roles.update(
                {
                    pid: tuple(
                        sorted(
                            {corpus.records[i].role.label for i in idx}
                            | set(model.project_roles.get(pid, ()))
                        )
                    )
                    for pid, idx in corpus.project_index.items()
                }
            )
            loss, acc, _ = evaluate_holdout(model, valid)
            digest = hashlib.sha256(
                "\n".join(corpus.titles()).encode("utf-8")
            ).hexdigest()[:16]
            metrics = {"validation_accuracy": acc}
            if loss is not None:
                metrics["validation_loss"] = loss
            meta = registry.save(
                job["model_name"], model, metrics=metrics,
                corpus_digest=digest, overwrite=True,
            )
            if req.activate:
                registry.activate(job["model_name"])
                active.set((job["model_name"], meta["model_version"], model))
            job["metrics"] = metrics
            job["status"] = "succeeded"
        except Exception as exc:
            job["status"] = "failed"
            job["error"] = f"{type(exc).__name__}: {exc}"
        finally:
            train_lock.release()

    @app.post("/api/train", status_code=202)
    def handle_train(body: TrainRequest):
        if body.kind not in MODEL_KINDS:
            return _error(400, "invalid_kind", f"kind must be one of {list(MODEL_KINDS)}")
        if not Path(body.corpus_path).exists():
            return _error(400, "corpus_not_found", f"no such path: {body.corpus_path}")
        if not train_lock.acquire(blocking=False):
            return _error(409, "training_in_progress", "a training job is already running")
        job_id = f"job-{next(job_counter):04d}"
        job = {
            "job_id": job_id,
            "status": "queued",
            "kind": body.kind,
            "model_name": body.name or f"{body.kind}-{job_id}",
            "metrics": None,
            "error": None,
        }
        jobs[job_id] = job
        thread = threading.Thread(target=_run_training, args=(job, body), daemon=True)
        app.state.last_train_thread = thread
        thread.start()
        return {"job_id": job_id, "status": job["status"]}

    @app.get("/api/train/{job_id}")
    def train_status(job_id: str):
        job = jobs.get(job_id)
        if job is None:
            return _error(404, "unknown_job", f"no job {job_id!r}")
        return job

    @app.get("/api/models")
    def list_models():
        current = active.get()
        return {"models": registry.entries(), "active": current[0] if current else None}

    @app.post("/api/models/{name}/activate")
    def activate_model(name: str):
        if not registry.has(name):
            return _error(404, "unknown_model", f"no model {name!r} in registry")
        model = registry.load(name)
        meta = registry.metadata(name)
        registry.activate(name)
        active.set((name, meta["model_version"], model))
        return {"active": name, "model_version": meta["model_version"]}

    return app
