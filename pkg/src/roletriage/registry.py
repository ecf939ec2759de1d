"""Model registry and feedback log: the service's durable state.

Registry layout: one ``<name>.model`` container plus ``<name>.meta.json``
per model under the registry root, and an ``ACTIVE`` pointer file.  The
feedback log is newline-delimited JSON, one event per line, append-only.
"""
from __future__ import annotations

import hashlib
import json
import threading
from datetime import datetime, timezone
from pathlib import Path

from .models import TrainedModel, load_model, save_model


class ModelRegistry:
    def __init__(self, root: str | Path):
        self.root = Path(root)
        self.root.mkdir(parents=True, exist_ok=True)
        self._lock = threading.Lock()

    def _model_path(self, name: str) -> Path:
        return self.root / f"{name}.model"

    def _meta_path(self, name: str) -> Path:
        return self.root / f"{name}.meta.json"

    def save(self, name: str, model: TrainedModel, metrics: dict | None = None,
             corpus_digest: str | None = None, overwrite: bool = False) -> dict:
        with self._lock:
            path = self._model_path(name)
            if path.exists() and not overwrite:
                raise FileExistsError(f"model {name!r} already registered")
            save_model(model, path)
            digest = hashlib.sha256(path.read_bytes()).hexdigest()
            meta = {
                "name": name,
                "kind": model.kind,
                "pretrained": model.pretrained,
                "created_at": datetime.now(timezone.utc).isoformat(),
                "corpus_digest": corpus_digest,
                "metrics": metrics or {},
                "model_version": f"{name}@{digest[:12]}",
                "projects": sorted(model.project_roles),
            }
            self._meta_path(name).write_text(
                json.dumps(meta, sort_keys=True, indent=2), encoding="utf-8"
            )
            return meta

    def load(self, name: str) -> TrainedModel:
        return load_model(self._model_path(name))

    def metadata(self, name: str) -> dict:
        return json.loads(self._meta_path(name).read_text(encoding="utf-8"))

    def entries(self) -> list[dict]:
        return [
            json.loads(p.read_text(encoding="utf-8"))
            for p in sorted(self.root.glob("*.meta.json"))
        ]

    def has(self, name: str) -> bool:
        return self._model_path(name).exists()

    def activate(self, name: str) -> None:
        if not self.has(name):
            raise KeyError(f"model {name!r} not in registry")
        (self.root / "ACTIVE").write_text(name, encoding="utf-8")

    def active_name(self) -> str | None:
        pointer = self.root / "ACTIVE"
        if not pointer.exists():
            return None
        name = pointer.read_text(encoding="utf-8").strip()
        return name if name and self.has(name) else None


class FeedbackLog:
    """Append-only NDJSON event log with idempotency-key deduplication."""

    def __init__(self, path: str | Path):
        self.path = Path(path)
        self.path.parent.mkdir(parents=True, exist_ok=True)
        self._lock = threading.Lock()
        self._seen_keys = {
            e["idempotency_key"] for e in self.replay() if e.get("idempotency_key")
        }

    def append(self, event: dict) -> bool:
        """Returns False when the event's idempotency key was already seen."""
        with self._lock:
            key = event.get("idempotency_key")
            if key and key in self._seen_keys:
                return False
            with open(self.path, "a", encoding="utf-8") as fh:
                fh.write(json.dumps(event, sort_keys=True) + "\n")
                fh.flush()
            if key:
                self._seen_keys.add(key)
            return True

    def replay(self) -> list[dict]:
        if not self.path.exists():
            return []
        events = []
        with open(self.path, encoding="utf-8") as fh:
            for line in fh:
                line = line.strip()
                if line:
                    events.append(json.loads(line))
        return events

    def counters(self) -> dict:
        """Accepted/overridden tallies per model version, rebuilt from the
        log so a replay always reconstructs identical numbers."""
        out: dict[str, dict[str, int]] = {}
        for event in self.replay():
            slot = out.setdefault(
                event["model_version"], {"accepted": 0, "overridden": 0}
            )
            slot["accepted" if event["accepted"] else "overridden"] += 1
        return out
