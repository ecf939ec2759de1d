"""Versioned binary container for trained models.

Layout: magic ``RTMC`` + uint32 version + uint64 header length + JSON
header + tensor payload + sha256 digest of everything before it.  Tensors
are stored as little-endian 64-bit reals in header manifest order; integer
tensors round-trip exactly through float64.  A digest mismatch or truncated
file loads as CorruptContainer, an unknown version as VersionMismatch.
"""
from __future__ import annotations

import hashlib
import json
import struct
from dataclasses import asdict
from pathlib import Path

import numpy as np

from ..errors import CorruptContainer, VersionMismatch
from ..textprep import IdfTable, Vocabulary
from .base import Featurizer, Hyperparameters, TrainedModel
from .cnn import ConvNetwork
from .cosine import CosineCentroid
from .forest import RandomForest
from .logistic import LogisticRegression
from .lstm import LstmNetwork
from .mnb import MultinomialNB
from .svc import LinearSVC

MAGIC = b"RTMC"
CONTAINER_VERSION = 1

ESTIMATOR_CLASSES = {
    "mnb": MultinomialNB,
    "lr": LogisticRegression,
    "svc": LinearSVC,
    "cs": CosineCentroid,
    "rf": RandomForest,
    "lstm": LstmNetwork,
    "cnn": ConvNetwork,
}


def _featurizer_header(featurizer: Featurizer) -> tuple[dict, dict[str, np.ndarray]]:
    vocab = featurizer.vocab
    tokens = [None] * vocab.size
    for token, idx in vocab.token_to_index.items():
        tokens[idx - 1] = token
    header = {
        "kind": featurizer.kind,
        "tokens": tokens,
        "max_size": vocab.max_size,
        "max_len": featurizer.max_len,
        "n_docs": featurizer.idf.n_docs if featurizer.idf is not None else None,
    }
    tensors = {}
    if featurizer.idf is not None:
        tensors["featurizer.idf"] = featurizer.idf.idf
    return header, tensors


def _featurizer_from_header(header: dict, tensors: dict[str, np.ndarray]) -> Featurizer:
    vocab = Vocabulary(
        {t: i for i, t in enumerate(header["tokens"], start=1)},
        header["max_size"],
    )
    idf = None
    if header["n_docs"] is not None:
        idf = IdfTable(vocab=vocab, idf=tensors["featurizer.idf"], n_docs=header["n_docs"])
    return Featurizer(header["kind"], vocab, idf=idf, max_len=header["max_len"])


def save_model(model: TrainedModel, path: str | Path) -> None:
    est_meta, est_tensors = model.estimator.state()
    feat_header, feat_tensors = _featurizer_header(model.featurizer)
    tensors: dict[str, np.ndarray] = {}
    tensors.update(feat_tensors)
    tensors.update({f"estimator.{k}": v for k, v in est_tensors.items()})
    manifest = [
        {"name": name, "shape": list(arr.shape),
         "dtype": "i8" if np.issubdtype(arr.dtype, np.integer) else "f8"}
        for name, arr in tensors.items()
    ]
    header = {
        "kind": model.kind,
        "pretrained": model.pretrained,
        "hyperparams": asdict(model.hyperparams),
        "role_order": list(model.role_order),
        "featurizer": feat_header,
        "estimator_meta": est_meta,
        "history": model.history,
        "project_roles": {k: list(v) for k, v in model.project_roles.items()},
        "tensors": manifest,
    }
    header_bytes = json.dumps(header, sort_keys=True).encode("utf-8")
    parts = [
        MAGIC,
        struct.pack("<I", CONTAINER_VERSION),
        struct.pack("<Q", len(header_bytes)),
        header_bytes,
    ]
    for name, arr in tensors.items():
        parts.append(np.ascontiguousarray(arr, dtype="<f8").tobytes())
    body = b"".join(parts)
    digest = hashlib.sha256(body).digest()
    Path(path).write_bytes(body + digest)


def load_model(path: str | Path) -> TrainedModel:
    raw = Path(path).read_bytes()
    if len(raw) < len(MAGIC) + 4 + 8 + 32:
        raise CorruptContainer(f"{path}: file too short to be a model container")
    if raw[: len(MAGIC)] != MAGIC:
        raise CorruptContainer(f"{path}: bad magic bytes")
    (version,) = struct.unpack_from("<I", raw, len(MAGIC))
    if version != CONTAINER_VERSION:
        raise VersionMismatch(version, CONTAINER_VERSION)
    body, digest = raw[:-32], raw[-32:]
    if hashlib.sha256(body).digest() != digest:
        raise CorruptContainer(f"{path}: digest check failed")
    offset = len(MAGIC) + 4
    (header_len,) = struct.unpack_from("<Q", body, offset)
    offset += 8
    try:
        header = json.loads(body[offset:offset + header_len].decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise CorruptContainer(f"{path}: unreadable header ({exc})") from None
    offset += header_len

    tensors: dict[str, np.ndarray] = {}
    for entry in header["tensors"]:
        count = int(np.prod(entry["shape"])) if entry["shape"] else 1
        nbytes = count * 8
        if offset + nbytes > len(body):
            raise CorruptContainer(f"{path}: tensor payload truncated at {entry['name']}")
        arr = np.frombuffer(body, dtype="<f8", count=count, offset=offset).reshape(entry["shape"])
        offset += nbytes
        if entry["dtype"] == "i8":
            arr = arr.astype(np.int64)
        else:
            arr = arr.copy()
        tensors[entry["name"]] = arr
    if offset != len(body):
        raise CorruptContainer(f"{path}: {len(body) - offset} unexpected trailing bytes")

    featurizer = _featurizer_from_header(
        header["featurizer"],
        {k: v for k, v in tensors.items() if k.startswith("featurizer.")},
    )
    est_cls = ESTIMATOR_CLASSES[header["kind"]]
    estimator = est_cls.from_state(
        header["estimator_meta"],
        {k[len("estimator."):]: v for k, v in tensors.items() if k.startswith("estimator.")},
    )
    history = header["history"]
    return TrainedModel(
        kind=header["kind"],
        featurizer=featurizer,
        estimator=estimator,
        hyperparams=Hyperparameters(**header["hyperparams"]),
        pretrained=header["pretrained"],
        history=[tuple(h) for h in history] if history is not None else None,
        role_order=tuple(header["role_order"]),
        project_roles={k: tuple(v) for k, v in header["project_roles"].items()},
    )
