"""Model selection and benchmarking: K-fold CV, accuracy, confusion stats,
hold-out evaluation, and the cross-model benchmark report."""
from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .corpus import Corpus, N_ROLES, RoleLabel, split_train_validation
from .errors import (
    EmptyInput,
    EmptyValidation,
    KTooLarge,
    LengthMismatch,
    NoHistory,
    RoleTriageError,
)
from .models import (
    Hyperparameters,
    MODEL_KINDS,
    NEURAL_KINDS,
    TrainedModel,
    mean_cross_entropy,
    train_on_titles,
    train_model,
)
from .seeding import derive_seed
from .textprep import one_hot_matrix


def accuracy(predictions: list, truths: list) -> float:
    """Micro accuracy: matching positions over total."""
    if len(predictions) != len(truths):
        raise LengthMismatch(f"{len(predictions)} predictions vs {len(truths)} truths")
    if not predictions:
        raise EmptyInput("accuracy of zero samples is undefined")
    hits = sum(1 for p, t in zip(predictions, truths) if p == t)
    return hits / len(predictions)


class ConfusionMatrix:
    """7x7 count matrix indexed [true, predicted] with per-class stats."""

    def __init__(self, counts: np.ndarray):
        self.counts = counts

    @classmethod
    def from_pairs(cls, predictions: list[RoleLabel], truths: list[RoleLabel]) -> "ConfusionMatrix":
        if len(predictions) != len(truths):
            raise LengthMismatch(f"{len(predictions)} predictions vs {len(truths)} truths")
        counts = np.zeros((N_ROLES, N_ROLES), dtype=np.int64)
        for p, t in zip(predictions, truths):
            counts[t.index, p.index] += 1
        return cls(counts)

    @property
    def total(self) -> int:
        return int(self.counts.sum())

    def tp(self, x: int) -> int:
        return int(self.counts[x, x])

    def fn(self, x: int) -> int:
        return int(self.counts[x].sum() - self.counts[x, x])

    def fp(self, x: int) -> int:
        return int(self.counts[:, x].sum() - self.counts[x, x])

    def tn(self, x: int) -> int:
        return self.total - self.tp(x) - self.fn(x) - self.fp(x)

    def micro_accuracy(self) -> float:
        if self.total == 0:
            raise EmptyInput("empty confusion matrix")
        return float(np.trace(self.counts)) / self.total

    def per_class_accuracy(self) -> float:
        """Sum over classes of (TP+TN)/(TP+TN+FP+FN).

        One-vs-rest accuracies summed without dividing by the class count;
        exceeds 1 for more than one class.  Kept alongside the micro
        accuracy, which is the headline number.
        """
        if self.total == 0:
            raise EmptyInput("empty confusion matrix")
        return float(sum((self.tp(x) + self.tn(x)) / self.total for x in range(N_ROLES)))


@dataclass(frozen=True)
class FoldSplit:
    folds: tuple[np.ndarray, ...]

    @property
    def k(self) -> int:
        return len(self.folds)

    def train_indices(self, fold: int) -> np.ndarray:
        return np.concatenate([f for i, f in enumerate(self.folds) if i != fold])


def kfold_split(n: int, k: int, labels: list, seed: int) -> FoldSplit:
    """Stratified, seeded K folds.

    Samples of each class are shuffled and dealt to folds through one
    cyclically advancing pointer shared across classes, which makes fold
    sizes differ by at most 1 overall and per class.
    """
    if not 2 <= k <= n:
        raise KTooLarge(f"need 2 <= K <= n, got K={k}, n={n}")
    if len(labels) != n:
        raise LengthMismatch(f"{len(labels)} labels for n={n}")
    rng = np.random.default_rng(seed)
    by_class: dict = {}
    for i, label in enumerate(labels):
        by_class.setdefault(label, []).append(i)
    folds: list[list[int]] = [[] for _ in range(k)]
    pointer = 0
    for label in sorted(by_class, key=repr):
        members = np.array(by_class[label])
        rng.shuffle(members)
        for idx in members:
            folds[pointer % k].append(int(idx))
            pointer += 1
    return FoldSplit(tuple(np.array(sorted(f), dtype=np.int64) for f in folds))


@dataclass
class CvReport:
    kind: str
    k: int
    fold_accuracies: list[float]  # winner's per-fold accuracy
    winner: Hyperparameters
    grid_means: list[float]  # mean accuracy per grid point, grid order

    @property
    def mean(self) -> float:
        return float(np.mean(self.fold_accuracies))

    @property
    def std(self) -> float:
        return float(np.std(self.fold_accuracies))

    def to_text(self) -> str:
        lines = [f"kind\t{self.kind}", f"k\t{self.k}"]
        for i, acc in enumerate(self.fold_accuracies):
            lines.append(f"fold{i}\t{acc:.6f}")
        lines.append(f"mean\t{self.mean:.6f}")
        lines.append(f"std\t{self.std:.6f}")
        return "\n".join(lines) + "\n"


class FoldTrainingError(RoleTriageError):
    def __init__(self, fold: int, cause: Exception):
        super().__init__(f"fold {fold}: {cause}")
        self.fold = fold
        self.cause = cause


def _fit_and_score(kind, titles, roles, fold_titles, fold_roles, hp) -> tuple[TrainedModel, float]:
    model = train_on_titles(kind, titles, roles, hp)
    probs = model.predict_proba_titles(fold_titles)
    preds = [RoleLabel.from_index(int(i)) for i in probs.argmax(axis=1)]
    return model, accuracy(preds, fold_roles)


def cross_validate(kind: str, corpus: Corpus, k: int,
                   grid: list[Hyperparameters] | None = None,
                   seed: int = 42) -> CvReport:
    """Grid search by stratified K-fold accuracy.

    Winner = highest mean fold accuracy; ties go to fewer trainable
    parameters, then grid order.
    """
    grid = grid or [Hyperparameters(seed=seed)]
    titles, roles = corpus.titles(), corpus.roles()
    split = kfold_split(len(corpus), k, roles, derive_seed(seed, "kfold"))
    results = []  # (mean_acc, param_count, grid_pos, fold_accs)
    for pos, hp in enumerate(grid):
        fold_accs = []
        param_count = 0
        for fold in range(k):
            train_idx = split.train_indices(fold)
            held_idx = split.folds[fold]
            fold_hp = hp.override(seed=derive_seed(hp.seed, f"fold-{fold}"))
            try:
                model, acc = _fit_and_score(
                    kind,
                    [titles[i] for i in train_idx],
                    [roles[i] for i in train_idx],
                    [titles[i] for i in held_idx],
                    [roles[i] for i in held_idx],
                    fold_hp,
                )
            except Exception as exc:
                raise FoldTrainingError(fold, exc) from exc
            fold_accs.append(acc)
            param_count = model.param_count()
        results.append((float(np.mean(fold_accs)), param_count, pos, fold_accs))
    best = max(results, key=lambda r: (r[0], -r[1], -r[2]))
    return CvReport(
        kind=kind,
        k=k,
        fold_accuracies=best[3],
        winner=grid[best[2]],
        grid_means=[r[0] for r in sorted(results, key=lambda r: r[2])],
    )


def evaluate_holdout(model: TrainedModel, validation: Corpus):
    """(loss, accuracy, ConfusionMatrix) on held-out records.

    Loss is the mean categorical cross-entropy, reported for the neural
    kinds only.
    """
    if len(validation) == 0:
        raise EmptyValidation("validation corpus is empty")
    probs = model.predict_proba_titles(validation.titles())
    truths = validation.roles()
    preds = [RoleLabel.from_index(int(i)) for i in probs.argmax(axis=1)]
    loss = None
    if model.kind in NEURAL_KINDS:
        loss = mean_cross_entropy(one_hot_matrix(truths), probs)
    cm = ConfusionMatrix.from_pairs(preds, truths)
    return loss, accuracy(preds, truths), cm


@dataclass
class BenchmarkRow:
    kind: str
    pretrained: bool
    loss: float | None = None
    accuracy: float | None = None
    error: str | None = None
    per_project: dict[str, float] | None = None


@dataclass
class BenchmarkReport:
    rows: list[BenchmarkRow]
    seed: int
    train_fraction: float
    n_train: int
    n_validation: int
    project_ids: list[str] = field(default_factory=list)

    def row(self, kind: str, pretrained: bool = False) -> BenchmarkRow:
        for r in self.rows:
            if r.kind == kind and r.pretrained == pretrained:
                return r
        raise KeyError(f"no row for kind={kind!r} pretrained={pretrained}")

    def to_text(self) -> str:
        lines = ["kind\tpretrained\tloss\taccuracy"]
        for r in self.rows:
            loss = f"{r.loss:.6f}" if r.loss is not None else "NA"
            acc = f"{r.accuracy:.6f}" if r.accuracy is not None else "NA"
            lines.append(f"{r.kind}\t{str(r.pretrained).lower()}\t{loss}\t{acc}")
        return "\n".join(lines) + "\n"

    def per_project_text(self) -> str:
        """Accuracy-by-project table: one row per project, one column per
        trained model."""
        cols = [r for r in self.rows if r.per_project is not None]
        header = "project\t" + "\t".join(
            f"{r.kind}{'+p' if r.pretrained else ''}" for r in cols
        )
        lines = [header]
        for pid in self.project_ids:
            cells = [
                f"{r.per_project[pid]:.6f}" if pid in r.per_project else "NA"
                for r in cols
            ]
            lines.append(pid + "\t" + "\t".join(cells))
        return "\n".join(lines) + "\n"

    def to_json(self) -> str:
        payload = {
            "seed": self.seed,
            "train_fraction": self.train_fraction,
            "n_train": self.n_train,
            "n_validation": self.n_validation,
            "project_ids": self.project_ids,
            "rows": [
                {
                    "kind": r.kind,
                    "pretrained": r.pretrained,
                    "loss": r.loss,
                    "accuracy": r.accuracy,
                    "error": r.error,
                    "per_project": r.per_project,
                }
                for r in self.rows
            ],
        }
        return json.dumps(payload, sort_keys=True, indent=2) + "\n"


def benchmark(corpus: Corpus, kinds: tuple[str, ...] = MODEL_KINDS,
              embeddings_path=None, seed: int = 42, train_fraction: float = 0.67,
              hp: Hyperparameters | None = None, per_project: bool = False,
              rf_jobs: int = 1, keep_models: dict | None = None) -> BenchmarkReport:
    """Train every requested kind on one shared split and score the held-out
    part.  Neural kinds run twice (plain and pretrained) when an embeddings
    file is supplied.  A failing model becomes an annotated row instead of
    aborting the others."""
    base_hp = hp or Hyperparameters()
    train, valid = split_train_validation(
        corpus, train_fraction, derive_seed(seed, "benchmark-split")
    )
    project_ids = list(corpus.project_index) if per_project else []
    valid_by_project = {}
    if per_project:
        valid_by_project = {
            pid: [i for i, rec in enumerate(valid.records) if rec.project_id == pid]
            for pid in project_ids
        }

    rows: list[BenchmarkRow] = []
    for kind in kinds:
        variants = [False]
        if kind in NEURAL_KINDS and embeddings_path is not None:
            variants = [False, True]
        for pretrained in variants:
            row = BenchmarkRow(kind=kind, pretrained=pretrained)
            rows.append(row)
            model_hp = base_hp.override(
                seed=derive_seed(seed, f"benchmark-{kind}-{'p' if pretrained else 'np'}")
            )
            try:
                model = train_model(
                    kind, train, model_hp,
                    embeddings_path=embeddings_path if pretrained else None,
                    rf_jobs=rf_jobs,
                )
                loss, acc, _ = evaluate_holdout(model, valid)
            except Exception as exc:  # annotated, other rows continue
                row.error = f"{type(exc).__name__}: {exc}"
                continue
            row.loss = loss
            row.accuracy = acc
            if keep_models is not None:
                keep_models[(kind, pretrained)] = model
            if per_project:
                probs = model.predict_proba_titles(valid.titles())
                preds = probs.argmax(axis=1)
                truths = np.array([r.index for r in valid.roles()])
                row.per_project = {
                    pid: float((preds[idx] == truths[idx]).mean())
                    for pid, idx in valid_by_project.items()
                    if len(idx) > 0
                }
    return BenchmarkReport(
        rows=rows,
        seed=seed,
        train_fraction=train_fraction,
        n_train=len(train),
        n_validation=len(valid),
        project_ids=project_ids,
    )


def training_curves(model: TrainedModel) -> list[tuple[int, float, float]]:
    """Per-epoch (epoch, loss, accuracy) for neural kinds."""
    if model.history is None:
        raise NoHistory(f"{model.kind} records no epoch history")
    return [(i + 1, loss, acc) for i, (loss, acc) in enumerate(model.history)]


def curves_text(model: TrainedModel) -> str:
    lines = ["epoch\tloss\taccuracy"]
    for epoch, loss, acc in training_curves(model):
        lines.append(f"{epoch}\t{loss:.6f}\t{acc:.6f}")
    return "\n".join(lines) + "\n"
