"""Task corpus: CSV loading, role generalization, project filtering, splits.

The on-disk format is one UTF-8 CSV with the exact header
``ProjectId,ProjectName,Title,Description,Role``.  Datasets published as one
file per project are handled by :func:`load_path`, which concatenates the
files of a directory in sorted-name order.
"""
from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field
from enum import Enum
from importlib import resources
from pathlib import Path

import numpy as np

from .errors import (
    EmptyCorpus,
    EmptyTitle,
    MissingHeader,
    MissingMeta,
    UnknownProject,
    UnknownRole,
)

CSV_HEADER = ["ProjectId", "ProjectName", "Title", "Description", "Role"]


class RoleLabel(Enum):
    """The seven generalized team roles, with stable indices 0..6."""

    FRONT_END_DEVELOPER = ("FrontEndDeveloper", 0)
    BACK_END_DEVELOPER = ("BackEndDeveloper", 1)
    DEVELOPER = ("Developer", 2)
    PRODUCT_OWNER = ("ProductOwner", 3)
    TEAM_CATALYST = ("TeamCatalyst", 4)
    CONTENT = ("Content", 5)
    STAKEHOLDER = ("Stakeholder", 6)

    def __init__(self, label: str, index: int):
        self.label = label
        self.index = index

    @classmethod
    def from_index(cls, index: int) -> "RoleLabel":
        return _BY_INDEX[index]

    @classmethod
    def from_name(cls, label: str) -> "RoleLabel":
        try:
            return _BY_NAME[label]
        except KeyError:
            raise UnknownRole(label) from None

    def __repr__(self) -> str:
        return f"RoleLabel.{self.name}"


_BY_INDEX = {r.index: r for r in RoleLabel}
_BY_NAME = {r.label: r for r in RoleLabel}

N_ROLES = len(RoleLabel)


@dataclass(frozen=True)
class TaskRecord:
    project_id: str
    project_name: str
    title: str
    description: str
    role: RoleLabel

    def __post_init__(self):
        if not self.title.strip():
            raise ValueError("TaskRecord title must be non-empty")


@dataclass(frozen=True)
class ProjectMeta:
    project_id: str
    task_count: int
    member_count: int
    sprint_count: int
    role_count: int

    def __post_init__(self):
        for name in ("task_count", "member_count", "sprint_count", "role_count"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be >= 0")
        if self.role_count > N_ROLES:
            raise ValueError(f"role_count must be <= {N_ROLES}")


@dataclass(frozen=True)
class Corpus:
    """Ordered task records plus an index of positions per project."""

    records: tuple[TaskRecord, ...]
    project_index: dict[str, tuple[int, ...]] = field(default_factory=dict)

    @classmethod
    def from_records(cls, records) -> "Corpus":
        records = tuple(records)
        index: dict[str, list[int]] = {}
        for pos, rec in enumerate(records):
            index.setdefault(rec.project_id, []).append(pos)
        return cls(records, {pid: tuple(v) for pid, v in index.items()})

    def __len__(self) -> int:
        return len(self.records)

    def titles(self) -> list[str]:
        return [r.title for r in self.records]

    def roles(self) -> list[RoleLabel]:
        return [r.role for r in self.records]

    def project_ids(self) -> list[str]:
        return list(self.project_index)


class RoleTable:
    """Raw label -> generalized role mapping, keyed case-insensitively."""

    def __init__(self, mapping: dict[str, str]):
        self._table = {
            raw.strip().lower(): RoleLabel.from_name(target)
            for raw, target in mapping.items()
        }

    @classmethod
    def default(cls) -> "RoleTable":
        text = resources.files("roletriage.data").joinpath("role_map.json").read_text("utf-8")
        return cls(json.loads(text))

    @classmethod
    def from_json(cls, path: str | Path) -> "RoleTable":
        with open(path, encoding="utf-8") as fh:
            return cls(json.load(fh))

    def lookup(self, raw_label: str) -> RoleLabel:
        key = raw_label.strip().lower()
        if key not in self._table:
            raise UnknownRole(raw_label)
        return self._table[key]


_DEFAULT_TABLE: RoleTable | None = None


def _default_table() -> RoleTable:
    global _DEFAULT_TABLE
    if _DEFAULT_TABLE is None:
        _DEFAULT_TABLE = RoleTable.default()
    return _DEFAULT_TABLE


def generalize_role(raw_label: str, table: RoleTable | None = None) -> RoleLabel:
    """Map a raw project role label onto one of the seven generalized roles.

    Matching is case-insensitive on the whitespace-trimmed label.  Raises
    UnknownRole when the label has no table entry; there is no implicit
    default bucket.
    """
    return (table or _default_table()).lookup(raw_label)


def load_csv(path: str | Path, table: RoleTable | None = None) -> Corpus:
    """Load one task CSV into a Corpus, generalizing roles on the way in.

    The header must match ``ProjectId,ProjectName,Title,Description,Role``
    exactly (order- and case-sensitive).  Malformed UTF-8 is a hard error.
    """
    path = Path(path)
    with open(path, encoding="utf-8", errors="strict", newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise MissingHeader(f"{path}: file is empty") from None
        if header != CSV_HEADER:
            raise MissingHeader(
                f"{path}: expected header {','.join(CSV_HEADER)}, got {','.join(header)}"
            )
        records = []
        for row_no, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != len(CSV_HEADER):
                raise MissingHeader(
                    f"{path}: row {row_no} has {len(row)} fields, expected {len(CSV_HEADER)}"
                )
            project_id, project_name, title, description, raw_role = row
            if not title.strip():
                raise EmptyTitle(row_no)
            try:
                role = generalize_role(raw_role, table)
            except UnknownRole:
                raise UnknownRole(raw_role, row=row_no) from None
            records.append(
                TaskRecord(project_id, project_name, title, description, role)
            )
    return Corpus.from_records(records)


def save_csv(corpus: Corpus, path: str | Path) -> None:
    """Serialize a Corpus back to the published CSV schema.

    Roles are written with their canonical generalized names, which the
    default role table maps back to themselves, so load(save(c)) == c.
    """
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(CSV_HEADER)
        for rec in corpus.records:
            writer.writerow(
                [rec.project_id, rec.project_name, rec.title, rec.description, rec.role.label]
            )


def load_path(path: str | Path, table: RoleTable | None = None) -> Corpus:
    """Load a single CSV file, or every ``*.csv`` of a directory merged in
    sorted-name order (the layout the per-project dataset ships in)."""
    path = Path(path)
    if path.is_dir():
        records: list[TaskRecord] = []
        files = sorted(path.glob("*.csv"))
        if not files:
            raise FileNotFoundError(f"{path}: no .csv files found")
        for f in files:
            records.extend(load_csv(f, table).records)
        return Corpus.from_records(records)
    return load_csv(path, table)


def load_project_meta(path: str | Path) -> list[ProjectMeta]:
    """Read the sidecar metadata file: one line per project with fields
    ``project_id,task_count,member_count,sprint_count,role_count``."""
    metas = []
    with open(path, encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            fields = [f.strip() for f in line.split(",")]
            if fields[0] == "project_id":  # optional header line
                continue
            if len(fields) != 5:
                raise ValueError(f"{path}: line {line_no} has {len(fields)} fields, expected 5")
            metas.append(
                ProjectMeta(
                    project_id=fields[0],
                    task_count=int(fields[1]),
                    member_count=int(fields[2]),
                    sprint_count=int(fields[3]),
                    role_count=int(fields[4]),
                )
            )
    return metas


# Selection thresholds for mature projects: the dataset keeps projects with
# >= 100 tasks, >= 5 members, >= 5 sprints, and more than 3 distinct roles.
MIN_TASKS = 100
MIN_MEMBERS = 5
MIN_SPRINTS = 5
MIN_ROLES_EXCLUSIVE = 3


def filter_projects(corpus: Corpus, meta: list[ProjectMeta]) -> Corpus:
    """Retain only projects that satisfy all four selection criteria."""
    by_id = {m.project_id: m for m in meta}
    for pid in corpus.project_index:
        if pid not in by_id:
            raise MissingMeta(pid)
    keep = {
        pid
        for pid, m in by_id.items()
        if m.task_count >= MIN_TASKS
        and m.member_count >= MIN_MEMBERS
        and m.sprint_count >= MIN_SPRINTS
        and m.role_count > MIN_ROLES_EXCLUSIVE
    }
    return Corpus.from_records(r for r in corpus.records if r.project_id in keep)


def split_train_validation(
    corpus: Corpus, train_fraction: float, seed: int
) -> tuple[Corpus, Corpus]:
    """Seeded uniform shuffle, then round(train_fraction * n) records train.

    The two parts are disjoint and cover the input; record order within each
    part follows the shuffled permutation.
    """
    if len(corpus) == 0:
        raise EmptyCorpus("cannot split an empty corpus")
    if not 0.0 < train_fraction < 1.0:
        raise ValueError("train_fraction must lie in (0, 1)")
    n = len(corpus)
    perm = np.random.default_rng(seed).permutation(n)
    n_train = int(round(train_fraction * n))
    train = Corpus.from_records(corpus.records[i] for i in perm[:n_train])
    valid = Corpus.from_records(corpus.records[i] for i in perm[n_train:])
    return train, valid


def project_role_set(corpus: Corpus, project_id: str) -> set[RoleLabel]:
    """Distinct roles appearing on a project's records."""
    if project_id not in corpus.project_index:
        raise UnknownProject(project_id)
    return {corpus.records[i].role for i in corpus.project_index[project_id]}


def project_role_frequencies(corpus: Corpus, project_id: str) -> dict[RoleLabel, int]:
    """How often each role appears on a project; available to callers that
    want to re-rank recommendations by in-project role prevalence."""
    if project_id not in corpus.project_index:
        raise UnknownProject(project_id)
    counts: dict[RoleLabel, int] = {}
    for i in corpus.project_index[project_id]:
        role = corpus.records[i].role
        counts[role] = counts.get(role, 0) + 1
    return counts
