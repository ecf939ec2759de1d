"""Deterministic synthetic corpora.

Two generators live here: a cleanly separable corpus (one unique keyword
family per role) used as ground truth in tests, and a harder ten-project
fixture dataset whose shape mirrors the published data (same project ids,
1,226 records, raw role labels that need generalizing) for exercising the
full benchmark pipeline offline.
"""
from __future__ import annotations

import csv
from pathlib import Path

import numpy as np

from .corpus import Corpus, RoleLabel, load_csv

ROLE_KEYWORDS: dict[RoleLabel, list[str]] = {
    RoleLabel.FRONT_END_DEVELOPER: [
        "navbar", "css", "button", "layout", "stylesheet", "widget", "banner", "responsive",
    ],
    RoleLabel.BACK_END_DEVELOPER: [
        "database", "query", "endpoint", "migration", "cache", "index", "schema", "auth",
    ],
    RoleLabel.DEVELOPER: [
        "refactor", "module", "merge", "debug", "compile", "library", "unittest", "pipeline",
    ],
    RoleLabel.PRODUCT_OWNER: [
        "backlog", "story", "priority", "roadmap", "scope", "requirement", "estimate", "release",
    ],
    RoleLabel.TEAM_CATALYST: [
        "standup", "sprint", "retrospective", "velocity", "planning", "impediment", "workshop", "kickoff",
    ],
    RoleLabel.CONTENT: [
        "article", "blog", "copy", "translation", "tutorial", "newsletter", "glossary", "wording",
    ],
    RoleLabel.STAKEHOLDER: [
        "invoice", "contract", "budget", "demo", "presentation", "approval", "quarterly", "vendor",
    ],
}

NOISE_WORDS = [
    "update", "new", "issue", "problem", "page", "item", "check", "change",
    "small", "quick", "task", "work", "fix", "add", "remove", "improve",
]

# raw labels per generalized role, as they would appear in tracker exports
RAW_LABELS: dict[RoleLabel, list[str]] = {
    RoleLabel.FRONT_END_DEVELOPER: ["Front", "UX", "UI Designer", "Front-end developer", "Designer"],
    RoleLabel.BACK_END_DEVELOPER: ["Back", "DB", "Back-end developer", "Backend"],
    RoleLabel.DEVELOPER: ["Developer", "Dev", "Full Stack", "Programmer"],
    RoleLabel.PRODUCT_OWNER: ["Product Owner", "PO"],
    RoleLabel.TEAM_CATALYST: ["Scrum Master", "Manager", "Project Manager"],
    RoleLabel.CONTENT: ["Writer", "Content", "Copywriter"],
    RoleLabel.STAKEHOLDER: ["Stakeholder", "Customer", "External"],
}

FIXTURE_PROJECT_IDS = [
    "221277", "289231", "221716", "66937", "129529",
    "93128", "90369", "52931", "125501", "182862",
]
FIXTURE_PROJECT_SIZES = [124, 130, 101, 116, 138, 120, 118, 127, 131, 121]  # sums to 1226


def make_separable_corpus(n_per_class: int = 50, seed: int = 42,
                          words_per_title: int = 4) -> tuple[list[str], list[RoleLabel]]:
    """Titles carrying two class-unique keywords plus shared noise words."""
    rng = np.random.default_rng(seed)
    titles, roles = [], []
    for role in RoleLabel:
        pool = ROLE_KEYWORDS[role]
        for _ in range(n_per_class):
            kws = rng.choice(pool, size=2, replace=False)
            noise = rng.choice(NOISE_WORDS, size=max(0, words_per_title - 2), replace=False)
            words = list(kws) + list(noise)
            titles.append(" ".join(words))
            roles.append(role)
    order = rng.permutation(len(titles))
    return [titles[i] for i in order], [roles[i] for i in order]


def _fixture_title(role: RoleLabel, rng: np.random.Generator, signal: float) -> str:
    """One task title: own-role keyword with probability ``signal``, a
    confusable other-role keyword otherwise, padded with noise."""
    roles = list(RoleLabel)
    words = []
    if rng.random() < signal:
        words.append(str(rng.choice(ROLE_KEYWORDS[role])))
    else:
        other = roles[int(rng.integers(0, len(roles)))]
        words.append(str(rng.choice(ROLE_KEYWORDS[other])))
    if rng.random() < 0.45:
        words.append(str(rng.choice(ROLE_KEYWORDS[role])))
    n_noise = int(rng.integers(1, 4))
    words.extend(rng.choice(NOISE_WORDS, size=n_noise, replace=False))
    rng.shuffle(words)
    return " ".join(words)


def write_fixture_dataset(directory: str | Path, seed: int = 7,
                          signal: float = 0.65) -> Path:
    """Write tasks.csv + projects_meta.csv + embeddings_50d.txt and return
    the tasks.csv path.  Fully determined by the seed."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    rng = np.random.default_rng(seed)
    roles = list(RoleLabel)

    rows = []
    meta_rows = []
    for pid, size in zip(FIXTURE_PROJECT_IDS, FIXTURE_PROJECT_SIZES):
        n_roles = int(rng.integers(4, 8))
        project_roles = list(rng.choice(roles, size=n_roles, replace=False))
        weights = rng.dirichlet(np.full(n_roles, 2.0))
        pname = f"project-{pid}"
        for _ in range(size):
            role = project_roles[int(rng.choice(n_roles, p=weights))]
            title = _fixture_title(role, rng, signal)
            raw = str(rng.choice(RAW_LABELS[role]))
            description = "" if rng.random() < 0.5 else f"details for {title.split()[0]}"
            rows.append([pid, pname, title, description, raw])
        meta_rows.append(
            [pid, size, int(rng.integers(5, 12)), int(rng.integers(5, 20)), n_roles]
        )

    tasks_path = directory / "tasks.csv"
    with open(tasks_path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["ProjectId", "ProjectName", "Title", "Description", "Role"])
        writer.writerows(rows)

    with open(directory / "projects_meta.csv", "w", encoding="utf-8") as fh:
        fh.write("project_id,task_count,member_count,sprint_count,role_count\n")
        for row in meta_rows:
            fh.write(",".join(str(v) for v in row) + "\n")

    _write_fixture_embeddings(directory / "embeddings_50d.txt", seed)
    return tasks_path


def _write_fixture_embeddings(path: Path, seed: int, dim: int = 50) -> None:
    """Word2vec-text vectors for every generator word; role keywords of one
    role share a direction so pre-training carries usable signal."""
    rng = np.random.default_rng(seed + 1)
    lines = []
    for role in RoleLabel:
        center = rng.normal(0.0, 1.0, size=dim)
        for word in ROLE_KEYWORDS[role]:
            vec = center + rng.normal(0.0, 0.3, size=dim)
            lines.append(word + " " + " ".join(f"{v:.5f}" for v in vec))
    for word in NOISE_WORDS:
        vec = rng.normal(0.0, 0.5, size=dim)
        lines.append(word + " " + " ".join(f"{v:.5f}" for v in vec))
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(f"{len(lines)} {dim}\n")
        fh.write("\n".join(lines) + "\n")


def load_fixture_corpus(directory: str | Path) -> Corpus:
    return load_csv(Path(directory) / "tasks.csv")
