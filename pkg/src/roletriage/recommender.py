"""In-project role recommendation with confidence-ranked fallback.

The chosen role is the model's argmax when that role exists in the target
project; otherwise the highest-confidence role that does exist there, with
the fallback flagged.  Confidence ties break toward the lower role index so
recommendations stay deterministic.
"""
from __future__ import annotations

from dataclasses import dataclass

from .corpus import RoleLabel
from .errors import EmptyProjectRoles, EmptyTitleAfterCleaning
from .models import TrainedModel
from .textprep import tokenize


@dataclass(frozen=True)
class Recommendation:
    ranked: tuple[tuple[RoleLabel, float], ...]  # descending confidence
    chosen: RoleLabel
    fallback_applied: bool
    model_kind: str


def _ranked_roles(probs) -> list[tuple[RoleLabel, float]]:
    pairs = [(RoleLabel.from_index(i), float(p)) for i, p in enumerate(probs)]
    return sorted(pairs, key=lambda rp: (-rp[1], rp[0].index))


def recommend(model: TrainedModel, title: str,
              project_roles: set[RoleLabel]) -> Recommendation:
    if not project_roles:
        raise EmptyProjectRoles("cannot recommend against an empty role set")
    if not tokenize(title):
        raise EmptyTitleAfterCleaning(
            f"title {title!r} is empty after cleaning and stop-word removal"
        )
    probs = model.predict_proba_titles([title])[0]
    ranked = _ranked_roles(probs)
    chosen = next(role for role, _ in ranked if role in project_roles)
    return Recommendation(
        ranked=tuple(ranked),
        chosen=chosen,
        fallback_applied=ranked[0][0] not in project_roles,
        model_kind=model.kind,
    )


def recommend_top_k(model: TrainedModel, title: str,
                    project_roles: set[RoleLabel], k: int) -> Recommendation:
    """As recommend, but the ranked list is restricted to in-project roles
    and truncated to k entries; chosen is unchanged."""
    if k < 1:
        raise ValueError("k must be >= 1")
    full = recommend(model, title, project_roles)
    in_project = [rp for rp in full.ranked if rp[0] in project_roles]
    return Recommendation(
        ranked=tuple(in_project[:k]),
        chosen=full.chosen,
        fallback_applied=full.fallback_applied,
        model_kind=full.model_kind,
    )
