"""roletriage: learn a project's task-to-role history, recommend roles for
incoming tasks, and benchmark seven classifier families along the way."""

__version__ = "0.1.0"

from .corpus import (
    Corpus,
    ProjectMeta,
    RoleLabel,
    RoleTable,
    TaskRecord,
    filter_projects,
    generalize_role,
    load_csv,
    load_path,
    project_role_set,
    save_csv,
    split_train_validation,
)
from .models import (
    Hyperparameters,
    MODEL_KINDS,
    TrainedModel,
    load_model,
    predict_proba,
    save_model,
    train_model,
    train_on_titles,
)
from .recommender import Recommendation, recommend, recommend_top_k

__all__ = [
    "Corpus",
    "ProjectMeta",
    "RoleLabel",
    "RoleTable",
    "TaskRecord",
    "filter_projects",
    "generalize_role",
    "load_csv",
    "load_path",
    "project_role_set",
    "save_csv",
    "split_train_validation",
    "Hyperparameters",
    "MODEL_KINDS",
    "TrainedModel",
    "load_model",
    "predict_proba",
    "save_model",
    "train_model",
    "train_on_titles",
    "Recommendation",
    "recommend",
    "recommend_top_k",
    "__version__",
]
