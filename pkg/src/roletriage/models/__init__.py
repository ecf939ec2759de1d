"""Seven classifier families behind one fit/predict contract."""
from .base import (
    FEATURE_COUNTS,
    FEATURE_SEQUENCE,
    FEATURE_TFIDF,
    Featurizer,
    Hyperparameters,
    MODEL_KINDS,
    NEURAL_KINDS,
    ROLE_ORDER,
    TrainedModel,
    TrainingBatch,
    feature_kind_for,
    predict_proba,
)
from .cnn import ConvNetwork, fit_cnn1d
from .container import CONTAINER_VERSION, load_model, save_model
from .cosine import CosineCentroid, fit_cosine
from .forest import RandomForest, fit_rf
from .logistic import LogisticRegression, fit_lr, lr_loss_and_grads
from .losses import categorical_cross_entropy, mean_cross_entropy, softmax
from .lstm import LstmNetwork, fit_lstm, lstm_cell_step
from .mnb import MultinomialNB, fit_mnb
from .svc import LinearSVC, fit_svc
from .trainer import train_model, train_on_titles

__all__ = [
    "FEATURE_COUNTS",
    "FEATURE_SEQUENCE",
    "FEATURE_TFIDF",
    "Featurizer",
    "Hyperparameters",
    "MODEL_KINDS",
    "NEURAL_KINDS",
    "ROLE_ORDER",
    "TrainedModel",
    "TrainingBatch",
    "feature_kind_for",
    "predict_proba",
    "ConvNetwork",
    "fit_cnn1d",
    "CONTAINER_VERSION",
    "load_model",
    "save_model",
    "CosineCentroid",
    "fit_cosine",
    "RandomForest",
    "fit_rf",
    "LogisticRegression",
    "fit_lr",
    "lr_loss_and_grads",
    "categorical_cross_entropy",
    "mean_cross_entropy",
    "softmax",
    "LstmNetwork",
    "fit_lstm",
    "lstm_cell_step",
    "MultinomialNB",
    "fit_mnb",
    "LinearSVC",
    "fit_svc",
    "train_model",
    "train_on_titles",
]
