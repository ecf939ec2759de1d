"""Title preprocessing: cleaning, stop words, tokenization, TF-IDF, labels.

Two feature families come out of here: integer token sequences (left-padded,
frequency-ranked vocabulary) for the sequence models, and bag-of-words
vectors (raw term frequency or TF-IDF) for the conventional models.
"""
from __future__ import annotations

import logging
import math
import re
from collections import Counter
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

import numpy as np

from .corpus import N_ROLES, RoleLabel
from .errors import DimensionMismatch, EmptyTrainingSet, MalformedHeader

logger = logging.getLogger(__name__)

PAD_INDEX = 0

_TAG_RE = re.compile(r"<[^>]*>")
_NON_ALNUM_RE = re.compile(r"[^a-z0-9]+")


def clean_text(raw: str) -> str:
    """Strip HTML tags, lowercase, map symbols to spaces, collapse runs."""
    text = _TAG_RE.sub(" ", raw)
    text = text.lower()
    text = _NON_ALNUM_RE.sub(" ", text)
    return text.strip()


def _load_stopwords() -> frozenset[str]:
    text = resources.files("roletriage.data").joinpath("stopwords_en.txt").read_text("utf-8")
    return frozenset(line.strip() for line in text.splitlines() if line.strip())


STOPWORDS: frozenset[str] = _load_stopwords()


def remove_stopwords(tokens: list[str]) -> list[str]:
    """Drop tokens found in the bundled English stop-word list."""
    return [t for t in tokens if t not in STOPWORDS]


def tokenize(raw: str) -> list[str]:
    """Full title pipeline: clean, split on spaces, remove stop words."""
    cleaned = clean_text(raw)
    if not cleaned:
        return []
    return remove_stopwords(cleaned.split(" "))


@dataclass(frozen=True)
class Vocabulary:
    """Frequency-ranked token index.  Index 0 is padding, 1..V are tokens in
    descending corpus frequency (ties by first occurrence), V+1 is OOV."""

    token_to_index: dict[str, int]
    max_size: int | None = None

    @property
    def size(self) -> int:
        return len(self.token_to_index)

    @property
    def oov_index(self) -> int:
        return self.size + 1

    def index_of(self, token: str) -> int:
        return self.token_to_index.get(token, self.oov_index)

    def inverse(self) -> dict[int, str]:
        return {i: t for t, i in self.token_to_index.items()}


def build_vocabulary(texts: list[str], max_size: int | None = None) -> Vocabulary:
    """Rank tokens of pre-tokenized texts (space-separated) by frequency.

    More frequent tokens get smaller indices; frequency ties keep
    first-occurrence order.  ``max_size`` keeps only the most frequent
    tokens.
    """
    counts: Counter[str] = Counter()
    first_seen: dict[str, int] = {}
    position = 0
    for text in texts:
        for token in text.split():
            counts[token] += 1
            if token not in first_seen:
                first_seen[token] = position
                position += 1
    ranked = sorted(counts, key=lambda t: (-counts[t], first_seen[t]))
    if max_size is not None:
        ranked = ranked[:max_size]
    return Vocabulary({t: i for i, t in enumerate(ranked, start=1)}, max_size)


def encode_sequence(vocab: Vocabulary, text: str, max_len: int) -> np.ndarray:
    """Map tokens to indices, keep the trailing max_len, left-pad with 0."""
    if max_len < 1:
        raise ValueError("max_len must be >= 1")
    indices = [vocab.index_of(t) for t in text.split()]
    indices = indices[-max_len:]
    out = np.zeros(max_len, dtype=np.int64)
    if indices:
        out[-len(indices):] = indices
    return out


def decode_sequence(vocab: Vocabulary, sequence: np.ndarray) -> list[str]:
    """Inverse of encode for the non-padding, in-vocabulary suffix."""
    inv = vocab.inverse()
    return [inv[i] for i in sequence if i in inv]


def default_max_len(texts: list[str], lo: int = 8, hi: int = 50) -> int:
    """95th percentile of token counts over the training titles, clamped."""
    lengths = [len(t.split()) for t in texts] or [0]
    p95 = int(math.ceil(np.percentile(lengths, 95)))
    return max(lo, min(hi, p95))


@dataclass(frozen=True)
class TfIdfVector:
    """Sparse l2-normalized mapping token index -> weight."""

    weights: dict[int, float]

    def norm(self) -> float:
        return math.sqrt(sum(w * w for w in self.weights.values()))

    def to_dense(self, size: int) -> np.ndarray:
        out = np.zeros(size)
        for idx, w in self.weights.items():
            out[idx - 1] = w  # vocab indices are 1-based
        return out


@dataclass(frozen=True)
class IdfTable:
    """Smoothed inverse document frequencies over a fixed vocabulary."""

    vocab: Vocabulary
    idf: np.ndarray  # shape (V,), aligned with vocab indices 1..V
    n_docs: int


def tfidf_fit(texts: list[str], vocab: Vocabulary | None = None) -> IdfTable:
    """Fit idf(t) = ln((1+n)/(1+df(t))) + 1 on the training texts.

    Texts are pre-tokenized, space-separated.  When no vocabulary is given,
    one is built from the same texts.
    """
    if not texts:
        raise EmptyTrainingSet("tfidf_fit needs at least one document")
    if vocab is None:
        vocab = build_vocabulary(texts)
    n = len(texts)
    df = np.zeros(vocab.size)
    for text in texts:
        for token in set(text.split()):
            idx = vocab.token_to_index.get(token)
            if idx is not None:
                df[idx - 1] += 1
    idf = np.log((1.0 + n) / (1.0 + df)) + 1.0
    return IdfTable(vocab=vocab, idf=idf, n_docs=n)


def tfidf_transform(table: IdfTable, text: str) -> TfIdfVector:
    """Weight = tf * idf, then l2-normalize.  Unseen tokens contribute
    nothing; an empty document maps to the zero vector."""
    counts: Counter[int] = Counter()
    for token in text.split():
        idx = table.vocab.token_to_index.get(token)
        if idx is not None:
            counts[idx] += 1
    weights = {idx: tf * table.idf[idx - 1] for idx, tf in counts.items()}
    norm = math.sqrt(sum(w * w for w in weights.values()))
    if norm > 0:
        weights = {idx: w / norm for idx, w in weights.items()}
    return TfIdfVector(weights)


def tfidf_matrix(table: IdfTable, texts: list[str]) -> np.ndarray:
    """Dense (n_docs, V) TF-IDF matrix; convenience for batch training."""
    out = np.zeros((len(texts), table.vocab.size))
    for i, text in enumerate(texts):
        for idx, w in tfidf_transform(table, text).weights.items():
            out[i, idx - 1] = w
    return out


def count_matrix(vocab: Vocabulary, texts: list[str]) -> np.ndarray:
    """Dense (n_docs, V) raw term-frequency matrix; OOV tokens are dropped."""
    out = np.zeros((len(texts), vocab.size))
    for i, text in enumerate(texts):
        for token in text.split():
            idx = vocab.token_to_index.get(token)
            if idx is not None:
                out[i, idx - 1] += 1
    return out


def one_hot(role: RoleLabel) -> np.ndarray:
    """Binary label vector with a single 1 at the role's index."""
    out = np.zeros(N_ROLES)
    out[role.index] = 1.0
    return out


def one_hot_matrix(roles: list[RoleLabel]) -> np.ndarray:
    out = np.zeros((len(roles), N_ROLES))
    for i, role in enumerate(roles):
        out[i, role.index] = 1.0
    return out


@dataclass(frozen=True)
class EmbeddingMatrix:
    """(V+2) x dim matrix: row 0 padding, rows 1..V vocabulary tokens, row
    V+1 OOV.  Rows without a pretrained vector stay zero."""

    rows: np.ndarray
    dim: int
    matched: int

    def __post_init__(self):
        if self.rows.shape[1] != self.dim:
            raise DimensionMismatch(
                f"embedding rows have width {self.rows.shape[1]}, declared dim {self.dim}"
            )


def load_embeddings(path: str | Path, vocab: Vocabulary) -> EmbeddingMatrix:
    """Load word2vec-text vectors for a vocabulary.

    Format: first line ``count dim``, then one ``token v1 .. vdim`` line per
    token.  Vocabulary tokens missing from the file keep zero rows; zero
    matches is legal but logged as a warning.
    """
    path = Path(path)
    with open(path, encoding="utf-8") as fh:
        header = fh.readline().split()
        if len(header) != 2:
            raise MalformedHeader(f"{path}: first line must be 'count dim'")
        try:
            declared_count, dim = int(header[0]), int(header[1])
        except ValueError:
            raise MalformedHeader(f"{path}: first line must be 'count dim'") from None
        rows = np.zeros((vocab.size + 2, dim))
        matched = 0
        for line_no, line in enumerate(fh, start=2):
            parts = line.rstrip("\n").split(" ")
            if len(parts) < 2:
                continue
            token, values = parts[0], parts[1:]
            if len(values) != dim:
                raise DimensionMismatch(
                    f"{path}: line {line_no} has {len(values)} values, expected {dim}"
                )
            idx = vocab.token_to_index.get(token)
            if idx is not None:
                rows[idx] = [float(v) for v in values]
                matched += 1
    if matched == 0:
        logger.warning("%s: no vocabulary token matched any of the %d vectors", path, declared_count)
    return EmbeddingMatrix(rows=rows, dim=dim, matched=matched)
