"""Independent oracles used to freeze expected values.

These deliberately avoid the library's own code paths: the Bayes oracle
enumerates the posterior formula term by term, and the gradient oracle uses
central finite differences on whatever loss function it is handed.
"""
from __future__ import annotations

import numpy as np


def bayes_posterior(train_docs: list[list[str]], train_labels: list[int],
                    query: list[str], alpha: float, n_classes: int,
                    vocab: list[str]) -> list[float]:
    """Posterior over classes by direct evaluation of
    prior(c) * prod_t ((count(t, c) + alpha) / (total(c) + alpha * |V|)).

    ``vocab`` fixes |V| and which query tokens count (others are dropped,
    matching bag featurization over a closed vocabulary).
    """
    n = len(train_docs)
    vocab_set = set(vocab)
    posts = []
    for c in range(n_classes):
        docs_c = [d for d, l in zip(train_docs, train_labels) if l == c]
        prior = len(docs_c) / n
        if prior == 0.0:
            posts.append(0.0)
            continue
        total_c = sum(sum(1 for t in d if t in vocab_set) for d in docs_c)
        p = prior
        for token in query:
            if token not in vocab_set:
                continue
            count = sum(d.count(token) for d in docs_c)
            p *= (count + alpha) / (total_c + alpha * len(vocab))
        posts.append(p)
    total = sum(posts)
    return [p / total for p in posts]


def finite_difference_grads(loss_fn, params: dict[str, np.ndarray],
                            step: float = 1e-5) -> dict[str, np.ndarray]:
    """Central finite differences of loss_fn() w.r.t. every entry of every
    parameter array (perturbed in place, restored afterwards)."""
    grads = {}
    for key, p in params.items():
        g = np.zeros_like(p)
        it = np.nditer(p, flags=["multi_index"])
        for _ in it:
            ix = it.multi_index
            orig = p[ix]
            p[ix] = orig + step
            lp = loss_fn()
            p[ix] = orig - step
            lm = loss_fn()
            p[ix] = orig
            g[ix] = (lp - lm) / (2.0 * step)
        grads[key] = g
    return grads


def gradient_relative_error(analytic: dict[str, np.ndarray],
                            numeric: dict[str, np.ndarray]) -> float:
    """||ga - gn|| / (||ga|| + ||gn||) over the flattened full gradient."""
    ga = np.concatenate([analytic[k].ravel() for k in sorted(analytic)])
    gn = np.concatenate([numeric[k].ravel() for k in sorted(numeric)])
    denom = np.linalg.norm(ga) + np.linalg.norm(gn)
    if denom == 0.0:
        return 0.0
    return float(np.linalg.norm(ga - gn) / denom)
