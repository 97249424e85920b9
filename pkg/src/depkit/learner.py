"""Averaged multiclass perceptron over sparse binary feature vectors."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

import numpy as np

from . import _kernels


@dataclass(frozen=True)
class TrainOptions:
    epochs: int = 10
    seed: int = 1
    shuffle: bool = True
    averaged: bool = True

    def __post_init__(self):
        if self.epochs < 1:
            raise ValueError("epochs must be >= 1")


@dataclass(eq=False)
class LinearModel:
    """Dense weight matrix of shape (feature_count, class_count)."""
    weights: np.ndarray
    mistakes: list[int] = field(default_factory=list)

    def __post_init__(self):
        self.weights = np.asarray(self.weights, dtype=np.float64)
        if self.weights.ndim != 2:
            raise ValueError("weights must be a 2-d array")
        if not np.all(np.isfinite(self.weights)):
            raise ValueError("non-finite weight")

    @property
    def feature_count(self) -> int:
        return self.weights.shape[0]

    @property
    def class_count(self) -> int:
        return self.weights.shape[1]

    def __eq__(self, other):
        if not isinstance(other, LinearModel):
            return NotImplemented
        return (self.weights.shape == other.weights.shape
                and self.weights.tobytes() == other.weights.tobytes())

    def nonzero(self):
        """(feature, class, weight) triples for every nonzero weight, row-major."""
        fs, cs = np.nonzero(self.weights)
        return [(int(f), int(c), float(self.weights[f, c])) for f, c in zip(fs, cs)]

    @classmethod
    def from_entries(cls, feature_count: int, class_count: int,
                     entries: Iterable[tuple[int, int, float]]) -> "LinearModel":
        w = np.zeros((feature_count, class_count))
        for f, c, v in entries:
            if not (0 <= f < feature_count and 0 <= c < class_count):
                raise ValueError(f"weight index ({f}, {c}) out of bounds")
            w[f, c] = v
        return cls(w)


def pack(vectors: Sequence[np.ndarray]) -> tuple[np.ndarray, np.ndarray]:
    """CSR-style (indptr, indices) for a list of index vectors."""
    indptr = np.zeros(len(vectors) + 1, dtype=np.int64)
    np.cumsum([len(v) for v in vectors], out=indptr[1:])
    indices = (np.concatenate(vectors).astype(np.int64) if vectors and indptr[-1]
               else np.zeros(0, dtype=np.int64))
    return indptr, indices


def train_packed(indptr: np.ndarray, indices: np.ndarray, labels: np.ndarray,
                 class_count: int, feature_count: int,
                 opts: TrainOptions = TrainOptions()) -> LinearModel:
    n = len(labels)
    if n == 0:
        raise ValueError("cannot train on an empty instance set")
    labels = np.asarray(labels, dtype=np.int64)
    if labels.min() < 0 or labels.max() >= class_count:
        raise ValueError("class index out of range")
    if indices.size and (indices.min() < 0 or indices.max() >= feature_count):
        raise ValueError("feature index out of range")
    W = np.zeros((feature_count, class_count))
    U = np.zeros((feature_count, class_count))
    c = 1.0
    rng = np.random.default_rng(opts.seed)
    mistakes = []
    for _ in range(opts.epochs):
        order = rng.permutation(n) if opts.shuffle else np.arange(n)
        m, c = _kernels.epoch(indptr, indices, labels, order.astype(np.int64), W, U, c)
        mistakes.append(int(m))
    if opts.averaged:
        W = W - U / c
    return LinearModel(W, mistakes)


def train_classifier(instances: Sequence[tuple[Sequence[int], int]], class_count: int,
                     feature_count: int, opts: TrainOptions = TrainOptions()) -> LinearModel:
    """Perceptron training; with ``opts.averaged`` the returned weights are the
    average over every per-instance snapshot (ties predict the lowest class)."""
    if not instances:
        raise ValueError("cannot train on an empty instance set")
    vectors = [np.asarray(v, dtype=np.int64) for v, _ in instances]
    indptr, indices = pack(vectors)
    labels = np.asarray([y for _, y in instances], dtype=np.int64)
    return train_packed(indptr, indices, labels, class_count, feature_count, opts)


def score(m: LinearModel, v) -> np.ndarray:
    return _kernels.score_sparse(m.weights, np.asarray(v, dtype=np.int64))


def predict(m: LinearModel, v) -> int:
    return int(np.argmax(score(m, v)))


def predict_legal(m: LinearModel, v, legal: Iterable[int],
                  scores: Optional[np.ndarray] = None) -> int:
    legal = sorted(set(legal))
    if not legal:
        raise ValueError("no legal class to choose from")
    s = score(m, v) if scores is None else scores
    best = legal[0]
    for k in legal[1:]:
        if s[k] > s[best]:
            best = k
    return best
