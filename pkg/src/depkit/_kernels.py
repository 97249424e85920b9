"""Perceptron inner loops, in a numba and a pure-numpy flavour.

Both flavours perform the same floating-point operations in the same order,
so they return bit-identical weights. ``epoch`` and ``score_into`` point at
the flavour selected by :mod:`depkit._accel`.
"""
import numpy as np

from ._accel import USE_NUMBA, njit


def _epoch_numpy(indptr, indices, labels, order, W, U, c):
    mistakes = 0
    for i in order:
        feats = indices[indptr[i]:indptr[i + 1]]
        scores = W[feats].sum(axis=0)
        pred = int(np.argmax(scores))
        y = labels[i]
        if pred != y:
            W[feats, y] += 1.0
            W[feats, pred] -= 1.0
            U[feats, y] += c
            U[feats, pred] -= c
            mistakes += 1
        c += 1.0
    return mistakes, c


def _epoch_loop(indptr, indices, labels, order, W, U, c):
    n_classes = W.shape[1]
    scores = np.empty(n_classes)
    mistakes = 0
    for pos in range(order.shape[0]):
        i = order[pos]
        lo = indptr[i]
        hi = indptr[i + 1]
        for k in range(n_classes):
            scores[k] = 0.0
        for p in range(lo, hi):
            f = indices[p]
            for k in range(n_classes):
                scores[k] += W[f, k]
        pred = 0
        best = scores[0]
        for k in range(1, n_classes):
            if scores[k] > best:
                best = scores[k]
                pred = k
        y = labels[i]
        if pred != y:
            for p in range(lo, hi):
                f = indices[p]
                W[f, y] += 1.0
                W[f, pred] -= 1.0
                U[f, y] += c
                U[f, pred] -= c
            mistakes += 1
        c += 1.0
    return mistakes, c


def _score_numpy(W, feats):
    return W[feats].sum(axis=0)


def _score_loop(W, feats):
    n_classes = W.shape[1]
    out = np.zeros(n_classes)
    for p in range(feats.shape[0]):
        f = feats[p]
        for k in range(n_classes):
            out[k] += W[f, k]
    return out


_epoch_numba = njit(_epoch_loop)
_score_numba = njit(_score_loop)

if USE_NUMBA:
    epoch = _epoch_numba
    score_sparse = _score_numba
else:
    epoch = _epoch_numpy
    score_sparse = _score_numpy

BACKEND = "numba" if USE_NUMBA else "numpy"
