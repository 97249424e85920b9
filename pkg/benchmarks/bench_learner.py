"""Time the perceptron epoch kernel: numba vs pure numpy.

    python benchmarks/bench_learner.py [--sentences 2000] [--epochs 5]

Instances come from oracle derivations of a synthetic treebank, so the
sparsity pattern matches real training. Both kernels must end with
bit-identical weights; the script exits non-zero otherwise.
"""
import argparse
import time

import numpy as np

from depkit import _kernels
from depkit._accel import HAVE_NUMBA
from depkit.core import default_tagset
from depkit.features import FeatureVocabulary, default_feature_model, extract
from depkit.learner import pack
from depkit.pipeline import build_classes
from depkit.synthetic import random_treebank
from depkit.transitions import get_system, iter_oracle


def build_instances(n_sentences, seed):
    system = get_system("arc-eager")
    templates = default_feature_model()
    classes = {t: i for i, t in enumerate(build_classes(system, default_tagset()))}
    vocab = FeatureVocabulary()
    vecs, labels = [], []
    for s in random_treebank(n_sentences, seed=seed, max_len=25):
        for c, t in iter_oracle(s, system):
            vecs.append(extract(c, s, templates, vocab))
            labels.append(classes[t])
    indptr, indices = pack(vecs)
    return indptr, indices, np.asarray(labels, dtype=np.int64), len(vocab), len(classes)


def run(kernel, data, epochs, seed):
    indptr, indices, labels, nf, nc = data
    W = np.zeros((nf, nc))
    U = np.zeros((nf, nc))
    c = 1.0
    rng = np.random.default_rng(seed)
    start = time.perf_counter()
    for _ in range(epochs):
        _, c = kernel(indptr, indices, labels, rng.permutation(len(labels)), W, U, c)
    return time.perf_counter() - start, W


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--sentences", type=int, default=2000)
    ap.add_argument("--epochs", type=int, default=5)
    ap.add_argument("--seed", type=int, default=1)
    args = ap.parse_args()

    data = build_instances(args.sentences, args.seed)
    print(f"instances {len(data[2])}  features {data[3]}  classes {data[4]}")

    t_np, w_np = run(_kernels._epoch_numpy, data, args.epochs, args.seed)
    print(f"numpy  {t_np:8.3f} s")
    if not HAVE_NUMBA:
        print("numba not installed; skipping")
        return 0
    run(_kernels._epoch_numba, data, 1, args.seed)  # compile / load cache
    t_nb, w_nb = run(_kernels._epoch_numba, data, args.epochs, args.seed)
    print(f"numba  {t_nb:8.3f} s   speedup x{t_np / t_nb:.1f}")
    same = w_np.tobytes() == w_nb.tobytes()
    print("weights identical" if same else "WEIGHTS DIFFER")
    return 0 if same else 1


if __name__ == "__main__":
    raise SystemExit(main())
