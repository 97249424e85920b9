"""Seeded random trees and treebanks for tests and benchmarks."""
from __future__ import annotations

import random
from typing import Optional, Sequence

from .core import URDU_DEPRELS, Sentence, Token

POSTAGS = ("NN", "PN", "VB", "P", "CA", "ADJ", "ADV", "CC", "AUXA", "AUXT", "SM")
_SYLLABLES = ("ka", "ri", "mu", "sa", "ta", "le", "na", "do", "ya", "ba", "ge", "zi")


def random_heads(n: int, rng: random.Random) -> list[int]:
    """Heads of a uniformly built random single-rooted tree (possibly non-projective)."""
    if n == 0:
        return []
    order = list(range(1, n + 1))
    rng.shuffle(order)
    heads = [0] * (n + 1)
    placed = [order[0]]
    for d in order[1:]:
        heads[d] = rng.choice(placed)
        placed.append(d)
    return heads[1:]


def random_projective_heads(n: int, rng: random.Random) -> list[int]:
    """Heads of a random projective single-rooted tree."""
    heads = [0] * (n + 1)

    def build(lo: int, hi: int, head: int):
        # one subtree spanning lo..hi attached to head
        r = rng.randint(lo, hi)
        heads[r] = head
        fill(lo, r - 1, r)
        fill(r + 1, hi, r)

    def fill(lo: int, hi: int, head: int):
        # cut lo..hi into consecutive subtrees that all attach to head
        while lo <= hi:
            end = rng.randint(lo, hi)
            build(lo, end, head)
            lo = end + 1

    if n:
        build(1, n, 0)
    return heads[1:]


def random_sentence(n: int, rng: random.Random, projective: bool = True,
                    labels: Sequence[str] = URDU_DEPRELS, root_label: str = "Root",
                    vocabulary: Optional[Sequence[str]] = None) -> Sentence:
    heads = random_projective_heads(n, rng) if projective else random_heads(n, rng)
    non_root = [l for l in labels if l != root_label]
    toks = []
    for i, h in enumerate(heads, start=1):
        label = root_label if h == 0 else rng.choice(non_root)
        if vocabulary:
            form = rng.choice(vocabulary)
        else:
            form = "".join(rng.choice(_SYLLABLES) for _ in range(rng.randint(1, 3)))
        pos = rng.choice(POSTAGS)
        feats = (("G", rng.choice("MF")), ("N", rng.choice("SP")), ("Suf", "0"))
        toks.append(Token(i, form, None, pos, pos, feats, h, label))
    return Sentence(tuple(toks))


def random_treebank(size: int, seed: int, min_len: int = 3, max_len: int = 12,
                    projective: bool = True, **kw) -> list[Sentence]:
    rng = random.Random(seed)
    return [random_sentence(rng.randint(min_len, max_len), rng, projective, **kw)
            for _ in range(size)]
