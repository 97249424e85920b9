"""Attachment scores, per-relation metrics and Cohen's kappa.

Labels compare case-insensitively. Metrics whose denominator is zero are
reported as ``None`` (rendered as ``-``).
"""
from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Collection, Iterator, Optional, Sequence

from .core import Sentence, Token


class AlignmentError(ValueError):
    pass


@dataclass
class DeprelMetrics:
    gold_count: int = 0
    system_count: int = 0
    label_match: int = 0      # tokens with this label in both gold and system
    head_match: int = 0       # gold-label tokens with the correct head
    both_match: int = 0       # gold-label tokens with correct head and label

    @property
    def precision(self) -> Optional[float]:
        return self.label_match / self.system_count if self.system_count else None

    @property
    def recall(self) -> Optional[float]:
        return self.label_match / self.gold_count if self.gold_count else None

    @property
    def fscore(self) -> Optional[float]:
        return f_score(self.precision, self.recall)

    @property
    def las(self) -> Optional[float]:
        return self.both_match / self.gold_count if self.gold_count else None

    @property
    def uas(self) -> Optional[float]:
        return self.head_match / self.gold_count if self.gold_count else None

    def as_dict(self) -> dict:
        return {
            "gold": self.gold_count, "system": self.system_count,
            "precision": self.precision, "recall": self.recall, "fscore": self.fscore,
            "las": self.las, "uas": self.uas,
        }


def f_score(precision: Optional[float], recall: Optional[float]) -> Optional[float]:
    if precision is None or recall is None or precision + recall == 0:
        return None
    return 2 * precision * recall / (precision + recall)


@dataclass
class EvalReport:
    token_count: int
    correct_head: int
    correct_label: int
    correct_both: int
    per_deprel: dict[str, DeprelMetrics] = field(default_factory=dict)

    @property
    def las(self) -> float:
        return self.correct_both / self.token_count

    @property
    def uas(self) -> float:
        return self.correct_head / self.token_count

    @property
    def la(self) -> float:
        return self.correct_label / self.token_count


def _norm(label: Optional[str]) -> Optional[str]:
    return label.casefold() if label is not None else None


def aligned_tokens(gold: Sequence[Sentence], system: Sequence[Sentence],
                   exclude_pos: Collection[str] = ()) -> Iterator[tuple[Token, Token]]:
    if len(gold) != len(system):
        raise AlignmentError(f"gold has {len(gold)} sentences, system has {len(system)}")
    excluded = {p.casefold() for p in exclude_pos}
    for si, (g, s) in enumerate(zip(gold, system)):
        if len(g) != len(s):
            raise AlignmentError(f"sentence {si}: gold has {len(g)} tokens, system has {len(s)}")
        for gt, st in zip(g.tokens, s.tokens):
            if gt.form != st.form:
                raise AlignmentError(f"sentence {si}, token {gt.id}: form {gt.form!r} != {st.form!r}")
            if gt.postag.casefold() in excluded:
                continue
            yield gt, st


def _display_labels(pairs) -> dict[str, str]:
    names: dict[str, str] = {}
    for gt, st in pairs:
        for lab in (gt.deprel, st.deprel):
            if lab is not None:
                names.setdefault(lab.casefold(), lab)
    return names


def _grouped(pairs) -> dict[str, DeprelMetrics]:
    names = _display_labels(pairs)
    table: dict[str, DeprelMetrics] = {}

    def entry(key):
        name = names[key]
        if name not in table:
            table[name] = DeprelMetrics()
        return table[name]

    for gt, st in pairs:
        gl, sl = _norm(gt.deprel), _norm(st.deprel)
        head_ok = gt.head is not None and gt.head == st.head
        if gl is not None:
            m = entry(gl)
            m.gold_count += 1
            m.head_match += head_ok
            m.both_match += head_ok and gl == sl
            m.label_match += gl == sl
        if sl is not None:
            entry(sl).system_count += 1
    return dict(sorted(table.items(), key=lambda kv: kv[0].casefold()))


def attachment_scores(gold: Sequence[Sentence], system: Sequence[Sentence],
                      exclude_pos: Collection[str] = ()) -> EvalReport:
    """LAS, UAS and LA over every token (minus ``exclude_pos`` tags), with per-relation tables."""
    pairs = list(aligned_tokens(gold, system, exclude_pos))
    if not pairs:
        raise ValueError("no tokens to evaluate")
    head = label = both = 0
    for gt, st in pairs:
        h = gt.head is not None and gt.head == st.head
        l = gt.deprel is not None and _norm(gt.deprel) == _norm(st.deprel)
        head += h
        label += l
        both += h and l
    return EvalReport(len(pairs), head, label, both, _grouped(pairs))


def prf_by_deprel(gold: Sequence[Sentence], system: Sequence[Sentence],
                  exclude_pos: Collection[str] = ()) -> dict[str, DeprelMetrics]:
    """Per-label precision/recall/F, comparing labels only."""
    return _grouped(list(aligned_tokens(gold, system, exclude_pos)))


def attachment_by_deprel(gold: Sequence[Sentence], system: Sequence[Sentence],
                         exclude_pos: Collection[str] = ()) -> dict[str, DeprelMetrics]:
    """Per-label LAS/UAS over tokens grouped by their gold label."""
    table = prf_by_deprel(gold, system, exclude_pos)
    return {k: v for k, v in table.items() if v.gold_count}


# Cohen's kappa

KAPPA_BANDS = (
    (0.0, "No agreement"),
    (0.20, "None to slight"),
    (0.40, "Fair"),
    (0.60, "Moderate"),
    (0.80, "Substantial"),
    (1.00, "Almost Perfect"),
)


def kappa_band(k: float) -> str:
    """Interpretation band; each interval is closed on its upper end."""
    if math.isnan(k) or k > 1:
        raise ValueError(f"kappa must be <= 1, got {k}")
    for upper, name in KAPPA_BANDS:
        if k <= upper:
            return name
    raise AssertionError("unreachable")


@dataclass(frozen=True)
class KappaResult:
    kappa: float
    p_observed: float
    p_expected: float
    band: str
    n: int
    degenerate: bool = False


def kappa_from_labels(a: Sequence, b: Sequence) -> KappaResult:
    """Two-rater kappa over paired categorical codes, computed in exact rationals."""
    if len(a) != len(b):
        raise AlignmentError(f"rater sequences differ in length ({len(a)} vs {len(b)})")
    n = len(a)
    if n == 0:
        raise ValueError("no items to compare")
    agree = sum(1 for x, y in zip(a, b) if x == y)
    ca, cb = Counter(a), Counter(b)
    p_o = Fraction(agree, n)
    p_e = Fraction(sum(ca[c] * cb[c] for c in ca), n * n)
    if p_e == 1:
        return KappaResult(1.0, float(p_o), 1.0, kappa_band(1.0), n, degenerate=True)
    k = (p_o - p_e) / (1 - p_e)
    return KappaResult(float(k), float(p_o), float(p_e), kappa_band(float(k)), n)


def _category(t: Token, on: str):
    if on == "label":
        return _norm(t.deprel)
    if on == "head":
        return t.head
    return (t.head, _norm(t.deprel))


def cohen_kappa(a: Sequence[Sentence], b: Sequence[Sentence], on: str = "label") -> KappaResult:
    if on not in ("label", "head", "both"):
        raise ValueError(f"on must be label, head or both, got {on!r}")
    pairs = list(aligned_tokens(a, b))
    return kappa_from_labels([_category(x, on) for x, _ in pairs],
                             [_category(y, on) for _, y in pairs])
