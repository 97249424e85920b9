"""Declarative feature templates over parser configurations.

A template is ``ADDRESS.ATTRIBUTE`` where the address starts at
``STACK[k]`` or ``BUFFER[k]`` and may walk up to two steps through
``head``, ``ldep`` or ``rdep``, e.g. ``STACK[0].ldep.DEPREL`` or
``BUFFER[0].FEATS[Suf]``.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

import numpy as np

from .core import ROOT, Sentence
from .transitions import Configuration

NULL = "NULL"
ROOT_VALUE = "ROOT"
MISSING = "_"

MAX_DEPTH = 3
MAX_STEPS = 2
BASES = ("STACK", "BUFFER")
STEPS = ("head", "ldep", "rdep")
ATTRIBUTES = ("FORM", "LEMMA", "POSTAG", "CPOSTAG", "DEPREL", "FEATS")

_BASE_RE = re.compile(r"^(STACK|BUFFER)\[(\d+)\]$", re.IGNORECASE)
_FEATS_RE = re.compile(r"^FEATS\[([^\]]+)\]$", re.IGNORECASE)


class FeatureSpecError(ValueError):
    def __init__(self, message: str, line: Optional[int] = None):
        self.line = line
        super().__init__(message if line is None else f"line {line}: {message}")


@dataclass(frozen=True)
class FeatureTemplate:
    base: str
    depth: int
    steps: tuple[str, ...]
    attribute: str
    key: Optional[str] = None

    def __post_init__(self):
        if self.base not in BASES:
            raise FeatureSpecError(f"unknown address {self.base!r}")
        if not 0 <= self.depth <= MAX_DEPTH:
            raise FeatureSpecError(f"k exceeds {MAX_DEPTH}")
        if len(self.steps) > MAX_STEPS:
            raise FeatureSpecError(f"more than {MAX_STEPS} path steps")
        for s in self.steps:
            if s not in STEPS:
                raise FeatureSpecError(f"unknown step {s!r}")
        if self.attribute not in ATTRIBUTES:
            raise FeatureSpecError(f"unknown attribute {self.attribute!r}")
        if (self.attribute == "FEATS") != (self.key is not None):
            raise FeatureSpecError("FEATS requires a key, other attributes take none")

    def __str__(self):
        parts = [f"{self.base}[{self.depth}]", *self.steps]
        attr = f"FEATS[{self.key}]" if self.key is not None else self.attribute
        return ".".join(parts + [attr])

    def resolve(self, c: Configuration) -> Optional[int]:
        """Node addressed in ``c``, or None if it does not exist."""
        seq = c.stack if self.base == "STACK" else c.buffer
        if self.base == "STACK":
            if self.depth >= len(seq):
                return None
            node = seq[-1 - self.depth]
        else:
            if self.depth >= len(seq):
                return None
            node = seq[self.depth]
        for step in self.steps:
            if step == "head":
                node = c.heads[node] if node != ROOT else None
            elif step == "ldep":
                node = c.leftmost_dependent(node)
            else:
                node = c.rightmost_dependent(node)
            if node is None:
                return None
        return node

    def value(self, c: Configuration, s: Sentence) -> str:
        node = self.resolve(c)
        if node is None:
            return NULL
        if self.attribute == "DEPREL":
            label = c.labels[node] if node != ROOT else None
            return label if label is not None else NULL
        if node == ROOT:
            return ROOT_VALUE if self.attribute != "FEATS" else NULL
        tok = s.tokens[node - 1]
        if self.attribute == "FORM":
            return tok.form
        if self.attribute == "LEMMA":
            return tok.lemma if tok.lemma is not None else MISSING
        if self.attribute == "POSTAG":
            return tok.postag
        if self.attribute == "CPOSTAG":
            return tok.cpostag
        v = tok.feat(self.key)
        return v if v is not None else MISSING


def parse_template(text: str, line: Optional[int] = None) -> FeatureTemplate:
    parts = text.strip().split(".")
    if len(parts) < 2:
        raise FeatureSpecError(f"expected ADDRESS.ATTRIBUTE, got {text!r}", line)
    m = _BASE_RE.match(parts[0])
    if not m:
        raise FeatureSpecError(f"unknown address {parts[0]!r}", line)
    base, depth = m.group(1).upper(), int(m.group(2))
    steps = tuple(p.lower() for p in parts[1:-1])
    attr_text = parts[-1]
    fm = _FEATS_RE.match(attr_text)
    if fm:
        attribute, key = "FEATS", fm.group(1)
    else:
        attribute, key = attr_text.upper(), None
    try:
        return FeatureTemplate(base, depth, steps, attribute, key)
    except FeatureSpecError as e:
        raise FeatureSpecError(str(e), line) from None


def parse_feature_spec(text: str) -> list[FeatureTemplate]:
    templates = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            templates.append(parse_template(line, lineno))
    return templates


def format_feature_spec(templates: Iterable[FeatureTemplate]) -> str:
    return "".join(f"{t}\n" for t in templates)


DEFAULT_SPEC = """\
STACK[0].FORM
STACK[0].POSTAG
BUFFER[0].FORM
BUFFER[0].POSTAG
BUFFER[1].FORM
BUFFER[1].POSTAG
STACK[1].POSTAG
BUFFER[2].POSTAG
STACK[0].DEPREL
STACK[0].ldep.DEPREL
STACK[0].rdep.DEPREL
BUFFER[0].ldep.DEPREL
STACK[0].FEATS[G]
BUFFER[0].FEATS[N]
"""


def default_feature_model() -> list[FeatureTemplate]:
    """Word, POS, partial-tree labels, gender and number: 14 templates."""
    return parse_feature_spec(DEFAULT_SPEC)


class FeatureVocabulary:
    """Maps (template ordinal, value) to dense feature indices in first-seen order."""

    def __init__(self):
        self._index: dict[tuple[int, str], int] = {}
        self.frozen = False

    def __len__(self):
        return len(self._index)

    def __eq__(self, other):
        if not isinstance(other, FeatureVocabulary):
            return NotImplemented
        return self.frozen == other.frozen and list(self._index.items()) == list(other._index.items())

    def freeze(self) -> "FeatureVocabulary":
        self.frozen = True
        return self

    def lookup(self, ordinal: int, value: str) -> Optional[int]:
        key = (ordinal, value)
        idx = self._index.get(key)
        if idx is None and not self.frozen:
            idx = len(self._index)
            self._index[key] = idx
        return idx

    def add(self, ordinal: int, value: str, index: int):
        if self.frozen:
            raise ValueError("vocabulary is frozen")
        if index != len(self._index):
            raise ValueError(f"vocabulary index {index} is not dense (expected {len(self._index)})")
        if (ordinal, value) in self._index:
            raise ValueError(f"duplicate vocabulary entry ({ordinal}, {value!r})")
        self._index[(ordinal, value)] = index

    def items(self):
        return self._index.items()


def extract(c: Configuration, s: Sentence, templates: Sequence[FeatureTemplate],
            vocab: FeatureVocabulary) -> np.ndarray:
    """Sorted active feature indices for ``c``; unseen values are dropped once frozen."""
    active = []
    for ordinal, t in enumerate(templates):
        idx = vocab.lookup(ordinal, t.value(c, s))
        if idx is not None:
            active.append(idx)
    active.sort()
    return np.asarray(active, dtype=np.int64)
