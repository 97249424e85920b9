"""Tokens, sentences, tagsets and structural validation of dependency trees.

The artificial root is positional node 0 and is never stored as a Token.
"""
from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Iterable, Mapping, Optional, Sequence

ROOT = 0


@dataclass(frozen=True)
class Token:
    id: int
    form: str
    lemma: Optional[str] = None
    cpostag: str = "_"
    postag: str = "_"
    feats: tuple[tuple[str, str], ...] = ()
    head: Optional[int] = None
    deprel: Optional[str] = None

    def __post_init__(self):
        if self.id < 1:
            raise ValueError(f"token id must be >= 1, got {self.id}")
        if not self.form:
            raise ValueError(f"token {self.id}: empty form")
        if isinstance(self.feats, Mapping):
            object.__setattr__(self, "feats", tuple(self.feats.items()))
        else:
            object.__setattr__(self, "feats", tuple(tuple(kv) for kv in self.feats))
        keys = [k for k, _ in self.feats]
        if len(set(keys)) != len(keys):
            raise ValueError(f"token {self.id}: duplicate FEATS attribute")
        if self.head is not None and self.head < 0:
            raise ValueError(f"token {self.id}: negative head {self.head}")

    def feat(self, key: str) -> Optional[str]:
        for k, v in self.feats:
            if k == key:
                return v
        return None

    @property
    def feats_dict(self) -> dict[str, str]:
        return dict(self.feats)


@dataclass(frozen=True)
class Sentence:
    tokens: tuple[Token, ...]
    metadata: Optional[str] = None

    def __post_init__(self):
        object.__setattr__(self, "tokens", tuple(self.tokens))

    def __len__(self):
        return len(self.tokens)

    def __iter__(self):
        return iter(self.tokens)

    def __getitem__(self, i):
        return self.tokens[i]

    @property
    def heads(self) -> list[Optional[int]]:
        return [t.head for t in self.tokens]

    @property
    def deprels(self) -> list[Optional[str]]:
        return [t.deprel for t in self.tokens]

    @property
    def is_annotated(self) -> bool:
        return all(t.head is not None and t.deprel is not None for t in self.tokens)

    def with_annotation(self, heads: Sequence[Optional[int]],
                        deprels: Sequence[Optional[str]]) -> "Sentence":
        if len(heads) != len(self.tokens) or len(deprels) != len(self.tokens):
            raise ValueError("annotation length does not match sentence length")
        toks = tuple(replace(t, head=h, deprel=d)
                     for t, h, d in zip(self.tokens, heads, deprels))
        return Sentence(toks, self.metadata)

    def stripped(self) -> "Sentence":
        """Copy with HEAD and DEPREL removed."""
        n = len(self.tokens)
        return self.with_annotation([None] * n, [None] * n)


def make_sentence(rows: Iterable[Sequence], metadata: Optional[str] = None) -> Sentence:
    """Build a sentence from (form, postag, head, deprel) rows; ids are assigned 1..n."""
    toks = []
    for i, row in enumerate(rows, start=1):
        form, postag, head, deprel = row
        toks.append(Token(i, form, None, postag, postag, (), head, deprel))
    return Sentence(tuple(toks), metadata)


class Tagset:
    """Dependency relation vocabulary with case-insensitive lookup.

    ``aliases`` maps alternative spellings onto canonical labels; an alias
    is accepted but reported as a note by :func:`validate_sentence`.
    """

    def __init__(self, deprels: Sequence[str], root_label: str,
                 postags: Optional[Sequence[str]] = None,
                 aliases: Optional[Mapping[str, str]] = None):
        deprels = list(dict.fromkeys(deprels))
        if not deprels:
            raise ValueError("tagset has no dependency relations")
        if postags is not None and not postags:
            raise ValueError("postag set is empty")
        self.deprels: tuple[str, ...] = tuple(deprels)
        self._canon = {d.casefold(): d for d in deprels}
        if len(self._canon) != len(deprels):
            raise ValueError("tagset labels collide case-insensitively")
        if root_label.casefold() not in self._canon:
            raise ValueError(f"root label {root_label!r} not in tagset")
        self.root_label = self._canon[root_label.casefold()]
        self.postags: Optional[tuple[str, ...]] = (
            tuple(dict.fromkeys(postags)) if postags is not None else None)
        self._postags_cf = ({p.casefold() for p in self.postags}
                            if self.postags is not None else None)
        self.aliases: dict[str, str] = {}
        for alias, target in (aliases or {}).items():
            if target.casefold() not in self._canon:
                raise ValueError(f"alias {alias!r} targets unknown label {target!r}")
            self.aliases[alias.casefold()] = self._canon[target.casefold()]

    def canonical(self, label: Optional[str]) -> Optional[str]:
        """Canonical spelling of ``label``, resolving aliases; None if unknown."""
        if label is None:
            return None
        key = label.casefold()
        if key in self._canon:
            return self._canon[key]
        return self.aliases.get(key)

    def is_alias(self, label: str) -> bool:
        key = label.casefold()
        return key not in self._canon and key in self.aliases

    def __contains__(self, label) -> bool:
        return self.canonical(label) is not None

    def has_postag(self, tag: str) -> bool:
        return self._postags_cf is None or tag.casefold() in self._postags_cf

    def __eq__(self, other):
        if not isinstance(other, Tagset):
            return NotImplemented
        return (self.deprels == other.deprels and self.root_label == other.root_label
                and self.postags == other.postags and self.aliases == other.aliases)

    def __repr__(self):
        return f"Tagset({len(self.deprels)} deprels, root={self.root_label!r})"

    # Text format: one "kind<TAB>value" entry per line.
    def to_lines(self) -> list[str]:
        lines = [f"root\t{self.root_label}"]
        lines += [f"deprel\t{d}" for d in self.deprels]
        lines += [f"alias\t{a}\t{t}" for a, t in self.aliases.items()]
        if self.postags is not None:
            lines += [f"postag\t{p}" for p in self.postags]
        return lines

    @classmethod
    def from_lines(cls, lines: Iterable[str]) -> "Tagset":
        root = None
        deprels: list[str] = []
        postags: list[str] = []
        aliases: dict[str, str] = {}
        for lineno, raw in enumerate(lines, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.split("\t")
            kind = parts[0].lower()
            if kind == "root" and len(parts) == 2:
                root = parts[1]
            elif kind == "deprel" and len(parts) == 2:
                deprels.append(parts[1])
            elif kind == "postag" and len(parts) == 2:
                postags.append(parts[1])
            elif kind == "alias" and len(parts) == 3:
                aliases[parts[1]] = parts[2]
            elif len(parts) == 1:
                deprels.append(parts[0])
            else:
                raise ValueError(f"tagset line {lineno}: cannot parse {line!r}")
        if not deprels:
            raise ValueError("tagset defines no deprels")
        return cls(deprels, root or deprels[0], postags or None, aliases)


# Urdu dependency tagset: abbreviations of the 22 relations, Root first.
URDU_DEPRELS = (
    "Root", "Subj", "Dobj", "Iobj", "Nmod", "Vmod", "Nummod", "Adjmod",
    "Advmod", "Poss", "Aaux", "Taux", "Conj", "Cc", "Tp", "P", "Loc", "Q",
    "R", "NEG", "Vcomp", "Comp",
)
URDU_ALIASES = {"Reason": "R", "Poss.": "Poss", "lobj": "Iobj"}


def default_tagset() -> Tagset:
    return Tagset(URDU_DEPRELS, "Root", aliases=URDU_ALIASES)


@dataclass(frozen=True)
class Issue:
    sentence: int
    token: int
    kind: str
    message: str


@dataclass(frozen=True)
class ValidationReport:
    issues: tuple[Issue, ...] = ()
    notes: tuple[Issue, ...] = field(default=(), compare=False)

    @property
    def ok(self) -> bool:
        return not self.issues

    def merged(self, other: "ValidationReport") -> "ValidationReport":
        return ValidationReport(self.issues + other.issues, self.notes + other.notes)

    def format(self) -> str:
        lines = []
        for tag, items in (("error", self.issues), ("note", self.notes)):
            for i in items:
                lines.append(f"{tag}\tsentence {i.sentence}\ttoken {i.token}\t{i.kind}\t{i.message}")
        lines.append("OK" if self.ok else f"FAILED: {len(self.issues)} issue(s)")
        return "\n".join(lines)


def validate_sentence(s: Sentence, tagset: Optional[Tagset] = None,
                      require_annotation: bool = False,
                      index: int = 0) -> ValidationReport:
    """Collect every structural problem of ``s``.

    Never raises; issues are sorted by token id, then kind.
    """
    tagset = tagset if tagset is not None else default_tagset()
    issues: list[Issue] = []
    notes: list[Issue] = []
    n = len(s.tokens)

    def add(tok, kind, msg):
        issues.append(Issue(index, tok, kind, msg))

    for pos, t in enumerate(s.tokens, start=1):
        if t.id != pos:
            add(t.id, "non-contiguous id", f"expected id {pos}, found {t.id}")

    ids = [t.id for t in s.tokens]
    for t in s.tokens:
        if t.head is None:
            if require_annotation:
                add(t.id, "missing head", "HEAD is absent")
        elif t.head == t.id:
            add(t.id, "self-loop", f"token {t.id} is its own head")
        elif t.head != ROOT and not 1 <= t.head <= n:
            add(t.id, "head out of range", f"head {t.head} not in 0..{n}")
        if t.deprel is None:
            if require_annotation:
                add(t.id, "missing deprel", "DEPREL is absent")
        elif t.deprel not in tagset:
            add(t.id, "unknown deprel", f"{t.deprel!r} not in tagset")
        elif tagset.is_alias(t.deprel):
            notes.append(Issue(index, t.id, "alias deprel",
                               f"{t.deprel!r} read as {tagset.canonical(t.deprel)!r}"))
        if tagset.postags is not None and not tagset.has_postag(t.postag):
            add(t.id, "unknown postag", f"{t.postag!r} not in tagset")

    contiguous = ids == list(range(1, n + 1))
    if contiguous and n and all(t.head is not None for t in s.tokens):
        heads = [None] + [t.head for t in s.tokens]
        roots = [t.id for t in s.tokens if t.head == ROOT]
        if not roots:
            add(0, "no root", "no token is attached to node 0")
        elif len(roots) > 1:
            add(0, "multiple roots", "tokens " + ",".join(map(str, roots)) + " attach to node 0")
        for start in _cycle_representatives(heads, n):
            add(start, "cycle", f"head chain from token {start} never reaches node 0")

    issues.sort(key=lambda i: (i.token, i.kind))
    return ValidationReport(tuple(issues), tuple(notes))


def _cycle_representatives(heads: Sequence[Optional[int]], n: int) -> list[int]:
    # One entry per distinct cycle: its smallest member.
    state = [0] * (n + 1)  # 0 unvisited, 1 on current path, 2 done
    found = []
    for start in range(1, n + 1):
        path = []
        v = start
        while 1 <= v <= n and state[v] == 0 and v != heads[v]:
            state[v] = 1
            path.append(v)
            v = heads[v]
        if 1 <= v <= n and state[v] == 1 and v != heads[v]:
            cyc = path[path.index(v):]
            found.append(min(cyc))
        for u in path:
            state[u] = 2
    return sorted(found)


def validate_treebank(sentences: Sequence[Sentence], tagset: Optional[Tagset] = None,
                      require_annotation: bool = False) -> ValidationReport:
    report = ValidationReport()
    for i, s in enumerate(sentences):
        report = report.merged(validate_sentence(s, tagset, require_annotation, index=i))
    return report


def arcs_of(s: Sentence) -> list[tuple[int, int]]:
    return [(t.head, t.id) for t in s.tokens]


def is_projective(s: Sentence) -> bool:
    """True iff no two arcs cross, with node 0 placed at position 0.

    Arcs are treated as intervals; a crossing-free set is laminar, which a
    single sorted sweep with a stack of open intervals detects.
    """
    if any(t.head is None for t in s.tokens):
        raise ValueError("is_projective requires every token to have a head")
    spans = sorted(((min(h, d), max(h, d)) for h, d in arcs_of(s)),
                   key=lambda sp: (sp[0], -sp[1]))
    open_spans: list[tuple[int, int]] = []
    for lo, hi in spans:
        while open_spans and open_spans[-1][1] <= lo:
            open_spans.pop()
        if open_spans and hi > open_spans[-1][1]:
            return False
        open_spans.append((lo, hi))
    return True
