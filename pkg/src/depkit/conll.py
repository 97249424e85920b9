"""Reading and writing tab-separated CoNLL treebanks (8 or 10 columns)."""
from __future__ import annotations

import io
from dataclasses import dataclass
from typing import IO, Iterable, Iterator, Optional, Sequence, Union

from .core import Sentence, Token

ID, FORM, LEMMA, CPOSTAG, POSTAG, FEATS, HEAD, DEPREL = range(8)
ABSENT = "_"


class ConllError(ValueError):
    """Malformed CoNLL input."""

    def __init__(self, message: str, line: Optional[int] = None):
        self.line = line
        super().__init__(message if line is None else f"{message}, line {line}")


@dataclass(frozen=True)
class ConllDialect:
    columns: int = 10
    comment_prefix: str = "#"

    def __post_init__(self):
        if self.columns not in (8, 10):
            raise ValueError(f"columns must be 8 or 10, got {self.columns}")


def parse_feats(text: str) -> dict[str, str]:
    """Parse ``attr=val|attr=val``; ``_`` is the empty map."""
    feats: dict[str, str] = {}
    if text == ABSENT or text == "":
        return feats
    for item in text.split("|"):
        if "=" not in item:
            raise ValueError(f"FEATS item {item!r} has no '='")
        key, value = item.split("=", 1)
        if key in feats:
            raise ValueError(f"duplicate attribute {key}")
        feats[key] = value
    return feats


def format_feats(feats) -> str:
    items = feats.items() if hasattr(feats, "items") else feats
    parts = [f"{k}={v}" for k, v in items]
    return "|".join(parts) if parts else ABSENT


def _opt(field: str, extra_absent: tuple[str, ...] = ()) -> Optional[str]:
    if field == ABSENT or field in extra_absent:
        return None
    return field


def _parse_token(fields: list[str], lineno: int) -> Token:
    try:
        tid = int(fields[ID])
    except ValueError:
        raise ConllError(f"non-integer ID {fields[ID]!r}", lineno) from None
    head_field = fields[HEAD]
    head = None
    if head_field != ABSENT:
        if not (head_field.isascii() and head_field.isdigit()):
            raise ConllError(f"non-integer HEAD {head_field!r}", lineno)
        head = int(head_field)
    try:
        feats = parse_feats(fields[FEATS])
    except ValueError as e:
        raise ConllError(f"bad FEATS ({e})", lineno) from None
    try:
        return Token(
            id=tid,
            form=fields[FORM],
            lemma=_opt(fields[LEMMA], ("-",)),
            cpostag=fields[CPOSTAG],
            postag=fields[POSTAG],
            feats=tuple(feats.items()),
            head=head,
            deprel=_opt(fields[DEPREL]),
        )
    except ValueError as e:
        raise ConllError(str(e), lineno) from None


def iter_conll(source: Union[str, IO[str]], dialect: ConllDialect = ConllDialect(),
               accept_either: bool = True) -> Iterator[Sentence]:
    """Yield sentences from a text stream or string.

    With ``accept_either`` a file in the other column count is also read;
    each line must still carry the same number of columns as the first.
    """
    if isinstance(source, str):
        source = io.StringIO(source)
    expected = dialect.columns
    locked = not accept_either
    rows: list[Token] = []
    first = last = 0
    for lineno, raw in enumerate(source, start=1):
        line = raw.rstrip("\r\n")
        if lineno == 1 and line.startswith("\ufeff"):
            line = line[1:]
        if not line.strip():
            if rows:
                yield Sentence(tuple(rows), f"lines {first}-{last}")
                rows = []
            continue
        if dialect.comment_prefix and line.startswith(dialect.comment_prefix):
            continue
        fields = line.split("\t")
        if not locked:
            if len(fields) in (8, 10):
                expected = len(fields)
            locked = True
        if len(fields) != expected:
            raise ConllError(f"expected {expected} columns, got {len(fields)}", lineno)
        if not rows:
            first = lineno
        last = lineno
        rows.append(_parse_token(fields[:8], lineno))
    if rows:
        yield Sentence(tuple(rows), f"lines {first}-{last}")


def read_conll(source: Union[str, IO[str]], dialect: ConllDialect = ConllDialect(),
               accept_either: bool = True) -> list[Sentence]:
    return list(iter_conll(source, dialect, accept_either))


def load_conll(path, dialect: ConllDialect = ConllDialect()) -> list[Sentence]:
    with open(path, encoding="utf-8-sig") as f:
        return read_conll(f, dialect)


def format_token(t: Token, dialect: ConllDialect = ConllDialect()) -> str:
    fields = [
        str(t.id),
        t.form,
        t.lemma if t.lemma is not None else ABSENT,
        t.cpostag,
        t.postag,
        format_feats(t.feats),
        str(t.head) if t.head is not None else ABSENT,
        t.deprel if t.deprel is not None else ABSENT,
    ]
    if dialect.columns == 10:
        fields += [ABSENT, ABSENT]
    return "\t".join(fields)


def write_conll(sentences: Iterable[Sentence], dialect: ConllDialect = ConllDialect(),
                sink: Optional[IO[str]] = None) -> str:
    """Render sentences; returns the text and also writes it to ``sink`` if given."""
    text = "".join(
        "".join(format_token(t, dialect) + "\n" for t in s.tokens) + "\n"
        for s in sentences)
    if sink is not None:
        sink.write(text)
    return text


def dump_conll(sentences: Sequence[Sentence], path, dialect: ConllDialect = ConllDialect()):
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        write_conll(sentences, dialect, f)
