"""Training and greedy parsing, plus the text model format."""
from __future__ import annotations

import io
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import IO, Iterable, Optional, Sequence, Union

import numpy as np

from .core import Sentence, Tagset, default_tagset, is_projective, validate_sentence
from .features import (FeatureTemplate, FeatureVocabulary, default_feature_model,
                       extract, format_feature_spec, parse_template)
from .learner import LinearModel, TrainOptions, pack, predict_legal, score, train_packed
from .transitions import (ARC_KINDS, Transition, TransitionSystem, extract_tree,
                          get_system, iter_oracle)

log = logging.getLogger(__name__)

FORMAT_NAME = "depkit-model"
FORMAT_VERSION = 1


class ModelFormatError(ValueError):
    pass


def build_classes(system: TransitionSystem, tagset: Tagset) -> list[Transition]:
    """Class inventory: system kinds in declaration order, arc kinds expanded over the tagset."""
    classes = []
    for kind in system.kinds:
        if kind in ARC_KINDS:
            classes.extend(Transition(kind, label) for label in tagset.deprels)
        else:
            classes.append(Transition(kind))
    return classes


@dataclass(eq=False)
class ParserModel:
    system: TransitionSystem
    tagset: Tagset
    templates: list[FeatureTemplate]
    vocab: FeatureVocabulary
    classifier: LinearModel
    classes: list[Transition]
    fallback_label: Optional[str] = None
    version: int = FORMAT_VERSION

    def __post_init__(self):
        if self.fallback_label is None:
            self.fallback_label = self.tagset.root_label
        if not self.vocab.frozen:
            raise ValueError("model vocabulary must be frozen")
        if len(set(self.classes)) != len(self.classes):
            raise ValueError("duplicate transition in class mapping")
        if len(self.classes) != self.classifier.class_count:
            raise ValueError("class mapping does not match the classifier")
        self.class_index = {t: i for i, t in enumerate(self.classes)}
        self._by_kind: dict[str, list[int]] = {}
        for i, t in enumerate(self.classes):
            if t.kind not in self.system.kinds:
                raise ValueError(f"{t} is not a {self.system.name} transition")
            self._by_kind.setdefault(t.kind, []).append(i)

    def __eq__(self, other):
        if not isinstance(other, ParserModel):
            return NotImplemented
        return save_model_text(self) == save_model_text(other)

    def classes_for(self, kinds: Iterable[str]) -> list[int]:
        out: list[int] = []
        for k in kinds:
            out.extend(self._by_kind.get(k, ()))
        return out


@dataclass
class TrainReport:
    total: int = 0
    used: int = 0
    skipped_nonprojective: int = 0
    instances: int = 0
    mistakes: list[int] = field(default_factory=list)

    def summary(self) -> str:
        return (f"sentences used {self.used}, skipped (non-projective) "
                f"{self.skipped_nonprojective}, instances {self.instances}, "
                f"final-epoch mistakes {self.mistakes[-1] if self.mistakes else 0}")


def _canonical(s: Sentence, tagset: Tagset) -> Sentence:
    return s.with_annotation(s.heads, [tagset.canonical(d) for d in s.deprels])


def train_parser(treebank: Sequence[Sentence], system: Union[str, TransitionSystem],
                 templates: Optional[Sequence[FeatureTemplate]] = None,
                 tagset: Optional[Tagset] = None,
                 opts: TrainOptions = TrainOptions()) -> tuple[ParserModel, TrainReport]:
    system = get_system(system) if isinstance(system, str) else system
    templates = list(templates) if templates is not None else default_feature_model()
    tagset = tagset if tagset is not None else default_tagset()
    classes = build_classes(system, tagset)
    class_index = {t: i for i, t in enumerate(classes)}

    report = TrainReport(total=len(treebank))
    vocab = FeatureVocabulary()
    vectors: list[np.ndarray] = []
    labels: list[int] = []
    for i, s in enumerate(treebank):
        check = validate_sentence(s, tagset, require_annotation=True, index=i)
        if not check.ok:
            first = check.issues[0]
            raise ValueError(f"sentence {i} ({s.metadata or 'no metadata'}) token "
                             f"{first.token}: {first.kind}: {first.message}")
        if not system.handles_nonprojective and not is_projective(s):
            report.skipped_nonprojective += 1
            continue
        report.used += 1
        s = _canonical(s, tagset)
        for c, t in iter_oracle(s, system):
            vectors.append(extract(c, s, templates, vocab))
            labels.append(class_index[t])
    if report.used == 0:
        raise ValueError(f"no trainable sentences for {system.name} "
                         f"({report.skipped_nonprojective} skipped as non-projective)")
    if not labels:
        raise ValueError("training sentences produced no transitions")
    vocab.freeze()
    report.instances = len(labels)
    indptr, indices = pack(vectors)
    classifier = train_packed(indptr, indices, np.asarray(labels), len(classes),
                              max(len(vocab), 1), opts)
    report.mistakes = list(classifier.mistakes)
    log.info("trained %s: %s", system.name, report.summary())
    model = ParserModel(system, tagset, templates, vocab, classifier, classes,
                        tagset.root_label)
    return model, report


def parse_sentence(m: ParserModel, s: Sentence) -> Sentence:
    """Greedy parse; only HEAD and DEPREL of the result differ from ``s``."""
    system = m.system
    c = system.initial(s)
    while not system.is_terminal(c):
        kinds = system.legal(c)
        candidates = m.classes_for(kinds)
        if candidates:
            v = extract(c, s, m.templates, m.vocab)
            t = m.classes[predict_legal(m.classifier, v, candidates, score(m.classifier, v))]
        else:
            # the model file covers none of the legal moves
            kind = next(k for k in system.kinds if k in kinds)
            t = Transition(kind, m.fallback_label if kind in ARC_KINDS else None)
        c = system.apply(c, t)
    heads, labels = extract_tree(c, len(s), m.fallback_label)
    return s.with_annotation(heads, labels)


def parse_sentences(m: ParserModel, sentences: Sequence[Sentence], workers: int = 1) -> list[Sentence]:
    if workers <= 1 or len(sentences) < 2:
        return [parse_sentence(m, s) for s in sentences]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(lambda s: parse_sentence(m, s), sentences))


# Model file: a header, then "[section]<TAB>count" blocks, then "[end]".

def save_model(m: ParserModel, sink: IO[str]):
    vocab_items = sorted(m.vocab.items(), key=lambda kv: kv[1])
    weights = m.classifier.nonzero()
    tagset_lines = m.tagset.to_lines()
    sink.write(f"{FORMAT_NAME}\t{m.version}\n")
    sink.write(f"system\t{m.system.name}\n")
    sink.write(f"fallback\t{m.fallback_label}\n")
    sink.write(f"dimensions\t{m.classifier.feature_count}\t{m.classifier.class_count}\n")
    sink.write(f"[tagset]\t{len(tagset_lines)}\n")
    for line in tagset_lines:
        sink.write(line + "\n")
    sink.write(f"[features]\t{len(m.templates)}\n")
    sink.write(format_feature_spec(m.templates))
    sink.write(f"[classes]\t{len(m.classes)}\n")
    for i, t in enumerate(m.classes):
        sink.write(f"{i}\t{t}\n")
    sink.write(f"[vocabulary]\t{len(vocab_items)}\n")
    for (ordinal, value), index in vocab_items:
        sink.write(f"{ordinal}\t{value}\t{index}\n")
    sink.write(f"[weights]\t{len(weights)}\n")
    for f, c, w in weights:
        sink.write(f"{f}\t{c}\t{w!r}\n")
    sink.write("[end]\n")


def save_model_text(m: ParserModel) -> str:
    buf = io.StringIO()
    save_model(m, buf)
    return buf.getvalue()


def _header(lines, pos, key, nfields):
    if pos >= len(lines):
        raise ModelFormatError(f"truncated header: missing {key!r}")
    parts = lines[pos].split("\t")
    if parts[0] != key or len(parts) != nfields + 1:
        raise ModelFormatError(f"bad header line {pos + 1}: expected {key!r}")
    return parts[1:]


def _section(lines, pos, name):
    if pos >= len(lines):
        raise ModelFormatError(f"truncated model: section [{name}] missing")
    parts = lines[pos].split("\t")
    if parts[0] != f"[{name}]" or len(parts) != 2 or not parts[1].isdigit():
        raise ModelFormatError(f"line {pos + 1}: expected section [{name}]")
    count = int(parts[1])
    body = lines[pos + 1:pos + 1 + count]
    if len(body) < count:
        raise ModelFormatError(f"truncated section [{name}]: expected {count} lines, found {len(body)}")
    return body, pos + 1 + count


def load_model(source: Union[IO[str], str]) -> ParserModel:
    text = source if isinstance(source, str) else source.read()
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    if not lines or not lines[0].startswith(FORMAT_NAME):
        raise ModelFormatError("not a depkit model file")
    (version,) = _header(lines, 0, FORMAT_NAME, 1)
    if version != str(FORMAT_VERSION):
        raise ModelFormatError(f"unsupported model format version {version} (expected {FORMAT_VERSION})")
    (system_name,) = _header(lines, 1, "system", 1)
    try:
        system = get_system(system_name)
    except ValueError:
        raise ModelFormatError(f"unknown transition system {system_name!r}") from None
    (fallback,) = _header(lines, 2, "fallback", 1)
    nfeat, nclass = (int(x) for x in _header(lines, 3, "dimensions", 2))
    pos = 4
    try:
        body, pos = _section(lines, pos, "tagset")
        tagset = Tagset.from_lines(body)
        body, pos = _section(lines, pos, "features")
        templates = [parse_template(line, i) for i, line in enumerate(body, start=1)]
        body, pos = _section(lines, pos, "classes")
        classes = []
        for i, line in enumerate(body):
            idx, _, name = line.partition("\t")
            if int(idx) != i:
                raise ModelFormatError(f"section [classes]: index {idx} out of order")
            classes.append(Transition.parse(name))
        body, pos = _section(lines, pos, "vocabulary")
        vocab = FeatureVocabulary()
        for line in body:
            ordinal, value, index = line.split("\t")
            vocab.add(int(ordinal), value, int(index))
        vocab.freeze()
        body, pos = _section(lines, pos, "weights")
        entries = []
        for line in body:
            f, c, w = line.split("\t")
            entries.append((int(f), int(c), float(w)))
        classifier = LinearModel.from_entries(nfeat, nclass, entries)
    except ModelFormatError:
        raise
    except ValueError as e:
        raise ModelFormatError(f"malformed model near line {pos + 1}: {e}") from None
    if pos >= len(lines) or lines[pos] != "[end]":
        raise ModelFormatError("truncated model: [end] marker missing")
    if tagset.canonical(fallback) is None:
        raise ModelFormatError(f"fallback label {fallback!r} not in tagset")
    for t in classes:
        if t.label is not None and tagset.canonical(t.label) != t.label:
            raise ModelFormatError(f"class {t} uses a label outside the tagset")
    try:
        return ParserModel(system, tagset, templates, vocab, classifier, classes,
                           tagset.canonical(fallback), int(version))
    except ValueError as e:
        raise ModelFormatError(str(e)) from None


def save_model_file(m: ParserModel, path):
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        save_model(m, f)


def load_model_file(path) -> ParserModel:
    with open(path, encoding="utf-8") as f:
        return load_model(f)
