import io

import pytest

from depkit.conll import write_conll
from depkit.core import default_tagset, make_sentence, validate_sentence
from depkit.evaluation import attachment_scores
from depkit.learner import TrainOptions
from depkit.pipeline import (ModelFormatError, build_classes, load_model, parse_sentence,
                             parse_sentences, save_model_text, train_parser)
from depkit.synthetic import random_treebank
from depkit.transitions import derive_sequence, get_system

from conftest import URDU_DEPRELS, URDU_HEADS


@pytest.fixture(scope="module")
def treebank():
    return random_treebank(30, seed=11)


@pytest.fixture(scope="module")
def eager_model(treebank):
    return train_parser(treebank, "arc-eager")


def test_class_mapping_order():
    classes = build_classes(get_system("arc-standard"), default_tagset())
    assert str(classes[0]) == "SHIFT"
    assert str(classes[1]) == "LEFT-ARC:Root"
    assert str(classes[23]) == "RIGHT-ARC:Root"
    assert len(classes) == 1 + 2 * 22


def test_urdu_memorized(urdu):
    model, report = train_parser([urdu], "arc-eager")
    assert report.used == 1
    assert report.instances == len(derive_sequence(urdu, get_system("arc-eager")))
    out = parse_sentence(model, urdu.stripped())
    assert out.heads == URDU_HEADS
    assert out.deprels == URDU_DEPRELS


def test_nonprojective_only_treebank(crossing):
    with pytest.raises(ValueError, match="no trainable sentences"):
        train_parser([crossing], "arc-eager")
    model, report = train_parser([crossing], "covington")
    assert report.used == 1 and report.skipped_nonprojective == 0


def test_report_counts(treebank, crossing):
    _, report = train_parser(list(treebank) + [crossing], "arc-standard",
                             opts=TrainOptions(epochs=2))
    assert report.total == len(treebank) + 1
    assert report.used + report.skipped_nonprojective == report.total
    assert report.skipped_nonprojective == 1
    assert len(report.mistakes) == 2


def test_invalid_training_sentence_rejected():
    bad = make_sentence([("a", "NN", 2, "Subj"), ("b", "NN", 1, "Dobj")])
    with pytest.raises(ValueError, match="cycle|no root"):
        train_parser([bad], "arc-eager")


def test_deterministic_model_files(treebank):
    a, _ = train_parser(treebank, "arc-eager")
    b, _ = train_parser(treebank, "arc-eager")
    assert save_model_text(a) == save_model_text(b)


def test_output_passes_validation_and_preserves_columns(eager_model, treebank):
    model, _ = eager_model
    for s in random_treebank(15, seed=99, max_len=20):
        out = parse_sentence(model, s)
        assert validate_sentence(out, model.tagset, require_annotation=True).ok
        assert [(t.id, t.form, t.lemma, t.cpostag, t.postag, t.feats) for t in out] == \
               [(t.id, t.form, t.lemma, t.cpostag, t.postag, t.feats) for t in s]


def test_unseen_words_still_tree(eager_model):
    model, _ = eager_model
    s = make_sentence([(f"zz{i}", "XX", None, None) for i in range(7)])
    out = parse_sentence(model, s)
    assert validate_sentence(out, require_annotation=True).ok
    assert out.heads.count(0) == 1


def test_empty_sentence(eager_model):
    model, _ = eager_model
    empty = make_sentence([])
    assert len(parse_sentence(model, empty)) == 0


def test_parallel_parse_keeps_order(eager_model, treebank):
    model, _ = eager_model
    assert parse_sentences(model, treebank, workers=4) == parse_sentences(model, treebank)


@pytest.mark.parametrize("system", ["arc-eager", "arc-standard", "covington"])
def test_save_load_roundtrip(system, treebank):
    model, _ = train_parser(treebank, system, opts=TrainOptions(epochs=3))
    text = save_model_text(model)
    loaded = load_model(io.StringIO(text))
    assert loaded == model
    assert save_model_text(loaded) == text
    assert loaded.classifier.weights.tobytes() == model.classifier.weights.tobytes()
    held_out = random_treebank(10, seed=5)
    assert write_conll(parse_sentences(loaded, held_out)) == \
        write_conll(parse_sentences(model, held_out))


def test_unknown_system_in_file(eager_model):
    text = save_model_text(eager_model[0]).replace("system\tarc-eager", "system\tplanar")
    with pytest.raises(ModelFormatError, match="unknown transition system"):
        load_model(text)


def test_version_mismatch(eager_model):
    text = save_model_text(eager_model[0]).replace("depkit-model\t1", "depkit-model\t9", 1)
    with pytest.raises(ModelFormatError, match="version"):
        load_model(text)


def test_truncated_section_named(eager_model):
    text = save_model_text(eager_model[0])
    cut = text[: text.index("[weights]") + 200]
    with pytest.raises(ModelFormatError, match=r"\[weights\]"):
        load_model(cut)
    cut = text[: text.index("[vocabulary]")]
    with pytest.raises(ModelFormatError, match=r"\[vocabulary\]"):
        load_model(cut)


MINIMAL = """\
depkit-model\t1
system\tarc-eager
fallback\tRoot
dimensions\t1\t2
[tagset]\t2
root\tRoot
deprel\tRoot
[features]\t1
BUFFER[0].POSTAG
[classes]\t2
0\tSHIFT
1\tRIGHT-ARC:Root
[vocabulary]\t1
0\tVB\t0
[weights]\t1
0\t1\t1.0
[end]
"""


def test_hand_written_minimal_model():
    # initial config: legal {SHIFT, RIGHT-ARC}; BUFFER[0].POSTAG=VB scores
    # RIGHT-ARC:Root at 1.0 against 0.0 for SHIFT
    model = load_model(MINIMAL)
    out = parse_sentence(model, make_sentence([("x", "VB", None, None)]))
    assert out.heads == [0] and out.deprels == ["Root"]
    # unseen tag: all scores 0, SHIFT wins the tie; repair attaches to root
    out = parse_sentence(model, make_sentence([("x", "NN", None, None)]))
    assert out.heads == [0] and out.deprels == ["Root"]


def test_overfit_small_treebank(eager_model, treebank):
    model, _ = eager_model
    report = attachment_scores(treebank, parse_sentences(model, treebank))
    assert report.las >= 0.95
