import hashlib

import numpy as np
import pytest

from depkit.features import (FeatureSpecError, FeatureVocabulary, NULL, ROOT_VALUE,
                             default_feature_model, extract, format_feature_spec,
                             parse_feature_spec, parse_template)
from depkit.transitions import Transition, get_system

EAGER = get_system("arc-eager")


def test_parse_two_lines():
    ts = parse_feature_spec("STACK[0].POSTAG\nBUFFER[0].POSTAG")
    assert [str(t) for t in ts] == ["STACK[0].POSTAG", "BUFFER[0].POSTAG"]


def test_feats_key_and_case_insensitive_keywords():
    (t,) = parse_feature_spec("buffer[0].feats[Suf]")
    assert (t.base, t.depth, t.attribute, t.key) == ("BUFFER", 0, "FEATS", "Suf")
    (t,) = parse_feature_spec("Stack[0].HEAD.deprel  # comment\n\n# only comment\n")
    assert t.steps == ("head",) and t.attribute == "DEPREL"


@pytest.mark.parametrize("text,msg", [
    ("STACK[9].FORM", "k exceeds 3"),
    ("QUEUE[0].FORM", "unknown address"),
    ("STACK[0].COLOR", "unknown attribute"),
    ("STACK[0].parent.FORM", "unknown step"),
    ("STACK[0].head.head.head.FORM", "more than 2"),
    ("STACK[0]", "expected ADDRESS.ATTRIBUTE"),
])
def test_spec_errors(text, msg):
    with pytest.raises(FeatureSpecError, match=msg):
        parse_feature_spec("STACK[0].FORM\n" + text)
    with pytest.raises(FeatureSpecError, match="line 2"):
        parse_feature_spec("STACK[0].FORM\n" + text)


def test_default_model():
    ts = default_feature_model()
    assert len(ts) == 14
    assert [str(t) for t in ts] == [
        "STACK[0].FORM", "STACK[0].POSTAG", "BUFFER[0].FORM", "BUFFER[0].POSTAG",
        "BUFFER[1].FORM", "BUFFER[1].POSTAG", "STACK[1].POSTAG", "BUFFER[2].POSTAG",
        "STACK[0].DEPREL", "STACK[0].ldep.DEPREL", "STACK[0].rdep.DEPREL",
        "BUFFER[0].ldep.DEPREL", "STACK[0].FEATS[G]", "BUFFER[0].FEATS[N]",
    ]
    for t in ts:
        assert parse_template(str(t)) == t
    assert parse_feature_spec(format_feature_spec(ts)) == ts
    digest = hashlib.sha256(format_feature_spec(default_feature_model()).encode()).hexdigest()
    assert digest == hashlib.sha256(format_feature_spec(ts).encode()).hexdigest()


def test_values_on_urdu_initial(urdu):
    c = EAGER.initial(urdu)
    ts = parse_feature_spec("STACK[0].POSTAG\nBUFFER[0].POSTAG\nSTACK[1].FORM\n"
                            "BUFFER[0].FEATS[Suf]\nBUFFER[0].LEMMA\nSTACK[0].DEPREL")
    assert [t.value(c, urdu) for t in ts] == [ROOT_VALUE, "PN", NULL, "0", "_", NULL]


def test_path_steps_follow_partial_tree(urdu):
    c = EAGER.initial(urdu)
    # gold head(2) = 1: SHIFT then RIGHT-ARC(P)
    c = EAGER.apply(c, Transition("SHIFT"))
    c = EAGER.apply(c, Transition("RIGHT-ARC", "P"))
    ts = parse_feature_spec("STACK[0].DEPREL\nSTACK[0].head.FORM\nSTACK[1].rdep.FORM\n"
                            "STACK[1].ldep.FORM\nSTACK[0].head.head.FORM")
    vals = [t.value(c, urdu) for t in ts]
    assert vals == ["P", urdu.tokens[0].form, urdu.tokens[1].form,
                    urdu.tokens[1].form, NULL]


def test_extract_grows_then_freezes(urdu):
    ts = default_feature_model()
    vocab = FeatureVocabulary()
    c = EAGER.initial(urdu)
    v = extract(c, urdu, ts, vocab)
    assert len(v) == len(ts) == len(vocab)
    assert list(v) == sorted(set(v))
    assert np.array_equal(extract(c, urdu, ts, vocab), v)
    vocab.freeze()
    c2 = EAGER.apply(c, Transition("SHIFT"))
    v2 = extract(c2, urdu, ts, vocab)
    assert len(vocab) == len(ts)
    assert len(v2) <= len(ts)


def test_empty_templates_and_all_unseen(urdu):
    vocab = FeatureVocabulary()
    assert extract(EAGER.initial(urdu), urdu, [], vocab).size == 0
    vocab.freeze()
    assert extract(EAGER.initial(urdu), urdu, default_feature_model(), vocab).size == 0


def test_vocabulary_first_seen_order(urdu):
    vocab = FeatureVocabulary()
    ts = parse_feature_spec("BUFFER[0].POSTAG")
    c = EAGER.initial(urdu)
    seen = []
    while not EAGER.is_terminal(c):
        seen.append(int(extract(c, urdu, ts, vocab)[0]))
        c = EAGER.apply(c, Transition("SHIFT"))
    assert seen == [0, 1, 2, 2, 1, 3, 2, 1, 2, 4, 3, 5, 3, 2, 1, 2, 6]
