import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from depkit.core import make_sentence
from depkit.evaluation import (AlignmentError, attachment_by_deprel, attachment_scores,
                               cohen_kappa, f_score, kappa_band, kappa_from_labels,
                               prf_by_deprel)
from depkit.synthetic import random_sentence

GOLD4 = make_sentence([("a", "NN", 2, "Subj"), ("b", "VB", 0, "Root"),
                       ("c", "NN", 2, "Dobj"), ("d", "NN", 2, "Nmod")])
SYS4 = make_sentence([("a", "NN", 2, "Subj"), ("b", "VB", 0, "Root"),
                      ("c", "NN", 2, "Iobj"), ("d", "NN", 3, "Nmod")])


def labelled(labels, heads=None):
    heads = heads or [0] + [1] * (len(labels) - 1)
    return make_sentence([(f"t{i}", "NN", h, l) for i, (h, l) in enumerate(zip(heads, labels), 1)])


def test_identity(urdu):
    r = attachment_scores([urdu], [urdu])
    assert (r.las, r.uas, r.la) == (1.0, 1.0, 1.0)
    assert r.token_count == 17


def test_four_token_example():
    r = attachment_scores([GOLD4], [SYS4])
    assert r.uas == 0.75 and r.la == 0.75 and r.las == 0.5


def test_label_comparison_is_case_insensitive():
    sys = make_sentence([("a", "NN", 2, "SUBJ"), ("b", "VB", 0, "root"),
                         ("c", "NN", 2, "dobj"), ("d", "NN", 2, "Nmod")])
    assert attachment_scores([GOLD4], [sys]).las == 1.0


def test_adjmod_f_score():
    assert f_score(0.8, 0.923) == pytest.approx(0.857, abs=1e-3)
    assert f_score(None, 0.0) is None
    assert f_score(0.0, 0.0) is None


def test_prf_four_token():
    t = prf_by_deprel([GOLD4], [SYS4])
    assert t["Dobj"].recall == 0 and t["Dobj"].precision is None and t["Dobj"].fscore is None
    assert t["Iobj"].precision == 0 and t["Iobj"].recall is None
    assert t["Subj"].precision == t["Subj"].recall == t["Subj"].fscore == 1


def test_prf_identity(urdu):
    for m in prf_by_deprel([urdu], [urdu]).values():
        assert m.precision == m.recall == m.fscore == 1


def test_never_predicted_label_pattern():
    gold = labelled(["Root", "Aaux"])
    sys = labelled(["Root", "Taux"])
    m = prf_by_deprel([gold], [sys])["Aaux"]
    assert m.precision is None and m.recall == 0


def test_attachment_by_deprel_four_token():
    t = attachment_by_deprel([GOLD4], [SYS4])
    assert t["Dobj"].uas == 1 and t["Dobj"].las == 0
    assert t["Nmod"].uas == 0 and t["Nmod"].las == 0
    assert "Iobj" not in t  # grouped by gold label


def test_right_head_wrong_label_counts_for_uas_only():
    gold = labelled(["Root", "Vmod"])
    sys = labelled(["Root", "Nmod"])
    m = attachment_by_deprel([gold], [sys])["Vmod"]
    assert m.uas == 1 and m.las == 0


def test_misalignment_reported():
    with pytest.raises(AlignmentError, match="sentence 0"):
        attachment_scores([GOLD4], [labelled(["Root"])])
    other = make_sentence([("x", "NN", 2, "Subj"), ("b", "VB", 0, "Root"),
                           ("c", "NN", 2, "Dobj"), ("d", "NN", 2, "Nmod")])
    with pytest.raises(AlignmentError, match="token 1"):
        attachment_scores([GOLD4], [other])
    with pytest.raises(AlignmentError):
        attachment_scores([GOLD4], [])


def test_exclude_pos():
    gold = make_sentence([("a", "NN", 0, "Root"), (".", "SM", 1, "P")])
    sys = make_sentence([("a", "NN", 0, "Root"), (".", "SM", 0, "Root")])
    assert attachment_scores([gold], [sys]).las == 0.5
    assert attachment_scores([gold], [sys], exclude_pos=["sm"]).las == 1.0


def _random_pair(rng, n):
    gold = random_sentence(n, rng)
    noisy = []
    for t in gold.tokens:
        h = t.head if rng.random() < 0.6 else rng.randint(0, n)
        d = t.deprel if rng.random() < 0.6 else rng.choice(["Subj", "Dobj", "Nmod", "P"])
        noisy.append((h, d))
    return gold, gold.with_annotation([h for h, _ in noisy], [d for _, d in noisy])


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 2**31))
def test_score_ordering_and_reaggregation(seed):
    rng = random.Random(seed)
    pairs = [_random_pair(rng, rng.randint(1, 10)) for _ in range(rng.randint(1, 4))]
    gold = [g for g, _ in pairs]
    sys = [s for _, s in pairs]
    r = attachment_scores(gold, sys)
    assert r.las <= min(r.uas, r.la)
    groups = attachment_by_deprel(gold, sys)
    total = sum(m.gold_count for m in groups.values())
    assert total == r.token_count
    reagg = sum(m.gold_count * m.las for m in groups.values()) / total
    assert abs(reagg - r.las) <= 1e-12
    for m in groups.values():
        assert m.las <= m.uas
    table = prf_by_deprel(gold, sys)
    assert sum(m.system_count for m in table.values()) == r.token_count
    assert sum(m.gold_count for m in table.values()) == r.token_count


# kappa

def ten_token_pair():
    a = labelled(["A"] * 6 + ["B"] * 4)
    b = labelled(["A"] * 5 + ["B"] * 5)
    return a, b


def test_kappa_ten_token_example():
    a, b = ten_token_pair()
    r = cohen_kappa([a], [b], on="label")
    assert r.p_observed == 0.9 and r.p_expected == 0.5
    assert r.kappa == 0.8
    assert r.band == "Substantial"


def test_kappa_identity(urdu):
    r = cohen_kappa([urdu], [urdu], on="both")
    assert r.p_observed == 1 and r.kappa == 1 and r.band == "Almost Perfect"


def test_kappa_degenerate():
    a = labelled(["A", "A", "A"])
    r = cohen_kappa([a], [a])
    assert r.kappa == 1 and r.degenerate


def test_kappa_heads():
    a = labelled(["x"] * 4, [0, 1, 1, 1])
    b = labelled(["x"] * 4, [0, 1, 1, 2])
    r = cohen_kappa([a], [b], on="head")
    # categories 0/1/2: marginals a=(1,3,0), b=(1,2,1)
    p_e = Fraction(1 * 1 + 3 * 2, 16)
    expected = (Fraction(3, 4) - p_e) / (1 - p_e)
    assert r.kappa == float(expected)


def test_kappa_on_rejects_unknown():
    a, b = ten_token_pair()
    with pytest.raises(ValueError):
        cohen_kappa([a], [b], on="pos")


@settings(max_examples=100, deadline=None)
@given(st.lists(st.tuples(st.sampled_from("ABCD"), st.sampled_from("ABCD")), min_size=1, max_size=40))
def test_kappa_symmetric_and_bounded(pairs):
    a = [x for x, _ in pairs]
    b = [y for _, y in pairs]
    ab, ba = kappa_from_labels(a, b), kappa_from_labels(b, a)
    assert abs(ab.kappa - ba.kappa) <= 1e-12
    assert ab.kappa <= 1
    assert kappa_from_labels(a, a).kappa == 1


@pytest.mark.parametrize("k,band", [
    (0.93, "Almost Perfect"), (1.0, "Almost Perfect"), (0.81, "Almost Perfect"),
    (0.80, "Substantial"), (0.61, "Substantial"), (0.6, "Moderate"), (0.41, "Moderate"),
    (0.4, "Fair"), (0.21, "Fair"), (0.2, "None to slight"), (0.01, "None to slight"),
    (0.0, "No agreement"), (-0.5, "No agreement"),
])
def test_kappa_bands(k, band):
    assert kappa_band(k) == band


def test_kappa_band_rejects_above_one():
    with pytest.raises(ValueError):
        kappa_band(1.01)
