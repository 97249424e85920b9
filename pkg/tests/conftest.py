import random
from itertools import combinations
from pathlib import Path

import pytest

from depkit.conll import load_conll
from depkit.core import make_sentence

DATA = Path(__file__).parent / "data"
URDU_PATH = DATA / "urdu_news.conll"

URDU_HEADS = [4, 1, 4, 17, 4, 7, 17, 7, 7, 14, 14, 11, 11, 17, 14, 17, 0]
URDU_DEPRELS = ["Loc", "P", "Comp", "Subj", "P", "Nummod", "Tp", "P", "Nmod", "Advmod",
                  "Nummod", "Cc", "Conj", "Iobj", "P", "Dobj", "Root"]


@pytest.fixture
def urdu():
    (s,) = load_conll(URDU_PATH)
    return s


@pytest.fixture
def two_token():
    # head(1)=2 labelled Nmod, token 2 is the root
    return make_sentence([("a", "NN", 2, "Nmod"), ("b", "VB", 0, "Root")])


@pytest.fixture
def crossing():
    # arcs (1,3) and (3,2)->(2,4) cross: 1 < 2 < 3 < 4
    return make_sentence([("w1", "NN", 0, "Root"), ("w2", "NN", 3, "Nmod"),
                          ("w3", "NN", 1, "Dobj"), ("w4", "NN", 2, "Nmod")])


def brute_force_projective(heads):
    """O(n^2) crossing-pair enumeration; heads[i-1] is the head of token i."""
    arcs = [(h, d) for d, h in enumerate(heads, start=1)]
    for (i, j), (k, l) in combinations(arcs, 2):
        a, b = min(i, j), max(i, j)
        c, d = min(k, l), max(k, l)
        if a < c < b < d or c < a < d < b:
            return False
    return True


def gold_arcs(sentence):
    return {(t.head, t.deprel, t.id) for t in sentence.tokens}


@pytest.fixture
def rng():
    return random.Random(20240611)


# acceptance reporting: one PASS/FAIL line per criterion

_ACCEPTANCE: dict[str, str] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(name): acceptance criterion")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    name = marker.args[0]
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        status = "PASS" if report.passed else "FAIL"
        if _ACCEPTANCE.get(name) != "FAIL":
            _ACCEPTANCE[name] = status


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for name, status in _ACCEPTANCE.items():
        terminalreporter.write_line(f"{status}  {name}")
