import random

import pytest

from bautkit.corpus import corpus_models
from bautkit.derivation import Derivation
from bautkit.dsl import parse_expr
from bautkit.model import build_model

SEED = 20240611


def su6():
    return build_model([("x1", 4), ("x2", 6), ("y1", 7), ("y2", 9), ("y3", 11)],
                       {"y1": "x1^2", "y2": "x1*x2", "y3": "x2^2"}, name="su6")


def pure5(degs, diffs, name=""):
    names = ["x1", "x2", "y1", "y2", "y3"]
    return build_model(list(zip(names, degs)), diffs, name=name)


def odd3(a, b, c, twisted=False):
    return build_model([("v1", a), ("v2", b), ("v3", c)], {"v3": "v1*v2"} if twisted else {})


def elem(m, gen, mono="1", coeff=1):
    """Elementary derivation (gen, mono) written with generator names."""
    a = m.algebra
    if mono == "1":
        key = ()
    else:
        (key, c), = parse_expr(mono, a).terms.items()
        coeff = coeff * c
    return Derivation.elementary(m, a.index[gen], key, coeff)


@pytest.fixture
def rng():
    return random.Random(SEED)


@pytest.fixture(scope="session")
def corpus():
    return {k: v for k, v in corpus_models().items()}


@pytest.fixture(scope="session")
def corpus_minimal_models(corpus):
    """Corpus models that are Sullivan minimal models of spaces."""
    return {k: v for k, v in corpus.items() if k != "su6_ce_golden"}


def pytest_terminal_summary(terminalreporter):
    mod = __import__("sys").modules.get("test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(results):
        ok, detail = results[n]
        terminalreporter.write_line("criterion %2d: %s  %s" % (n, "PASS" if ok else "FAIL", detail))
