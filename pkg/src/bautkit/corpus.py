"""
The shipped corpus of model files and the golden-expectation runner.

Each entry of ``corpus/expectations.json`` names a model file and a set of
checks; every check becomes one outcome ``<entry>.<check>``.
"""

from __future__ import annotations

import json
import re
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path
from typing import Dict, List, Optional, Sequence

from .algebra import Element, GradedAlgebra
from .dgl import baut_model
from .diagnostics import (
    UNDECIDED,
    YES,
    baut,
    polynomial_check,
    pure23_criterion,
    sphere_product_report,
)
from .dsl import load, parse_expr
from .minimal import hilbert
from .model import EXACT, NOT_COCYCLE, class_of

CORPUS_DIR = Path(__file__).with_name("corpus")


def safe_name(label: str) -> str:
    """``V_{y3,x1^2}`` -> ``V_y3_x1p2``: CE generator names in DSL form."""
    m = re.fullmatch(r"V_\{(.*)\}", label)
    body = m.group(1) if m else label
    return "V_" + body.replace("^", "p").replace(",", "_")


def renamed(model, names: Sequence[str]):
    """The same CDGA with generators renamed positionally."""
    from .model import FreeCDGA

    a = GradedAlgebra(list(zip(names, model.algebra.degrees)))
    return FreeCDGA(a, {n: Element(a, v.terms) for n, v in zip(names, model.differential)}, name=model.name)


def hom(e: Element, images: Sequence[Element], target: GradedAlgebra) -> Element:
    out = target.zero()
    for mono, c in e.terms.items():
        t = target.scalar(c)
        for g, k in mono:
            t = t * images[g] ** k
        out = out + t
    return out


def monomial_quotient_series(gens: Sequence[tuple], killed: Sequence[Dict[str, int]], N: int) -> List[int]:
    """
    Dimensions of a free graded-commutative algebra modulo monomials.
    ``gens`` are ``(name, degree)``; a basis monomial survives unless it is
    divisible by one of ``killed``.
    """
    dims = [0] * (N + 1)

    def walk(i, deg, powers):
        if i == len(gens):
            if not any(all(powers.get(g, 0) >= e for g, e in k.items()) for k in killed):
                dims[deg] += 1
            return
        name, d = gens[i]
        top = 1 if d % 2 else N // d
        for e in range(top + 1):
            if deg + e * d > N:
                break
            if e:
                powers[name] = e
            walk(i + 1, deg + e * d, powers)
        powers.pop(name, None)

    walk(0, 0, {})
    return dims


def s3s5_oracle(N: int) -> List[int]:
    ws = [("w%d" % i, 3 + 6 * i) for i in range((N - 3) // 6 + 1) if 3 + 6 * i <= N]
    gens = [("v", 4)] + ws
    killed = [{"v": 1, w: 1} for w, _ in ws]
    killed += [{w1: 1, w2: 1} for i, (w1, _) in enumerate(ws) for w2, _ in ws[i + 1:]]
    return monomial_quotient_series(gens, killed, N)


ORACLES = {"s3s5": s3s5_oracle}


@dataclass
class Outcome:
    name: str
    passed: bool
    expected: object = None
    actual: object = None
    detail: str = ""
    erratum: Optional[dict] = None      # printed value the expectation deliberately departs from

    def as_dict(self):
        out = {"name": self.name, "passed": self.passed, "expected": self.expected,
               "actual": self.actual, "detail": self.detail}
        if self.erratum:
            out["erratum"] = self.erratum
        return out


@dataclass
class CorpusReport:
    outcomes: List[Outcome] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(o.passed for o in self.outcomes)

    @property
    def failures(self) -> List[Outcome]:
        return [o for o in self.outcomes if not o.passed]

    @property
    def errata(self) -> List[Outcome]:
        return [o for o in self.outcomes if o.erratum]

    def as_dict(self):
        return {"passed": sum(o.passed for o in self.outcomes), "failed": len(self.failures),
                "errata": [o.name for o in self.errata],
                "outcomes": [o.as_dict() for o in self.outcomes]}


class _Context:
    def __init__(self, entry: dict, directory: Path):
        self.entry = entry
        self.directory = directory

    def load(self, fname: str):
        return load(self.directory / fname).model

    @cached_property
    def model(self):
        return self.load(self.entry["model"])

    @cached_property
    def bundle(self):
        return baut(self.model)

    @cached_property
    def polynomial(self):
        b = self.__dict__.get("bundle")
        return polynomial_check(self.model, b.homology if b else None)


def _same(expected, actual):
    return expected == actual, actual, ""


def _check_minimal_degrees(ctx, exp):
    return _same(sorted(exp), sorted(ctx.bundle.minimal.model.degree_multiset()))


def _check_nonzero(ctx, exp):
    return _same(exp, ctx.bundle.as_dict()["nonzero_differentials"])


def _check_zero_differential(ctx, exp):
    return _same(exp, ctx.bundle.free)


def _check_coformal(ctx, exp):
    v = ctx.bundle.coformal
    return exp == v.value, v.value, str(v.witness)


def _check_dims(ctx, exp):
    return _same({int(k): v for k, v in exp.items()}, ctx.bundle.homology.dims())


def _check_homotopy(ctx, exp):
    act = sorted(c.degree + 1 for c in ctx.bundle.homology.all_classes())
    return _same(sorted(exp), act)


def _check_polynomial(ctx, exp):
    return _same(exp, ctx.polynomial["polynomial"])


def _check_polynomial_witness(ctx, exp):
    w = ctx.polynomial.witness("polynomial")
    deg = w.get("degree") if isinstance(w, dict) else None
    return _same(exp, deg)


def _check_pure23(ctx, exp):
    rep = pure23_criterion(ctx.model)
    act, bad = {}, []
    for k, v in exp.items():
        if k in ("l", "k"):
            w = rep.witness("condition_II")
            act[k] = w.get(k) if isinstance(w, dict) else None
        elif k == "witness_degree":
            w = rep.witness("condition_I")
            act[k] = w.get("degree") if isinstance(w, dict) else None
        else:
            act[k] = rep[k]
        if act[k] != v:
            bad.append(k)
    if not rep.data["agrees_with_polynomial_check"]:
        bad.append("agreement with polynomial check")
    if rep["condition_I"] == YES:
        w = rep.witness("condition_I")
        z = parse_expr(w["cocycle"], ctx.model.algebra)
        if class_of(ctx.model, z) in (EXACT, NOT_COCYCLE):
            bad.append("condition I witness is not a nonzero class")
    if rep["condition_II"] == YES:
        from .diagnostics import verify_membership_witness

        w = rep.witness("condition_II")
        if not (verify_membership_witness(ctx.model, w["first"]) and verify_membership_witness(ctx.model, w["second"])):
            bad.append("membership certificate does not re-multiply")
    return not bad, act, "; ".join(bad)


def _check_ce_golden(ctx, exp):
    from .model import FreeCDGA

    golden = ctx.load(exp["file"])
    ce = baut_model(ctx.model)
    ours = renamed(ce, [safe_name(g.name) for g in ce.generators])
    oa = ours.algebra
    if len(ce.generators) != exp["ce_generators"]:
        return False, len(ce.generators), "wrong number of CE generators"
    images = []
    for g in golden.generators:
        if g.name in exp["substitution"]:
            images.append(parse_expr(exp["substitution"][g.name], oa))
        elif g.name in oa.index:
            images.append(oa.gen(g.name))
        else:
            return False, g.name, "golden generator %s has no counterpart" % g.name
    bad = []
    for g, dg, img in zip(golden.generators, golden.differential, images):
        if ours.d(img) != hom(dg, images, oa):
            bad.append(g.name)
    if not FreeCDGA(golden.algebra, {g.name: v for g, v in zip(golden.generators, golden.differential)}).d_squared_zero():
        bad.append("golden D^2 != 0")
    return not bad, bad or "all match", ("D differs on " + ", ".join(bad)) if bad else ""


def _check_hilbert_oracle(ctx, exp):
    N = exp["max_degree"]
    want = ORACLES[exp["name"]](N)
    got = hilbert(baut_model(ctx.model), N)
    return want == got, got, "" if want == got else "oracle %s" % want


def _check_product_of(ctx, exp):
    factors = [baut(ctx.load(f)).free for f in exp]
    prod = ctx.bundle.free
    ok = (not prod) or all(factors)
    return ok, {"product": prod, "factors": factors}, ""


def _check_sphere_products(ctx, exp):
    bad, acts = [], []
    for row in exp:
        rep = sphere_product_report(ctx.model, row["n"])
        act = {"n": row["n"], "rank": rep.data["rank"], "H*_free": rep["H*_free"], "coformal": rep["coformal"]}
        for k in ("rank", "H*_free", "coformal"):
            if k in row and row[k] != act[k]:
                bad.append("n=%d %s: expected %s, got %s" % (row["n"], k, row[k], act[k]))
        tab = {}
        for k, want in row.get("table", {}).items():
            key = k if k in rep.verdicts else None
            if key is None:
                continue
            got = rep[key]
            tab[k] = got
            if got != UNDECIDED and got != want:
                bad.append("n=%d %s: table %s, computed %s" % (row["n"], k, want, got))
        act["table"] = tab
        acts.append(act)
    return not bad, acts, "; ".join(bad)


def _check_window(ctx, exp):
    free = [n for n in exp["n"] if sphere_product_report(ctx.model, n)["H*_free"] == YES]
    return _same(exp["free"], free)


CHECKS = {
    "minimal_degrees": _check_minimal_degrees,
    "nonzero_differentials": _check_nonzero,
    "zero_differential": _check_zero_differential,
    "coformal": _check_coformal,
    "der_homology_dims": _check_dims,
    "homotopy_degrees": _check_homotopy,
    "polynomial": _check_polynomial,
    "polynomial_witness_degree": _check_polynomial_witness,
    "pure23": _check_pure23,
    "ce_golden": _check_ce_golden,
    "hilbert_oracle": _check_hilbert_oracle,
    "product_of": _check_product_of,
    "sphere_products": _check_sphere_products,
    "freeness_window": _check_window,
}


def load_expectations(directory: Optional[Path] = None) -> List[dict]:
    d = Path(directory) if directory else CORPUS_DIR
    data = json.loads((d / "expectations.json").read_text(encoding="utf-8"))
    if data.get("schema") != 1:
        raise ValueError("unknown expectations schema")
    return data["entries"]


def run_entry(entry: dict, directory: Path) -> List[Outcome]:
    ctx = _Context(entry, Path(directory))
    errata = entry.get("errata", {})
    out = []
    for key, exp in entry["checks"].items():
        name = "%s.%s" % (entry["name"], key)
        try:
            passed, actual, detail = CHECKS[key](ctx, exp)
        except Exception as exc:          # a crash is a failed expectation, named
            passed, actual, detail = False, None, "%s: %s" % (type(exc).__name__, exc)
        out.append(Outcome(name, bool(passed), exp, actual, detail, errata.get(key)))
    return out


def _run_one(args):
    return run_entry(*args)


def run_corpus(filter: Optional[str] = None, directory=None, jobs: int = 1) -> CorpusReport:
    d = Path(directory) if directory else CORPUS_DIR
    entries = [e for e in load_expectations(d) if not filter or filter in e["name"]]
    if jobs > 1:
        with ProcessPoolExecutor(jobs) as ex:
            results = list(ex.map(_run_one, [(e, d) for e in entries]))
    else:
        results = [run_entry(e, d) for e in entries]
    outcomes = sorted((o for r in results for o in r), key=lambda o: o.name)
    return CorpusReport(outcomes)


def corpus_models(directory=None) -> Dict[str, object]:
    """Every model file of the corpus, by stem."""
    d = Path(directory) if directory else CORPUS_DIR
    return {p.stem: load(p).model for p in sorted(d.glob("*.model"))}
