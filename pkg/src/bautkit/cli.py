"""Command-line interface.  JSON is the contract; text is rendered from it."""

from __future__ import annotations

import argparse
import json
import random
import sys
from typing import List, Optional

from .derivation import der_homology
from .diagnostics import (
    ShapeError,
    coformality,
    is_zero_differential,
    polynomial_check,
    pure23_criterion,
    sphere_product_report,
    to_plain,
)
from .dgl import baut_model
from .dsl import DSLError, load
from .minimal import hilbert, minimize, nonzero_differential_count
from .model import ModelError, cohomology, validate

SCHEMA = 1


class Refused(Exception):
    """A precondition the command will not work around."""


def _doc(model_name: str, command: str) -> dict:
    return {"schema": SCHEMA, "model": model_name, "command": command,
            "verdicts": [], "witnesses": [], "dims": {}, "generators": []}


def _generators(m) -> List[dict]:
    return [{"name": g.name, "degree": g.degree, "d": str(v) if v else "0"}
            for g, v in zip(m.generators, m.differential)]


def _add_verdicts(doc: dict, verdicts) -> None:
    for name, v in verdicts.items():
        doc["verdicts"].append({"name": name, "value": v.value})
        if v.witness is not None:
            doc["witnesses"].append({"verdict": name, "witness": to_plain(v.witness)})


# -- commands -----------------------------------------------------------------


def cmd_validate(args) -> dict:
    m = _load(args.file)
    rep = validate(m)
    doc = _doc(m.name, "validate")
    doc["verdicts"].append({"name": "valid", "value": "yes" if rep.ok else "no"})
    doc["witnesses"].append({"verdict": "valid", "witness": to_plain(rep.as_dict())})
    doc["generators"] = _generators(m)
    if not rep.ok:
        raise Refused(doc, "model is not a valid minimal Sullivan algebra")
    return doc


def cmd_cohomology(args) -> dict:
    m = _load(args.file)
    basis = cohomology(m, args.max_degree)
    doc = _doc(m.name, "cohomology")
    doc["dims"] = {str(k): d for k, d in enumerate(basis.dims()) if d}
    for k in range(basis.max_degree + 1):
        for w in basis.degree_basis(k):
            doc["witnesses"].append({"degree": k, "class": str(w)})
    doc["generators"] = _generators(m)
    return doc


def cmd_der_homology(args) -> dict:
    m = _load(args.file)
    h = der_homology(m)
    doc = _doc(m.name, "der-homology")
    doc["dims"] = {str(k): v for k, v in h.dims().items()}
    doc["generators"] = [{"name": c.label, "degree": c.degree} for c in h.all_classes()]
    _add_verdicts(doc, polynomial_check(m, h).verdicts)
    return doc


def cmd_baut(args) -> dict:
    m = _load(args.file)
    ce = baut_model(m)
    doc = _doc(m.name, "baut")
    hom = der_homology(m)
    doc["dims"]["homotopy"] = {str(k + 1): v for k, v in hom.dims().items()}
    doc["dims"]["ce_generators"] = len(ce.generators)
    if args.minimal or args.hilbert is not None:
        rng = random.Random(args.seed) if args.seed is not None else None
        res = minimize(ce, rng=rng)
        mm = res.model
        cof = coformality(mm)
        free = is_zero_differential(mm)
        _add_verdicts(doc, {"coformal": cof})
        doc["verdicts"].append({"name": "free", "value": "yes" if free else "no"})
        doc["verdicts"].append({"name": "linear_part_check", "value": "yes" if res.verification.ok else "no"})
        doc["dims"]["minimal_degrees"] = sorted(mm.degree_multiset())
        doc["dims"]["nonzero_differentials"] = nonzero_differential_count(mm)
        doc["generators"] = _generators(mm)
        if args.hilbert is not None:
            doc["dims"]["hilbert"] = hilbert(mm, args.hilbert)
    else:
        doc["generators"] = _generators(ce)
    return doc


def cmd_pure23(args) -> dict:
    m = _load(args.file)
    rep = pure23_criterion(m)
    doc = _doc(m.name, "diagnose pure23")
    _add_verdicts(doc, rep.verdicts)
    doc["dims"] = to_plain(rep.data)
    return doc


def cmd_sphere_product(args) -> dict:
    m = _load(args.file)
    if args.n % 2 == 0 or args.n < 3:
        raise Refused(None, "sphere-product needs an odd n >= 3")
    rep = sphere_product_report(m, args.n)
    doc = _doc(m.name, "diagnose sphere-product")
    _add_verdicts(doc, rep.verdicts)
    doc["dims"] = {"n": args.n, "rank": rep.data["rank"], "minimal_degrees": rep.data["minimal_degrees"],
                   "blocks": to_plain(rep.data["block_dims"])}
    doc["generators"] = rep.data["minimal_generators"]
    return doc


def cmd_corpus(args) -> dict:
    from .corpus import run_corpus

    rep = run_corpus(args.filter, args.corpus, args.jobs)
    doc = _doc("corpus", "corpus run")
    for o in rep.outcomes:
        doc["verdicts"].append({"name": o.name, "value": "yes" if o.passed else "no"})
        if not o.passed or o.erratum:
            doc["witnesses"].append({"verdict": o.name, "expected": to_plain(o.expected),
                                     "actual": to_plain(o.actual), "detail": o.detail,
                                     **({"erratum": o.erratum} if o.erratum else {})})
    doc["dims"] = {"passed": len(rep.outcomes) - len(rep.failures), "failed": len(rep.failures),
                   "errata": len(rep.errata)}
    if not rep.ok:
        raise Refused(doc, "%d expectation(s) failed" % len(rep.failures))
    return doc


def _load(path):
    return load(path).model


# -- rendering -------------------------------------------------------------------


def render_text(doc: dict) -> str:
    """Human-readable view; a pure function of the JSON document."""
    lines = ["%s: %s" % (doc["command"], doc["model"])]
    for k, v in doc["dims"].items():
        lines.append("  %s: %s" % (k, json.dumps(v) if isinstance(v, (dict, list)) else v))
    for v in doc["verdicts"]:
        lines.append("  [%s] %s" % (v["value"], v["name"]))
    for w in doc["witnesses"]:
        lines.append("    - " + json.dumps(w, sort_keys=True))
    for g in doc["generators"]:
        parts = [g.get("name", "")]
        if "degree" in g:
            parts.append("(%d)" % g["degree"])
        if g.get("d") not in (None, "0"):
            parts.append("d = %s" % g["d"])
        lines.append("  " + " ".join(parts))
    return "\n".join(lines)


def emit(doc: dict, fmt: str, stream=None) -> None:
    stream = stream or sys.stdout
    if fmt == "json":
        stream.write(json.dumps(doc, indent=1, sort_keys=True) + "\n")
    else:
        stream.write(render_text(doc) + "\n")


# -- argument parsing --------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=["text", "json"], default=argparse.SUPPRESS)
    common.add_argument("--seed", type=int, default=argparse.SUPPRESS,
                        help="randomize the elimination order reproducibly")
    common.add_argument("--max-degree", type=int, default=argparse.SUPPRESS)

    p = argparse.ArgumentParser(prog="bautkit", parents=[common],
                                description="Rational models of classifying spaces of self-equivalences.")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("validate", parents=[common], help="check a model file")
    s.add_argument("file")
    s.set_defaults(func=cmd_validate)

    s = sub.add_parser("cohomology", parents=[common], help="cohomology dimensions and class representatives")
    s.add_argument("file")
    s.set_defaults(func=cmd_cohomology)

    s = sub.add_parser("der-homology", parents=[common], help="homology of the derivation complex")
    s.add_argument("file")
    s.set_defaults(func=cmd_der_homology)

    s = sub.add_parser("baut", parents=[common], help="cochain model of the classifying space")
    s.add_argument("file")
    s.add_argument("--minimal", action="store_true", help="reduce to the minimal model")
    s.add_argument("--hilbert", type=int, metavar="N", help="Hilbert series up to degree N")
    s.set_defaults(func=cmd_baut)

    s = sub.add_parser("diagnose", parents=[common], help="decision procedures")
    dsub = s.add_subparsers(dest="diagnosis", required=True)
    t = dsub.add_parser("pure23", parents=[common], help="non-polynomiality criterion for pure rank-5 models")
    t.add_argument("file")
    t.set_defaults(func=cmd_pure23)
    t = dsub.add_parser("sphere-product", parents=[common], help="products with an odd sphere")
    t.add_argument("file")
    t.add_argument("--n", type=int, required=True)
    t.set_defaults(func=cmd_sphere_product)

    s = sub.add_parser("corpus", parents=[common], help="golden corpus")
    csub = s.add_subparsers(dest="action", required=True)
    t = csub.add_parser("run", parents=[common], help="evaluate every expectation")
    t.add_argument("--filter", metavar="NAME", help="only entries whose name contains NAME")
    t.add_argument("--corpus", metavar="DIR", help="alternative corpus directory")
    t.add_argument("--jobs", type=int, default=1)
    t.set_defaults(func=cmd_corpus)
    return p


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    for k, v in (("format", "text"), ("seed", None), ("max_degree", None)):
        if not hasattr(args, k):
            setattr(args, k, v)
    try:
        doc = args.func(args)
    except Refused as r:
        doc, msg = r.args
        if doc is not None:
            emit(doc, args.format)
        print("refused: %s" % msg, file=sys.stderr)
        return 1
    except (DSLError, ShapeError, ModelError, OSError) as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 2
    emit(doc, args.format)
    return 0


if __name__ == "__main__":
    sys.exit(main())
