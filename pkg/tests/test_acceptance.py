"""
Acceptance criteria, one test each.  Expected values are the printed ones,
written out here rather than read from the corpus expectations, so that the
corpus runner and these tests check each other.
"""

import time

from bautkit.algebra import Element
from bautkit.corpus import CORPUS_DIR, hom, renamed, safe_name
from bautkit.derivation import DerChainComplex, Derivation, boundary, bracket, der_homology, homology_bracket
from bautkit.dgl import baut_model
from bautkit.diagnostics import NO, UNDECIDED, YES, baut, polynomial_check, pure23_criterion, \
    sphere_product_report, verify_membership_witness
from bautkit.dsl import load, parse_expr
from bautkit.minimal import hilbert, is_coformal, is_zero_differential, minimize, nonzero_differential_count
from bautkit.model import EXACT, class_of, product_model, sphere_model

from conftest import odd3, pure5, su6

RESULTS = {}


def report(n, ok, detail=""):
    RESULTS[n] = (ok, detail)
    print("criterion %2d: %s %s" % (n, "PASS" if ok else "FAIL", detail))
    assert ok, detail


class Clock:
    def __enter__(self):
        self.t = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.elapsed = time.perf_counter() - self.t


def minimal_of(m):
    return minimize(baut_model(m)).model


# -- 1 ------------------------------------------------------------------------


def test_criterion_01_spheres():
    bad = []
    with Clock() as c:
        for n in (2, 3, 4, 5, 6, 7):
            mm = minimal_of(sphere_model(n))
            want = [n + 1] if n % 2 else [2 * n]
            if mm.degree_multiset() != want or not is_zero_differential(mm):
                bad.append(n)
    report(1, not bad and c.elapsed < 1, "spheres n=2..7 in %.2fs%s" % (c.elapsed, " bad %s" % bad if bad else ""))


# -- 2 ------------------------------------------------------------------------


def _golden_mismatches(ce):
    golden = load(CORPUS_DIR / "su6_ce_golden.model").model
    ours = renamed(ce, [safe_name(g.name) for g in ce.generators])
    oa = ours.algebra
    sub = {"V_w1": "2*V_y2_x1 - V_y3_x2", "V_w2": "2*V_y2_x2 - V_y1_x1"}
    images = [parse_expr(sub[g.name], oa) if g.name in sub else oa.gen(g.name) for g in golden.generators]
    return [g.name for g, dg, img in zip(golden.generators, golden.differential, images)
            if ours.d(img) != hom(dg, images, oa)]


def test_criterion_02_su6():
    with Clock() as c:
        m = su6()
        dims = der_homology(m).dims()
        ce = baut_model(m)
        golden_bad = _golden_mismatches(ce)
        mm = minimize(ce).model
    checks = {
        "dims": dims == {1: 1, 2: 1, 3: 1, 5: 1, 7: 2, 9: 1, 11: 1},
        "18 generators": len(ce.generators) == 18,
        "D^2=0": ce.d_squared_zero(),
        "consolidated D": not golden_bad,
        "multiset": sorted(mm.degree_multiset()) == [2, 3, 4, 6, 8, 8, 10, 12],
        "5 nonzero": nonzero_differential_count(mm) == 5,
        "coformal": is_coformal(mm),
        "not free": not is_zero_differential(mm),
        "time": c.elapsed < 30,
    }
    bad = [k for k, v in checks.items() if not v]
    report(2, not bad, "SU(6)/SU(3)xSU(3) in %.1fs%s" % (c.elapsed, " failed %s" % bad if bad else ""))


# -- 3 ------------------------------------------------------------------------


T2 = {"i": {"y1": "x1^2", "y2": "x2^2"}, "ii": {"y1": "x1^2", "y2": "x2^2", "y3": "x1*x2"}}


def test_criterion_03_su2_cubed():
    bad = []
    with Clock() as c:
        for k, d in T2.items():
            rep = polynomial_check(pure5([2, 2, 3, 3, 3], d))
            if rep["polynomial"] != YES or sorted(rep.data["homotopy_degrees"]) != [2, 2, 2, 2, 4, 4, 4]:
                bad.append(k)
    report(3, not bad and c.elapsed < 5, "both torus embeddings in %.2fs%s" % (c.elapsed, " bad %s" % bad if bad else ""))


# -- 4 ------------------------------------------------------------------------


EX1 = ([2, 2, 3, 3, 7], {"y1": "x1^2", "y2": "x1*x2", "y3": "x2^4"})
EX3 = ([2, 4, 3, 5, 11], {"y1": "x1^2", "y2": "x1*x2", "y3": "x2^3"})


def test_criterion_04_rank5():
    cases = [("ex1", pure5(*EX1), [2, 2, 2, 3, 4, 4, 4, 6, 6, 8], None),
             ("ex2", su6(), [2, 3, 4, 6, 8, 8, 10, 12], None),
             ("ex3", pure5(*EX3), [2, 3, 4, 4, 5, 6, 8, 10, 12], False)]
    bad, times = [], []
    for name, m, want, cof in cases:
        with Clock() as c:
            mm = minimal_of(m)
        times.append(c.elapsed)
        if sorted(mm.degree_multiset()) != want or c.elapsed > 30:
            bad.append(name)
        if cof is not None and is_coformal(mm) != cof:
            bad.append(name + " coformal")
    report(4, not bad, "max %.1fs each%s" % (max(times), " bad %s" % bad if bad else ""))


# -- 5 ------------------------------------------------------------------------


def _pure23_models():
    return {"ex1": pure5(*EX1), "su6": su6(), "ex3": pure5(*EX3),
            "t2_i": pure5([2, 2, 3, 3, 3], T2["i"]), "t2_ii": pure5([2, 2, 3, 3, 3], T2["ii"])}


def test_criterion_05_pure23_equivalence():
    bad = []
    with Clock() as c:
        for name, m in _pure23_models().items():
            rep = pure23_criterion(m)
            poly = polynomial_check(m)["polynomial"]
            if (rep["not_polynomial"] == YES) != (poly == NO):
                bad.append(name + " disagrees")
            if rep["condition_I"] == YES:
                z = parse_expr(rep.witness("condition_I")["cocycle"], m.algebra)
                if m.d(z) or class_of(m, z) == EXACT:
                    bad.append(name + " witness I")
            if rep["condition_II"] == YES:
                w = rep.witness("condition_II")
                if not (verify_membership_witness(m, w["first"]) and verify_membership_witness(m, w["second"])):
                    bad.append(name + " witness II")
    report(5, not bad and c.elapsed < 10, "5 models in %.2fs%s" % (c.elapsed, " bad %s" % bad if bad else ""))


# -- 6 ------------------------------------------------------------------------


def _printed_family(fam, a, b, c):
    """Printed minimal model: generator degrees and the degrees carrying a
    nonzero differential."""
    v = {1: a, 2: b, 3: c}
    g0 = lambda i: v[i] + 1
    g1 = lambda i, j: v[i] - v[j] + 1
    g2 = lambda i, j, k: v[i] - v[j] - v[k] + 1
    table = {
        "1.1": ([g0(1), g0(2), g0(3)], []),
        "1.2": ([g0(1), g0(2), g0(3), g1(3, 1), g1(3, 2)], [g0(3)]),
        "1.3": ([g0(1), g0(2), g0(3), g1(3, 1), g1(3, 2), g2(3, 1, 2)], [g1(3, 1), g1(3, 2), g0(3)]),
        "1.4": ([g0(1), g0(2), g1(2, 1), g0(3), g1(3, 1), g1(3, 2)], [g0(2), g1(3, 1), g0(3)]),
        "1.5": ([g0(1), g0(2), g1(2, 1), g0(3), g1(3, 1), g1(3, 2), g2(3, 1, 2)], [g0(2), g1(3, 1), g0(3)]),
        "1.6": ([g0(1), g0(2), g1(2, 1), g0(3), g1(3, 1)], [g0(2), g0(3)]),
        "2.1": ([g0(3)], []),
        "2.2": ([g1(2, 1), g0(3)], []),
    }
    return table[fam]


FAMILY_WITNESSES = [
    ("1.1", (3, 3, 3)), ("1.1", (5, 5, 5)), ("1.2", (3, 3, 5)), ("1.2", (5, 5, 9)),
    ("1.3", (3, 3, 9)), ("1.3", (3, 3, 7)), ("1.4", (3, 5, 7)), ("1.4", (3, 7, 9)),
    ("1.5", (3, 5, 11)), ("1.5", (3, 5, 9)), ("1.6", (3, 5, 5)), ("1.6", (3, 7, 7)),
    ("2.1", (3, 3, 5)), ("2.1", (5, 5, 9)), ("2.2", (3, 5, 7)), ("2.2", (3, 7, 9)),
]


def test_criterion_06_families():
    bad = []
    with Clock() as c:
        for fam, degs in FAMILY_WITNESSES:
            mm = minimal_of(odd3(*degs, twisted=fam.startswith("2")))
            want_degs, want_nonzero = _printed_family(fam, *degs)
            got_nonzero = sorted(g.degree for g, v in zip(mm.generators, mm.differential) if v)
            if sorted(mm.degree_multiset()) != sorted(want_degs):
                bad.append("%s%s degrees" % (fam, degs))
            if got_nonzero != sorted(want_nonzero):
                bad.append("%s%s nonzero d in degrees %s, printed %s" % (fam, degs, got_nonzero, sorted(want_nonzero)))
    report(6, not bad and c.elapsed < 10, "%d witnesses in %.1fs%s" % (
        len(FAMILY_WITNESSES), c.elapsed, "; " + "; ".join(bad) if bad else ""))


# -- 7 ------------------------------------------------------------------------

COLUMNS = ["f_X", "r_X", "wr_X", "f_Sn", "r_Sn", "wr_Sn", "formal", "coformal", "rank", "H*_free"]
TABLE = {
    "1i": ((3, 9, 3), "no no no no yes yes no yes 5 no"),
    "1ii": ((5, 7, 3), "no no no no yes yes no yes 4 no"),
    "1iii": ((3, 3, 3), "no no no no yes yes no yes 3 no"),
    "2i": ((3, 9, 5), "no no no no yes yes no yes 6 no"),
    "2ii": ((3, 5, 5), "no no no no yes yes no yes 5 no"),
    "3": ((5, 7, 9), "no no no no no yes no no 6 no"),
    "4": ((5, 5, 7), "no no no no no yes no no 5 no"),
    "5i": ((3, 5, 17), "no yes yes no no yes no no 8 no"),
    "5ii": ((3, 5, 13), "no yes yes yes yes yes no yes 7 no"),
    "5iii": ((3, 5, 11), "no yes yes yes yes yes yes yes 6 no"),
    "5iv": ((3, 5, 7), "no yes yes yes yes yes no yes 5 no"),
    "6i": ((3, 3, 13), "no yes yes yes yes yes yes yes 7 no"),
    "6ii": ((3, 3, 9), "no yes yes yes yes yes yes yes 6 no"),
    "6iii": ((3, 3, 7), "yes yes yes yes yes yes yes yes 4 yes"),
}


def test_criterion_07_sphere_table():
    bad = []
    with Clock() as c:
        for row, ((a, b, n), printed) in TABLE.items():
            want = dict(zip(COLUMNS, printed.split()))
            rep = sphere_product_report(odd3(a, b, a + b - 1, twisted=True), n)
            if rep.data["rank"] != int(want["rank"]):
                bad.append("%s rank %d" % (row, rep.data["rank"]))
            for k in ("coformal", "H*_free"):
                if rep[k] != want[k]:
                    bad.append("%s %s %s" % (row, k, rep[k]))
            for k in ("f_X", "r_X", "wr_X", "f_Sn", "r_Sn", "wr_Sn", "formal"):
                if rep[k] != UNDECIDED and rep[k] != want[k]:
                    bad.append("%s %s %s" % (row, k, rep[k]))
    report(7, not bad and c.elapsed < 60, "14 rows in %.1fs%s" % (c.elapsed, "; " + ", ".join(bad) if bad else ""))


# -- 8 ------------------------------------------------------------------------


def test_criterion_08_freeness_window():
    bad = []
    with Clock() as c:
        for a in (3, 5, 7):
            m = odd3(a, a, 2 * a - 1, twisted=True)
            for n in range(3, 3 * a + 4, 2):
                want = YES if 2 * a - 1 <= n < 3 * a - 1 else NO
                if sphere_product_report(m, n)["H*_free"] != want:
                    bad.append((a, a, n))
        m = odd3(3, 5, 7, twisted=True)
        for n in range(3, 19, 2):
            if sphere_product_report(m, n)["H*_free"] != NO:
                bad.append((3, 5, n))
    report(8, not bad and c.elapsed < 60, "a=b in {3,5,7} and (3,5) in %.1fs%s" % (c.elapsed, " bad %s" % bad if bad else ""))


# -- 9 ------------------------------------------------------------------------


def test_criterion_09_s3_s5():
    # Q[v] (x) Lambda(w_0, w_1, ...) / (v w_i, w_i w_j): basis v^k and w_i
    N = 24
    oracle = [int(k % 4 == 0) + int(k >= 3 and (k - 3) % 6 == 0) for k in range(N + 1)]
    with Clock() as c:
        got = hilbert(baut_model(product_model(sphere_model(3), sphere_model(5))), N)
    report(9, got == oracle and c.elapsed < 10, "up to degree %d in %.2fs" % (N, c.elapsed))


# -- 10 -----------------------------------------------------------------------


# the CE input of these three is large; their minimal models are checked to 24
CE_DEGREE = {"ex1_s3_s2cp3": 16, "ex3_s5_s2hp2": 16, "su2cubed_t2_ii": 20}


def _sgn(k):
    return -1 if k % 2 else 1


def test_criterion_10_properties(corpus, rng):
    bad = []
    with Clock() as c:
        spaces = {k: v for k, v in corpus.items() if k != "su6_ce_golden"}
        for name, m in corpus.items():
            if not m.d_squared_zero():
                bad.append(name + " d^2")
        for name, m in spaces.items():
            if not DerChainComplex(m).check_d_squared():
                bad.append(name + " boundary^2")

        # graded Jacobi and Leibniz on random elementary triples and pairs
        models = [spaces[n] for n in ("su6_su3su3", "ex3_s5_s2hp2", "pullback_a3_b5", "su2cubed_t2_ii")]
        pools = [(m, [e for i in range(1, DerChainComplex(m).top + 1) for e in DerChainComplex(m).basis(i)])
                 for m in models]
        for t in range(1000):
            m, pool = pools[t % len(pools)]
            s, u, r = (Derivation.elementary(m, *rng.choice(pool)) for _ in range(3))
            p, q = s.shift, u.shift
            if bracket(s, bracket(u, r)) != bracket(bracket(s, u), r) + bracket(u, bracket(s, r)).scale(_sgn(p * q)):
                bad.append("jacobi")
                break
            if p >= 2 and q >= 2 and boundary(bracket(s, u)) != bracket(boundary(s), u) + bracket(s, boundary(u)).scale(_sgn(p)):
                bad.append("leibniz")
                break

        # Koszul commutativity on random element pairs
        a = spaces["ex1_s3_s2cp3"].algebra
        for _ in range(1000):
            p, q = rng.randint(0, 9), rng.randint(0, 9)
            x = Element(a, {mono: rng.randint(-3, 3) for mono in a.monomials_of_degree(p) if rng.random() < .6})
            y = Element(a, {mono: rng.randint(-3, 3) for mono in a.monomials_of_degree(q) if rng.random() < .6})
            if x * y != _sgn(p * q) * (y * x):
                bad.append("koszul")
                break

        # minimize preserves the Hilbert series; linear-part check on every run
        for name, m in corpus.items():
            res = minimize(m)
            if not res.verification.ok:
                bad.append(name + " linear part")
            if hilbert(m, 24) != hilbert(res.model, 24):
                bad.append(name + " hilbert")
            if name == "su6_ce_golden":
                continue
            ce = baut_model(m)
            res = minimize(ce)
            if not res.verification.ok:
                bad.append(name + " CE linear part")
            N = CE_DEGREE.get(name, 24)
            if hilbert(ce, N) != hilbert(res.model, N):
                bad.append(name + " CE hilbert")

        # bracket constants are independent of the chosen cycle representatives
        for name in ("su6_su3su3", "su2cubed_t2_ii", "pullback_a3_b3", "ex1_s3_s2cp3"):
            h = der_homology(spaces[name])
            base = homology_bracket(h)
            reps = {}
            for cl in h.all_classes():
                sigma = cl.representative
                for b in h.complex.boundaries(cl.degree):
                    sigma = sigma + h.complex.to_derivation(cl.degree, b).scale(rng.randint(-2, 2))
                reps[(cl.degree, cl.index)] = sigma
            if homology_bracket(h, reps) != base:
                bad.append(name + " bracket shift")
    report(10, not bad and c.elapsed < 120, "all suites in %.1fs%s" % (c.elapsed, " bad %s" % bad if bad else ""))


# -- 11 -----------------------------------------------------------------------


def test_criterion_11_products(corpus):
    bad = []
    with Clock() as c:
        free = {}

        def is_free(m):
            key = (tuple((g.name, g.degree) for g in m.generators), tuple(str(v) for v in m.differential))
            if key not in free:
                free[key] = baut(m).free
            return free[key]

        pairs = [(sphere_model(3), sphere_model(5))]
        pairs += [(odd3(a, b, a + b - 1, twisted=True), sphere_model(n)) for (a, b, n), _ in TABLE.values()]
        decided = 0
        for x, y in pairs:
            if is_free(product_model(x, y)):
                decided += 1
                if not (is_free(x) and is_free(y)):
                    bad.append("product %s x %s" % (x.name, y.name))
        if is_free(product_model(sphere_model(3), sphere_model(5))) or not (is_free(sphere_model(3)) and is_free(sphere_model(5))):
            bad.append("S3 x S5 converse witness")
        for name, m in corpus.items():
            if name == "su6_ce_golden":
                continue
            if is_free(m) != is_free(product_model(m, sphere_model(2))):
                bad.append(name + " x S2")
    report(11, not bad and decided and c.elapsed < 60, "%d pairs, x S^2 on corpus in %.1fs%s" % (
        len(pairs), c.elapsed, " bad %s" % bad if bad else ""))
