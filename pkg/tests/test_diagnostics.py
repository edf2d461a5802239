import pytest

from bautkit.derivation import der_homology
from bautkit.diagnostics import (
    NO, UNDECIDED, YES, ShapeError, Verdict, baut, polynomial_check,
    pure23_criterion, sphere_product_report, verify_membership_witness,
)
from bautkit.dsl import parse_expr
from bautkit.minimal import minimize
from bautkit.dgl import baut_model
from bautkit.model import EXACT, build_model, class_of, product_model, sphere_model

from conftest import elem, odd3, pure5, su6

T2_I = {"y1": "x1^2", "y2": "x2^2", "y3": "x1*x2"}


def test_verdict_needs_witness():
    with pytest.raises(ValueError):
        Verdict(YES)
    assert Verdict(UNDECIDED).value == UNDECIDED


def test_polynomial_check():
    for d in ({"y1": "x1^2", "y2": "x2^2"}, T2_I):
        names = [("x1", 2), ("x2", 2), ("y1", 3), ("y2", 3), ("y3", 3)]
        rep = polynomial_check(build_model(names, d))
        assert rep["polynomial"] == YES
        assert sorted(rep.data["homotopy_degrees"]) == [2, 2, 2, 2, 4, 4, 4]
    rep = polynomial_check(sphere_model(7))
    assert rep["polynomial"] == YES


def test_polynomial_check_su6_witness():
    m = su6()
    rep = polynomial_check(m)
    assert rep["polynomial"] == NO
    w = rep.witness("polynomial")
    assert w["degree"] == 2
    h = der_homology(m)
    want = 2 * elem(m, "y3", "y2") + elem(m, "y2", "y1") + elem(m, "x2", "x1")
    assert any(h.coordinates(want))


def test_pure23_su6():
    rep = pure23_criterion(su6())
    assert rep["condition_I"] == NO
    assert rep["condition_II"] == YES and rep["not_polynomial"] == YES
    w = rep.witness("condition_II")
    assert (w["l"], w["k"]) == (2, 1)
    assert verify_membership_witness(su6(), w["first"])
    assert verify_membership_witness(su6(), w["second"])
    assert rep.data["agrees_with_polynomial_check"]


def test_pure23_ex1():
    m = pure5([2, 2, 3, 3, 7], {"y1": "x1^2", "y2": "x1*x2", "y3": "x2^4"})
    rep = pure23_criterion(m)
    assert rep["condition_I"] == YES
    w = rep.witness("condition_I")
    assert w["degree"] == 5 < 7
    z = parse_expr(w["cocycle"], m.algebra)
    assert class_of(m, z) != EXACT and not m.d(z)
    assert rep["condition_II"] == NO and "inapplicable" in rep.witness("condition_II")


def test_pure23_t2_ii():
    m = pure5([2, 2, 3, 3, 3], {"y1": "x1^2", "y2": "x2^2", "y3": "x1*x2"})
    rep = pure23_criterion(m)
    assert rep["condition_I"] == NO and rep["condition_II"] == NO
    assert rep["not_polynomial"] == NO
    assert rep.data["agrees_with_polynomial_check"]


def test_pure23_refuses_shape():
    with pytest.raises(ShapeError):
        pure23_criterion(odd3(3, 5, 7))


def test_tampered_certificate_is_rejected():
    w = pure23_criterion(su6()).witness("condition_II")
    bad = dict(w["second"], certificate=["0", "3"])
    assert not verify_membership_witness(su6(), bad)


def test_coformality_certificate():
    ex3 = pure5([2, 4, 3, 5, 11], {"y1": "x1^2", "y2": "x1*x2", "y3": "x2^3"})
    b = baut(ex3)
    assert b.coformal.value == NO
    w = b.coformal.witness
    assert w["dim_H"] != w["dim_H_quadratic_part"]
    assert baut(su6()).coformal.value == YES


def test_baut_bundle_su6():
    b = baut(su6())
    assert b.homotopy_dims == {12: 1, 10: 1, 8: 2, 6: 1, 4: 1, 3: 1, 2: 1}
    assert not b.free
    assert b.as_dict()["ce_generators"] == 18


def test_sphere_product_case_6iii():
    rep = sphere_product_report(odd3(3, 3, 5, twisted=True), 5)
    assert rep.data["rank"] == 4
    for k in ("coformal", "H*_free", "wr_X", "r_X", "f_X", "wr_Sn", "r_Sn", "f_Sn"):
        assert rep[k] == YES, k


def test_sphere_product_case_1ii():
    rep = sphere_product_report(odd3(3, 5, 7, twisted=True), 3)
    assert rep.data["rank"] == 4
    assert rep["H*_free"] == NO and rep["coformal"] == YES


def test_sphere_product_needs_odd_sphere():
    with pytest.raises(ValueError):
        sphere_product_report(sphere_model(3), 4)


def test_s3_times_s5():
    rep = sphere_product_report(sphere_model(3), 5)
    assert (rep["r_X"], rep["f_X"]) == (YES, NO)
    assert rep["wr_Sn"] == NO and rep["r_Sn"] == NO
    assert rep.data["rank"] == 3


def test_decided_verdicts_carry_witnesses():
    rep = sphere_product_report(odd3(3, 5, 7, twisted=True), 3)
    for k, v in rep.verdicts.items():
        if v.value != UNDECIDED:
            assert v.witness is not None, k


def test_no_quadratic_part_means_no_quadratic_terms(corpus):
    hits = 0
    for name in ("pullback_a3_b3", "pullback_a3_b5", "sphere_3"):
        for n in (3, 5, 7, 9):
            rep = sphere_product_report(corpus[name], n)
            if rep["no_quadratic_part"] != YES:
                continue
            hits += 1
            mm = minimize(baut_model(product_model(corpus[name], sphere_model(n)))).model
            assert all(2 not in v.word_lengths() for v in mm.differential if v), (name, n)
    assert hits


def test_freeness_window_pullback():
    for a in (3, 5):
        m = odd3(a, a, 2 * a - 1, twisted=True)
        for n in range(3, 3 * a + 4, 2):
            want = YES if 2 * a - 1 <= n < 3 * a - 1 else NO
            assert sphere_product_report(m, n)["H*_free"] == want, (a, n)
