import json
import shutil


from bautkit.cli import main, render_text
from bautkit.corpus import CORPUS_DIR, run_corpus

KEYS = {"schema", "model", "command", "verdicts", "witnesses", "dims", "generators"}


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def run_json(capsys, *argv):
    code, out, err = run(capsys, *argv, "--format", "json")
    return code, (json.loads(out) if out.strip() else None), err


def verdicts(doc):
    return {v["name"]: v["value"] for v in doc["verdicts"]}


def test_baut_minimal_su6(capsys):
    code, doc, _ = run_json(capsys, "baut", str(CORPUS_DIR / "su6_su3su3.model"), "--minimal")
    assert code == 0
    assert set(doc) == KEYS and doc["schema"] == 1
    assert doc["dims"]["minimal_degrees"] == [2, 3, 4, 6, 8, 8, 10, 12]
    assert verdicts(doc)["coformal"] == "yes" and verdicts(doc)["free"] == "no"


def test_der_homology_t2_ii(capsys):
    code, doc, _ = run_json(capsys, "der-homology", str(CORPUS_DIR / "su2cubed_t2_ii.model"))
    assert code == 0
    assert sorted(g["degree"] for g in doc["generators"]) == [1, 1, 1, 1, 3, 3, 3]
    assert all(g["name"] for g in doc["generators"])


def test_sphere_product_pullback(capsys):
    code, doc, _ = run_json(capsys, "diagnose", "sphere-product", str(CORPUS_DIR / "pullback_a3_b3.model"), "--n", "5")
    assert code == 0 and verdicts(doc)["H*_free"] == "yes"


def test_refused_precondition_exit_code(capsys):
    code, _, err = run(capsys, "diagnose", "sphere-product", str(CORPUS_DIR / "sphere_3.model"), "--n", "4")
    assert code == 1 and "refused" in err


def test_bad_file_exit_code(capsys, tmp_path):
    p = tmp_path / "bad.model"
    p.write_text("gen v 3\nd v = v\n")
    code, out, err = run(capsys, "validate", str(p))
    assert code == 2 and "line 2" in err and out == ""
    code, _, err = run(capsys, "validate", str(tmp_path / "missing.model"))
    assert code == 2


def test_pure23_wrong_shape(capsys):
    code, _, err = run(capsys, "diagnose", "pure23", str(CORPUS_DIR / "odd_3_5_7.model"))
    assert code == 2 and err.startswith("error:")


def test_text_is_rendered_from_json(capsys):
    f = str(CORPUS_DIR / "su6_su3su3.model")
    _, doc, _ = run_json(capsys, "cohomology", f, "--max-degree", "12")
    _, text, _ = run(capsys, "cohomology", f, "--max-degree", "12")
    assert text == render_text(doc) + "\n"
    assert doc["dims"]["4"] == 1


def test_seed_is_reproducible(capsys):
    f = str(CORPUS_DIR / "su6_su3su3.model")
    _, a, _ = run_json(capsys, "baut", f, "--minimal", "--seed", "7")
    _, b, _ = run_json(capsys, "baut", f, "--minimal", "--seed", "7")
    assert a == b
    assert a["dims"]["minimal_degrees"] == [2, 3, 4, 6, 8, 8, 10, 12]


def test_hilbert_flag(capsys):
    _, doc, _ = run_json(capsys, "baut", str(CORPUS_DIR / "sphere_3.model"), "--hilbert", "8")
    assert doc["dims"]["hilbert"] == [1, 0, 0, 0, 1, 0, 0, 0, 1]


def test_corpus_filter(capsys):
    code, doc, _ = run_json(capsys, "corpus", "run", "--filter", "su6")
    assert code == 0
    assert doc["verdicts"] and all(v["name"].startswith("su6.") for v in doc["verdicts"])


def test_full_corpus_passes():
    rep = run_corpus(jobs=2)
    assert rep.ok, [(o.name, o.detail) for o in rep.failures]
    assert {o.name for o in rep.errata} == {
        "families.1.5.(3,5,11).nonzero_differentials", "families.1.5.(3,5,9).nonzero_differentials",
        "sphere_table.6i.sphere_products"}
    names = [o.name for o in rep.outcomes]
    assert names == sorted(names)


def test_fault_injection_is_localized(tmp_path, capsys):
    d = tmp_path / "corpus"
    shutil.copytree(CORPUS_DIR, d)
    p = d / "su6_ce_golden.model"
    text = p.read_text()
    assert "d V_x2_1 = -V_x1_1*V_x2_x1" in text
    p.write_text(text.replace("d V_x2_1 = -V_x1_1*V_x2_x1", "d V_x2_1 = V_x1_1*V_x2_x1"))
    rep = run_corpus("su6", d)
    bad = rep.failures
    assert [o.name for o in bad] == ["su6.ce_golden.ce_golden"]
    assert "V_x2_1" in bad[0].detail
    code, doc, _ = run_json(capsys, "corpus", "run", "--filter", "su6", "--corpus", str(d))
    assert code == 1
    assert [w["verdict"] for w in doc["witnesses"]] == ["su6.ce_golden.ce_golden"]
