import math

import pytest

from oracles import aut_count_brute
from tmod import harness
from tmod.harness import (
    Family,
    ResultCache,
    automorphism_count,
    default_predictions,
    eta,
    predicted_density_conjecture,
    predicted_density_rk4,
    run_family,
    verify_suite,
)
from tmod.quadclass import AbGroup


def test_rk4_predictions():
    vals = [predicted_density_rk4(r) for r in range(4)]
    assert [round(v, 4) for v in vals[:3]] == [0.5776, 0.3851, 0.0367]
    assert math.isclose(sum(predicted_density_rk4(r) for r in range(10)), 1.0, rel_tol=1e-12)
    with pytest.raises(ValueError):
        predicted_density_rk4(-1)


def test_eta():
    assert eta(0, 2) == 1.0
    assert math.isclose(eta(1, 2), 0.5)
    assert math.isclose(eta(None, 2), 0.288788095086602, rel_tol=1e-12)


@pytest.mark.parametrize("invariants", [(2,), (4,), (2, 2), (2, 4), (3, 3), (2, 2, 2), (4, 4), (3, 9), (2, 2, 4)])
def test_automorphism_count_matches_brute_force(invariants):
    p = 2 if invariants[0] % 2 == 0 else 3
    exps = [round(math.log(x, p)) for x in invariants]
    assert automorphism_count(p, exps) == aut_count_brute(invariants)


def test_automorphism_count_known():
    assert automorphism_count(2, [1, 1]) == 6
    assert automorphism_count(2, [1, 2]) == 8
    assert automorphism_count(3, [1, 1, 2]) == 23328
    assert automorphism_count(5, []) == 1


def test_conjecture_predictions():
    z5 = predicted_density_conjecture("cl-imag", p=5, group=[1])
    assert abs(z5 - 0.04752) < 5e-5
    assert predicted_density_conjecture("cl-imag", p=5, group=AbGroup((5,))) == z5
    assert [predicted_density_conjecture("minus-l-tail", i=i) for i in range(3)] == [0.75, 0.1875, 0.046875]
    assert predicted_density_conjecture("halving", i=1) == 0.25
    total = sum(predicted_density_conjecture("cl-real", p=3, group=g) for g in ([], [1], [2], [1, 1]))
    assert 0.9 < total < 1.0
    with pytest.raises(ValueError):
        predicted_density_conjecture("nonsense")


def test_family_parameters():
    fam = Family("minus-l", 100, modulus=16, residues=(1,))
    assert list(fam.parameters()) == [17, 97]
    assert fam.radicand(17) == -17
    assert Family("plus-2l", 50).radicand(7) == 14
    assert list(Family("imag-all", 10).parameters()) == [1, 2, 3, 5, 6, 7, 10]
    assert list(Family("real-all", 10).parameters()) == [2, 3, 5, 6, 7, 10]
    with pytest.raises(ValueError):
        Family("nonsense", 10)
    with pytest.raises(ValueError):
        Family("minus-l", 10, modulus=8)


def test_default_predictions():
    fam = Family("plus-l", 1000, modulus=8, residues=(7,))
    assert default_predictions(fam, "order") == {"4": 0.5, "8": 0.25, "16": 0.125, "32": 0.0625}
    fam = Family("plus-l", 1000, modulus=8, residues=(1,))
    assert default_predictions(fam, "order")["2"] == 0.5


def test_run_family_is_deterministic_and_cache_resumes(tmp_path):
    fam = Family("plus-l", 3000, modulus=8, residues=(1, 7))
    path = tmp_path / "cache.csv"
    first = run_family(fam, "order", "coates", cache=ResultCache(str(path)))
    assert first.undetermined == 0
    lines = path.read_text().splitlines()
    assert lines[0] == "# tmod-cache v1"
    again = run_family(fam, "order", "coates", cache=ResultCache(str(path)))
    assert path.read_text().splitlines() == lines
    assert again.table_md() == first.table_md()
    assert again.raw_csv() == first.raw_csv()
    fresh = run_family(fam, "order", "coates")
    assert fresh.table_csv() == first.table_csv()
    assert abs(sum(r.ratio for r in first.rows) - 1.0) < 1e-12


def test_cache_rejects_unknown_header(tmp_path):
    path = tmp_path / "bad.csv"
    path.write_text("something else\n")
    with pytest.raises(ValueError):
        ResultCache(str(path))


def test_run_family_with_workers_matches_serial():
    fam = Family("imag-all", 400)
    a = run_family(fam, "rk4")
    b = run_family(fam, "rk4", workers=2)
    assert a.table_csv() == b.table_csv()


def test_table_format():
    fam = Family("minus-l", 2000, modulus=16, residues=(1,))
    res = run_family(fam, "structure", predicted=default_predictions(fam, "structure"))
    md = res.table_md()
    assert md.splitlines()[0] == "| label | count | ratio | predicted | deviation |"
    assert "| total |" in md and "| undetermined |" in md
    assert res.table_csv().splitlines()[0] == "label,count,ratio,predicted,deviation"
    assert res.ratio("Z/8") > 0.5


def test_unsupported_fields_count_as_undetermined():
    res = run_family(Family("real-all", 40), "structure", "rayclass")
    bad = [r for r in res.records if r.value is None]
    assert res.undetermined == len(bad) > 0
    assert all("UnsupportedFieldError" in r.error for r in bad)


@pytest.mark.parametrize("name,bound", [
    ("congruence-mod16", 3000), ("l223", None), ("redei-vs-rayclass", 200), ("fast-vs-full", 1000),
    ("classifier-vs-rayclass", 500), ("two-route-rank", 500), ("comparison-k2", 1000),
    ("product-formula", 500), ("coates-vs-rayclass", 300), ("unit-trace", 3000),
    ("rayclass-cardinality", 30),
])
def test_suites_pass_at_small_bounds(name, bound):
    rep = verify_suite(name, bound)
    assert rep.passed, rep.text()


def test_l223_note():
    rep = verify_suite("l223")
    assert "(16, 256, 32)" in rep.text()


def test_unknown_suite():
    with pytest.raises(KeyError):
        verify_suite("nope")


def test_compute_report_cross_checks():
    rep = harness.compute_report(-105)
    assert rep.rk2 == 2 and "rayclass" in rep.methods["rk4"]
    rep = harness.compute_report(223)
    assert rep.order_valuation == 4 and rep.methods["order_valuation"] == "coates+rayclass"
    rep = harness.compute_report(-41, method="redei")
    assert rep.methods["rk2"] == "rank-formula+narrow-S"
    with pytest.raises(ValueError):
        harness.compute_report(12)
