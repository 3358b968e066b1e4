import pytest

from tmod.arith import is_prime, squarefree_factor
from tmod.errors import WrongPathError
from tmod.linalg import f2_in_column_span
from tmod.quadclass import QuadField
from tmod.torsion import (
    TpReport,
    classify_imaginary_prime_family,
    classify_real_prime_family,
    coates_order_valuation,
    congruence_identity_check,
    congruence_triple,
    fast_path_legal,
    h2_neg,
    l78_sign_invariance,
    norm_criteria,
    order_from_unit_trace,
    pi_tame_column,
    redei_fast_path,
    redei_matrix_T2,
    redei_matrix_classgroup,
    rk2_T2,
    rk2_T2_via_narrow_S,
    rk4_K2_matrix,
    rk4_T2,
    rk4_classgroup,
    t2_order,
)
from tmod.errors import ConsistencyError
from tmod.quadclass import class_group


def _squarefree(limit, start=1):
    return [m for m in range(start, limit) if squarefree_factor(m) is not None]


def test_rk2_examples():
    assert rk2_T2(QuadField.from_radicand(-105)) == 2
    assert rk2_T2(QuadField.from_radicand(-1)) == 0
    assert rk2_T2(QuadField.from_radicand(-7 * 17 * 23)) == 3
    for m in (-105, -1, 15, -7 * 17 * 23, 2, -2, 7):
        F = QuadField.from_radicand(m)
        assert rk2_T2_via_narrow_S(F) == rk2_T2(F)


def test_rk2_two_routes_small_range():
    for m in _squarefree(1500, 2):
        for s in (1, -1):
            F = QuadField.from_radicand(s * m)
            assert rk2_T2_via_narrow_S(F) == rk2_T2(F), s * m
    F = QuadField.from_radicand(-1)
    assert rk2_T2_via_narrow_S(F) == rk2_T2(F)


def test_fast_path_m15():
    mat = redei_fast_path(15)
    assert mat.to_lists() == [[1, 1, 1], [1, 1, 1]]
    assert mat.rank() == 1
    assert redei_matrix_classgroup(15).to_lists() == [[1, 1], [1, 1]]
    assert rk4_T2(15) == 0
    assert rk4_T2(15, "full") == 0
    assert rk4_K2_matrix(15) == 1


@pytest.mark.parametrize("m", [33, 21, 17])
def test_fast_path_guards(m):
    with pytest.raises(WrongPathError):
        redei_fast_path(m)
    with pytest.raises(WrongPathError):
        rk4_K2_matrix(m)


def test_small_fields():
    assert rk4_T2(7) == 0
    assert rk4_T2(1) == 0
    assert redei_matrix_T2(1).to_lists() == []
    # -2 = 1 - 3 is a norm from Q(sqrt 3), so m = 3 is outside the comparison domain
    with pytest.raises(WrongPathError):
        rk4_K2_matrix(3)


def test_fast_and_full_paths_agree():
    for m in _squarefree(1500):
        if fast_path_legal(m):
            assert rk4_T2(m, "fast") == rk4_T2(m, "full"), m


def test_bounds_on_ranks():
    for m in _squarefree(800):
        r2 = rk2_T2(QuadField.from_radicand(-m))
        assert 0 <= rk4_T2(m) <= r2


def test_classgroup_matrix_rows_sum_to_zero_and_rk4():
    for m in _squarefree(2000):
        if m % 4 != 3:
            continue
        rows = redei_matrix_classgroup(m).to_lists()
        if rows:
            assert all(sum(col) % 2 == 0 for col in zip(*rows))
        G = class_group(-m)
        assert rk4_classgroup(m) == G.rank(4), m


def test_pi_column_in_classgroup_span():
    checked = 0
    for m in _squarefree(4000):
        if m % 8 != 7 or not fast_path_legal(m):
            continue
        assert f2_in_column_span(redei_matrix_classgroup(m), pi_tame_column(m)), m
        checked += 1
    assert checked > 50


def test_comparison_with_tame_kernel_matrix():
    for m in _squarefree(4000):
        if fast_path_legal(m):
            assert rk4_T2(m, "full") == rk4_K2_matrix(m) - 1, m


def test_norm_criteria():
    assert norm_criteria(15) == norm_criteria(15).__class__(False, False, False)
    assert norm_criteria(119).two
    nc = norm_criteria(1)
    assert nc.two and nc.minus_two and nc.minus_one
    with pytest.raises(ValueError):
        norm_criteria(12)


def test_coates_examples():
    assert coates_order_valuation(QuadField.from_radicand(17)) == 1
    assert t2_order(17) == 2
    assert t2_order(7) == 4
    assert t2_order(223) == 16
    assert t2_order(446) == 128
    assert h2_neg(-1784) == 32
    assert congruence_triple(223) == (16, 128, 32)
    with pytest.raises(ValueError):
        coates_order_valuation(QuadField.from_radicand(-7))


def test_congruence_identity():
    for l in (7, 23, 31, 47, 71, 79, 223):
        assert congruence_identity_check(l), l
    assert congruence_triple(7) == (4, 2, 4)


def test_imaginary_classifier_examples():
    t = classify_imaginary_prime_family(7)
    assert (t.t2_minus_l, t.t2_minus_2l) == ("2", "2")
    assert classify_imaginary_prime_family(41).t2_minus_l == "4"
    t = classify_imaginary_prime_family(17)
    assert (t.t2_minus_l, t.t2_minus_2l) == (">=8", ">=4")
    with pytest.raises(ValueError):
        classify_imaginary_prime_family(13)


def test_real_classifier_examples():
    r = classify_real_prime_family(17)
    assert (r.t2_l, r.h2_minus_l, r.t2_2l) == ("2", "4", "2")
    r = classify_real_prime_family(7)
    assert (r.t2_l, r.t2_2l, r.h2_minus_2l) == ("4", "2", "4")


def test_real_classifier_against_coates():
    from tmod.torsion import tag_matches

    for l in range(7, 3000):
        if l % 8 not in (1, 7) or not is_prime(l):
            continue
        r = classify_real_prime_family(l)
        assert tag_matches(r.t2_l, t2_order(l)), l
        assert tag_matches(r.t2_2l, t2_order(2 * l)), l
        if r.h2_minus_l:
            assert tag_matches(r.h2_minus_l, h2_neg(-4 * l)), l
        if r.h2_minus_2l:
            assert tag_matches(r.h2_minus_2l, h2_neg(-8 * l)), l


def test_sign_rule_independent_of_representation():
    for l in range(7, 10**4, 8):
        if is_prime(l):
            assert len(l78_sign_invariance(l, 3)) == 1, l


def test_unit_trace_route():
    for l in range(7, 5000):
        if l % 8 in (1, 7) and is_prime(l):
            assert 2 ** order_from_unit_trace(l) == t2_order(l), l


def test_report_consistency_guard():
    rep = TpReport(15, 2)
    rep.fill("rk2", 1, "congruence")
    rep.fill("rk2", 1, "narrow")
    assert rep.methods["rk2"] == "congruence+narrow"
    with pytest.raises(ConsistencyError):
        rep.fill("rk2", 2, "other")
    assert rep.csv_row().startswith("15,2,1,")
    assert "rk2" in rep.text()
