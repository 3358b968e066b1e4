import math
import os
import random
import subprocess
import sys

import pytest

from tmod import _pykernels

ck = pytest.importorskip("tmod._ckernels", reason="compiled kernels not built")


def _discs(sign, count, hi, seed):
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        n = rng.randrange(3, hi)
        D = sign * n
        if D % 4 in (0, 1):
            out.append(D)
    return out


def test_negative_form_kernels_agree():
    for D in _discs(-1, 200, 200000, 1):
        assert ck.h_neg(D) == _pykernels.h_neg(D)
        assert ck.reduced_forms_neg(D) == _pykernels.reduced_forms_neg(D)


def test_positive_form_kernels_agree():
    for D in _discs(1, 100, 20000, 2):
        if math.isqrt(D) ** 2 == D:
            continue
        assert sorted(ck.reduced_forms_pos(D)) == sorted(_pykernels.reduced_forms_pos(D))
        assert ck.h_plus(D) == _pykernels.h_plus(D)


def test_continued_fraction_units_agree():
    for d in range(2, 3000):
        if math.isqrt(d) ** 2 == d:
            continue
        P0, Q0 = (1, 2) if d % 4 == 1 else (0, 1)
        a = ck.cf_unit(d, P0, Q0, 2**62)
        b = _pykernels.cf_unit(d, P0, Q0, 2**62)
        assert a[:3] == b[:3]
        assert math.isclose(a[3], b[3], rel_tol=1e-9, abs_tol=1e-9)
        assert math.isclose(a[4], b[4], rel_tol=1e-9, abs_tol=1e-12)


def test_analytic_class_number_agrees():
    for D in (5, 8, 12, 13, 40, 316, 1229, 4 * 1001, 99997 * 4):
        assert math.isclose(ck.real_hR(D), _pykernels.real_hR(D), rel_tol=1e-9)


def test_composition_agrees():
    rng = random.Random(4)
    for D in _discs(-1, 40, 10**6, 3):
        forms = _pykernels.reduced_forms_neg(D)
        for _ in range(10):
            f, g = rng.choice(forms), rng.choice(forms)
            assert ck.compose_neg(*f, *g, D) == _pykernels.compose_neg(*f, *g, D)
            e = rng.randrange(0, 1000)
            assert ck.form_pow_neg(*f, e, D) == _pykernels.form_pow_neg(*f, e, D)
            assert ck.form_order_neg(*f, D, 10**6) == _pykernels.form_order_neg(*f, D, 10**6)


def test_large_inputs_fall_back():
    D = -(1 << 41) - 1
    assert ck.compose_neg(1, 1, (1 - D) // 4, 1, 1, (1 - D) // 4, D) == (1, 1, (1 - D) // 4)


def test_pure_python_backend_selected_by_environment():
    env = dict(os.environ, TMOD_PURE_PYTHON="1")
    out = subprocess.run([sys.executable, "-c", "import tmod; print(tmod.BACKEND)"],
                         env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "python"
