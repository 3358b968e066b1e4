"""Kernel selector: the compiled extension when importable, else pure Python.

Set TMOD_PURE_PYTHON=1 to force the fallback.
"""

from __future__ import annotations

import os

from . import _pykernels

BACKEND = "python"
_impl = _pykernels

if not os.environ.get("TMOD_PURE_PYTHON"):
    try:
        from . import _ckernels as _impl  # type: ignore[no-redef]

        BACKEND = "cython"
    except ImportError:  # pragma: no cover - depends on the build
        _impl = _pykernels

h_neg = _impl.h_neg
reduced_forms_neg = _impl.reduced_forms_neg
reduced_forms_pos = _impl.reduced_forms_pos
narrow_cycles = _impl.narrow_cycles
h_plus = _impl.h_plus
cf_unit = _impl.cf_unit
real_hR = _impl.real_hR
snf_exponents = _impl.snf_exponents
compose_neg = _impl.compose_neg
form_pow_neg = _impl.form_pow_neg
form_order_neg = _impl.form_order_neg

__all__ = [
    "BACKEND",
    "h_neg",
    "reduced_forms_neg",
    "reduced_forms_pos",
    "narrow_cycles",
    "h_plus",
    "cf_unit",
    "real_hR",
    "snf_exponents",
    "compose_neg",
    "form_pow_neg",
    "form_order_neg",
]
