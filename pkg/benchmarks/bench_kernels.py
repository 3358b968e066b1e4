"""Time the compiled kernels against their pure-Python twins.

    python3 benchmarks/bench_kernels.py [--repeat N]
"""

from __future__ import annotations

import argparse
import random
import timeit

from tmod import _pykernels

try:
    from tmod import _ckernels
except ImportError:
    _ckernels = None


def _cases():
    rng = random.Random(1)
    negs = [-(4 * rng.randrange(10**5, 10**6) + 3) for _ in range(20)]
    poss = [4 * rng.randrange(10**4, 5 * 10**4) + 1 for _ in range(10)]
    D = -4 * 1155 * 13
    forms = _pykernels.reduced_forms_neg(D)
    pairs = [(rng.choice(forms), rng.choice(forms)) for _ in range(200)]
    return {
        "h_neg": lambda k: [k.h_neg(x) for x in negs],
        "reduced_forms_pos": lambda k: [k.reduced_forms_pos(x) for x in poss],
        "h_plus": lambda k: [k.h_plus(x) for x in poss],
        "cf_unit": lambda k: [k.cf_unit(d, 0, 1, 2**62) for d in range(10**5 + 2, 10**5 + 202) if d % 4 != 1],
        "real_hR": lambda k: [k.real_hR(x) for x in poss],
        "compose_neg": lambda k: [k.compose_neg(*f, *g, D) for f, g in pairs],
        "form_pow_neg": lambda k: [k.form_pow_neg(*f, 10**6 + 3, D) for f, _ in pairs],
    }


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    if _ckernels is None:
        print("compiled kernels are not built; nothing to compare")
        return
    print(f"{'kernel':<20}{'python (s)':>12}{'cython (s)':>12}{'speedup':>10}")
    for name, fn in _cases().items():
        tp = min(timeit.repeat(lambda: fn(_pykernels), number=1, repeat=args.repeat))
        tc = min(timeit.repeat(lambda: fn(_ckernels), number=1, repeat=args.repeat))
        print(f"{name:<20}{tp:>12.4f}{tc:>12.4f}{tp / tc:>9.1f}x")


if __name__ == "__main__":
    main()
