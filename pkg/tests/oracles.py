"""Brute-force reference computations used to pin expected values.

Nothing here imports the package; each routine is the slowest obvious
method so that agreement with the package is meaningful.
"""

from __future__ import annotations

import math
from itertools import product


def legendre_euler(a: int, p: int) -> int:
    r = pow(a % p, (p - 1) // 2, p)
    return -1 if r == p - 1 else r


def jacobi_by_factoring(a: int, n: int) -> int:
    out = 1
    m = n
    q = 3
    while m > 1:
        if q * q > m:
            q = m
        while m % q == 0:
            out *= legendre_euler(a, q)
            m //= q
        q += 2
    return out


def quartic_brute(a: int, l: int) -> int:
    """+1 if a is a fourth power mod l, -1 if a square but not a fourth power."""
    fourth = {pow(x, 4, l) for x in range(1, l)}
    squares = {x * x % l for x in range(1, l)}
    a %= l
    if a not in squares:
        raise ValueError("not a square")
    return 1 if a in fourth else -1


def hilbert_brute(a: int, b: int, p: int) -> int:
    """Additive Hilbert symbol over Q_p: 0 iff z^2 = a x^2 + b y^2 has a primitive solution.

    Searched modulo p^k with k a few powers past the valuations of a and b,
    which is enough for Hensel lifting when v_p(a), v_p(b) <= 1.
    """
    va, vb = _val(a, p), _val(b, p)
    if va > 1 or vb > 1:
        raise ValueError("keep valuations <= 1")
    k = va + vb + (5 if p == 2 else 2)
    mod = p**k
    by2: dict[int, list[int]] = {}
    for y in range(mod):
        by2.setdefault(b * y * y % mod, []).append(y)
    for x in range(mod):
        for z in range(mod):
            for y in by2.get((z * z - a * x * x) % mod, ()):
                if x % p or y % p or z % p:
                    return 0
    return 1


def _val(n: int, p: int) -> int:
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def class_number_brute(D: int) -> int:
    """h(D) for D < 0 by listing all primitive reduced forms with |b| <= a <= c."""
    h = 0
    a = 1
    while 3 * a * a <= -D:
        for b in range(-a + 1, a + 1):
            if (b * b - D) % (4 * a):
                continue
            c = (b * b - D) // (4 * a)
            if c < a or math.gcd(math.gcd(a, abs(b)), c) != 1:
                continue
            if b < 0 and a == c:
                continue
            h += 1
        a += 1
    return h


def pell_brute(d: int, limit: int = 10**6):
    """Smallest (x, y) with x^2 - d y^2 = ±1 (integral coordinates), by search on y."""
    for y in range(1, limit):
        for s in (-1, 1):
            x2 = d * y * y + s
            x = math.isqrt(x2)
            if x * x == x2:
                return x, y, s
    raise ValueError("not found")


def residue_units(d: int, mod: int):
    """Units of Z[w]/(mod), w = sqrt(d) or (1+sqrt d)/2, as pairs (u, v) meaning u + v w."""
    if d % 4 == 1:
        T, N = 1, (d - 1) // 4
    else:
        T, N = 0, d
    elems = [(u, v) for u in range(mod) for v in range(mod)]

    def mul(x, y):
        a, b = x
        c, e = y
        return ((a * c + b * e * N) % mod, (a * e + b * c + b * e * T) % mod)

    units = []
    for x in elems:
        nx = (x[0] * x[0] + x[0] * x[1] * T - x[1] * x[1] * N) % mod
        if math.gcd(nx, mod) == 1:
            units.append(x)
    return units, mul


def p_sylow_exponents(elems, mul, one, p: int) -> list[int]:
    """Cyclic exponents of the p-Sylow subgroup of a finite abelian group, by element orders."""
    def order(x):
        k, y = 1, x
        while y != one:
            y = mul(y, x)
            k += 1
        return k

    vals = []
    for x in elems:
        o = order(x)
        if o & (o - 1) if p == 2 else o != p ** _val(o, p):
            continue
        vals.append(_val(o, p))
    # number of elements killed by p^k is p^(sum_i min(k, e_i))
    kmax = max(vals)
    logs = [round(math.log(sum(1 for v in vals if v <= k), p)) for k in range(kmax + 1)]
    at_least = [logs[k] - logs[k - 1] for k in range(1, kmax + 1)] + [0]
    exps = []
    for k in range(1, kmax + 1):
        exps += [k] * (at_least[k - 1] - at_least[k])
    return sorted(exps)


def aut_count_brute(invariants: tuple[int, ...]) -> int:
    """#Aut of Z/n_1 x ... x Z/n_r by checking every homomorphism on generators."""
    n = len(invariants)
    elems = list(product(*[range(k) for k in invariants]))

    def order(x):
        o = 1
        for xi, ni in zip(x, invariants):
            o = math.lcm(o, ni // math.gcd(xi, ni))
        return o

    # images of the generators must have order dividing n_i
    choices = [[x for x in elems if invariants[i] % order(x) == 0] for i in range(n)]
    count = 0
    for imgs in product(*choices):
        seen = set()
        for coeffs in elems:
            v = tuple(sum(c * im[j] for c, im in zip(coeffs, imgs)) % invariants[j] for j in range(n))
            seen.add(v)
        if len(seen) == len(elems):
            count += 1
    return count
