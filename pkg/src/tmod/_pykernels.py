"""Pure-Python reference implementations of the hot loops.

Every function here has a twin with the same signature in the compiled
``_ckernels`` extension; ``tmod.kernels`` picks one at import time.
"""

from __future__ import annotations

import math


def h_neg(D: int) -> int:
    """Number of reduced primitive forms of discriminant D < 0."""
    count = 0
    amax = math.isqrt(-D // 3)
    for a in range(1, amax + 1):
        b = -a + 1
        if (b - D) % 2:
            b += 1
        while b <= a:
            num = b * b - D
            if num % (4 * a) == 0:
                c = num // (4 * a)
                if c >= a and math.gcd(math.gcd(a, b), c) == 1:
                    if b >= 0 or (a != c and -b != a):
                        count += 1
            b += 2
    return count


def reduced_forms_neg(D: int) -> list[tuple[int, int, int]]:
    out = []
    amax = math.isqrt(-D // 3)
    for a in range(1, amax + 1):
        b = -a + 1
        if (b - D) % 2:
            b += 1
        while b <= a:
            num = b * b - D
            if num % (4 * a) == 0:
                c = num // (4 * a)
                if c >= a and math.gcd(math.gcd(a, b), c) == 1:
                    if b >= 0 or (a != c and -b != a):
                        out.append((a, b, c))
            b += 2
    return out


def reduced_forms_pos(D: int) -> list[tuple[int, int, int]]:
    """Reduced primitive indefinite forms: |sqrt D - 2|a|| < b < sqrt D."""
    out = []
    s = math.isqrt(D)
    b = s
    if (b - D) % 2:
        b -= 1
    while b > 0:
        N = (D - b * b) // 4
        # sqrt D - b < 2A < sqrt D + b
        A = (s - b) // 2
        if A < 1:
            A = 1
        while (2 * A + b) * (2 * A + b) <= D:
            A += 1
        while True:
            t = 2 * A - b
            if t > 0 and t * t >= D:
                break
            if N % A == 0:
                C = N // A
                if math.gcd(math.gcd(A, b), C) == 1:
                    out.append((A, b, -C))
                    out.append((-A, b, C))
            A += 1
        b -= 2
    return out


def _rho_pos(a: int, b: int, c: int, D: int, s: int):
    ac = abs(c)
    tc = 2 * ac
    if ac > s:
        r = (-b) % tc
        if r > ac:
            r -= tc
    else:
        r = s - ((s + b) % tc)
    return c, r, (r * r - D) // (4 * c)


def narrow_cycles(D: int) -> tuple[list[tuple[int, int, int]], list[int], int]:
    """Reduced indefinite forms, the cycle index of each, and the cycle count."""
    forms = reduced_forms_pos(D)
    index = {f: i for i, f in enumerate(forms)}
    ids = [-1] * len(forms)
    s = math.isqrt(D)
    ncyc = 0
    for i, f in enumerate(forms):
        if ids[i] >= 0:
            continue
        g = f
        while True:
            j = index[g]
            if ids[j] >= 0:
                break
            ids[j] = ncyc
            g = _rho_pos(g[0], g[1], g[2], D, s)
        ncyc += 1
    return forms, ids, ncyc


def h_plus(D: int) -> int:
    return narrow_cycles(D)[2]


def cf_unit(d: int, P0: int, Q0: int, modulus: int):
    """Continued fraction of (P0 + sqrt d)/Q0 until the period closes.

    Returns (p, q, period, log_p, ratio) where p = p_{k-1}, q = q_{k-1}
    modulo `modulus` are the last convergents of the first period, log_p is
    the natural log of the exact p_{k-1} and ratio = q_{k-1}/p_{k-1} as floats.
    """
    s = math.isqrt(d)
    P, Q = P0, Q0
    a = (P + s) // Q if Q > 0 else -((-(P + s)) // Q)
    pm2, pm1 = 0, 1  # p_{-2}, p_{-1}
    qm2, qm1 = 1, 0
    fp_prev, fp = 1.0, float(a)  # float convergents, rescaled
    fq_prev, fq = 0.0, 1.0
    logscale = 0.0
    p = (a * pm1 + pm2) % modulus
    q = (a * qm1 + qm2) % modulus
    pm2, pm1, qm2, qm1 = pm1, p, qm1, q
    P1 = Q1 = None
    k = 0
    while True:
        P = a * Q - P
        Q = (d - P * P) // Q
        a = (P + s) // Q
        k += 1
        if k == 1:
            P1, Q1 = P, Q
        elif P == P1 and Q == Q1:
            period = k - 1
            return pm2, qm2, period, math.log(fp_prev) + logscale, fq_prev / fp_prev
        p = (a * pm1 + pm2) % modulus
        q = (a * qm1 + qm2) % modulus
        pm2, pm1, qm2, qm1 = pm1, p, qm1, q
        fp_prev, fp = fp, a * fp + fp_prev
        fq_prev, fq = fq, a * fq + fq_prev
        if fp > 1e200:
            fp_prev /= 1e200
            fp /= 1e200
            fq_prev /= 1e200
            fq /= 1e200
            logscale += math.log(1e200)


def _kron(D: int, n: int) -> int:
    """Kronecker symbol (D/n) for n >= 1."""
    r = 1
    while n % 2 == 0:
        n //= 2
        if D % 2 == 0:
            return 0
        if D % 8 in (3, 5):
            r = -r
    a = D % n
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                r = -r
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            r = -r
        a %= n
    return r if n == 1 else 0


def _e1(x: float) -> float:
    """Exponential integral E1(x) for x > 0."""
    if x <= 1.0:
        total, term, k = 0.0, 1.0, 1
        while True:
            term *= -x / k
            add = term / k
            total += add
            if abs(add) < 1e-17:
                break
            k += 1
        return -0.5772156649015329 - math.log(x) - total
    # continued fraction (modified Lentz)
    b = x + 1.0
    c = 1e300
    dd = 1.0 / b
    h = dd
    i = 1
    while i < 500:
        an = -i * i
        b += 2.0
        dd = 1.0 / (an * dd + b)
        c = b + an / c
        de = c * dd
        h *= de
        if abs(de - 1.0) < 1e-16:
            break
        i += 1
    return h * math.exp(-x)


def real_hR(D: int) -> float:
    """h(D) * log(eps) for a real quadratic fundamental discriminant D.

    Uses the rapidly convergent series
        2 h R = sum_n (D/n) (sqrt(D)/n erfc(n sqrt(pi/D)) + E1(pi n^2 / D)).
    """
    sD = math.sqrt(D)
    c = math.pi / D
    total = 0.0
    nmax = int(6.0 * math.sqrt(D / math.pi)) + 10
    for n in range(1, nmax + 1):
        chi = _kron(D, n)
        if chi == 0:
            continue
        total += chi * (sD / n * math.erfc(n * math.sqrt(c)) + _e1(c * n * n))
    return total / 2.0


def snf_exponents(rows: list[list[int]], ncols: int, p: int, M: int) -> list[int]:
    """Invariant exponents of Z^ncols/rows tensored with Z/p^M (free part reported as M)."""
    from .linalg import snf_mod_pm

    return snf_mod_pm(rows, ncols, p, M)


def compose_neg(a1: int, b1: int, c1: int, a2: int, b2: int, c2: int, D: int):
    """Reduced composition of two forms of negative discriminant D."""
    a, b, c = _compose(a1, b1, c1, a2, b2, c2)
    return reduce_neg(a, b, c)


def _xgcd(a: int, b: int):
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q = a // b
        a, b = b, a - q * b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        a, x0, y0 = -a, -x0, -y0
    return a, x0, y0


def _compose(a1, b1, c1, a2, b2, c2):
    """Dirichlet composition of primitive forms of equal discriminant (any signs)."""
    D = b1 * b1 - 4 * a1 * c1
    beta = (b1 + b2) // 2
    g1, u1, v1 = _xgcd(a1, a2)
    g, x, w = _xgcd(g1, beta)
    u, v = x * u1, x * v1
    a3 = a1 * a2 // (g * g)
    b3 = (u * a1 * b2 + v * a2 * b1 + w * (b1 * b2 + D) // 2) // g
    b3 %= 2 * abs(a3)
    c3 = (b3 * b3 - D) // (4 * a3)
    return a3, b3, c3


def reduce_neg(a: int, b: int, c: int):
    while True:
        if not (-a < b <= a):
            k = (a - b) // (2 * a)
            c = c + k * (b + k * a)
            b = b + 2 * k * a
        if a > c:
            a, b, c = c, -b, a
            continue
        if (a == c or b == a or b == -a) and b < 0:
            b = -b
        return a, b, c


def form_pow_neg(a: int, b: int, c: int, e: int, D: int):
    """f^e reduced, for e >= 0."""
    ra, rb = 1, D % 2
    rc = (rb * rb - D) // 4
    ba, bb, bc = a, b, c
    while e:
        if e & 1:
            ra, rb, rc = compose_neg(ra, rb, rc, ba, bb, bc, D)
        e >>= 1
        if e:
            ba, bb, bc = compose_neg(ba, bb, bc, ba, bb, bc, D)
    return ra, rb, rc


def form_order_neg(a: int, b: int, c: int, D: int, bound: int) -> int:
    """Order of a reduced form by repeated composition (0 if above bound)."""
    ia = 1
    ga, gb, gc = a, b, c
    k = 1
    while k <= bound:
        if ga == ia:
            return k
        ga, gb, gc = compose_neg(ga, gb, gc, a, b, c, D)
        k += 1
    return 0
