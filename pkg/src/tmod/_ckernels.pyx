# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled twins of the loops in ``_pykernels`` (same signatures, same results).

Arithmetic is in 64-bit integers with 128-bit products; inputs outside that
range are passed on to the pure-Python versions.
"""

from libc.math cimport erfc, exp, log, sqrt, fabs

from . import _pykernels

ctypedef long long i64
ctypedef unsigned long long u64

cdef extern from *:
    """
    typedef __int128 tm_i128;
    typedef unsigned __int128 tm_u128;
    """
    ctypedef long long i128 "tm_i128"
    ctypedef unsigned long long u128 "tm_u128"

cdef i64 LIMIT = 1LL << 40


cdef inline i64 _gcd(i64 a, i64 b) noexcept nogil:
    if a < 0:
        a = -a
    if b < 0:
        b = -b
    while b:
        a, b = b, a % b
    return a


cdef inline i64 _fmod(i64 a, i64 m) noexcept nogil:
    cdef i64 r = a % m
    if r < 0:
        r += m
    return r


def h_neg(D):
    if D <= -LIMIT:
        return _pykernels.h_neg(D)
    cdef i64 d = D, a, b, c, num, amax, count = 0
    amax = <i64>sqrt(<double>(-d) / 3.0) + 1
    while 3 * amax * amax > -d:
        amax -= 1
    for a in range(1, amax + 1):
        b = -a + 1
        if _fmod(b - d, 2):
            b += 1
        while b <= a:
            num = b * b - d
            if num % (4 * a) == 0:
                c = num // (4 * a)
                if c >= a and _gcd(_gcd(a, b), c) == 1:
                    if b >= 0 or (a != c and -b != a):
                        count += 1
            b += 2
    return count


def reduced_forms_neg(D):
    if D <= -LIMIT:
        return _pykernels.reduced_forms_neg(D)
    cdef i64 d = D, a, b, c, num, amax
    out = []
    amax = <i64>sqrt(<double>(-d) / 3.0) + 1
    while 3 * amax * amax > -d:
        amax -= 1
    for a in range(1, amax + 1):
        b = -a + 1
        if _fmod(b - d, 2):
            b += 1
        while b <= a:
            num = b * b - d
            if num % (4 * a) == 0:
                c = num // (4 * a)
                if c >= a and _gcd(_gcd(a, b), c) == 1:
                    if b >= 0 or (a != c and -b != a):
                        out.append((a, b, c))
            b += 2
    return out


cdef i64 _isqrt(i64 n) noexcept nogil:
    cdef i64 s = <i64>sqrt(<double>n)
    while s * s > n:
        s -= 1
    while (s + 1) * (s + 1) <= n:
        s += 1
    return s


def reduced_forms_pos(D):
    if D >= LIMIT:
        return _pykernels.reduced_forms_pos(D)
    cdef i64 d = D, s, b, N, A, C, t
    out = []
    s = _isqrt(d)
    b = s
    if _fmod(b - d, 2):
        b -= 1
    while b > 0:
        N = (d - b * b) // 4
        A = (s - b) // 2
        if A < 1:
            A = 1
        while (2 * A + b) * (2 * A + b) <= d:
            A += 1
        while True:
            t = 2 * A - b
            if t > 0 and t * t >= d:
                break
            if N % A == 0:
                C = N // A
                if _gcd(_gcd(A, b), C) == 1:
                    out.append((A, b, -C))
                    out.append((-A, b, C))
            A += 1
        b -= 2
    return out


def narrow_cycles(D):
    if D >= LIMIT:
        return _pykernels.narrow_cycles(D)
    forms = reduced_forms_pos(D)
    index = {f: i for i, f in enumerate(forms)}
    cdef Py_ssize_t n = len(forms), i, j
    ids = [-1] * n
    cdef i64 d = D, s = _isqrt(d), a, b, c, ac, tc, r
    cdef int ncyc = 0
    for i in range(n):
        if ids[i] >= 0:
            continue
        a, b, c = forms[i]
        while True:
            j = index[(a, b, c)]
            if ids[j] >= 0:
                break
            ids[j] = ncyc
            ac = c if c > 0 else -c
            tc = 2 * ac
            if ac > s:
                r = _fmod(-b, tc)
                if r > ac:
                    r -= tc
            else:
                r = s - _fmod(s + b, tc)
            a, b, c = c, r, (r * r - d) // (4 * c)
        ncyc += 1
    return forms, ids, ncyc


def h_plus(D):
    return narrow_cycles(D)[2]


cdef inline u64 _mulmod(u64 a, u64 b, u64 m) noexcept nogil:
    return <u64>((<u128>a * b) % m)


def cf_unit(d, P0, Q0, modulus):
    if modulus >= (1 << 63) or d >= LIMIT:
        return _pykernels.cf_unit(d, P0, Q0, modulus)
    cdef i64 dd = d, s = _isqrt(dd), P = P0, Q = Q0, a, P1 = 0, Q1 = 0, k = 0
    cdef u64 M = modulus, pm2, pm1, qm2, qm1, p, q
    cdef double fp_prev, fp, fq_prev, fq, logscale = 0.0, tmp
    if Q > 0:
        a = (P + s) // Q
    else:
        a = -((-(P + s)) // Q)
    pm2, pm1 = 0, 1
    qm2, qm1 = 1, 0
    fp_prev, fp = 1.0, <double>a
    fq_prev, fq = 0.0, 1.0
    p = (_mulmod(<u64>a % M, pm1, M) + pm2) % M
    q = (_mulmod(<u64>a % M, qm1, M) + qm2) % M
    pm2, pm1, qm2, qm1 = pm1, p, qm1, q
    while True:
        P = a * Q - P
        Q = (dd - P * P) // Q
        a = (P + s) // Q
        k += 1
        if k == 1:
            P1, Q1 = P, Q
        elif P == P1 and Q == Q1:
            return int(pm2), int(qm2), int(k - 1), log(fp_prev) + logscale, fq_prev / fp_prev
        p = (_mulmod(<u64>a % M, pm1, M) + pm2) % M
        q = (_mulmod(<u64>a % M, qm1, M) + qm2) % M
        pm2, pm1, qm2, qm1 = pm1, p, qm1, q
        tmp = fp
        fp = a * fp + fp_prev
        fp_prev = tmp
        tmp = fq
        fq = a * fq + fq_prev
        fq_prev = tmp
        if fp > 1e200:
            fp_prev /= 1e200
            fp /= 1e200
            fq_prev /= 1e200
            fq /= 1e200
            logscale += log(1e200)


cdef int _kron(i64 D, i64 n) noexcept nogil:
    cdef int r = 1
    cdef i64 a, t, m8
    while n % 2 == 0:
        n //= 2
        if D % 2 == 0:
            return 0
        m8 = _fmod(D, 8)
        if m8 == 3 or m8 == 5:
            r = -r
    a = _fmod(D, n)
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 == 3 or n % 8 == 5:
                r = -r
        t = a
        a = n
        n = t
        if a % 4 == 3 and n % 4 == 3:
            r = -r
        a %= n
    return r if n == 1 else 0


cdef double _e1(double x) noexcept nogil:
    cdef double total, term, add, b, c, dd, h, an, de
    cdef int k, i
    if x <= 1.0:
        total = 0.0
        term = 1.0
        k = 1
        while True:
            term *= -x / k
            add = term / k
            total += add
            if fabs(add) < 1e-17:
                break
            k += 1
        return -0.5772156649015329 - log(x) - total
    b = x + 1.0
    c = 1e300
    dd = 1.0 / b
    h = dd
    i = 1
    while i < 500:
        an = -(<double>i) * i
        b += 2.0
        dd = 1.0 / (an * dd + b)
        c = b + an / c
        de = c * dd
        h *= de
        if fabs(de - 1.0) < 1e-16:
            break
        i += 1
    return h * exp(-x)


def real_hR(D):
    if D >= LIMIT:
        return _pykernels.real_hR(D)
    cdef i64 d = D, n, nmax
    cdef int chi
    cdef double sD = sqrt(<double>d), c = 3.141592653589793 / d, sc = sqrt(c), total = 0.0
    nmax = <i64>(6.0 * sqrt(<double>d / 3.141592653589793)) + 10
    with nogil:
        for n in range(1, nmax + 1):
            chi = _kron(d, n)
            if chi == 0:
                continue
            total += chi * (sD / n * erfc(n * sc) + _e1(c * n * n))
    return total / 2.0


def snf_exponents(rows, ncols, p, M):
    return _pykernels.snf_exponents(rows, ncols, p, M)


cdef inline void _xgcd(i64 a, i64 b, i64* g, i64* x, i64* y) noexcept nogil:
    cdef i64 x0 = 1, x1 = 0, y0 = 0, y1 = 1, q, t
    while b:
        q = a // b
        t = a - q * b
        a = b
        b = t
        t = x0 - q * x1
        x0 = x1
        x1 = t
        t = y0 - q * y1
        y0 = y1
        y1 = t
    if a < 0:
        a, x0, y0 = -a, -x0, -y0
    g[0] = a
    x[0] = x0
    y[0] = y0


cdef inline void _reduce_neg(i64* A, i64* B, i64* C) noexcept nogil:
    cdef i64 a = A[0], b = B[0], c = C[0], k
    while True:
        if not (-a < b <= a):
            k = (a - b) // (2 * a)
            if (a - b) % (2 * a) and (a - b) < 0:
                k -= 1
            c = c + k * (b + k * a)
            b = b + 2 * k * a
        if a > c:
            a, b, c = c, -b, a
            continue
        if (a == c or b == a or b == -a) and b < 0:
            b = -b
        break
    A[0] = a
    B[0] = b
    C[0] = c


cdef inline void _compose_red(i64 a1, i64 b1, i64 c1, i64 a2, i64 b2, i64 c2,
                              i64* ra, i64* rb, i64* rc) noexcept nogil:
    cdef i64 D = b1 * b1 - 4 * a1 * c1, beta = (b1 + b2) // 2
    cdef i64 g1, u1, v1, g, x, w, u, v, a3, b3, c3
    cdef i128 t
    _xgcd(a1, a2, &g1, &u1, &v1)
    _xgcd(g1, beta, &g, &x, &w)
    u = x * u1
    v = x * v1
    a3 = a1 * a2 // (g * g)
    t = (<i128>u * a1 * b2 + <i128>v * a2 * b1 + <i128>w * ((<i128>b1 * b2 + D) // 2)) // g
    b3 = <i64>(t % (2 * a3))
    if b3 < 0:
        b3 += 2 * a3
    c3 = (b3 * b3 - D) // (4 * a3)
    _reduce_neg(&a3, &b3, &c3)
    ra[0] = a3
    rb[0] = b3
    rc[0] = c3


def compose_neg(a1, b1, c1, a2, b2, c2, D):
    if D <= -LIMIT:
        return _pykernels.compose_neg(a1, b1, c1, a2, b2, c2, D)
    cdef i64 ra, rb, rc
    _compose_red(a1, b1, c1, a2, b2, c2, &ra, &rb, &rc)
    return ra, rb, rc


def form_pow_neg(a, b, c, e, D):
    if D <= -LIMIT:
        return _pykernels.form_pow_neg(a, b, c, e, D)
    cdef i64 d = D, ra = 1, rb = _fmod(d, 2), rc, ba = a, bb = b, bc = c
    cdef i64 ex = e
    rc = (rb * rb - d) // 4
    while ex:
        if ex & 1:
            _compose_red(ra, rb, rc, ba, bb, bc, &ra, &rb, &rc)
        ex >>= 1
        if ex:
            _compose_red(ba, bb, bc, ba, bb, bc, &ba, &bb, &bc)
    return ra, rb, rc


def form_order_neg(a, b, c, D, bound):
    if D <= -LIMIT:
        return _pykernels.form_order_neg(a, b, c, D, bound)
    cdef i64 ga = a, gb = b, gc = c, k = 1, bnd = bound
    while k <= bnd:
        if ga == 1:
            return k
        _compose_red(ga, gb, gc, a, b, c, &ga, &gb, &gc)
        k += 1
    return 0
