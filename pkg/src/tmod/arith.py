"""Elementary arithmetic: sieves, squarefree factorization, residue symbols
and the two binary representations used by the 2-adic classifiers."""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import CapacityError, NonCoprimeError, NoRepresentation, NotQuadraticResidue

SIEVE_LIMIT = 2 * 10**9
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)
_MR_LIMIT = 3317044064679887385961981


def sieve_primes(bound: int) -> list[int]:
    """Primes p <= bound in increasing order."""
    if bound < 2:
        return []
    if bound > SIEVE_LIMIT:
        raise CapacityError(f"sieve bound {bound} exceeds {SIEVE_LIMIT}")
    flags = np.ones(bound + 1, dtype=bool)
    flags[:2] = False
    flags[4::2] = False
    for p in range(3, math.isqrt(bound) + 1, 2):
        if flags[p]:
            flags[p * p :: 2 * p] = False
    return np.flatnonzero(flags).tolist()


def spf_table(bound: int) -> np.ndarray:
    """Smallest prime factor of every n <= bound (0 and 1 map to themselves)."""
    if bound > SIEVE_LIMIT:
        raise CapacityError(f"sieve bound {bound} exceeds {SIEVE_LIMIT}")
    spf = np.arange(bound + 1, dtype=np.int64)
    spf[4::2] = 2
    for p in range(3, math.isqrt(bound) + 1, 2):
        if spf[p] == p:
            block = spf[p * p :: 2 * p]
            mask = block == np.arange(p * p, bound + 1, 2 * p)
            block[mask] = p
    return spf


def squarefree_flags(bound: int) -> np.ndarray:
    """Boolean array: flags[n] is True iff n is squarefree (n >= 1)."""
    flags = np.ones(bound + 1, dtype=bool)
    flags[0] = False
    for p in sieve_primes(math.isqrt(bound)):
        flags[p * p :: p * p] = False
    return flags


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin, valid for n below 3.3e24."""
    if n < 2:
        return False
    for p in _MR_BASES:
        if n % p == 0:
            return n == p
    if n >= _MR_LIMIT:
        raise CapacityError("primality test is certified only below 3.3e24")
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


@dataclass(frozen=True)
class FactoredInt:
    """A squarefree integer with its sign and sorted prime divisors."""

    value: int
    primes: tuple[int, ...]

    @property
    def sign(self) -> int:
        return -1 if self.value < 0 else 1

    @property
    def odd_primes(self) -> tuple[int, ...]:
        return tuple(p for p in self.primes if p != 2)


@lru_cache(maxsize=4)
def _small_primes(limit: int) -> tuple[int, ...]:
    return tuple(sieve_primes(limit))


def _factor(n: int) -> dict[int, int]:
    n = abs(n)
    out: dict[int, int] = {}
    if n > 10**14:
        import sympy

        return {int(p): int(e) for p, e in sympy.factorint(n).items()}
    for p in _small_primes(10**7 if n > 10**12 else 10**6):
        if p * p > n:
            break
        if n % p == 0:
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            out[p] = e
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def factor(n: int) -> dict[int, int]:
    """Prime factorization of |n| as {p: exponent}."""
    if n == 0:
        raise ValueError("cannot factor 0")
    return _factor(n)


def squarefree_factor(n: int) -> FactoredInt | None:
    """Factor a squarefree n; returns None when n is not squarefree."""
    if n == 0:
        raise ValueError("n must be nonzero")
    f = _factor(n)
    if any(e > 1 for e in f.values()):
        return None
    return FactoredInt(n, tuple(sorted(f)))


def factor_with_spf(n: int, spf: np.ndarray) -> list[int]:
    """Prime divisors of n (with repetition) read from an SPF table."""
    out = []
    while n > 1:
        p = int(spf[n])
        out.append(p)
        n //= p
    return out


def jacobi(a: int, n: int) -> int:
    """Jacobi symbol (a/n) for odd n >= 1; 0 when gcd(a, n) > 1."""
    if n <= 0 or n % 2 == 0:
        raise ValueError("n must be odd and positive")
    a %= n
    result = 1
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


def kronecker(a: int, n: int) -> int:
    """Kronecker symbol (a/n) for any integer n."""
    if n == 0:
        return 1 if abs(a) == 1 else 0
    result = 1
    if n < 0:
        n = -n
        if a < 0:
            result = -1
    v = (n & -n).bit_length() - 1
    if v:
        if a % 2 == 0:
            return 0
        if v % 2 and a % 8 in (3, 5):
            result = -result
        n >>= v
    return result * jacobi(a, n)


def jacobi_additive(a: int, n: int) -> int:
    """Additive Jacobi symbol: 0 for +1, 1 for -1."""
    s = jacobi(a, n)
    if s == 0:
        raise NonCoprimeError(f"gcd({a}, {n}) > 1")
    return 0 if s == 1 else 1


def legendre_additive(a: int, p: int) -> int:
    return jacobi_additive(a, p)


def quartic_symbol(a: int, l: int) -> int:
    """Rational quartic residue symbol (a/l)_4 for a quadratic residue a mod l."""
    if l % 4 != 1:
        raise ValueError("l must be a prime congruent to 1 mod 4")
    if a % l == 0:
        raise NonCoprimeError(f"{l} divides {a}")
    if pow(a, (l - 1) // 2, l) != 1:
        raise NotQuadraticResidue(f"{a} is not a square mod {l}")
    r = pow(a, (l - 1) // 4, l)
    return 1 if r == 1 else -1


def sqrt_mod_prime(a: int, p: int) -> int:
    """A square root of a modulo the prime p (Tonelli-Shanks)."""
    a %= p
    if p == 2 or a == 0:
        return a
    if pow(a, (p - 1) // 2, p) != 1:
        raise NotQuadraticResidue(f"{a} is not a square mod {p}")
    if p % 4 == 3:
        return pow(a, (p + 1) // 4, p)
    q, s = p - 1, 0
    while q % 2 == 0:
        q //= 2
        s += 1
    z = 2
    while pow(z, (p - 1) // 2, p) != p - 1:
        z += 1
    c, r, t, m = pow(z, q, p), pow(a, (q + 1) // 2, p), pow(a, q, p), s
    while t != 1:
        i, x = 1, t * t % p
        while x != 1:
            x = x * x % p
            i += 1
        b = pow(c, 1 << (m - i - 1), p)
        r, c = r * b % p, b * b % p
        t, m = t * c % p, i
    return r


def sqrt_mod_prime_power(a: int, p: int, k: int) -> int:
    """A square root of a mod p^k for odd p not dividing a, by Hensel lifting."""
    r = sqrt_mod_prime(a, p)
    mod = p
    for _ in range(1, k):
        mod *= p
        r = (r - (r * r - a) * pow(2 * r, -1, mod)) % mod
    return r


def sqrt_mod_2power(a: int, k: int) -> int:
    """A square root of a ≡ 1 mod 8 modulo 2^k, congruent to 1 mod 4."""
    if a % 8 != 1:
        raise NotQuadraticResidue(f"{a} is not a 2-adic unit square")
    r, j = 1, 3
    while j < k:
        # r^2 ≡ a mod 2^j; one Newton step makes it mod 2^(2j-2)
        j = min(2 * j - 2, k)
        mod = 1 << j
        r = (r + ((a - r * r) // 2) * pow(r, -1, mod)) % mod
    r %= 1 << k
    return r if r % 4 == 1 else (-r) % (1 << k)


def v_p(n: int, p: int) -> int:
    """p-adic valuation of a nonzero integer."""
    if n == 0:
        raise ValueError("valuation of 0")
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


# -- Z[sqrt 2] helpers for the binary representations --------------------------


def _z2_mul(x, y):
    return (x[0] * y[0] + 2 * x[1] * y[1], x[0] * y[1] + x[1] * y[0])


def _z2_norm(x) -> int:
    return x[0] * x[0] - 2 * x[1] * x[1]


def _round_div(a: int, b: int) -> int:
    if b < 0:
        a, b = -a, -b
    return (2 * a + b) // (2 * b)


def _z2_gcd(x, y):
    """Euclid in the norm-Euclidean ring Z[sqrt 2]."""
    while y != (0, 0):
        n = _z2_norm(y)
        num = _z2_mul(x, (y[0], -y[1]))
        q = (_round_div(num[0], n), _round_div(num[1], n))
        qy = _z2_mul(q, y)
        x, y = y, (x[0] - qy[0], x[1] - qy[1])
    return x


def _z2_element_of_norm(q: int):
    """An element of Z[sqrt 2] with norm ±q for a prime q ≡ ±1 mod 8 (or q=2)."""
    if q == 2:
        return (0, 1)
    s = sqrt_mod_prime(2, q)
    return _z2_gcd((q, 0), (s, 1))


_EPS2 = (3, 2)
_EPS2_INV = (3, -2)


def _orbit(x, steps: int = 6):
    """Elements x * (3+2 sqrt2)^k for |k| <= steps, with sign and conjugate variants."""
    seen = []
    for base in (x, (x[0], -x[1])):
        for sign in (1, -1):
            b = (sign * base[0], sign * base[1])
            seen.append(b)
            up = down = b
            for _ in range(steps):
                up = _z2_mul(up, _EPS2)
                down = _z2_mul(down, _EPS2_INV)
                seen.extend((up, down))
    return seen


def _shrink(x):
    """Move x inside its orbit under multiplication by 3+2 sqrt2 to minimize |coordinates|."""
    while True:
        best = x
        for y in (_z2_mul(x, _EPS2), _z2_mul(x, _EPS2_INV)):
            if abs(y[0]) + abs(y[1]) < abs(best[0]) + abs(best[1]):
                best = y
        if best == x:
            return x
        x = best


@dataclass(frozen=True)
class Rep2GH:
    """m = 2 g^2 - h^2 with g, h > 0 and gcd(g, h) = 1."""

    m: int
    g: int
    h: int


@dataclass(frozen=True)
class RepUV:
    """l = u^2 - 2 v^2."""

    l: int
    u: int
    v: int


def _rep_2g2_h2_lattice(m: int) -> Rep2GH | None:
    fac = factor(m)
    if fac.get(2, 0) > 1:
        return None
    parts = []
    for q, e in sorted(fac.items()):
        if q != 2 and q % 8 not in (1, 7):
            return None
        z = _z2_element_of_norm(q)
        w = (1, 0)
        for _ in range(e):
            w = _z2_mul(w, z)
        parts.append(w)
    best = None
    for mask in range(1 << len(parts)):
        w = (1, 0)
        for j, part in enumerate(parts):
            w = _z2_mul(w, (part[0], -part[1]) if mask >> j & 1 else part)
        if _z2_norm(w) > 0:
            w = _z2_mul(w, (1, 1))
        for h, g in _orbit(_shrink(w)):
            if g > 0 and h > 0 and math.gcd(g, h) == 1 and 2 * g * g - h * h == m:
                if best is None or g < best[0]:
                    best = (g, h)
    return None if best is None else Rep2GH(m, best[0], best[1])


def rep_2g2_h2(m: int, search_cap: int | None = None) -> Rep2GH:
    """Minimal-g solution of m = 2g^2 - h^2 with g, h > 0 coprime.

    The direct search is complete when the cap is at least 3*sqrt(m): any
    solution with larger g maps to a smaller one under the unit 3 - 2 sqrt2.
    """
    if m <= 0:
        raise ValueError("m must be positive")
    if search_cap is None:
        search_cap = 3 * math.isqrt(m) + 3
    g = math.isqrt(m // 2)
    while 2 * g * g < m:
        g += 1
    while g <= search_cap:
        h2 = 2 * g * g - m
        h = math.isqrt(h2)
        if h * h == h2 and h > 0 and math.gcd(g, h) == 1:
            return Rep2GH(m, g, h)
        g += 1
    rep = _rep_2g2_h2_lattice(m)
    if rep is None:
        raise NoRepresentation(f"{m} is not of the form 2g^2 - h^2 with gcd(g, h) = 1")
    return rep


def rep_u2_2v2(l: int) -> RepUV:
    """Representation l = u^2 - 2v^2 with u, v > 0, minimal u.

    For l ≡ 1 mod 8 the representative also satisfies u ≡ 1 mod 4.
    """
    if l % 8 not in (1, 7):
        raise NoRepresentation(f"{l} is not ±1 mod 8")
    z = _z2_element_of_norm(l)
    if _z2_norm(z) < 0:
        z = _z2_mul(z, (1, 1))
    cands = []
    for u, v in _orbit(_shrink(z)):
        if u > 0 and v > 0 and u * u - 2 * v * v == l:
            if l % 8 == 1 and u % 4 != 1:
                continue
            cands.append((u, v))
    if not cands:
        raise NoRepresentation(f"no normalized representation found for {l}")
    u, v = min(cands)
    return RepUV(l, u, v)


def reps_u2_2v2(l: int, count: int = 4) -> list[RepUV]:
    """Several distinct positive representations l = u^2 - 2v^2 from different unit orbits points."""
    z = _z2_element_of_norm(l)
    if _z2_norm(z) < 0:
        z = _z2_mul(z, (1, 1))
    sols = sorted({(u, v) for u, v in _orbit(_shrink(z), steps=count + 2) if u > 0 and v > 0})
    return [RepUV(l, u, v) for u, v in sols[:count]]
