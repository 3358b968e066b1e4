"""Quadratic fields: class groups through binary quadratic forms, narrow class
numbers by cycles of reduced indefinite forms, fundamental units by
continued fractions, and principal generators for imaginary fields."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from . import _pykernels, kernels
from .arith import factor, is_prime, kronecker, sqrt_mod_prime, squarefree_factor, v_p
from .errors import ConsistencyError, PrecisionError
from .linalg import snf_mod_pm
from .localsym import QuadElem, hilbert_additive_Q, place_over, symbol_at_place


def fundamental_discriminant(d: int) -> int:
    return d if d % 4 == 1 else 4 * d


def radicand(D: int) -> int:
    return D if D % 4 == 1 else D // 4


@dataclass(frozen=True)
class QuadField:
    """The field Q(sqrt d), d squarefree, with the data used by the 2-adic formulas.

    `odd_primes` lists the odd prime divisors of d with those congruent to
    ±1 mod 8 first; `k` counts them.
    """

    d: int
    D: int
    odd_primes: tuple[int, ...]
    k: int
    two: str
    delta_p: int = 0

    @classmethod
    def from_radicand(cls, d: int) -> "QuadField":
        if d in (0, 1):
            raise ValueError("d must be a squarefree integer other than 0, 1")
        fac = squarefree_factor(d)
        if fac is None:
            raise ValueError(f"{d} is not squarefree")
        odd = fac.odd_primes
        good = sorted(q for q in odd if q % 8 in (1, 7))
        rest = sorted(q for q in odd if q % 8 in (3, 5))
        D = fundamental_discriminant(d)
        if D % 2 == 0:
            two = "ramified"
        elif D % 8 == 1:
            two = "split"
        else:
            two = "inert"
        return cls(d, D, tuple(good + rest), len(good), two)

    @classmethod
    def imaginary(cls, m: int) -> "QuadField":
        """Q(sqrt(-m)) for squarefree m > 0."""
        return cls.from_radicand(-m)

    @property
    def m(self) -> int:
        return abs(self.d)

    @property
    def t(self) -> int:
        return len(self.odd_primes)

    @property
    def is_real(self) -> bool:
        return self.d > 0

    def splitting(self, p: int) -> str:
        if p == 2:
            return self.two
        if self.D % p == 0:
            return "ramified"
        return "split" if kronecker(self.D, p) == 1 else "inert"

    def elem(self, r0, r1=0) -> QuadElem:
        return QuadElem.make(self.d, r0, r1)

    def elem_half_D(self, X: int, Y: int) -> QuadElem:
        """(X + Y sqrt D)/2 as an element r0 + r1 sqrt d."""
        if self.D == self.d:
            return QuadElem(self.d, Fraction(X, 2), Fraction(Y, 2))
        return QuadElem(self.d, Fraction(X, 2), Fraction(Y))


# -- binary quadratic forms ---------------------------------------------------------


@dataclass(frozen=True)
class BQForm:
    a: int
    b: int
    c: int

    @property
    def D(self) -> int:
        return self.b * self.b - 4 * self.a * self.c

    def is_reduced(self) -> bool:
        a, b, c = self.a, self.b, self.c
        D = self.D
        if D < 0:
            return abs(b) <= a <= c and not ((abs(b) == a or a == c) and b < 0)
        return is_reduced_pos(a, b, c, D)

    def reduce(self) -> "BQForm":
        if self.D < 0:
            return BQForm(*_pykernels.reduce_neg(self.a, self.b, self.c))
        return BQForm(*reduce_pos(self.a, self.b, self.c))

    def __mul__(self, other: "BQForm") -> "BQForm":
        return BQForm(*_pykernels._compose(self.a, self.b, self.c, other.a, other.b, other.c)).reduce()

    def tuple(self) -> tuple[int, int, int]:
        return (self.a, self.b, self.c)


def identity_form(D: int) -> tuple[int, int, int]:
    b = D % 2
    return (1, b, (b * b - D) // 4)


def prime_form(D: int, l: int) -> tuple[int, int, int] | None:
    """A form (l, b, c) of discriminant D, or None if l is inert."""
    if l == 2:
        if D % 2:
            if D % 8 != 1:
                return None
            b = 1
        else:
            b = 0 if D % 8 == 0 else 2
    else:
        if D % l == 0:
            r = 0
        elif kronecker(D, l) != 1:
            return None
        else:
            r = sqrt_mod_prime(D % l, l)
        b = r if (r - D) % 2 == 0 else l - r
    return (l, b, (b * b - D) // (4 * l))


def is_reduced_pos(a: int, b: int, c: int, D: int) -> bool:
    s = math.isqrt(D)
    if not (0 < b <= s):
        return False
    A = abs(a)
    if (2 * A + b) ** 2 <= D:
        return False
    t = 2 * A - b
    return t <= 0 or t * t < D


def reduce_pos(a: int, b: int, c: int) -> tuple[int, int, int]:
    D = b * b - 4 * a * c
    s = math.isqrt(D)
    for _ in range(10_000 + 4 * D.bit_length()):
        if is_reduced_pos(a, b, c, D):
            return a, b, c
        a, b, c = _pykernels._rho_pos(a, b, c, D, s)
    raise ConsistencyError("indefinite reduction did not terminate")


def form_pow(f: tuple[int, int, int], e: int, D: int) -> tuple[int, int, int]:
    return kernels.form_pow_neg(f[0], f[1], f[2], e, D)


def _reduce_with_matrix(a: int, b: int, c: int):
    """Reduce a positive definite form, returning the form and the matrix M
    with f(M (x, y)) = f_reduced(x, y)."""
    m00, m01, m10, m11 = 1, 0, 0, 1
    while True:
        if not (-a < b <= a):
            k = (a - b) // (2 * a)
            c = c + k * (b + k * a)
            b = b + 2 * k * a
            m01 += k * m00
            m11 += k * m10
        if a > c or (a == c and b < 0):
            a, b, c = c, -b, a
            m00, m01, m10, m11 = m01, -m00, m11, -m10
            continue
        return (a, b, c), (m00, m01, m10, m11)


def principal_generator(F: QuadField, N: int, b: int):
    """Generator (X + Y sqrt D)/2 of the ideal [N, (b + sqrt D)/2], or None.

    The ideal is principal exactly when its form (N, b, c) reduces to the
    principal form; the first column of the reduction matrix gives the
    coordinates of a norm-N element.
    """
    D = F.D
    if D >= 0:
        raise ValueError("principal generators are implemented for imaginary fields")
    if (b * b - D) % (4 * N):
        raise ValueError("not an ideal lattice")
    if N == 1:
        return (2, 0)
    c = (b * b - D) // (4 * N)
    (ra, rb, rc), (m00, _, m10, _) = _reduce_with_matrix(N, b, c)
    if ra != 1:
        return None
    x, y = m00, m10
    X, Y = 2 * x * N + y * b, y
    if (X * X - D * Y * Y) != 4 * N:
        raise ConsistencyError("principal generator has the wrong norm")
    return (X, Y)


# -- abelian groups --------------------------------------------------------------------


@dataclass
class AbGroup:
    """Finite abelian group given by invariant factors d_1 | d_2 | ... (all >= 2)."""

    invariants: tuple[int, ...]
    generators: list | None = None

    def __post_init__(self):
        inv = tuple(int(x) for x in self.invariants)
        for x, y in zip(inv, inv[1:]):
            if y % x:
                raise ValueError(f"invariant factors {inv} do not form a divisibility chain")
        if any(x < 2 for x in inv):
            raise ValueError("invariant factors must be at least 2")
        self.invariants = inv

    @classmethod
    def from_p_exponents(cls, p: int, exps) -> "AbGroup":
        return cls(tuple(p**e for e in sorted(exps) if e > 0))

    @property
    def order(self) -> int:
        return math.prod(self.invariants)

    def p_exponents(self, p: int) -> list[int]:
        return sorted(v_p(x, p) for x in self.invariants if x % p == 0)

    def rank(self, q: int) -> int:
        """Number of invariant factors divisible by q (q = p^i gives rk_{p^i})."""
        return sum(1 for x in self.invariants if x % q == 0)

    def label(self) -> str:
        if not self.invariants:
            return "1"
        return "x".join(f"Z/{x}" for x in self.invariants)

    def __eq__(self, other) -> bool:
        return isinstance(other, AbGroup) and self.invariants == other.invariants


def combine_sylows(sylows: dict[int, list[int]], gens: dict[int, list] | None = None,
                   mul=None, ident=None) -> AbGroup:
    """Assemble invariant factors (and generators) from per-prime exponent lists."""
    width = max((len(v) for v in sylows.values()), default=0)
    invariants = []
    generators = [] if gens is not None else None
    for i in range(width):
        d = 1
        g = ident
        for p, exps in sylows.items():
            ex = sorted(exps, reverse=True)
            if i < len(ex):
                d *= p ** ex[i]
                if gens is not None:
                    order_desc = sorted(range(len(exps)), key=lambda j: -exps[j])
                    g = mul(g, gens[p][order_desc[i]])
        invariants.append(d)
        if generators is not None:
            generators.append(g)
    order = sorted(range(len(invariants)), key=lambda i: invariants[i])
    inv = tuple(invariants[i] for i in order)
    return AbGroup(inv, [generators[i] for i in order] if generators is not None else None)


def class_number(D: int) -> int:
    """Class number of the fundamental discriminant D (wide class number if D > 0)."""
    if D < 0:
        return kernels.h_neg(D)
    hp, h = narrow_class_number_real(D)
    return h


def sylow_class_group_neg(D: int, p: int, h: int | None = None, with_generators: bool = False):
    """p-Sylow subgroup of Cl(D), D < 0, from powers of small prime forms.

    Returns (exponents, generator forms); generators are reduced forms.
    """
    if h is None:
        h = kernels.h_neg(D)
    e = v_p(h, p)
    if e == 0:
        return [], []
    cof = h // p**e
    target = p**e
    ident = identity_form(D)
    elems = {ident: ()}
    gens: list[tuple[int, int, int]] = []
    rels: list[list[int]] = []
    ell = 1
    while len(elems) < target:
        ell += 1
        if not is_prime(ell):
            continue
        f = prime_form(D, ell)
        if f is None:
            continue
        f = _pykernels.reduce_neg(*f)
        y = form_pow(f, cof, D)
        if y in elems:
            continue
        powers = [ident, y]
        z = y
        while True:
            z = kernels.compose_neg(*z, *y, D)
            if z in elems:
                break
            powers.append(z)
        k = len(powers)
        if k % p:
            raise ConsistencyError("Sylow construction produced a non p-power index")
        # extend: every element times y^i
        new = {}
        for x, vec in elems.items():
            for i, yi in enumerate(powers):
                new[kernels.compose_neg(*x, *yi, D)] = vec + (0,) * (len(gens) - len(vec)) + (i,)
        vec_z = elems[z]
        rel = [-v for v in vec_z] + [0] * (len(gens) - len(vec_z)) + [k]
        elems = new
        gens.append(y)
        for r in rels:
            r.append(0)
        rels.append(rel)
    if len(elems) != target:
        raise ConsistencyError("Sylow subgroup overshoot")
    if not with_generators:
        return snf_mod_pm(rels, len(gens), p, e + 1), gens
    exps, vecs = snf_mod_pm(rels, len(gens), p, e + 1, track=True)
    out_gens = []
    for vec in vecs:
        g = ident
        for coeff, y in zip(vec, gens):
            if coeff:
                g = kernels.compose_neg(*g, *form_pow(y, coeff, D), D)
        out_gens.append(g)
    keep = [(x, g) for x, g in zip(exps, out_gens) if x > 0]
    return [x for x, _ in keep], [g for _, g in keep]


def class_group(D: int) -> AbGroup:
    """Structure of Cl(D) for a negative fundamental discriminant, with form generators."""
    if D >= 0:
        raise ValueError("class_group expects D < 0")
    h = kernels.h_neg(D)
    sylows, gens = {}, {}
    for p in sorted(factor(h)) if h > 1 else []:
        exps, g = sylow_class_group_neg(D, p, h, with_generators=True)
        sylows[p], gens[p] = exps, g
    return combine_sylows(sylows, gens, mul=lambda x, y: kernels.compose_neg(*x, *y, D),
                          ident=identity_form(D))


# -- real fields ---------------------------------------------------------------------


class NarrowClassGroupReal:
    """Narrow class group of a real quadratic discriminant, one element per cycle."""

    def __init__(self, D: int):
        if D <= 0:
            raise ValueError("D must be positive")
        self.D = D
        forms, ids, ncyc = kernels.narrow_cycles(D)
        self.index = {tuple(f): i for f, i in zip(forms, ids)}
        self.order = ncyc
        self.reps = [None] * ncyc
        for f, i in zip(forms, ids):
            if self.reps[i] is None:
                self.reps[i] = tuple(f)

    def class_of(self, form) -> int:
        return self.index[reduce_pos(*form)]

    def mul(self, i: int, j: int) -> int:
        a = self.reps[i]
        b = self.reps[j]
        return self.class_of(_pykernels._compose(*a, *b))

    @property
    def identity(self) -> int:
        return self.class_of(identity_form(self.D))

    def squares(self) -> set[int]:
        return {self.mul(i, i) for i in range(self.order)}

    def rank2(self) -> int:
        e = self.identity
        n = sum(1 for i in range(self.order) if self.mul(i, i) == e)
        return n.bit_length() - 1


def narrow_class_number_real(D: int) -> tuple[int, int]:
    """(h+, h) for a positive fundamental discriminant."""
    hp = kernels.h_plus(D)
    eps = fundamental_unit(radicand(D), 8)
    h = hp if eps.norm == -1 else hp // 2
    if hp != h and hp != 2 * h:
        raise ConsistencyError("narrow class number ratio outside {1, 2}")
    return hp, h


@dataclass
class FundUnit:
    """Fundamental unit eps = (X + Y sqrt m)/2 of Q(sqrt m); X, Y known mod 2*modulus."""

    m: int
    modulus: int
    X: int
    Y: int
    norm: int
    period: int
    log: float
    exact: tuple[int, int] | None = None

    @property
    def half(self) -> bool:
        return self.X % 2 == 1

    @property
    def a(self) -> int:
        """eps = a + b sqrt m: a modulo `modulus`."""
        if self.half:
            raise ValueError("fundamental unit has half-integral coordinates")
        return (self.X // 2) % self.modulus

    @property
    def b(self) -> int:
        if self.half:
            raise ValueError("fundamental unit has half-integral coordinates")
        return (self.Y // 2) % self.modulus

    def nu(self, which: str, p: int = 2) -> int:
        """p-adic valuation of a or b (certified only below the precision)."""
        x = self.a if which == "a" else self.b
        if x == 0:
            raise PrecisionError(f"{which} vanishes modulo the working precision")
        return v_p(x, p)


def _cf_start(m: int) -> tuple[int, int]:
    return (1, 2) if m % 4 == 1 else (0, 1)


def fundamental_unit(m: int, K: int = 64, p: int = 2, exact_cap_bits: int = 0) -> FundUnit:
    """Fundamental unit by the continued fraction of sqrt m (or of (1+sqrt m)/2).

    Convergents are tracked modulo 2*p^K; with exact_cap_bits > 0 the exact
    coordinates are also produced when they fit below that many bits.
    """
    if m <= 1:
        raise ValueError("m must be > 1")
    P0, Q0 = _cf_start(m)
    M = p**K
    mod2 = 2 * M
    if mod2.bit_length() <= 63:
        pk, qk, period, logp, ratio = kernels.cf_unit(m, P0, Q0, mod2)
    else:
        pk, qk, period, logp, ratio = _pykernels.cf_unit(m, P0, Q0, mod2)
    if Q0 == 1:
        X, Y = 2 * pk % mod2, 2 * qk % mod2
        conj_xi = -math.sqrt(m)
    else:
        X, Y = (2 * pk - qk) % mod2, qk % mod2
        conj_xi = (1 - math.sqrt(m)) / 2
    log_eps = logp + math.log1p(-ratio * conj_xi)
    n4 = (X * X - m * Y * Y) % (4 * M)
    if n4 == 4 % (4 * M):
        norm = 1
    elif n4 == (-4) % (4 * M):
        norm = -1
    else:
        raise ConsistencyError(f"unit norm check failed for m={m}")
    exact = None
    if exact_cap_bits and log_eps / math.log(2) < exact_cap_bits:
        big = 1 << (exact_cap_bits + 8)
        ep, eq, _, _, _ = _pykernels.cf_unit(m, P0, Q0, big)
        if Q0 == 1:
            exact = (2 * ep, 2 * eq)
        else:
            exact = (2 * ep - eq, eq)
        if exact[0] ** 2 - m * exact[1] ** 2 != 4 * norm:
            raise ConsistencyError("exact unit has the wrong norm")
    return FundUnit(m, M, X, Y, norm, period, log_eps, exact)


def class_number_real(D: int, log_eps: float | None = None, method: str = "auto") -> int:
    """Wide class number of a real quadratic field.

    Cycle counting for D <= 10^6 (or when method="cycles"); otherwise the
    analytic value h = hR/R, rounded after checking it is near an integer.
    """
    if method == "cycles" or (method == "auto" and D <= 10**6):
        return narrow_class_number_real(D)[1]
    if log_eps is None:
        log_eps = fundamental_unit(radicand(D), 8).log
    hr = kernels.real_hR(D)
    h = hr / log_eps
    hi = round(h)
    if hi < 1 or abs(h - hi) > 1e-3 * max(1.0, h):
        raise PrecisionError(f"analytic class number not near an integer: {h}")
    return hi


# -- the prime above 2 in imaginary fields ----------------------------------------------


@dataclass(frozen=True)
class FrakP:
    """Order f of the prime 𝔭 over 2, a generator pi of 𝔭^f, and whether 2 is a norm of an S-unit."""

    f: int
    pi: QuadElem
    pi_coords: tuple[int, int]
    two_in_NES: bool
    ideal: tuple[int, int]
    root: int | None


TWO_ADIC_PREC = 64


def two_adic_root(D: int, prec: int = TWO_ADIC_PREC) -> int:
    """The square root of D ≡ 1 mod 8 in Z_2 congruent to 1 mod 4 (mod 2^prec)."""
    from .arith import sqrt_mod_2power

    return sqrt_mod_2power(D % (1 << (prec + 2)), prec + 2) % (1 << prec)


def frak_p_order_and_pi(F: QuadField) -> FrakP:
    D = F.D
    if D >= 0:
        raise ValueError("imaginary fields only")
    if F.two == "inert":
        return FrakP(1, F.elem(2), (4, 0), False, (1, 0), None)
    if F.two == "ramified":
        pf = prime_form(D, 2)
        red = _pykernels.reduce_neg(*pf)
        if red[0] == 1:
            X, Y = principal_generator(F, 2, pf[1])
            X, Y = _normalize_sign(X, Y)
            return FrakP(1, F.elem_half_D(X, Y), (X, Y), True, (2, pf[1]), None)
        return FrakP(2, F.elem(2), (4, 0), False, (2, pf[1]), None)
    # split: 𝔭 = [2, (-1 + sqrt D)/2], embedding sqrt D -> root ≡ 1 mod 4
    base = (2, -1, (1 - D) // 8)
    red = _pykernels.reduce_neg(*base)
    f = kernels.form_order_neg(*red, D, 10**9)
    cur, sq, e = None, base, f
    while e:
        if e & 1:
            cur = sq if cur is None else _pykernels._compose(*cur, *sq)
        e >>= 1
        if e:
            sq = _pykernels._compose(*sq, *sq)
    N, b = cur[0], cur[1]
    if N != 2**f:
        raise ConsistencyError("unexpected norm for a power of the prime over 2")
    X, Y = principal_generator(F, N, b)
    root = two_adic_root(D)
    X, Y = _normalize_sign(X, Y)
    # the norm is 2^f, so valuation f at the chosen prime means a unit at its conjugate
    if ((X - Y * root) // 2) % 2 == 0:
        raise ConsistencyError("generator does not lie in the chosen prime over 2")
    pi = F.elem_half_D(X, Y)
    if F.m % 8 == 7:
        place = place_over(F.d, 2, root=_sqrt_d_root(F, root))
        if symbol_at_place(place, F.elem(-1), pi):
            X, Y = -X, -Y
            pi = F.elem_half_D(X, Y)
    return FrakP(f, pi, (X, Y), f % 2 == 1, (N, b), root)


def _sqrt_d_root(F: QuadField, rootD: int) -> int:
    """Image of sqrt d given the image of sqrt D."""
    if F.D == F.d:
        return rootD
    return (rootD // 2) % (1 << (TWO_ADIC_PREC - 1))


def _normalize_sign(X: int, Y: int) -> tuple[int, int]:
    if X < 0 or (X == 0 and Y < 0):
        return -X, -Y
    return X, Y
