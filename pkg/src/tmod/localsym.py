"""Additive (F_2-valued) Hilbert symbols.

Three flavours are provided: rational symbols over Q_p (p odd, 2 and the
real place), tame symbols at odd ramified primes of a quadratic field, and
symbols over Q_2 and its seven quadratic extensions, decided by square-class
tables.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import product

from .arith import factor, jacobi, sqrt_mod_2power, v_p
from .errors import ConsistencyError, PrecisionError

INF = "inf"

Rational = int | Fraction


def _split_p(x: Rational, p: int) -> tuple[int, Fraction]:
    """Write x = p^k * u with u a p-adic unit."""
    x = Fraction(x)
    if x == 0:
        raise ValueError("zero has no valuation")
    num, den = x.numerator, x.denominator
    k = 0
    while num % p == 0:
        num //= p
        k += 1
    while den % p == 0:
        den //= p
        k -= 1
    return k, Fraction(num, den)


def _unit_mod(u: Fraction, mod: int) -> int:
    return u.numerator * pow(u.denominator, -1, mod) % mod


def hilbert_additive_Q(a: Rational, b: Rational, p) -> int:
    """[a, b]_p over Q_p; p is a prime or INF."""
    if a == 0 or b == 0:
        raise ValueError("Hilbert symbol of zero")
    if p == INF:
        return 1 if (a < 0 and b < 0) else 0
    alpha, u = _split_p(a, p)
    beta, w = _split_p(b, p)
    if p == 2:
        u8, w8 = _unit_mod(u, 8), _unit_mod(w, 8)
        eps_u, eps_w = (u8 - 1) // 2 % 2, (w8 - 1) // 2 % 2
        om_u, om_w = (u8 * u8 - 1) // 8 % 2, (w8 * w8 - 1) // 8 % 2
        return (eps_u * eps_w + alpha * om_w + beta * om_u) % 2
    s = 0
    if alpha % 2 and beta % 2 and p % 4 == 3:
        s = 1
    if beta % 2 and jacobi(_unit_mod(u, p), p) == -1:
        s ^= 1
    if alpha % 2 and jacobi(_unit_mod(w, p), p) == -1:
        s ^= 1
    return s


def relevant_places(*xs: Rational) -> list:
    """Primes dividing numerators or denominators of xs, plus 2 and INF."""
    ps = {2}
    for x in xs:
        x = Fraction(x)
        for n in (x.numerator, x.denominator):
            if abs(n) > 1:
                ps.update(factor(n))
    return sorted(ps) + [INF]


def product_formula_check(a: Rational, b: Rational) -> int:
    """Sum of [a, b]_v over all places; raises unless it vanishes."""
    total = sum(hilbert_additive_Q(a, b, v) for v in relevant_places(a, b)) % 2
    if total:
        raise ConsistencyError(f"product formula fails for ({a}, {b})")
    return total


# -- quadratic field elements and places ---------------------------------------


@dataclass(frozen=True)
class QuadElem:
    """The element r0 + r1*sqrt(d) of Q(sqrt d)."""

    d: int
    r0: Fraction
    r1: Fraction

    @classmethod
    def make(cls, d: int, r0, r1=0) -> "QuadElem":
        return cls(d, Fraction(r0), Fraction(r1))

    @classmethod
    def from_half(cls, d: int, x: int, y: int) -> "QuadElem":
        """(x + y sqrt d)/2."""
        return cls(d, Fraction(x, 2), Fraction(y, 2))

    def norm(self) -> Fraction:
        return self.r0 * self.r0 - self.d * self.r1 * self.r1

    def trace(self) -> Fraction:
        return 2 * self.r0

    def is_rational(self) -> bool:
        return self.r1 == 0

    def __mul__(self, other: "QuadElem") -> "QuadElem":
        return QuadElem(self.d, self.r0 * other.r0 + self.d * self.r1 * other.r1,
                        self.r0 * other.r1 + self.r1 * other.r0)

    def __neg__(self) -> "QuadElem":
        return QuadElem(self.d, -self.r0, -self.r1)

    def conj(self) -> "QuadElem":
        return QuadElem(self.d, self.r0, -self.r1)


@dataclass(frozen=True)
class Place:
    """A place of Q or of a quadratic field Q(sqrt d).

    kind is "inf", "rational" or "quadratic".  For quadratic places over an
    odd ramified prime q, e = 2; for places over 2 the ramification data is
    read from d.  `root` selects the embedding at a split prime: the image
    of sqrt(d) in Z_p.
    """

    kind: str
    p: int | None = None
    d: int | None = None
    e: int = 1
    f: int = 1
    root: int | None = None


def place_over(d: int, p: int, root: int | None = None) -> Place:
    """The (or a chosen) place of Q(sqrt d) above p."""
    disc = d if d % 4 == 1 else 4 * d
    if disc % p == 0:
        return Place("quadratic", p, d, e=2, f=1)
    if p == 2:
        split = d % 8 == 1
    else:
        split = jacobi(d % p, p) == 1
    if split:
        return Place("quadratic", p, d, e=1, f=1, root=root)
    return Place("quadratic", p, d, e=1, f=2)


# -- tame symbols ---------------------------------------------------------------


def _val_residue_ramified(z: QuadElem, q: int) -> tuple[int, int]:
    """Valuation at the prime over q | d (uniformizer sqrt d) and residue of the unit part."""
    d = z.d
    dq = d // q
    cands = []
    if z.r0 != 0:
        k, u = _split_p(z.r0, q)
        cands.append((2 * k, 0, k, u))
    if z.r1 != 0:
        k, u = _split_p(z.r1, q)
        cands.append((2 * k + 1, 1, k, u))
    if not cands:
        raise ValueError("zero element")
    v, _, k, u = min(cands)
    # z / sqrt(d)^v  ≡  u * q^k / d^j  with j = floor(v/2) = k
    res = _unit_mod(u, q) * pow(dq % q, -k, q) % q
    return v, res


def tame_symbol_ramified(d: int, q: int, x: QuadElem, y: QuadElem | Rational) -> int:
    """[x, y] at the prime of Q(sqrt d) over an odd prime q dividing d."""
    if d % q:
        raise ValueError(f"{q} is not ramified in Q(sqrt {d})")
    if not isinstance(y, QuadElem):
        y = QuadElem.make(d, y)
    a, ux = _val_residue_ramified(x, q)
    b, uy = _val_residue_ramified(y, q)
    val = pow(ux, b, q) * pow(uy, -a, q) % q
    if a * b % 2:
        val = (-val) % q
    return 0 if jacobi(val, q) == 1 else 1


# -- 2-adic quadratic fields ------------------------------------------------------

# canonical square-class representatives d0 of Q_2^x / squares and a generator
# theta of the ring of integers of Q_2(sqrt d0): theta^2 = T*theta + N, with
# sqrt(d0) = s0 + s1*theta.
_CANON = {
    -3: (1, -1, (-1, 2), 1),
    -1: (2, -2, (-1, 1), 2),
    3: (2, 2, (-1, 1), 2),
    2: (0, 2, (0, 1), 2),
    -2: (0, -2, (0, 1), 2),
    6: (0, 6, (0, 1), 2),
    -6: (0, -6, (0, 1), 2),
}


def canonical_class_2(d: int) -> int:
    """Representative in {1, -1, ±2, ±3, ±6} of the square class of d in Q_2."""
    k, u = _split_p(d, 2)
    u8 = _unit_mod(u, 8)
    unit = {1: 1, 3: 3, 5: -3, 7: -1}[u8]
    if k % 2 == 0:
        return unit
    return {1: 2, 3: 6, -3: -6, -1: -2}[unit]


@dataclass(frozen=True)
class L2Elem:
    """2^k * (c0 + c1*theta) in a canonical 2-adic field; coordinates known mod 2^prec."""

    d0: int
    c0: int
    c1: int
    k: int
    prec: int


class Local2Field:
    """Q_2 (d0 = 1) or Q_2(sqrt d0) with cached square-class tables."""

    def __init__(self, d0: int):
        if d0 != 1 and d0 not in _CANON:
            raise ValueError(f"{d0} is not a canonical square class")
        self.d0 = d0
        if d0 == 1:
            self.degree, self.e = 1, 1
            self.T = self.N = 0
        else:
            self.T, self.N, self.sqrt_d0, self.e = _CANON[d0]
            self.degree = 2
        self._build_tables()

    # element arithmetic on integer pairs
    def _mul(self, x, y):
        if self.degree == 1:
            return (x[0] * y[0], 0)
        a, b = x
        c, d = y
        bd = b * d
        return (a * c + bd * self.N, a * d + b * c + bd * self.T)

    def _key_mods(self):
        if self.degree == 1:
            return (8, 1)
        return (8, 8) if self.e == 1 else (8, 4)

    def _is_unit(self, x) -> bool:
        if self.degree == 1 or self.e == 2:
            return x[0] % 2 == 1
        return x[0] % 2 == 1 or x[1] % 2 == 1

    def _key(self, x):
        m0, m1 = self._key_mods()
        return (x[0] % m0, x[1] % m1)

    def _val_unit_pair(self, c0: int, c1: int, prec: int):
        """Valuation and unit key of c0 + c1*theta, coordinates known mod 2^prec."""
        mod = 1 << prec
        c0, c1 = c0 % mod, (c1 % mod if self.degree == 2 else 0)
        if c0 == 0 and c1 == 0:
            raise PrecisionError("element indistinguishable from zero")
        v0 = v_p(c0, 2) if c0 else prec
        v1 = v_p(c1, 2) if c1 else prec
        if self.degree == 1 or self.e == 1:
            s = min(v0, v1)
            if s + 3 >= prec:
                raise PrecisionError("unit part not determined at this precision")
            return s, self._key((c0 >> s, c1 >> s))
        vv = min(2 * v0, 2 * v1 + 1)
        if vv // 2 + 4 >= prec:
            raise PrecisionError("unit part not determined at this precision")
        x0, x1, P = c0, c1, prec
        inv = pow(-(self.N // 2), -1, mod)
        for _ in range(vv):
            # (x0 + x1 theta)/theta = (x0*T - x1*N - x0*theta) / (-N)
            a0 = x0 * self.T - x1 * self.N
            x0, x1 = (a0 >> 1) * inv, (-x0 >> 1) * inv
            P -= 1
            x0 %= 1 << P
            x1 %= 1 << P
        return vv, self._key((x0, x1))

    def valuation(self, z: L2Elem) -> int:
        vv, _ = self._val_unit_pair(z.c0, z.c1, z.prec)
        return vv + self.e * z.k

    def class_of(self, z: L2Elem):
        """Square class of z as (valuation parity, canonical unit key)."""
        vv, key = self._val_unit_pair(z.c0, z.c1, z.prec)
        cls = (vv % 2, self._canon[key])
        if z.k % 2 and self.e == 2:
            cls = self.class_mul(cls, self._class_two)
        elif z.k % 2:
            cls = ((cls[0] + 1) % 2, cls[1])
        return cls

    def _build_tables(self):
        m0, m1 = self._key_mods()
        units = [(a, b) for a in range(m0) for b in range(m1) if self._is_unit((a, b))]
        squares = {self._key(self._mul(w, w)) for w in units}
        canon = {}
        for u in units:
            canon[u] = min(self._key(self._mul(u, s)) for s in squares)
        self._canon = canon
        self.unit_classes = sorted(set(canon.values()))
        self.classes = [(v, u) for v in (0, 1) for u in self.unit_classes]
        self._norm_groups = {}
        if self.degree == 2 and self.e == 2:
            vv, key = self._val_unit_pair(2, 0, 64)
            self._class_two = (vv % 2, canon[key])

    def _class_rep(self, cls) -> L2Elem:
        v, u = cls
        if v == 0:
            return L2Elem(self.d0, u[0], u[1], 0, 64)
        if self.degree == 1 or self.e == 1:
            return L2Elem(self.d0, u[0], u[1], 1, 64)
        # theta * u
        x = self._mul((0, 1), u)
        return L2Elem(self.d0, x[0], x[1], 0, 64)

    def class_mul(self, a, b):
        # the uniformizer squared is a square, so parities add
        return ((a[0] + b[0]) % 2, self._canon[self._key(self._mul(a[1], b[1]))])

    def norm_group(self, cls):
        """Square classes of the norms from F(sqrt x), for x in the given class."""
        if cls in self._norm_groups:
            return self._norm_groups[cls]
        trivial = (0, self._canon[(1, 0)])
        if cls == trivial:
            group = set(self.classes)
        else:
            xr = self._class_rep(cls)
            x = (xr.c0 << xr.k, xr.c1 << xr.k)
            found = set()
            box = range(8) if self.degree == 2 else range(16)
            elems = [(a0, a1) for a0 in box for a1 in (box if self.degree == 2 else (0,))]
            for a, b in product(elems, elems):
                a2 = self._mul(a, a)
                xb2 = self._mul(x, self._mul(b, b))
                z = (a2[0] - xb2[0], a2[1] - xb2[1])
                if z == (0, 0):
                    continue
                found.add(self.class_of(L2Elem(self.d0, z[0], z[1], 0, 256)))
            group = set(found)
            changed = True
            while changed:
                changed = False
                for g, h in list(product(group, group)):
                    c = self.class_mul(g, h)
                    if c not in group:
                        group.add(c)
                        changed = True
            if 2 * len(group) != len(self.classes):
                raise ConsistencyError("norm group does not have index 2")
        self._norm_groups[cls] = frozenset(group)
        return self._norm_groups[cls]

    def symbol(self, x: L2Elem, y: L2Elem) -> int:
        cx, cy = self.class_of(x), self.class_of(y)
        return 0 if cy in self.norm_group(cx) else 1


@lru_cache(maxsize=None)
def local2_field(d0: int) -> Local2Field:
    return Local2Field(d0)


def _two_adic_int(fr: Fraction, shift: int, prec: int) -> int:
    """Integer congruent to fr * 2^shift mod 2^prec (requires 2-integrality)."""
    k, u = _split_p(fr, 2) if fr != 0 else (prec, Fraction(0))
    if fr == 0:
        return 0
    if k + shift < 0:
        raise ValueError("element not integral after shift")
    return (_unit_mod(u, 1 << prec) << (k + shift)) % (1 << prec)


@lru_cache(maxsize=256)
def _lift_root(d: int, seed: int, P: int) -> int:
    """The 2-adic square root of d (d ≡ 1 mod 8) congruent to seed mod 4, modulo 2^P."""
    r = sqrt_mod_2power(d % (1 << (P + 1)), P + 1) % (1 << P)
    if (r - seed) % 4:
        r = (-r) % (1 << P)
    return r


def embed_2adic(z: QuadElem, prec: int = 64, root: int | None = None) -> L2Elem:
    """Image of a field element in the canonical completion above 2.

    For a split prime the embedding is sqrt(d) -> root (a 2-adic integer
    given mod 2^prec); otherwise sqrt(d) is sent to S*sqrt(d0) with S the
    square root of d*d0/d0^2 congruent to 1 mod 4 after removing 2-powers.
    """
    d = z.d
    d0 = canonical_class_2(d)
    dens = [v_p(fr.denominator, 2) for fr in (z.r0, z.r1) if fr != 0 and fr.denominator % 2 == 0]
    L = (max(dens) if dens else 0) + 2
    P = prec + 2 * L + 4
    if d0 == 1:
        if root is None:
            k, u = _split_p(d, 2)
            root = sqrt_mod_2power(_unit_mod(u, 1 << P), P) << (k // 2)
        else:
            root = _lift_root(d, root, P)
        c0 = (_two_adic_int(z.r0, L, P) + _two_adic_int(z.r1, L, P) * root) % (1 << P)
        return L2Elem(1, c0, 0, -L, P - L)
    T, N, (s0, s1), e = _CANON[d0]
    k, u = _split_p(Fraction(d * d0), 2)
    s_unit = sqrt_mod_2power(_unit_mod(u, 1 << P), P)
    # S = 2^(k/2) * s_unit / d0, so r1*S = r1 * s_unit * 2^(k/2) / d0
    kd0, ud0 = _split_p(d0, 2)
    r1S = z.r1 * Fraction(1, ud0.numerator) * (Fraction(2) ** (k // 2 - kd0))
    mod = 1 << P
    a = _two_adic_int(z.r0, L + 1, P)
    b = _two_adic_int(r1S, L + 1, P) * s_unit % mod
    c0 = (a + b * s0) % mod
    c1 = (b * s1) % mod
    return L2Elem(d0, c0, c1, -(L + 1), P - L - 1)


def hilbert_additive_local(x: L2Elem, y: L2Elem) -> int:
    """[x, y] over Q_2 or a quadratic extension of Q_2 (same canonical field)."""
    if x.d0 != y.d0:
        raise ValueError("elements live in different 2-adic fields")
    if x.d0 == 1:
        fx = Fraction(x.c0 % (1 << x.prec)) * Fraction(2) ** x.k
        fy = Fraction(y.c0 % (1 << y.prec)) * Fraction(2) ** y.k
        if fx == 0 or fy == 0:
            raise PrecisionError("element indistinguishable from zero")
        return hilbert_additive_Q(fx, fy, 2)
    return local2_field(x.d0).symbol(x, y)


def symbol_at_place(place: Place, x: QuadElem, y: QuadElem, prec: int = 64) -> int:
    """[x, y] at a place of Q(sqrt d), reducing to Q_p whenever an argument is rational.

    For a rational argument the norm-compatibility of Hilbert symbols
    gives [x, y]_{F_v} = [x, N y]_{Q_p} (quadratic F_v) and the split case
    is handled by the chosen embedding.
    """
    p = place.p
    d = x.d
    if place.e * place.f == 2:
        if x.is_rational():
            return hilbert_additive_Q(x.r0, y.norm(), p)
        if y.is_rational():
            return hilbert_additive_Q(x.norm(), y.r0, p)
        if p != 2:
            if place.e == 2:
                return tame_symbol_ramified(d, p, x, y)
            raise NotImplementedError("odd unramified places with irrational arguments")
        for attempt in range(5):
            try:
                return hilbert_additive_local(embed_2adic(x, prec), embed_2adic(y, prec))
            except PrecisionError:
                prec *= 2
        raise PrecisionError("2-adic symbol not certified")
    # split: F_v = Q_p via sqrt d -> root
    if place.root is None:
        raise ValueError("split place needs an embedding root")
    if p == 2:
        # an element can have valuation up to v_2 of its norm at one of the two places
        prec = max(prec, prec + _norm_v2(x) + _norm_v2(y))
        for attempt in range(5):
            try:
                return hilbert_additive_local(embed_2adic(x, prec, place.root),
                                              embed_2adic(y, prec, place.root))
            except PrecisionError:
                prec *= 2
        raise PrecisionError("2-adic symbol not certified")
    mod = p**prec
    xv = (_unit_mod_any(x.r0, p, mod) + _unit_mod_any(x.r1, p, mod) * place.root) % mod
    yv = (_unit_mod_any(y.r0, p, mod) + _unit_mod_any(y.r1, p, mod) * place.root) % mod
    return hilbert_additive_Q(xv, yv, p)


def _norm_v2(z: QuadElem) -> int:
    n = z.norm()
    return v_p(n.numerator, 2) if n != 0 else 0


def _unit_mod_any(fr: Fraction, p: int, mod: int) -> int:
    return fr.numerator * pow(fr.denominator, -1, mod) % mod
