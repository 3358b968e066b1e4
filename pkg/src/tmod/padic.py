"""Fixed-precision p-adic arithmetic in completions of quadratic fields,
the p-adic logarithm, and valuations of p-adic regulators."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .arith import kronecker, sqrt_mod_2power, sqrt_mod_prime_power, v_p
from .errors import PrecisionError

DEFAULT_DIGITS = 64
MAX_DIGITS = 1024


@dataclass(frozen=True)
class Completion:
    """Completion of Q(sqrt d) at one prime above p.

    Integers are c0 + c1*theta with theta^2 = T*theta + N (degree 2) or
    plain p-adic integers (degree 1, split p, sqrt d -> root).
    """

    d: int
    p: int
    kind: str  # "split", "inert", "ramified"
    e: int
    f: int
    T: int = 0
    N: int = 0
    theta: str = "sqrt"  # "sqrt", "1+sqrt", "omega"
    root: int | None = None
    digits: int = DEFAULT_DIGITS

    @property
    def degree(self) -> int:
        return self.e * self.f

    @property
    def modulus(self) -> int:
        return self.p**self.digits


def completion(d: int, p: int, digits: int = DEFAULT_DIGITS) -> Completion:
    """The completion of Q(sqrt d) at a fixed prime above p."""
    D = d if d % 4 == 1 else 4 * d
    if D % p == 0:
        if p == 2 and d % 4 == 3:
            return Completion(d, p, "ramified", 2, 1, 2, d - 1, "1+sqrt", digits=digits)
        return Completion(d, p, "ramified", 2, 1, 0, d, "sqrt", digits=digits)
    if kronecker(D, p) == 1:
        mod = p**digits
        if p == 2:
            root = sqrt_mod_2power(d % (4 * mod), digits + 2) % (2 * mod)  # one extra bit so that halving stays exact
        else:
            r = sqrt_mod_prime_power(d, p, digits)
            r0 = r % p
            if p - r0 < r0:
                r = (-r) % mod
            root = r
        return Completion(d, p, "split", 1, 1, root=root, digits=digits)
    if p == 2:
        return Completion(d, p, "inert", 1, 2, 1, (d - 1) // 4, "omega", digits=digits)
    return Completion(d, p, "inert", 1, 2, 0, d, "sqrt", digits=digits)


@dataclass(frozen=True)
class PadicElem:
    """An integral element c0 + c1*theta of a completion, known modulo p^prec."""

    field: Completion
    c0: int
    c1: int
    prec: int

    def _mod(self):
        return self.field.p**self.prec

    def __mul__(self, other: "PadicElem") -> "PadicElem":
        F = self.field
        prec = min(self.prec, other.prec)
        mod = F.p**prec
        if F.degree == 1:
            return PadicElem(F, self.c0 * other.c0 % mod, 0, prec)
        a, b, c, d = self.c0, self.c1, other.c0, other.c1
        bd = b * d
        return PadicElem(F, (a * c + bd * F.N) % mod, (a * d + b * c + bd * F.T) % mod, prec)

    def __add__(self, other: "PadicElem") -> "PadicElem":
        prec = min(self.prec, other.prec)
        mod = self.field.p**prec
        return PadicElem(self.field, (self.c0 + other.c0) % mod, (self.c1 + other.c1) % mod, prec)

    def __sub__(self, other: "PadicElem") -> "PadicElem":
        prec = min(self.prec, other.prec)
        mod = self.field.p**prec
        return PadicElem(self.field, (self.c0 - other.c0) % mod, (self.c1 - other.c1) % mod, prec)

    def __pow__(self, n: int) -> "PadicElem":
        result = one(self.field, self.prec)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def is_zero(self) -> bool:
        mod = self._mod()
        return self.c0 % mod == 0 and self.c1 % mod == 0

    def valuation(self) -> Fraction:
        """Normalized valuation (v(p) = 1); errors if the element is zero to precision."""
        F = self.field
        mod = self._mod()
        c0, c1 = self.c0 % mod, self.c1 % mod
        if c0 == 0 and c1 == 0:
            raise PrecisionError("valuation exceeds the working precision")
        v0 = v_p(c0, F.p) if c0 else self.prec
        v1 = v_p(c1, F.p) if c1 else self.prec
        if F.degree == 1 or F.e == 1:
            return Fraction(min(v0, v1) if F.degree == 2 else v0)
        return Fraction(min(2 * v0, 2 * v1 + 1), 2)

    def divide_p_power(self, k: int) -> "PadicElem":
        """Exact division by p^k (coordinates must be divisible)."""
        pk = self.field.p**k
        if self.c0 % pk or self.c1 % pk:
            raise ValueError("element not divisible")
        return PadicElem(self.field, self.c0 // pk, self.c1 // pk, self.prec - k)

    def scale(self, u: int) -> "PadicElem":
        mod = self._mod()
        return PadicElem(self.field, self.c0 * u % mod, self.c1 * u % mod, self.prec)


def one(F: Completion, prec: int) -> PadicElem:
    return PadicElem(F, 1, 0, prec)


def embed_half(F: Completion, X: int, Y: int, prec: int | None = None) -> PadicElem:
    """Image of (X + Y sqrt d)/2 (X, Y integers known mod 2*p^prec)."""
    p = F.p
    if prec is None:
        prec = F.digits
    mod = p**prec
    if p == 2:
        if F.degree == 1:
            v = X + Y * F.root
            if v % 2:
                raise ValueError("odd value cannot be halved 2-adically")
            return PadicElem(F, (v // 2) % mod, 0, prec)
        if F.theta == "omega":
            return PadicElem(F, ((X - Y) // 2) % mod, Y % mod, prec)
        if X % 2 or Y % 2:
            raise ValueError("half-integral element in Z[sqrt d]")
        x, y = X // 2, Y // 2
        if F.theta == "sqrt":
            return PadicElem(F, x % mod, y % mod, prec)
        return PadicElem(F, (x - y) % mod, y % mod, prec)
    inv2 = pow(2, -1, mod)
    x, y = X * inv2 % mod, Y * inv2 % mod
    if F.degree == 1:
        return PadicElem(F, (x + y * F.root) % mod, 0, prec)
    return PadicElem(F, x, y, prec)


def padic_log(x: PadicElem, target: int | None = None) -> PadicElem:
    """Logarithm of x with v(x - 1) > 1/(p - 1), by the Mercator series.

    Terms y^k/k are formed by exact division by p^v_p(k); the series is
    cut once every remaining term has valuation above the result precision.
    """
    F = x.field
    p = F.p
    y = x - one(F, x.prec)
    if y.is_zero():
        return PadicElem(F, 0, 0, x.prec)
    nu = y.valuation()
    if nu <= Fraction(1, p - 1):
        raise ValueError("logarithm series does not converge")
    prec = x.prec
    kmax = 1
    # all terms beyond kmax have valuation k*nu - log_p(k) >= prec
    while True:
        k = kmax + 1
        if k * nu - math.log(k, p) >= prec + 1 and (k + 1) * nu - math.log(k + 1, p) >= prec + 1:
            # valuation k*nu - log_p k is increasing once it exceeds 1/(p-1) margins
            break
        kmax += 1
    max_vk = max(v_p(k, p) for k in range(1, kmax + 1))
    res_prec = prec - max_vk
    mod = p**res_prec
    total0 = total1 = 0
    power = one(F, prec)
    for k in range(1, kmax + 1):
        power = power * y
        vk = v_p(k, p)
        term = power.divide_p_power(vk) if vk else power
        u = k // p**vk
        inv = pow(u, -1, mod)
        sgn = 1 if k % 2 else -1
        total0 = (total0 + sgn * term.c0 * inv) % mod
        total1 = (total1 + sgn * term.c1 * inv) % mod
    return PadicElem(F, total0, total1, res_prec)


def _residue_order(x: PadicElem) -> int:
    """Multiplicative order of x modulo the maximal ideal."""
    F = x.field
    p = F.p
    if F.degree == 1 or F.e == 2:
        r = x.c0 % p
        if r == 0:
            raise ValueError("not a unit")
        k, y = 1, r
        while y != 1:
            y = y * r % p
            k += 1
        return k
    one_ = (1, 0)
    cur = (x.c0 % p, x.c1 % p)
    if cur == (0, 0):
        raise ValueError("not a unit")
    k = 1
    while cur != one_:
        a, b = cur
        c, d = x.c0 % p, x.c1 % p
        bd = b * d
        cur = ((a * c + bd * F.N) % p, (a * d + b * c + bd * F.T) % p)
        k += 1
    return k


def log_valuation(x: PadicElem) -> Fraction:
    """v(log x) for a unit x, through x^k close enough to 1."""
    F = x.field
    p = F.p
    k = _residue_order(x)
    y = x**k
    bound = Fraction(1, p - 1)
    while (y - one(F, y.prec)).valuation() <= bound:
        y = y**p
        k *= p
    v = (y - one(F, y.prec)).valuation()
    if v >= y.prec - 1:
        raise PrecisionError("log valuation not certified at this precision")
    return v - v_p(k, p)


def regulator_valuation(d: int, p: int, eps=None, digits: int = DEFAULT_DIGITS) -> Fraction:
    """v_p of the p-adic regulator log_p(eps) of Q(sqrt d), d > 1, with precision escalation."""
    from .quadclass import fundamental_unit

    while digits <= MAX_DIGITS:
        try:
            if eps is None or eps.modulus < p**digits or eps.modulus % p:
                eps_k = fundamental_unit(d, digits + 2, p)
            else:
                eps_k = eps
            F = completion(d, p, digits)
            x = embed_half(F, eps_k.X, eps_k.Y, digits)
            return log_valuation(x)
        except PrecisionError:
            digits *= 2
            eps = None
    raise PrecisionError(f"regulator valuation of Q(sqrt {d}) not certified at {MAX_DIGITS} digits")
