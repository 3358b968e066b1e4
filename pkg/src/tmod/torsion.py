"""Rank, order and structure formulas for the Z_p-torsion module of quadratic fields.

Covers the 2-rank (congruence formula and narrow S-class group route), the
Rédei-type 4-rank matrices for imaginary fields (full local-symbol matrix and
the rational fast paths), the tame-kernel comparison matrix, Coates' order
formula for real fields and the congruence classifiers for Q(sqrt(±l)),
Q(sqrt(±2l)).
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from . import _pykernels, kernels
from .arith import (
    jacobi,
    jacobi_additive,
    quartic_symbol,
    rep_2g2_h2,
    rep_u2_2v2,
    sqrt_mod_2power,
    v_p,
)
from .errors import ConsistencyError, WrongPathError
from .linalg import F2Mat
from .localsym import QuadElem, hilbert_additive_Q, place_over, symbol_at_place
from .padic import regulator_valuation
from .quadclass import (
    NarrowClassGroupReal,
    QuadField,
    class_group,
    class_number_real,
    frak_p_order_and_pi,
    fundamental_unit,
    identity_form,
    prime_form,
    two_adic_root,
    _sqrt_d_root,
    TWO_ADIC_PREC,
)

TWO_ADIC_BITS = 64


def as_field(m, imaginary: bool = False) -> QuadField:
    """QuadField from a QuadField, or from an integer radicand (negated when imaginary=True)."""
    if isinstance(m, QuadField):
        return m
    return QuadField.from_radicand(-m if imaginary else m)


# -- norm criteria and 2-ranks -------------------------------------------------------


@dataclass(frozen=True)
class NormCriteria:
    two: bool
    minus_two: bool
    minus_one: bool


def norm_criteria(m: int) -> NormCriteria:
    """Whether 2 (in Q(sqrt(±m))), -2 and -1 (in Q(sqrt m)) are norms, m > 0 squarefree."""
    if m <= 0:
        raise ValueError("m must be positive")
    from .arith import squarefree_factor

    fac = squarefree_factor(m)
    if fac is None:
        raise ValueError(f"{m} is not squarefree")
    qs = fac.odd_primes
    return NormCriteria(
        all(q % 8 in (1, 7) for q in qs),
        all(q % 8 in (1, 3) for q in qs),
        all(q % 4 == 1 for q in qs),
    )


def rk2_T2(F) -> int:
    """2-rank from the congruence classes of the odd primes dividing the radicand."""
    F = as_field(F)
    return F.t if F.k == F.t else F.t - 1


def _neg_classes(D: int):
    forms = kernels.reduced_forms_neg(D)
    return [tuple(f) for f in forms]


def rk2_T2_via_narrow_S(F) -> int:
    """2-rank as #S + rk_2 of the narrow S-class group - 1 (Leopoldt defect 0)."""
    F = as_field(F)
    D = F.D
    nS = 2 if F.two == "split" else 1
    if D < 0:
        forms = _neg_classes(D)
        ident = _pykernels.reduce_neg(*identity_form(D))
        squares = {kernels.compose_neg(*f, *f, D) for f in forms}
        n2 = sum(1 for f in forms if kernels.compose_neg(*f, *f, D) == ident)
        rk = n2.bit_length() - 1
        if F.two == "inert":
            p_square = True
        else:
            pf = _pykernels.reduce_neg(*prime_form(D, 2))
            p_square = pf in squares
    else:
        G = NarrowClassGroupReal(D)
        rk = G.rank2()
        if F.two == "inert":
            p_square = True
        else:
            p_square = G.class_of(prime_form(D, 2)) in G.squares()
    return nS + rk - (0 if p_square else 1) - 1


# -- Rédei matrices ---------------------------------------------------------------------


@dataclass(frozen=True)
class RedeiGenerator:
    """An idèle a_i given by its nontrivial components.

    Components are ("q", q) for sqrt(d) at the prime over q, ("two", r) for
    the 2-adic integer r placed at every prime over 2, and ("p", x) for the
    element x at the chosen prime over 2 only.
    """

    index: int
    components: tuple


@dataclass(frozen=True)
class KummerElem:
    tag: str
    value: QuadElem


@dataclass
class _RedeiContext:
    F: QuadField
    two_places: list
    frak_p_place: object
    pi: QuadElem | None
    f: int | None


def _qstar(q: int) -> int:
    return q if q % 4 == 1 else -q


def _sqrt_2adic(a: int) -> int:
    """Square root of a ≡ 1 mod 8 in Z_2, modulo 2^TWO_ADIC_BITS."""
    if a % 8 != 1:
        raise ValueError(f"{a} is not a 2-adic unit square")
    return sqrt_mod_2power(a % (1 << (TWO_ADIC_BITS + 2)), TWO_ADIC_BITS + 2) % (1 << TWO_ADIC_BITS)


def _require_imaginary(F: QuadField):
    if F.D >= 0:
        raise ValueError("the 4-rank matrices are defined for imaginary fields")


@lru_cache(maxsize=4096)
def _frak_p(F: QuadField):
    return frak_p_order_and_pi(F)


def redei_generators(F) -> tuple[list[RedeiGenerator], list[KummerElem], _RedeiContext]:
    """Rows A (nontrivial idèles) and columns B (Kummer generators) of the 4-rank matrix."""
    F = as_field(F, imaginary=True)
    _require_imaginary(F)
    d, m, t, k = F.d, F.m, F.t, F.k
    qs = F.odd_primes
    rows: list[RedeiGenerator] = []
    pi = None
    f = None
    frak_place = None
    if F.two == "split":
        rootD = two_adic_root(F.D)
        s = _sqrt_d_root(F, rootD)
        mod = 1 << TWO_ADIC_PREC
        two_places = [place_over(d, 2, root=s), place_over(d, 2, root=(-s) % mod)]
        frak_place = two_places[0]
        rows.append(RedeiGenerator(0, (("p", F.elem(-1)),)))
    else:
        two_places = [place_over(d, 2)]
        frak_place = two_places[0]
        if m % 8 == 1:
            S = _sqrt_2adic(m)
            rows.append(RedeiGenerator(0, (("p", F.elem(0, Fraction(1, S))),)))
    for i in range(1, t + 1):
        qi = qs[i - 1]
        if i <= k:
            rows.append(RedeiGenerator(i, (("q", qi), ("two", _sqrt_2adic(_qstar(qi))))))
        elif i < t:
            qt = qs[t - 1]
            rows.append(RedeiGenerator(
                i, (("q", qi), ("q", qt), ("two", _sqrt_2adic(_qstar(qi) * _qstar(qt))))))
    cols = [KummerElem("-1", F.elem(-1))]
    cols += [KummerElem(str(q), F.elem(q)) for q in qs]
    needs_p = F.two == "split" or (F.two == "ramified" and m in (1, 2))
    two_in_N = k == t
    if needs_p or two_in_N:
        fp = _frak_p(F)
        f = fp.f
        if fp.pi != F.elem(2):
            pi = fp.pi
            cols.append(KummerElem("pi", pi))
        if two_in_N and not fp.two_in_NES:
            rep = rep_2g2_h2(m)
            cols.append(KummerElem("alpha", F.elem(rep.h, 1)))
    return rows, cols, _RedeiContext(F, two_places, frak_place, pi, f)


def _component_symbol(ctx: _RedeiContext, comp, b: QuadElem) -> int:
    F = ctx.F
    kind, val = comp
    if kind == "q":
        return symbol_at_place(place_over(F.d, val), F.elem(0, 1), b)
    if kind == "two":
        x = F.elem(val)
        s = 0
        for place in ctx.two_places:
            s ^= symbol_at_place(place, x, b, TWO_ADIC_BITS)
        return s
    if kind == "p":
        return symbol_at_place(ctx.frak_p_place, val, b, TWO_ADIC_BITS)
    raise ValueError(kind)


def redei_entry(ctx: _RedeiContext, a: RedeiGenerator, b: KummerElem) -> int:
    s = 0
    for comp in a.components:
        s ^= _component_symbol(ctx, comp, b.value)
    return s


def redei_matrix_T2(F) -> F2Mat:
    """The full 4-rank matrix ([a, b]) from local symbols, rows a in A, columns b in B."""
    F = as_field(F, imaginary=True)
    if rk2_T2(F) == 0:
        return F2Mat.from_lists([], [], [])
    rows, cols, ctx = redei_generators(F)
    entries = [[redei_entry(ctx, a, b) for b in cols] for a in rows]
    return F2Mat.from_lists(entries, [f"a{a.index}" for a in rows], [b.tag for b in cols])


def fast_path_legal(m: int) -> bool:
    if m % 4 != 3:
        return False
    nc = norm_criteria(m)
    return not nc.two and not nc.minus_two


def redei_matrix_classgroup(F) -> F2Mat:
    """The t x t class-group matrix ([q_i, -m]_{q_j})."""
    F = as_field(F, imaginary=True)
    _require_imaginary(F)
    qs = F.odd_primes
    entries = [[hilbert_additive_Q(qi, F.d, qj) for qj in qs] for qi in qs]
    labels = [str(q) for q in qs]
    return F2Mat.from_lists(entries, labels, labels)


def redei_fast_path(F) -> F2Mat:
    """Rational-symbol matrix with the same rank as the full matrix.

    m ≡ 3 mod 8: ((-2/q_i), R^Cl); m ≡ 7 mod 8: ((2/q_i), R^Cl).
    """
    F = as_field(F, imaginary=True)
    _require_imaginary(F)
    m = F.m
    if not fast_path_legal(m):
        raise WrongPathError(f"m={m} is outside the rational fast path")
    a = -2 if m % 8 == 3 else 2
    qs = F.odd_primes
    cl = redei_matrix_classgroup(F).to_lists()
    entries = [[jacobi_additive(a, q)] + row for q, row in zip(qs, cl)]
    return F2Mat.from_lists(entries, [str(q) for q in qs], [f"({a}/q)"] + [str(q) for q in qs])


def rk4_T2(F, method: str = "auto") -> int:
    """rk_2 - rank of the 4-rank matrix; method is "auto", "fast" or "full"."""
    F = as_field(F, imaginary=True)
    _require_imaginary(F)
    rk2 = rk2_T2(F)
    if rk2 == 0:
        return 0
    if method == "fast" or (method == "auto" and fast_path_legal(F.m)):
        mat = redei_fast_path(F)
    elif method in ("auto", "full"):
        mat = redei_matrix_T2(F)
    else:
        raise ValueError(f"unknown method {method}")
    r = rk2 - mat.rank()
    if r < 0:
        raise ConsistencyError(f"negative 4-rank for m={F.m}")
    return r


def rk4_K2_matrix(m: int) -> int:
    """rk_4 of the tame kernel of Q(sqrt m) as t - rank of the augmented class-group matrix."""
    F = as_field(m, imaginary=True)
    if not fast_path_legal(F.m):
        raise WrongPathError(f"m={F.m} is outside the comparison domain")
    return F.t - redei_fast_path(F).rank()


def rk4_classgroup(F) -> int:
    """rk_4 of Cl(Q(sqrt(-m))) from R^Cl, valid when -m is the discriminant."""
    F = as_field(F, imaginary=True)
    if F.D != F.d:
        raise WrongPathError("class-group matrix uses odd discriminants only")
    return F.t - 1 - redei_matrix_classgroup(F).rank()


def pi_tame_column(F) -> list[int]:
    """The column ([sqrt(-m), pi] at the prime over q_i))_i for a split prime over 2."""
    F = as_field(F, imaginary=True)
    fp = _frak_p(F)
    x = F.elem(0, 1)
    return [symbol_at_place(place_over(F.d, q), x, fp.pi) for q in F.odd_primes]


# -- Coates order formula -------------------------------------------------------------


def coates_order_valuation(F, p: int = 2, h: int | None = None, eps=None,
                           digits: int = 64) -> int:
    """v_p of the order of the torsion module of a real quadratic field."""
    F = as_field(F)
    if F.D <= 0:
        raise ValueError("Coates' formula applies to real fields")
    m, D = F.d, F.D
    if eps is None:
        eps = fundamental_unit(m, digits + 8, p)
    if h is None:
        h = class_number_real(D, eps.log)
    split = F.splitting(p)
    norm_sum = 1 if split == "ramified" else 2
    cyc = 1 if (p == 2 and m == 2) else 0
    reg = regulator_valuation(m, p, eps, digits)
    val = 1 + cyc + v_p(h, p) + reg - Fraction(v_p(D, p), 2) - norm_sum
    if val.denominator != 1 or val < 0:
        raise ConsistencyError(f"non-integral or negative order valuation {val} for m={m}")
    return int(val)


def t2_order(m: int) -> int:
    """t_2(m) = 2^v for a real quadratic field Q(sqrt m)."""
    return 2 ** coates_order_valuation(as_field(m), 2)


def unit_trace_valuation(m: int) -> int:
    """v_2(a) for the fundamental unit a + b sqrt(m) of Q(sqrt m) (integral coordinates)."""
    eps = fundamental_unit(m, 64, 2)
    return eps.nu("a", 2)


def order_from_unit_trace(l: int) -> int:
    """v_2(t_2(l)) read off the fundamental unit for a prime l ≡ ±1 mod 8."""
    if l % 8 not in (1, 7):
        raise ValueError("l must be ≡ ±1 mod 8")
    return unit_trace_valuation(l) - 1


# -- classifiers for the prime families ---------------------------------------------------


@dataclass(frozen=True)
class ImaginaryTags:
    l: int
    t2_minus_l: str
    t2_minus_2l: str


def classify_imaginary_prime_family(l: int) -> ImaginaryTags:
    """Congruence tags for t_2(-l) in {2, 4, >=8} and t_2(-2l) in {2, >=4}."""
    if l % 8 not in (1, 7):
        raise ValueError("l must be ≡ ±1 mod 8")
    r = l % 16
    if l % 8 == 7:
        return ImaginaryTags(l, "2", "2")
    if r == 9:
        return ImaginaryTags(l, "4", "2")
    return ImaginaryTags(l, ">=8", ">=4")


def tag_matches(tag: str, value: int) -> bool:
    if tag.startswith(">="):
        return value >= int(tag[2:])
    return value == int(tag)


@dataclass(frozen=True)
class RealTags:
    l: int
    t2_l: str
    t2_2l: str
    h2_minus_l: str | None = None
    h2_minus_2l: str | None = None


def _sign_l78(l: int, u: int, v: int) -> int:
    return (-1) ** ((l + 1) // 16) * jacobi(2 * u, v)


def classify_real_prime_family(l: int) -> RealTags:
    """Tags for t_2(l), t_2(2l) decided by congruences, representations and power residues."""
    if l % 8 == 7:
        if l % 16 == 7:
            return RealTags(l, "4", "2", h2_minus_2l="4")
        rep = rep_u2_2v2(l)
        if _sign_l78(l, rep.u, rep.v) == -1:
            return RealTags(l, "8", "4", h2_minus_2l="8")
        return RealTags(l, ">=16", ">=8", h2_minus_2l=">=16")
    if l % 8 == 1:
        rep = rep_2g2_h2(l)
        g, h = rep.g, rep.h
        sgn = (-1) ** ((l - 1) // 8)
        if g % 4 == 3:
            t_l, h_l = "2", "4"
        elif sgn * jacobi(2 * h, g) * quartic_symbol(g, l) == -1:
            t_l, h_l = "4", "8" if l % 16 == 1 else ">=16"
        else:
            t_l, h_l = ">=8", None
        ruv = rep_u2_2v2(l)
        u = ruv.u
        if jacobi(u, l) == -1:
            t_2l = "2"
        elif sgn * quartic_symbol(u, l) == -1:
            t_2l = "4"
        else:
            t_2l = ">=8"
        return RealTags(l, t_l, t_2l, h2_minus_l=h_l)
    raise ValueError("l must be ≡ ±1 mod 8")


def l78_sign_invariance(l: int, count: int = 3) -> set[int]:
    """The value (-1)^((l+1)/16) (2u/v) over several representations l = u^2 - 2v^2."""
    from .arith import reps_u2_2v2

    return {_sign_l78(l, r.u, r.v) for r in reps_u2_2v2(l, count)}


def h2_neg(D: int) -> int:
    """2-part of the class number of a negative discriminant."""
    return 2 ** v_p(kernels.h_neg(D), 2)


def congruence_triple(l: int) -> tuple[int, int, int]:
    """(t_2(l), t_2(2l), h_2(-2l)) for a prime l ≡ 7 mod 8, each computed directly."""
    if l % 8 != 7:
        raise ValueError("l must be ≡ 7 mod 8")
    return t2_order(l), t2_order(2 * l), h2_neg(-8 * l)


def congruence_identity_check(l: int) -> bool:
    a, b, c = congruence_triple(l)
    return a % 16 == (2 * b) % 16 == c % 16


# -- reports ------------------------------------------------------------------------------

REPORT_FIELDS = ("m", "p", "rk2", "rk4", "order_valuation", "structure", "methods")


@dataclass
class TpReport:
    m: int
    p: int
    rk2: int | None = None
    rk4: int | None = None
    order_valuation: int | None = None
    structure: object | None = None
    methods: dict = field(default_factory=dict)

    def fill(self, name: str, value, method: str) -> None:
        """Set a field, checking agreement with any earlier method."""
        current = getattr(self, name)
        if current is not None and value is not None:
            same = current == value
            if not same:
                raise ConsistencyError(
                    f"{name} disagrees for m={self.m}: {current} ({self.methods.get(name)}) "
                    f"vs {value} ({method})")
            self.methods[name] = self.methods[name] + "+" + method
            return
        setattr(self, name, value)
        if value is not None:
            self.methods[name] = method

    def csv_row(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow([self.m, self.p, _opt(self.rk2), _opt(self.rk4), _opt(self.order_valuation),
                    self.structure.label() if self.structure is not None else "",
                    ";".join(f"{k}={v}" for k, v in sorted(self.methods.items()))])
        return buf.getvalue()

    @staticmethod
    def csv_header() -> str:
        return ",".join(REPORT_FIELDS) + "\n"

    def text(self) -> str:
        lines = [f"field Q(sqrt({self.m})), p = {self.p}"]
        for name in ("rk2", "rk4", "order_valuation"):
            val = getattr(self, name)
            if val is not None:
                lines.append(f"  {name:<16}{val}  [{self.methods[name]}]")
        if self.structure is not None:
            lines.append(f"  {'structure':<16}{self.structure.label()}  [{self.methods['structure']}]")
        return "\n".join(lines)


def _opt(x):
    return "" if x is None else x
