"""Ray class groups modulo p^n of quadratic fields and the torsion module by stabilization.

Only p-parts are computed.  The p-part of (O/p^n)^x is the principal unit
group U1/Un, presented by filtration digits; ideal classes enter through
powers of split primes whose principal generators are found exactly.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import _pykernels, kernels
from .arith import is_prime, v_p
from .errors import ConsistencyError, PrecisionError, StabilizationError, UnsupportedFieldError
from .padic import Completion, PadicElem, completion, embed_half
from .quadclass import AbGroup, QuadField, fundamental_unit, prime_form, principal_generator

DEFAULT_NMAX = 24


# -- principal units of one completion -----------------------------------------------


class _LocalUnits:
    """U1/U_N for the completion at one prime over p, N = e*n, with digit generators."""

    def __init__(self, C: Completion, n: int):
        self.C = C
        self.p = C.p
        self.n = n
        self.N = C.e * n
        self.f = C.f
        self.mod = C.p**n
        p = self.p
        one = PadicElem(C, 1, 0, n)
        theta = PadicElem(C, 0, 1, n)
        # level j generators: 1 + p^j w (unramified), 1 + p^(j//2) theta^(j%2) (ramified)
        self.gens = []  # (level j, basis index s, element, inverse powers)
        for j in range(1, self.N):
            if C.e == 2:
                pj = PadicElem(C, p ** (j // 2) % self.mod, 0, n)
                steps = [pj * theta if j % 2 else pj]
            else:
                pj = PadicElem(C, p**j % self.mod, 0, n)
                steps = [pj] if C.f == 1 else [pj, pj * theta]
            for s, step in enumerate(steps):
                g = one + step
                ginv = _inverse(g)
                powers = [one]
                for _ in range(p - 1):
                    powers.append(powers[-1] * ginv)
                self.gens.append((j, s, g, powers))
        self.size = len(self.gens)

    def digits(self, z: PadicElem, j: int) -> tuple[int, ...]:
        """Digits of z (with v(z) >= j) at filtration level j."""
        p = self.p
        if self.C.e == 1:
            pj = p**j
            c0, c1 = z.c0 % self.mod, z.c1 % self.mod
            if c0 % pj or c1 % pj:
                raise ConsistencyError("element below the expected filtration level")
            if self.f == 1:
                return ((c0 // pj) % p,)
            return ((c0 // pj) % p, (c1 // pj) % p)
        i = j // 2
        pi = p**i
        c0, c1 = z.c0 % self.mod, z.c1 % self.mod
        if c0 % pi or c1 % pi:
            raise ConsistencyError("element below the expected filtration level")
        w0, w1 = c0 // pi, c1 // pi
        return ((w0 if j % 2 == 0 else w1) % p,)

    def dlog(self, u: PadicElem) -> list[int]:
        """Greedy digit coordinates of a principal unit."""
        one = PadicElem(self.C, 1, 0, self.n)
        coords = [0] * self.size
        idx = 0
        for j in range(1, self.N):
            ds = self.digits(u - one, j)
            for s in range(self.f):
                a = ds[s]
                if a:
                    u = u * self.gens[idx + s][3][a]
                    coords[idx + s] = a
            idx += self.f
        if not (u - one).is_zero():
            raise ConsistencyError("digit expansion did not terminate at 1")
        return coords

    def relations(self) -> list[list[int]]:
        rows = []
        for idx, (_, _, g, _) in enumerate(self.gens):
            row = [-c for c in self.dlog(g**self.p)]
            row[idx] += self.p
            rows.append(row)
        return rows


def _inverse(x: PadicElem) -> PadicElem:
    """Inverse of a unit of the completion modulo p^prec."""
    C = x.field
    mod = C.p**x.prec
    if C.degree == 1:
        return PadicElem(C, pow(x.c0, -1, mod), 0, x.prec)
    # conj(x) = c0 + c1*(T - theta); norm = x * conj(x) in Z_p
    a, b = x.c0, x.c1
    conj0, conj1 = (a + b * C.T) % mod, (-b) % mod
    nrm = (a * conj0 + b * conj1 * C.N) % mod
    inv = pow(nrm, -1, mod)
    return PadicElem(C, conj0 * inv % mod, conj1 * inv % mod, x.prec)


# -- residue units of O/p^n -------------------------------------------------------------


@dataclass
class ResidueUnitGroup:
    """p-part of (O/p^n O)^x: principal units at each prime over p.

    `order` is the full order of (O/p^n O)^x; `exponents` describe the p-part.
    """

    F: QuadField
    p: int
    n: int
    locals: list
    E: int
    order: int
    exponents: list[int]

    @property
    def ngens(self) -> int:
        return sum(L.size for L in self.locals)

    def dlog(self, X: int, Y: int) -> list[int]:
        """Coordinates of the p-part of (X + Y sqrt d)/2, an element prime to p."""
        out = []
        for L in self.locals:
            z = embed_half(L.C, X, Y, self.n)
            zE = z**self.E
            out.extend(L.dlog(zE))
        return out

    def relations(self) -> list[list[int]]:
        rows = []
        off = 0
        total = self.ngens
        for L in self.locals:
            for r in L.relations():
                rows.append([0] * off + r + [0] * (total - off - L.size))
            off += L.size
        return rows

    def structure(self) -> AbGroup:
        return AbGroup.from_p_exponents(self.p, self.exponents)

    @property
    def generator_orders(self) -> list[int]:
        """Orders of a basis of (O/p^n)^x: the p-part plus one cyclic residue-field factor per prime."""
        out = [self.p**e for e in self.exponents]
        for L in self.locals:
            q = self.p**L.f
            if q > 2:
                out.append(q - 1)
        return out


def _completions(F: QuadField, p: int, n: int) -> list[Completion]:
    C = completion(F.d, p, n)
    if C.kind != "split":
        return [C]
    mod = p ** (n + 1)
    other = Completion(C.d, p, "split", 1, 1, root=(-C.root) % mod, digits=n)
    return [C, other]


def residue_unit_group(F: QuadField, p: int, n: int) -> ResidueUnitGroup:
    if n < 1:
        raise ValueError("level must be >= 1")
    comps = _completions(F, p, n)
    locs = [_LocalUnits(C, n) for C in comps]
    q = p ** comps[0].f
    E = q - 1
    full = 1
    for C in comps:
        qf = p**C.f
        full *= (qf - 1) * qf ** (C.e * n - 1)
    rug = ResidueUnitGroup(F, p, n, locs, E, full, [])
    M = n + 6
    rug.exponents = [e for e in kernels.snf_exponents(rug.relations(), rug.ngens, p, M) if e > 0]
    if sum(rug.exponents) != sum(L.size for L in locs):
        raise ConsistencyError("principal unit presentation has the wrong order")
    return rug


# -- global data: units and ideal-class relations ------------------------------------------


def _unit_half_coords(F: QuadField, p: int, n: int) -> list[tuple[int, int]]:
    """Generators of O^x as (X, Y) with unit = (X + Y sqrt d)/2."""
    d = F.d
    units = [(-2, 0)]
    if d == -1:
        units.append((0, 2))
    elif d == -3:
        units.append((1, 1))
    elif d > 0:
        eps = fundamental_unit(d, n + 4, p)
        units.append((eps.X, eps.Y))
    return units


def _split_primes(F: QuadField, p: int):
    D = F.D
    ell = 1
    while True:
        ell += 1
        if ell == p or D % ell == 0 or not is_prime(ell):
            continue
        f = prime_form(D, ell)
        if f is not None:
            yield ell, f


def _ideal_power(f, e: int):
    """Unreduced composition power of a prime ideal form (exact, primitive)."""
    result = None
    base = f
    while e:
        if e & 1:
            result = base if result is None else _pykernels._compose(*result, *base)
        e >>= 1
        if e:
            base = _pykernels._compose(*base, *base)
    return result


@dataclass
class _ClassData:
    """Generators 𝔩_i^{h'} of the p-part of Cl and relations with exact principal generators."""

    hp_exp: int
    primes: list  # (ell, form)
    rels: list  # (coefficient vector over generators, (X, Y) of alpha, rational divisor)


def _class_relations(F: QuadField, p: int) -> _ClassData:
    D = F.D
    if D > 0:
        return _ClassData(0, [], [])
    h = kernels.h_neg(D)
    e = v_p(h, p)
    if e == 0:
        return _ClassData(0, [], [])
    hprime = h // p**e
    target = p**e
    ident = _pykernels.reduce_neg(1, D % 2, (D % 2 - D) // 4)
    elems = {ident: ()}
    primes: list = []
    rels: list = []
    for ell, f in _split_primes(F, p):
        if len(elems) == target:
            break
        y = kernels.form_pow_neg(*_pykernels.reduce_neg(*f), hprime, D)
        if y in elems:
            continue
        powers = [ident]
        z = y
        while z not in elems:
            powers.append(z)
            z = kernels.compose_neg(*z, *y, D)
        k = len(powers)
        vec = elems[z]
        r = len(primes)
        new = {}
        for x, v in elems.items():
            base = list(v) + [0] * (r - len(v))
            for i, yi in enumerate(powers):
                new[kernels.compose_neg(*x, *yi, D)] = tuple(base + [i])
        elems = new
        primes.append((ell, f))
        coeffs = [-c for c in vec] + [0] * (r - len(vec)) + [k]
        rels.append(coeffs)
    if len(elems) != target:
        raise ConsistencyError("class-group p-part not generated")
    out = []
    for coeffs in rels:
        out.append((coeffs,) + _relation_generator(F, primes, coeffs, hprime))
    return _ClassData(e, primes, out)


def _relation_generator(F: QuadField, primes, coeffs, hprime):
    """alpha with prod 𝔩_i^(h' c_i) = (alpha); returned as (X, Y) and a rational divisor."""
    D = F.D
    J = None
    divisor = 1
    for (ell, f), c in zip(primes, coeffs):
        if c == 0:
            continue
        a, b, cc = f
        if c < 0:
            # 𝔩^-1 = conj(𝔩)/ell
            f_use = (a, -b, cc)
            divisor *= ell ** (hprime * -c)
        else:
            f_use = f
        P = _ideal_power(f_use, hprime * abs(c))
        J = P if J is None else _pykernels._compose(*J, *P)
    N, b = J[0], J[1]
    gen = principal_generator(F, N, b)
    if gen is None:
        raise ConsistencyError("class relation ideal is not principal")
    X, Y = gen
    if F.D != F.d:
        Y *= 2  # (X + Y sqrt D)/2 = (X + 2Y sqrt d)/2
    return (X, Y), divisor


# -- ray class groups -----------------------------------------------------------------


@dataclass
class RayClassGroup:
    F: QuadField
    p: int
    n: int
    exponents: list[int]
    hp_exp: int
    unit_quotient_exponents: list[int]
    residue_units: ResidueUnitGroup

    def p_part(self) -> AbGroup:
        return AbGroup.from_p_exponents(self.p, self.exponents)

    @property
    def order_exponent(self) -> int:
        return sum(self.exponents)


def _scaled_dlog(rug: ResidueUnitGroup, X: int, Y: int, divisor: int = 1) -> list[int]:
    """dlog of ((X + Y sqrt d)/2) / divisor."""
    if divisor != 1:
        mod = rug.p ** (rug.n + 1)
        inv = pow(divisor, -1, mod)
        X, Y = X * inv % mod, Y * inv % mod
    return rug.dlog(X, Y)


def ray_class_group(F: QuadField, p: int, n: int, _cls: _ClassData | None = None) -> RayClassGroup:
    """p-part of Cl_F(p^n) with the exact-sequence cardinality checked."""
    if F.D > 0:
        hp_exp = _real_hp_exp(F, p)
        if hp_exp:
            raise UnsupportedFieldError("real field with nontrivial p-class group")
    rug = residue_unit_group(F, p, n)
    cls = _cls if _cls is not None else _class_relations(F, p)
    nu = rug.ngens
    nc = len(cls.primes)
    ncols = nu + nc
    rows = [r + [0] * nc for r in rug.relations()]
    unit_rows = []
    for X, Y in _unit_half_coords(F, p, n):
        unit_rows.append(rug.dlog(X, Y) + [0] * nc)
    rows += unit_rows
    M = n + cls.hp_exp + 8
    uq = [e for e in kernels.snf_exponents([r[:nu] for r in rows], nu, p, M) if e > 0]
    E = rug.E
    for coeffs, (X, Y), divisor in cls.rels:
        dl = _scaled_dlog(rug, X, Y, divisor)
        rows.append([-x for x in dl] + [E * c for c in coeffs] + [0] * (nc - len(coeffs)))
    exps = [e for e in kernels.snf_exponents(rows, ncols, p, M) if e > 0]
    if exps and exps[-1] >= M:
        raise PrecisionError("ray class exponent reached the working modulus")
    uq_finite = sorted(uq)
    if sum(exps) != cls.hp_exp + sum(uq_finite):
        raise ConsistencyError(
            f"cardinality identity fails for d={F.d}, p={p}, n={n}: "
            f"{sum(exps)} != {cls.hp_exp} + {sum(uq_finite)}")
    return RayClassGroup(F, p, n, exps, cls.hp_exp, uq_finite, rug)


def _real_hp_exp(F: QuadField, p: int) -> int:
    from .quadclass import class_number_real

    return v_p(class_number_real(F.D), p)


# -- stabilization --------------------------------------------------------------------


@dataclass
class Stabilized:
    structure: AbGroup
    level: int
    history: list


def tp_structure(F: QuadField, p: int, nmax: int = DEFAULT_NMAX, nmin: int = 2) -> AbGroup:
    return tp_structure_full(F, p, nmax, nmin).structure


def tp_structure_full(F: QuadField, p: int, nmax: int = DEFAULT_NMAX, nmin: int = 2) -> Stabilized:
    """Torsion of lim Cl_F(p^n) by stripping the r growing factors (r = 2 imaginary, 1 real)."""
    r = 1 if F.D > 0 else 2
    cls = _class_relations(F, p) if F.D < 0 else None
    history = []
    prev = None
    for n in range(nmin, nmax + 1):
        G = ray_class_group(F, p, n, cls)
        exps = sorted(G.exponents)
        pad = [0] * max(0, r - len(exps)) + exps
        grow, tors = pad[len(pad) - r:], pad[: len(pad) - r]
        history.append((n, exps))
        if prev is not None:
            pgrow, ptors = prev
            if (ptors == tors and all(g == pg + 1 for g, pg in zip(grow, pgrow))
                    and (not tors or min(pgrow) > max(tors))):
                return Stabilized(AbGroup.from_p_exponents(p, [e for e in tors if e > 0]), n, history)
        prev = (grow, tors)
    raise StabilizationError(f"no stabilization for d={F.d}, p={p} by level {nmax}")
