"""Linear algebra over F_2 and Smith forms over Z/p^M."""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import PrecisionError


@dataclass
class F2Mat:
    """Matrix over F_2 with rows stored as bit masks (bit j = column j)."""

    nrows: int
    ncols: int
    rows: list[int] = field(default_factory=list)
    row_labels: list[str] = field(default_factory=list)
    col_labels: list[str] = field(default_factory=list)

    @classmethod
    def from_lists(cls, entries, row_labels=None, col_labels=None) -> "F2Mat":
        entries = [list(r) for r in entries]
        ncols = len(entries[0]) if entries else 0
        rows = []
        for r in entries:
            if len(r) != ncols:
                raise ValueError("ragged matrix")
            rows.append(sum((int(x) & 1) << j for j, x in enumerate(r)))
        return cls(len(rows), ncols, rows, list(row_labels or []), list(col_labels or []))

    def to_lists(self) -> list[list[int]]:
        return [[(r >> j) & 1 for j in range(self.ncols)] for r in self.rows]

    def entry(self, i: int, j: int) -> int:
        return (self.rows[i] >> j) & 1

    def column(self, j: int) -> list[int]:
        return [(r >> j) & 1 for r in self.rows]

    def rank(self) -> int:
        return f2_rank(self.rows)

    def hstack(self, other: "F2Mat") -> "F2Mat":
        if other.nrows != self.nrows:
            raise ValueError("row count mismatch")
        rows = [a | (b << self.ncols) for a, b in zip(self.rows, other.rows)]
        return F2Mat(self.nrows, self.ncols + other.ncols, rows, list(self.row_labels),
                     self.col_labels + other.col_labels)

    def select_columns(self, cols) -> "F2Mat":
        cols = list(cols)
        rows = [sum(((r >> c) & 1) << j for j, c in enumerate(cols)) for r in self.rows]
        labels = [self.col_labels[c] for c in cols] if self.col_labels else []
        return F2Mat(self.nrows, len(cols), rows, list(self.row_labels), labels)

    def __str__(self) -> str:
        return "\n".join(" ".join(str(x) for x in row) for row in self.to_lists())


def f2_rank(rows) -> int:
    """Rank of a list of bit-mask rows."""
    basis: dict[int, int] = {}
    rank = 0
    for r in rows:
        while r:
            top = r.bit_length() - 1
            if top in basis:
                r ^= basis[top]
            else:
                basis[top] = r
                rank += 1
                break
    return rank


def f2_in_column_span(mat: F2Mat, col: list[int]) -> bool:
    """Whether the column vector lies in the span of the matrix columns."""
    cols = [sum(mat.entry(i, j) << i for i in range(mat.nrows)) for j in range(mat.ncols)]
    target = sum((b & 1) << i for i, b in enumerate(col))
    return f2_rank(cols) == f2_rank(cols + [target])


# -- Smith normal form over Z/p^M ------------------------------------------------


def _vp_mod(x: int, p: int, M: int) -> int:
    if x == 0:
        return M
    v = 0
    while x % p == 0:
        x //= p
        v += 1
    return v


def snf_mod_pm(rows, ncols: int, p: int, M: int, track: bool = False):
    """Invariant exponents of Z^ncols / (row span) tensored with Z/p^M.

    Returns a sorted list of exponents e (one per nontrivial cyclic factor
    Z/p^e).  A factor that reaches p^M is reported as M; callers treat it
    as saturated.  With track=True also returns, for each exponent, the
    generator as a coefficient vector over the original columns.
    """
    mod = p**M
    A = [[x % mod for x in r] for r in rows if any(x % mod for x in r)]
    n = ncols
    Qinv = [[int(i == j) for j in range(n)] for i in range(n)] if track else None
    diag: list[tuple[int, int]] = []  # (exponent, column index)
    rstart, cstart = 0, 0
    while rstart < len(A) and cstart < n:
        best, bi, bj = M, -1, -1
        for i in range(rstart, len(A)):
            row = A[i]
            for j in range(cstart, n):
                if row[j]:
                    v = _vp_mod(row[j], p, M)
                    if v < best:
                        best, bi, bj = v, i, j
                        if v == 0:
                            break
            if best == 0:
                break
        if bi < 0:
            break
        A[rstart], A[bi] = A[bi], A[rstart]
        if bj != cstart:
            for row in A:
                row[cstart], row[bj] = row[bj], row[cstart]
            if track:
                Qinv[cstart], Qinv[bj] = Qinv[bj], Qinv[cstart]
        piv_row = A[rstart]
        pk = p**best
        u = piv_row[cstart] // pk
        uinv = pow(u, -1, mod)
        for j in range(cstart, n):
            piv_row[j] = piv_row[j] * uinv % mod
        # eliminate rows below
        for i in range(rstart + 1, len(A)):
            row = A[i]
            if row[cstart]:
                c = row[cstart] // pk
                for j in range(cstart, n):
                    if piv_row[j]:
                        row[j] = (row[j] - c * piv_row[j]) % mod
        # eliminate the pivot row to the right (column operations)
        for j in range(cstart + 1, n):
            if piv_row[j]:
                c = piv_row[j] // pk
                for row in A[rstart:]:
                    if row[cstart]:
                        row[j] = (row[j] - c * row[cstart]) % mod
                if track:
                    # col_j -= c col_s  =>  row_s of Qinv += c row_j
                    rs, rj = Qinv[cstart], Qinv[j]
                    for k in range(n):
                        rs[k] = (rs[k] + c * rj[k]) % mod
        diag.append((best, cstart))
        rstart += 1
        cstart += 1
    # columns without pivot are free: Z/p^M
    pivots = {c for _, c in diag}
    out = [(e, c) for e, c in diag if e > 0]
    out.extend((M, c) for c in range(n) if c not in pivots)
    out.sort()
    exps = [e for e, _ in out]
    if not track:
        return exps
    gens = [[x % mod for x in Qinv[c]] for _, c in out]
    return exps, gens


def p_group_from_relations(rows, ncols: int, p: int, M: int) -> list[int]:
    """Exponents of a finite p-group presented by relations; errors when unbounded."""
    exps = snf_mod_pm(rows, ncols, p, M)
    if exps and exps[-1] >= M:
        raise PrecisionError("p-group exponent reached the working modulus")
    return exps
