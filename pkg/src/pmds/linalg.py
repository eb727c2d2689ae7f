"""Small dense matrices over a symbol algebra, eliminated on unit pivots only.

Over a field every nonzero entry is a unit and the usual rank is computed.
Over the ring GF(2)[x]/(M_p) (a product of fields when M_p is reducible) an
invertible matrix may have no unit entry at some stage; elimination then
stops with an ``INCONCLUSIVE`` verdict instead of guessing.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from pmds.algebra import AlgebraSpec


class SingularSystem(ArithmeticError):
    """No unit pivot is available at some elimination step."""


class RankVerdict(enum.Enum):
    FULL_COLUMN_RANK = "FullColumnRank"
    DEFICIENT = "Deficient"
    INCONCLUSIVE = "Inconclusive"


@dataclass(frozen=True)
class AlgMatrix:
    rows: int
    cols: int
    entries: tuple[tuple[int, ...], ...]
    algebra: AlgebraSpec

    def __post_init__(self):
        if len(self.entries) != self.rows or any(len(r) != self.cols for r in self.entries):
            raise ValueError("entry grid does not match the declared shape")
        for row in self.entries:
            for a in row:
                self.algebra.check(a)

    @classmethod
    def from_rows(cls, algebra: AlgebraSpec, rows: Sequence[Sequence[int]]) -> AlgMatrix:
        rows = tuple(tuple(int(a) for a in r) for r in rows)
        return cls(len(rows), len(rows[0]) if rows else 0, rows, algebra)

    @classmethod
    def identity(cls, algebra: AlgebraSpec, size: int) -> AlgMatrix:
        return cls.from_rows(algebra, [[int(i == j) for j in range(size)] for i in range(size)])

    def __getitem__(self, rc: tuple[int, int]) -> int:
        r, c = rc
        return self.entries[r][c]

    def column(self, c: int) -> tuple[int, ...]:
        return tuple(row[c] for row in self.entries)

    def columns(self, cols: Sequence[int]) -> AlgMatrix:
        """Submatrix made of the given columns, in the given order."""
        return AlgMatrix.from_rows(self.algebra, [[row[c] for c in cols] for row in self.entries])

    def matvec(self, x: Sequence):
        alg = self.algebra
        out = []
        for row in self.entries:
            acc = 0
            for a, v in zip(row, x):
                if a:
                    acc = alg.add(acc, alg.scale(a, v))
            out.append(acc)
        return out


def _find_pivot(alg: AlgebraSpec, work, rows, cols):
    """First unit in the remaining block, preferring entries equal to one."""
    fallback = None
    for c in cols:
        for r in rows:
            a = work[r][c]
            if a == 1:
                return r, c
            if fallback is None and a and alg.is_unit(a):
                fallback = (r, c)
    return fallback


def rank_via_unit_pivots(M: AlgMatrix) -> tuple[int, RankVerdict]:
    alg = M.algebra
    work = [list(r) for r in M.entries]
    free_rows = list(range(M.rows))
    free_cols = list(range(M.cols))
    rank = 0
    while free_rows and free_cols:
        hit = _find_pivot(alg, work, free_rows, free_cols)
        if hit is None:
            break
        pr, pc = hit
        free_rows.remove(pr)
        free_cols.remove(pc)
        inv = alg.inv(work[pr][pc])
        for r in free_rows:
            e = work[r][pc]
            if e:
                f = alg.mul(e, inv)
                work[r] = [a ^ alg.mul(f, b) for a, b in zip(work[r], work[pr])]
        rank += 1
    if rank == M.cols:
        return rank, RankVerdict.FULL_COLUMN_RANK
    residue = any(work[r][c] for r in free_rows for c in free_cols)
    if residue and not alg.is_field:
        return rank, RankVerdict.INCONCLUSIVE
    return rank, RankVerdict.DEFICIENT


def solve_with_unit_pivots(M: AlgMatrix, rhs: Sequence) -> list:
    """Solve M x = rhs exactly; rhs entries may be symbols or symbol arrays."""
    if M.rows != M.cols or len(rhs) != M.rows:
        raise ValueError("solve needs a square matrix and matching right-hand side")
    alg = M.algebra
    n = M.rows
    work = [list(r) for r in M.entries]
    vec = [v.copy() if isinstance(v, np.ndarray) else v for v in rhs]
    free_rows = list(range(n))
    free_cols = list(range(n))
    pivots = []
    while free_rows:
        hit = _find_pivot(alg, work, free_rows, free_cols)
        if hit is None:
            raise SingularSystem("no unit pivot available")
        pr, pc = hit
        free_rows.remove(pr)
        free_cols.remove(pc)
        inv = alg.inv(work[pr][pc])
        work[pr] = [alg.mul(inv, a) for a in work[pr]]
        vec[pr] = alg.scale(inv, vec[pr])
        for r in range(n):
            e = work[r][pc]
            if r != pr and e:
                work[r] = [a ^ alg.mul(e, b) for a, b in zip(work[r], work[pr])]
                vec[r] = alg.add(vec[r], alg.scale(e, vec[pr]))
        pivots.append((pr, pc))
    x = [None] * n
    for pr, pc in pivots:
        x[pc] = vec[pr]
    return x


def det(M: AlgMatrix) -> int:
    """Determinant: cofactor expansion up to 4x4, unit-pivot elimination above."""
    if M.rows != M.cols:
        raise ValueError("determinant of a non-square matrix")
    alg = M.algebra
    if M.rows <= 4:
        return _cofactor(alg, [list(r) for r in M.entries])
    work = [list(r) for r in M.entries]
    n = M.rows
    result = 1
    for k in range(n):
        hit = _find_pivot(alg, work, range(k, n), [k])
        if hit is None:
            if all(work[r][k] == 0 for r in range(k, n)):
                return 0
            raise SingularSystem("ring determinant needs a non-unit pivot")
        pr, _ = hit
        work[k], work[pr] = work[pr], work[k]
        piv = work[k][k]
        result = alg.mul(result, piv)
        inv = alg.inv(piv)
        for r in range(k + 1, n):
            e = work[r][k]
            if e:
                f = alg.mul(e, inv)
                work[r] = [a ^ alg.mul(f, b) for a, b in zip(work[r], work[k])]
    return result


def _cofactor(alg: AlgebraSpec, rows: list[list[int]]) -> int:
    n = len(rows)
    if n == 0:
        return 1
    if n == 1:
        return rows[0][0]
    total = 0
    for c, a in enumerate(rows[0]):
        if a:
            minor = [r[:c] + r[c + 1:] for r in rows[1:]]
            total ^= alg.mul(a, _cofactor(alg, minor))
    return total


def det3_vandermonde_check(i: int, j0: int, j1: int, j2: int, params) -> bool:
    """Is the 3x3 determinant for three erasures in row ``i`` a unit?

    The direct cofactor value is cross-checked against the closed form
    alpha^(base1 + base2 - j0 - j1 - j2) * prod_{a<b} (alpha^jb + alpha^ja),
    where base1/base2 are the global exponents at offset 0 of the block.
    """
    from pmds.construction import global_exponents

    if not 0 <= j0 < j1 < j2 < params.n:
        raise ValueError(f"need 0 <= j0 < j1 < j2 < n, got {(j0, j1, j2)}")
    alg = params.algebra
    order = alg.order_of_alpha()
    js = (j0, j1, j2)
    exps = [global_exponents(params.variant, i, j, params.m, params.n, order) for j in js]
    M = AlgMatrix.from_rows(alg, [
        [1, 1, 1],
        [alg.alpha_pow(g1) for g1, _ in exps],
        [alg.alpha_pow(g2) for _, g2 in exps],
    ])
    direct = det(M)

    base1, base2 = global_exponents(params.variant, i, 0, params.m, params.n, order)
    closed = alg.alpha_pow(base1 + base2 - sum(js))
    for a in range(3):
        for b in range(a + 1, 3):
            closed = alg.mul(closed, alg.alpha_pow(js[a]) ^ alg.alpha_pow(js[b]))
    if direct != closed:
        raise AssertionError(f"determinant {direct:#x} disagrees with closed form {closed:#x}")
    return alg.is_unit(direct)
