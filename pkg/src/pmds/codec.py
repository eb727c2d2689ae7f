"""Systematic encoding and structured erasure decoding.

Decoding runs in two stages. Rows with a single erasure are rebuilt from
row parity. What remains is at most one row with 2-3 erasures or two rows
with 2 erasures each; those are solved from the two global syndromes by
eliminating one cell per heavy row through its row parity, dividing each
remaining column by its unit factor (1 + alpha^d), and solving the 2x2
residual whose determinant alpha^e1 + alpha^e2 decides correctability.

The solver only ever scales cell values by constants, so every routine
works on a trailing batch axis: ``cells`` of shape (m, n, B) decodes B
stripes sharing one erasure mask in a single pass.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from pmds.algebra import AlgebraSpec
from pmds.construction import CodeParams, ParameterViolation


class FailureKind(enum.Enum):
    BEYOND_CAPABILITY = "BeyondCapability"
    UNCORRECTABLE_PATTERN = "UncorrectablePattern"


class DecodeFailure(Exception):
    def __init__(self, kind: FailureKind, pattern: ErasurePattern, detail: str = ""):
        self.kind = kind
        self.pattern = pattern
        msg = f"{kind.value}: {pattern}"
        super().__init__(f"{msg} ({detail})" if detail else msg)


@dataclass(frozen=True)
class ErasurePattern:
    positions: frozenset[tuple[int, int]]

    @classmethod
    def of(cls, cells: Iterable[tuple[int, int]]) -> ErasurePattern:
        cells = [(int(r), int(c)) for r, c in cells]
        if len(set(cells)) != len(cells):
            raise ValueError(f"duplicate erasure coordinates in {sorted(cells)}")
        return cls(frozenset(cells))

    @classmethod
    def from_mask(cls, mask: np.ndarray) -> ErasurePattern:
        return cls(frozenset((int(r), int(c)) for r, c in zip(*np.nonzero(mask))))

    def __len__(self):
        return len(self.positions)

    def __iter__(self):
        return iter(sorted(self.positions))

    def __str__(self):
        return ";".join(f"{r},{c}" for r, c in self)

    def check_bounds(self, m: int, n: int) -> None:
        for r, c in self.positions:
            if not (0 <= r < m and 0 <= c < n):
                raise ValueError(f"erasure ({r}, {c}) outside a {m}x{n} array")

    def mask(self, m: int, n: int) -> np.ndarray:
        self.check_bounds(m, n)
        out = np.zeros((m, n), dtype=bool)
        for r, c in self.positions:
            out[r, c] = True
        return out

    def row_counts(self, m: int) -> list[int]:
        counts = [0] * m
        for r, _ in self.positions:
            counts[r] += 1
        return counts

    def cols_in_row(self, row: int) -> tuple[int, ...]:
        return tuple(sorted(c for r, c in self.positions if r == row))


class PatternKind(enum.Enum):
    ROW_PARITY_ONLY = "RowParityOnly"
    ONE_HEAVY_ROW = "OneHeavyRow"
    TWO_HEAVY_ROWS = "TwoHeavyRows"
    BEYOND_CAPABILITY = "BeyondCapability"


@dataclass(frozen=True)
class Classification:
    kind: PatternKind
    heavy: tuple[tuple[int, tuple[int, ...]], ...] = ()


def classify(pattern: ErasurePattern, params: CodeParams) -> Classification:
    pattern.check_bounds(params.m, params.n)
    counts = pattern.row_counts(params.m)
    heavy = tuple((i, pattern.cols_in_row(i)) for i, e in enumerate(counts) if e >= 2)
    sizes = sorted(len(cols) for _, cols in heavy)
    if not heavy:
        return Classification(PatternKind.ROW_PARITY_ONLY)
    if sizes in ([2], [3]):
        return Classification(PatternKind.ONE_HEAVY_ROW, heavy)
    if sizes == [2, 2]:
        return Classification(PatternKind.TWO_HEAVY_ROWS, heavy)
    return Classification(PatternKind.BEYOND_CAPABILITY, heavy)


@dataclass(frozen=True)
class Syndromes:
    row_syndromes: tuple
    global1: object
    global2: object

    def is_zero(self) -> bool:
        return all(not np.any(s) for s in (*self.row_syndromes, self.global1, self.global2))


@dataclass(frozen=True, eq=False)
class StripeArray:
    params: CodeParams
    cells: np.ndarray
    erased: np.ndarray

    def __post_init__(self):
        shape = (self.params.m, self.params.n)
        if self.cells.shape != shape or self.erased.shape != shape:
            raise ValueError(f"stripe arrays must have shape {shape}")

    @classmethod
    def from_cells(cls, params: CodeParams, cells, erased=None) -> StripeArray:
        arr = np.array(cells, dtype=params.algebra.array_dtype()).reshape(params.m, params.n)
        for a in arr.flat:
            params.algebra.check(a)
        mask = np.zeros(arr.shape, dtype=bool) if erased is None else np.array(erased, dtype=bool)
        return cls(params, arr, mask)

    def erase(self, pattern: ErasurePattern) -> StripeArray:
        mask = self.erased | pattern.mask(self.params.m, self.params.n)
        cells = self.cells.copy()
        cells[mask] = 0
        return StripeArray(self.params, cells, mask)

    @property
    def pattern(self) -> ErasurePattern:
        return ErasurePattern.from_mask(self.erased)

    def flat(self) -> list[int]:
        return [int(a) for a in self.cells.flat]

    def __eq__(self, other):
        if not isinstance(other, StripeArray):
            return NotImplemented
        return (self.params == other.params
                and np.array_equal(self.erased, other.erased)
                and np.array_equal(self.cells[~self.erased], other.cells[~other.erased]))


def parity_positions(params: CodeParams) -> ErasurePattern:
    """Row parity in column n-1 of every row, global parity at (0, n-3) and (0, n-2)."""
    if params.n < 4 and params.m == 1 or params.n < 3:
        raise ParameterViolation(f"n={params.n} cannot host three parities in row 0")
    cells = {(i, params.n - 1) for i in range(params.m)}
    cells |= {(0, params.n - 3), (0, params.n - 2)}
    return ErasurePattern(frozenset(cells))


def data_positions(params: CodeParams) -> list[tuple[int, int]]:
    parity = parity_positions(params).positions
    return [(i, j) for i in range(params.m) for j in range(params.n) if (i, j) not in parity]


# -- batch core ---------------------------------------------------------------

def _xor_rows(values: np.ndarray) -> np.ndarray:
    return np.bitwise_xor.reduce(values, axis=0)


def global_syndromes(params: CodeParams, cells: np.ndarray, known: np.ndarray):
    """Sums of alpha^g1 * cell and alpha^g2 * cell over known cells."""
    alg = params.algebra
    s1 = np.zeros(cells.shape[2:], dtype=cells.dtype)
    s2 = np.zeros(cells.shape[2:], dtype=cells.dtype)
    for i in range(params.m):
        for j in range(params.n):
            if known[i, j]:
                g1, g2 = params.exponents(i, j)
                s1 = s1 ^ alg.scale(alg.alpha_pow(g1), cells[i, j])
                s2 = s2 ^ alg.scale(alg.alpha_pow(g2), cells[i, j])
    return s1, s2


def decode_cells(params: CodeParams, erased: np.ndarray, cells: np.ndarray) -> np.ndarray:
    """Recover erased cells of one or many stripes sharing the mask ``erased``.

    ``cells`` has shape (m, n) or (m, n, B). Returns a new array; erased
    inputs are never read.
    """
    batched = cells.ndim == 3
    work = np.array(cells if batched else cells[..., None], copy=True)
    erased = np.asarray(erased, dtype=bool)
    work[erased] = 0
    pattern = ErasurePattern.from_mask(erased)
    verdict = classify(pattern, params)
    if verdict.kind is PatternKind.BEYOND_CAPABILITY:
        raise DecodeFailure(FailureKind.BEYOND_CAPABILITY, pattern)

    known = ~erased
    for i in range(params.m):
        cols = np.flatnonzero(erased[i])
        if len(cols) == 1:
            work[i, cols[0]] = _xor_rows(work[i])
            known[i, cols[0]] = True

    if verdict.heavy:
        _solve_heavy(params, verdict.heavy, work, known, pattern)
    return work if batched else work[..., 0]


def _solve_heavy(params, heavy, work, known, pattern) -> None:
    alg: AlgebraSpec = params.algebra
    apow = alg.alpha_pow
    s1, s2 = global_syndromes(params, work, known)
    row_sums = {i: _xor_rows(work[i]) for i, _ in heavy}

    if len(heavy) == 1 and len(heavy[0][1]) == 2:
        # x_a + x_b = R and alpha^g1a x_a + alpha^g1b x_b = S1
        i, (a, b) = heavy[0]
        g1a, g1b = params.exponents(i, a)[0], params.exponents(i, b)[0]
        coef = apow(g1a) ^ apow(g1b)
        xb = alg.scale(alg.inv(coef), s1 ^ alg.scale(apow(g1a), row_sums[i]))
        work[i, b] = xb
        work[i, a] = row_sums[i] ^ xb
        return

    # One anchor cell per heavy row is eliminated through row parity; the
    # two remaining unknowns form a 2x2 system over the global rows.
    unknowns = []
    rhs1, rhs2 = s1, s2
    for i, cols in heavy:
        anchor = cols[0]
        ga1, ga2 = params.exponents(i, anchor)
        rhs1 = rhs1 ^ alg.scale(apow(ga1), row_sums[i])
        rhs2 = rhs2 ^ alg.scale(apow(ga2), row_sums[i])
        for c in cols[1:]:
            unknowns.append((i, anchor, c))

    # Column for cell c (anchor a) is (1 + alpha^(c-a)) * (alpha^g1(a), alpha^g2(c)).
    units, B = [], []
    for i, anchor, c in unknowns:
        units.append(apow(c - anchor) ^ 1)
        B.append((params.exponents(i, anchor)[0], params.exponents(i, c)[1]))
    (b11, b21), (b12, b22) = B
    e1, e2 = b11 + b22, b12 + b21
    D = apow(e1) ^ apow(e2)
    if not alg.is_unit(D):
        raise DecodeFailure(FailureKind.UNCORRECTABLE_PATTERN, pattern,
                            f"residual determinant alpha^{e1 % params.order} + alpha^{e2 % params.order} is not a unit")
    dinv = alg.inv(D)
    y1 = alg.scale(dinv, alg.scale(apow(b22), rhs1) ^ alg.scale(apow(b12), rhs2))
    y2 = alg.scale(dinv, alg.scale(apow(b11), rhs2) ^ alg.scale(apow(b21), rhs1))
    for (i, _, c), u, y in zip(unknowns, units, (y1, y2)):
        work[i, c] = alg.scale(alg.inv(u), y)
    for i, cols in heavy:
        work[i, cols[0]] = row_sums[i] ^ _xor_rows(work[i, list(cols[1:])])


def encode_cells(params: CodeParams, data: np.ndarray) -> np.ndarray:
    """Encode data of shape (k,) or (k, B) into cells of shape (m, n[, B])."""
    k = params.dimension
    data = np.asarray(data)
    if data.shape[0] != k:
        raise ValueError(f"expected {k} data symbols, got {data.shape[0]}")
    parity = parity_positions(params)
    mask = parity.mask(params.m, params.n)
    cells = np.zeros((params.m, params.n) + data.shape[1:], dtype=params.algebra.array_dtype())
    rows, cols = np.nonzero(~mask)
    cells[rows, cols] = data
    try:
        return decode_cells(params, mask, cells)
    except DecodeFailure as exc:  # pragma: no cover - parity layout is always correctable
        raise AssertionError(f"parity layout not correctable for {params}") from exc


# -- single-stripe API --------------------------------------------------------

def encode(data: Sequence[int], params: CodeParams) -> StripeArray:
    alg = params.algebra
    arr = np.array([alg.check(a) for a in data], dtype=alg.array_dtype())
    cells = encode_cells(params, arr)
    return StripeArray(params, cells, np.zeros(cells.shape, dtype=bool))


def syndromes(arr: StripeArray) -> Syndromes:
    params = arr.params
    known = ~arr.erased
    cells = np.where(known, arr.cells, 0).astype(arr.cells.dtype)[..., None]
    rows = tuple(int(_xor_rows(cells[i])[0]) for i in range(params.m))
    s1, s2 = global_syndromes(params, cells, known)
    return Syndromes(rows, int(s1[0]), int(s2[0]))


def decode(arr: StripeArray) -> StripeArray:
    cells = decode_cells(arr.params, arr.erased, arr.cells)
    return StripeArray(arr.params, cells, np.zeros(cells.shape, dtype=bool))


def random_data(params: CodeParams, rng: np.random.Generator, batch: int | None = None) -> np.ndarray:
    alg = params.algebra
    shape = (params.dimension,) if batch is None else (params.dimension, batch)
    if alg.bits <= 62:
        return rng.integers(0, alg.size, size=shape, dtype=np.int64)
    out = np.empty(shape, dtype=object)
    for idx in np.ndindex(shape):
        out[idx] = int.from_bytes(rng.bytes(alg.symbol_bytes), "little") & (alg.size - 1)
    return out


def random_codeword(params: CodeParams, rng: np.random.Generator) -> StripeArray:
    return encode([int(a) for a in random_data(params, rng)], params)
