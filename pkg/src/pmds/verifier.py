"""Exhaustive SD / PMDS verification by enumerating maximal erasure patterns.

Every enumerated pattern has exactly m+2 erasures: the heavy rows carry
3 (one row) or 2+2 (two rows) erasures and every other row carries one.
A pattern is correctable iff the m+2 erased columns of H have full
column rank, so checking maximal patterns covers all their sub-patterns.
"""
from __future__ import annotations

import enum
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from itertools import combinations, product
from typing import Iterator

import numpy as np

from pmds.codec import DecodeFailure, ErasurePattern, decode, random_codeword
from pmds.construction import CodeParams, Variant, build_parity_check
from pmds.linalg import RankVerdict, rank_via_unit_pivots


class Property(enum.Enum):
    SD = "sd"
    PMDS = "pmds"


class Mode(enum.Enum):
    RANK_ORACLE = "rank"
    DECODER_PATH = "decode"


class BudgetExceeded(RuntimeError):
    pass


class InconclusiveRank(RuntimeError):
    def __init__(self, pattern: ErasurePattern):
        self.pattern = pattern
        super().__init__(f"ring rank inconclusive for pattern {pattern}")


# -- enumeration ----------------------------------------------------------------

def sd_pattern_count(m: int, n: int) -> int:
    return n * (m * math.comb(n - 1, 2) + math.comb(m, 2) * (n - 1) ** 2)


def pmds_pattern_count(m: int, n: int) -> int:
    one_row = m * math.comb(n, 3) * n ** (m - 1)
    two_rows = math.comb(m, 2) * math.comb(n, 2) ** 2 * n ** (m - 2) if m >= 2 else 0
    return one_row + two_rows


def enumerate_sd_patterns(m: int, n: int) -> Iterator[ErasurePattern]:
    """Full column l plus two extra cells, in one row or in two rows.

    Yields exactly ``sd_pattern_count(m, n)`` patterns. For m <= 2 some
    sets come out more than once (e.g. two full columns when m = 2).
    """
    for l in range(n):
        column = {(i, l) for i in range(m)}
        others = [c for c in range(n) if c != l]
        for i in range(m):
            for a, b in combinations(others, 2):
                yield ErasurePattern(frozenset(column | {(i, a), (i, b)}))
        for i1, i2 in combinations(range(m), 2):
            for c1, c2 in product(others, repeat=2):
                yield ErasurePattern(frozenset(column | {(i1, c1), (i2, c2)}))


def enumerate_pmds_patterns(m: int, n: int) -> Iterator[ErasurePattern]:
    """Three cells in one row or two cells in each of two rows, one cell elsewhere."""
    for i in range(m):
        rest_rows = [r for r in range(m) if r != i]
        for triple in combinations(range(n), 3):
            heavy = {(i, c) for c in triple}
            for rest in product(range(n), repeat=m - 1):
                yield ErasurePattern(frozenset(heavy | set(zip(rest_rows, rest))))
    for i1, i2 in combinations(range(m), 2):
        rest_rows = [r for r in range(m) if r not in (i1, i2)]
        for p1, p2 in product(combinations(range(n), 2), repeat=2):
            heavy = {(i1, c) for c in p1} | {(i2, c) for c in p2}
            for rest in product(range(n), repeat=m - 2):
                yield ErasurePattern(frozenset(heavy | set(zip(rest_rows, rest))))


def pattern_count(prop: Property, m: int, n: int) -> int:
    return sd_pattern_count(m, n) if prop is Property.SD else pmds_pattern_count(m, n)


def enumerate_patterns(prop: Property, m: int, n: int) -> Iterator[ErasurePattern]:
    return enumerate_sd_patterns(m, n) if prop is Property.SD else enumerate_pmds_patterns(m, n)


def sample_pattern(prop: Property, m: int, n: int, rng: np.random.Generator) -> ErasurePattern:
    """Draw uniformly from the same multiset the enumerator yields."""
    if prop is Property.SD:
        l = int(rng.integers(n))
        others = [c for c in range(n) if c != l]
        cells = {(i, l) for i in range(m)}
        one_row = m * math.comb(n - 1, 2)
        if rng.integers(one_row + math.comb(m, 2) * (n - 1) ** 2) < one_row:
            i = int(rng.integers(m))
            cells |= {(i, int(c)) for c in rng.choice(others, size=2, replace=False)}
        else:
            i1, i2 = (int(r) for r in rng.choice(m, size=2, replace=False))
            cells |= {(i1, int(rng.choice(others))), (i2, int(rng.choice(others)))}
        return ErasurePattern(frozenset(cells))

    one_row = m * math.comb(n, 3) * n ** (m - 1)
    if rng.integers(pmds_pattern_count(m, n)) < one_row:
        heavy_rows = {int(rng.integers(m)): 3}
    else:
        i1, i2 = (int(r) for r in rng.choice(m, size=2, replace=False))
        heavy_rows = {i1: 2, i2: 2}
    cells = set()
    for i in range(m):
        k = heavy_rows.get(i, 1)
        cells |= {(i, int(c)) for c in rng.choice(n, size=k, replace=False)}
    return ErasurePattern(frozenset(cells))


# -- verification ---------------------------------------------------------------

@dataclass
class VerificationReport:
    params: CodeParams
    property: Property
    mode: Mode
    patterns_checked: int
    failures: list[ErasurePattern] = field(default_factory=list)
    elapsed: float = 0.0

    @property
    def passed(self) -> bool:
        return not self.failures

    def format(self) -> str:
        p = self.params
        head = (f"{'PASS' if self.passed else 'FAIL'} property={self.property.value} "
                f"mode={self.mode.value} variant={p.variant.name} m={p.m} n={p.n} "
                f"algebra={p.algebra} patterns={self.patterns_checked} "
                f"failures={len(self.failures)} elapsed={self.elapsed:.3f}s")
        return "\n".join([head] + [f"FAIL {f}" for f in self.failures])


_H_CACHE: dict = {}


def _parity_check(params: CodeParams):
    H = _H_CACHE.get(params)
    if H is None:
        H = _H_CACHE[params] = build_parity_check(params).matrix
    return H


def is_correctable_rank(params: CodeParams, pattern: ErasurePattern) -> bool:
    """Rank oracle: erased columns of H have full column rank."""
    H = _parity_check(params)
    cols = [r * params.n + c for r, c in pattern]
    _, verdict = rank_via_unit_pivots(H.columns(cols))
    if verdict is RankVerdict.INCONCLUSIVE:
        raise InconclusiveRank(pattern)
    return verdict is RankVerdict.FULL_COLUMN_RANK


def is_correctable_decode(params: CodeParams, pattern: ErasurePattern, rng: np.random.Generator) -> bool:
    """Decoder path: plant a random codeword, erase, and demand exact recovery."""
    word = random_codeword(params, rng)
    try:
        return decode(word.erase(pattern)) == word
    except DecodeFailure:
        return False


def _check_chunk(params: CodeParams, mode: Mode, seed: int, start: int, patterns: list) -> list[int]:
    bad = []
    for k, pattern in enumerate(patterns, start):
        if mode is Mode.RANK_ORACLE:
            ok = is_correctable_rank(params, pattern)
        else:
            ok = is_correctable_decode(params, pattern, np.random.default_rng([seed, k]))
        if not ok:
            bad.append(k)
    return bad


def verify(params: CodeParams, prop: Property, mode: Mode = Mode.RANK_ORACLE, *,
           budget: int = 10 ** 7, jobs: int = 1, seed: int = 0) -> VerificationReport:
    count = pattern_count(prop, params.m, params.n)
    if count > budget:
        raise BudgetExceeded(f"{count} patterns exceed the budget of {budget}")
    start = time.perf_counter()
    patterns = list(enumerate_patterns(prop, params.m, params.n))
    if jobs <= 1:
        bad = _check_chunk(params, mode, seed, 0, patterns)
    else:
        size = max(1, -(-len(patterns) // (4 * jobs)))
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            futures = [pool.submit(_check_chunk, params, mode, seed, s, patterns[s:s + size])
                       for s in range(0, len(patterns), size)]
            bad = sorted(k for f in futures for k in f.result())
    return VerificationReport(params, prop, mode, len(patterns),
                              [patterns[k] for k in bad], time.perf_counter() - start)


def find_sd_pmds_separator(params: CodeParams) -> ErasurePattern | None:
    """First 2+2 pattern on disjoint columns that C0 cannot correct.

    Two rows ``ell`` apart with columns {i, j} and {i', j'} fail exactly when
    ell*n = i' + j' - i - j modulo the order of alpha.
    """
    if params.variant is not Variant.SD_C0:
        raise ValueError("the separator search applies to the SD_C0 construction only")
    m, n, order = params.m, params.n, params.order
    pairs = list(combinations(range(n), 2))
    for ell in range(1, m):
        for i, j in pairs:
            for i2, j2 in pairs:
                if {i, j} & {i2, j2}:
                    continue
                if (ell * n - (i2 + j2 - i - j)) % order == 0:
                    pattern = ErasurePattern(frozenset({(0, i), (0, j), (ell, i2), (ell, j2)}))
                    if is_correctable_rank(params, pattern):
                        raise AssertionError(f"rank oracle disagrees on separator {pattern}")
                    return pattern
    return None
