"""Parity-check matrices of the SD code C0 and the PMDS code C1.

Both codes have an (m+2) x mn parity-check matrix: m row-parity rows
(block indicator per stripe row) and two global rows of powers of alpha.
Column ``i*n + j`` belongs to stripe cell (i, j).
"""
from __future__ import annotations

import enum
from dataclasses import dataclass

from pmds.algebra import AlgebraSpec
from pmds.linalg import AlgMatrix


class ParameterViolation(ValueError):
    """Code parameters outside what the construction supports."""


class Variant(enum.IntEnum):
    SD_C0 = 0
    PMDS_C1 = 1

    @classmethod
    def parse(cls, text: str) -> Variant:
        try:
            return {"sd": cls.SD_C0, "pmds": cls.PMDS_C1}[text.lower()]
        except KeyError:
            raise ValueError(f"unknown variant {text!r}; expected sd or pmds") from None


@dataclass(frozen=True)
class CodeParams:
    m: int
    n: int
    variant: Variant
    algebra: AlgebraSpec

    def __post_init__(self):
        if self.m < 1 or self.n < 2:
            raise ParameterViolation(f"need m >= 1 and n >= 2, got m={self.m}, n={self.n}")
        order = self.algebra.order_of_alpha()
        span = self.m * self.n * (1 if self.variant is Variant.SD_C0 else 2)
        if span > order:
            need = "mn" if self.variant is Variant.SD_C0 else "2mn"
            raise ParameterViolation(f"{need} = {span} exceeds the order {order} of alpha in {self.algebra}")

    def __str__(self):
        return f"{self.variant.name}({self.m},{self.n};{self.algebra})"

    @property
    def length(self) -> int:
        return self.m * self.n

    @property
    def dimension(self) -> int:
        return self.m * (self.n - 1) - 2

    @property
    def order(self) -> int:
        return self.algebra.order_of_alpha()

    def exponents(self, i: int, j: int) -> tuple[int, int]:
        return global_exponents(self.variant, i, j, self.m, self.n, self.order)


def global_exponents(variant: Variant, i: int, j: int, m: int, n: int, order: int) -> tuple[int, int]:
    """Exponents (g1, g2) of the two global-row entries at block i, offset j."""
    if not (0 <= i < m and 0 <= j < n):
        raise IndexError(f"cell ({i}, {j}) outside a {m}x{n} array")
    if variant is Variant.SD_C0:
        return (i * n + j) % order, (2 * i * n - j) % order
    return (2 * i * n + j) % order, (4 * i * n - j) % order


@dataclass(frozen=True)
class ParityCheckMatrix:
    params: CodeParams
    matrix: AlgMatrix
    g1: tuple[tuple[int, ...], ...]
    g2: tuple[tuple[int, ...], ...]

    def exponent_rows(self) -> list[list[int | None]]:
        """Matrix rows as exponents of alpha, None standing for zero."""
        m, n = self.params.m, self.params.n
        rows: list[list[int | None]] = [
            [0 if col // n == i else None for col in range(m * n)] for i in range(m)
        ]
        rows.append([e for block in self.g1 for e in block])
        rows.append([e for block in self.g2 for e in block])
        return rows

    def format(self) -> str:
        return "\n".join(" ".join(_fmt(e) for e in row) for row in self.exponent_rows())


def _fmt(e: int | None) -> str:
    if e is None:
        return "0"
    return "1" if e == 0 else f"a^{e}"


def build_parity_check(params: CodeParams) -> ParityCheckMatrix:
    m, n, alg = params.m, params.n, params.algebra
    g1 = tuple(tuple(params.exponents(i, j)[0] for j in range(n)) for i in range(m))
    g2 = tuple(tuple(params.exponents(i, j)[1] for j in range(n)) for i in range(m))
    rows = [[1 if col // n == i else 0 for col in range(m * n)] for i in range(m)]
    rows.append([alg.alpha_pow(e) for block in g1 for e in block])
    rows.append([alg.alpha_pow(e) for block in g2 for e in block])
    return ParityCheckMatrix(params, AlgMatrix.from_rows(alg, rows), g1, g2)


def effective_block(params: CodeParams, i: int) -> list[tuple[int, ...]]:
    """The n columns (each of length m+2) of block i."""
    if not 0 <= i < params.m:
        raise IndexError(f"block {i} outside 0..{params.m - 1}")
    alg = params.algebra
    cols = []
    for j in range(params.n):
        g1, g2 = params.exponents(i, j)
        indicator = tuple(int(k == i) for k in range(params.m))
        cols.append(indicator + (alg.alpha_pow(g1), alg.alpha_pow(g2)))
    return cols
