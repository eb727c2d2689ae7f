"""Symbol algebras: GF(2^b) and the Blaum-Roth ring GF(2)[x]/(M_p(x)).

Symbols are plain non-negative ints; bit k is the coefficient of x^k.
Field symbols have degree < b, ring symbols degree <= p - 2 (reduced
modulo M_p(x) = 1 + x + ... + x^(p-1)), so equality is an int compare.

Array-valued operands (numpy integer or object arrays) are accepted by
:meth:`AlgebraSpec.add` and :meth:`AlgebraSpec.scale`; this is what lets
the codec process many stripes at once.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from dataclasses import field as dc_field

import numpy as np


class NotAUnit(ArithmeticError):
    """Raised when inverting a symbol that has no multiplicative inverse."""


class AlgebraKind(enum.IntEnum):
    FIELD = 0
    RING = 1


# Primitive modulus per bit width, so x generates the whole multiplicative group.
DEFAULT_MODULI = {
    4: 0x13,
    5: 0x25,
    6: 0x43,
    7: 0x83,
    8: 0x11D,
    9: 0x211,
    10: 0x409,
    11: 0x805,
    12: 0x1053,
    13: 0x201B,
    14: 0x4443,
    15: 0x8003,
    16: 0x1100B,
}

# Widest symbol for which per-constant lookup tables are built.
_TABLE_BITS = 16


# -- GF(2)[x] helpers on int bit-vectors ------------------------------------

def degree(a: int) -> int:
    return a.bit_length() - 1


def clmul(a: int, b: int) -> int:
    """Carryless product of two binary polynomials."""
    if a < b:
        a, b = b, a
    r = 0
    while b:
        if b & 1:
            r ^= a
        a <<= 1
        b >>= 1
    return r


def poly_divmod(a: int, b: int) -> tuple[int, int]:
    if b == 0:
        raise ZeroDivisionError("division by zero polynomial")
    q = 0
    db = degree(b)
    while a and degree(a) >= db:
        shift = degree(a) - db
        q |= 1 << shift
        a ^= b << shift
    return q, a


def poly_mod(a: int, b: int) -> int:
    return poly_divmod(a, b)[1]


def poly_gcd(a: int, b: int) -> int:
    while b:
        a, b = b, poly_mod(a, b)
    return a


def poly_egcd(a: int, b: int) -> tuple[int, int, int]:
    """Return (g, s, t) with s*a + t*b = g = gcd(a, b)."""
    r0, r1 = a, b
    s0, s1 = 1, 0
    t0, t1 = 0, 1
    while r1:
        q, r = poly_divmod(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, s0 ^ clmul(q, s1)
        t0, t1 = t1, t0 ^ clmul(q, t1)
    return r0, s0, t0


def is_irreducible(f: int) -> bool:
    """Trial division by every polynomial of degree 1..deg(f)//2."""
    d = degree(f)
    if d < 1:
        return False
    for g in range(2, 1 << (d // 2 + 1)):
        if poly_mod(f, g) == 0:
            return False
    return True


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    k = 2
    while k * k <= p:
        if p % k == 0:
            return False
        k += 1
    return True


def mp_poly(p: int) -> int:
    """M_p(x) = 1 + x + ... + x^(p-1) as a bit-vector."""
    return (1 << p) - 1


def mp_irreducibility_matches_primitivity(p: int) -> bool:
    """Self-test: M_p(x) is irreducible exactly when 2 is primitive mod p."""
    if not is_prime(p):
        raise ValueError(f"p={p} is not prime")
    order, v = 1, 2 % p
    while v != 1:
        v = v * 2 % p
        order += 1
    return is_irreducible(mp_poly(p)) == (order == p - 1)


# -- algebra ------------------------------------------------------------------

@dataclass(frozen=True)
class AlgebraSpec:
    """A symbol algebra: ``AlgebraSpec.field(b)`` or ``AlgebraSpec.ring(p)``.

    The distinguished element alpha is always the class of x.
    """

    kind: AlgebraKind
    b: int = 0
    modulus: int = 0
    p: int = 0
    _tables: dict = dc_field(default_factory=dict, init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        if self.kind is AlgebraKind.FIELD:
            if not 4 <= self.b <= 16:
                raise ValueError(f"field width b={self.b} outside 4..16")
            if degree(self.modulus) != self.b:
                raise ValueError(f"modulus {self.modulus:#x} does not have degree {self.b}")
            if not is_irreducible(self.modulus):
                raise ValueError(f"modulus {self.modulus:#x} is reducible")
        else:
            if not 3 <= self.p <= 257:
                raise ValueError(f"ring prime p={self.p} outside 3..257")
            if not is_prime(self.p):
                raise ValueError(f"p={self.p} is not prime")
        object.__setattr__(self, "_order", self._compute_order())

    @classmethod
    def field(cls, b: int, modulus: int | None = None) -> AlgebraSpec:
        if modulus is None:
            if b not in DEFAULT_MODULI:
                raise ValueError(f"no default modulus for b={b}")
            modulus = DEFAULT_MODULI[b]
        return cls(AlgebraKind.FIELD, b=b, modulus=modulus)

    @classmethod
    def ring(cls, p: int) -> AlgebraSpec:
        return cls(AlgebraKind.RING, p=p)

    @classmethod
    def parse(cls, text: str) -> AlgebraSpec:
        """Parse ``gf2:B[:MODULUS_HEX]`` or ``ring:P``."""
        parts = text.strip().lower().split(":")
        try:
            if parts[0] == "gf2" and len(parts) in (2, 3):
                modulus = int(parts[2], 16) if len(parts) == 3 else None
                return cls.field(int(parts[1]), modulus)
            if parts[0] == "ring" and len(parts) == 2:
                return cls.ring(int(parts[1]))
        except ValueError as exc:
            raise ValueError(f"bad algebra {text!r}: {exc}") from None
        raise ValueError(f"bad algebra {text!r}; expected gf2:B[:MODHEX] or ring:P")

    def __str__(self):
        if self.is_field:
            return f"gf2:{self.b}:{self.modulus:x}"
        return f"ring:{self.p}"

    @property
    def is_field(self) -> bool:
        return self.kind is AlgebraKind.FIELD

    @property
    def bits(self) -> int:
        """Coefficient count of a symbol."""
        return self.b if self.is_field else self.p - 1

    @property
    def symbol_bytes(self) -> int:
        return (self.bits + 7) // 8

    @property
    def size(self) -> int:
        return 1 << self.bits

    @property
    def zero(self) -> int:
        return 0

    @property
    def one(self) -> int:
        return 1

    def check(self, a) -> int:
        if not isinstance(a, (int, np.integer)) or a < 0 or a >> self.bits:
            raise ValueError(f"{a!r} is not a symbol of {self}")
        return int(a)

    # -- scalar arithmetic ---------------------------------------------------

    def reduce(self, a: int) -> int:
        """Canonical representative of an arbitrary binary polynomial."""
        if self.is_field:
            return poly_mod(a, self.modulus)
        p = self.p
        mask = (1 << p) - 1
        while a >> p:
            a = (a & mask) ^ (a >> p)
        if a >> (p - 1):
            a ^= mask
        return a

    def add(self, a, b):
        if isinstance(a, np.ndarray) or isinstance(b, np.ndarray):
            return np.bitwise_xor(a, b)
        return self.check(a) ^ self.check(b)

    def mul(self, a: int, b: int) -> int:
        return self.reduce(clmul(self.check(a), self.check(b)))

    def alpha_pow(self, k: int) -> int:
        k %= self._order
        if not self.is_field:
            return self.reduce(1 << k)
        result, base = 1, 2
        while k:
            if k & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            k >>= 1
        return result

    def order_of_alpha(self) -> int:
        return self._order

    def _compute_order(self) -> int:
        if not self.is_field:
            return self.p
        v, k = 2, 1
        while v != 1:
            v = poly_mod(v << 1, self.modulus)
            k += 1
        return k

    def is_unit(self, a: int) -> bool:
        a = self.check(a)
        if self.is_field:
            return a != 0
        return a != 0 and poly_gcd(mp_poly(self.p), a) == 1

    def inv(self, a: int) -> int:
        a = self.check(a)
        if not self.is_unit(a):
            raise NotAUnit(f"{a:#x} is not invertible in {self}")
        mod = self.modulus if self.is_field else mp_poly(self.p)
        _, s, _ = poly_egcd(a, mod)
        return self.reduce(s)

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    # -- vectorized scaling ----------------------------------------------------

    def scale(self, c: int, v):
        """c * v for a constant c and a symbol or array of symbols v."""
        if not isinstance(v, np.ndarray):
            return self.mul(c, v)
        if c == 0:
            return np.zeros_like(v)
        if c == 1:
            return v.copy()
        if self.bits <= _TABLE_BITS:
            return self._table(c)[v]
        return _frompy_mul(self, c)(v).astype(object)

    def _table(self, c: int) -> np.ndarray:
        table = self._tables.get(c)
        if table is None:
            table = np.zeros(self.size, dtype=np.int64)
            for k in range(self.bits):
                lo = 1 << k
                table[lo:2 * lo] = table[:lo] ^ self.mul(c, lo)
            self._tables[c] = table
        return table

    def array_dtype(self):
        """Numpy dtype able to hold symbols of this algebra."""
        return np.int64 if self.bits <= 62 else object

    # -- serialization -----------------------------------------------------------

    def to_bytes(self, a: int) -> bytes:
        return self.check(a).to_bytes(self.symbol_bytes, "little")

    def from_bytes(self, data: bytes) -> int:
        if len(data) != self.symbol_bytes:
            raise ValueError(f"expected {self.symbol_bytes} bytes, got {len(data)}")
        a = int.from_bytes(data, "little")
        if a >> self.bits:
            raise ValueError("nonzero pad bits in serialized symbol")
        return a


def _frompy_mul(alg: AlgebraSpec, c: int):
    return np.frompyfunc(lambda x: alg.mul(c, int(x)), 1, 1)
