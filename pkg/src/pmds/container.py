"""Device-file container: shard a byte stream over n simulated devices.

Every device file starts with the same 36-byte header, followed by column
j of each stripe (m symbols, top row first). Erasures are described by a
plain-text sidecar of ``stripe,row,col`` and ``device,j`` lines; a missing
device file counts as an erased device.
"""
from __future__ import annotations

import struct
from collections import defaultdict
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable

import numpy as np

from pmds.algebra import AlgebraKind, AlgebraSpec
from pmds.codec import (DecodeFailure, ErasurePattern, data_positions, decode_cells,
                        encode_cells)
from pmds.construction import CodeParams, Variant
from pmds.verifier import Property, sample_pattern

MAGIC = b"PMDSAR1\0"
VERSION = 1
HEADER = struct.Struct("<8sHBBIIHHIQ")
SIDECAR_NAME = "erasures.txt"
BATCH = 1 << 15


class ContainerError(ValueError):
    pass


class HeaderMismatch(ContainerError):
    pass


class StripeDecodeFailure(Exception):
    def __init__(self, stripe: int, failure: DecodeFailure):
        self.stripe = stripe
        self.failure = failure
        super().__init__(f"stripe {stripe}: {failure}")


@dataclass(frozen=True)
class ContainerHeader:
    params: CodeParams
    stripe_count: int
    payload_length: int

    def pack(self) -> bytes:
        alg = self.params.algebra
        return HEADER.pack(
            MAGIC, VERSION, int(self.params.variant), int(alg.kind),
            alg.b if alg.is_field else alg.p, alg.modulus if alg.is_field else 0,
            self.params.m, self.params.n, self.stripe_count, self.payload_length,
        )

    @classmethod
    def unpack(cls, raw: bytes) -> ContainerHeader:
        if len(raw) < HEADER.size:
            raise ContainerError("truncated header")
        magic, version, variant, kind, param, modulus, m, n, stripes, length = HEADER.unpack(raw[:HEADER.size])
        if magic != MAGIC:
            raise ContainerError(f"bad magic {magic!r}")
        if version != VERSION:
            raise ContainerError(f"unsupported version {version}")
        try:
            kind = AlgebraKind(kind)
            if kind is AlgebraKind.FIELD:
                alg = AlgebraSpec.field(param, modulus)
            elif modulus:
                raise ValueError("ring header carries a nonzero modulus")
            else:
                alg = AlgebraSpec.ring(param)
            params = CodeParams(m, n, Variant(variant), alg)
        except ValueError as exc:
            raise ContainerError(f"invalid code parameters in header: {exc}") from None
        return cls(params, stripes, length)

    @property
    def device_size(self) -> int:
        return HEADER.size + self.stripe_count * self.params.m * self.params.algebra.symbol_bytes


def device_path(directory: Path, j: int) -> Path:
    return Path(directory) / f"device_{j:03d}.bin"


# -- bit and symbol packing ---------------------------------------------------------

def _bits_to_symbols(bits: np.ndarray, width: int, alg: AlgebraSpec) -> np.ndarray:
    if alg.array_dtype() is object:
        flat = bits.reshape(-1, width)
        out = np.empty(len(flat), dtype=object)
        for k, row in enumerate(flat):
            out[k] = int.from_bytes(np.packbits(row, bitorder="little").tobytes(), "little")
        return out.reshape(bits.shape[:-1])
    weights = np.left_shift(np.int64(1), np.arange(width, dtype=np.int64))
    return (bits.astype(np.int64) * weights).sum(axis=-1)


def _symbols_to_bits(symbols: np.ndarray, width: int) -> np.ndarray:
    if symbols.dtype == object:
        nbytes = (width + 7) // 8
        raw = np.frombuffer(b"".join(int(s).to_bytes(nbytes, "little") for s in symbols.flat), dtype=np.uint8)
        bits = np.unpackbits(raw, bitorder="little").reshape(-1, nbytes * 8)[:, :width]
        return bits.reshape(symbols.shape + (width,))
    return ((symbols[..., None] >> np.arange(width)) & 1).astype(np.uint8)


def symbols_to_bytes(symbols: np.ndarray, alg: AlgebraSpec) -> bytes:
    sb = alg.symbol_bytes
    if symbols.dtype == object:
        return b"".join(alg.to_bytes(int(s)) for s in symbols.flat)
    raw = np.ascontiguousarray(symbols, dtype="<u8").view(np.uint8).reshape(-1, 8)
    return raw[:, :sb].tobytes()


def bytes_to_symbols(raw: bytes, alg: AlgebraSpec) -> np.ndarray:
    sb = alg.symbol_bytes
    if alg.array_dtype() is object:
        out = np.empty(len(raw) // sb, dtype=object)
        for k in range(len(out)):
            out[k] = alg.from_bytes(raw[k * sb:(k + 1) * sb])
        return out
    buf = np.zeros((len(raw) // sb, 8), dtype=np.uint8)
    buf[:, :sb] = np.frombuffer(raw, dtype=np.uint8).reshape(-1, sb)
    vals = buf.view("<u8").ravel().astype(np.int64)
    if np.any(vals >> alg.bits):
        raise ContainerError("nonzero pad bits in serialized symbol")
    return vals


# -- shard / unshard -------------------------------------------------------------------

def shard(data: bytes, params: CodeParams, out_dir) -> list[Path]:
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    alg = params.algebra
    width, k = alg.bits, params.dimension
    if k < 1:
        raise ContainerError("code has no data symbols")
    total_bits = 8 * len(data)
    stripe_bits = k * width
    stripes = -(-total_bits // stripe_bits)
    header = ContainerHeader(params, stripes, len(data)).pack()

    bits = np.unpackbits(np.frombuffer(data, dtype=np.uint8), bitorder="little")
    bits = np.concatenate([bits, np.zeros(stripes * stripe_bits - total_bits, dtype=np.uint8)])
    symbols = _bits_to_symbols(bits.reshape(stripes, k, width), width, alg)

    paths = [device_path(out_dir, j) for j in range(params.n)]
    files = [open(p, "wb") for p in paths]
    try:
        for f in files:
            f.write(header)
        for s in range(0, stripes, BATCH):
            cells = encode_cells(params, symbols[s:s + BATCH].T)  # (m, n, B)
            for j, f in enumerate(files):
                f.write(symbols_to_bytes(cells[:, j, :].T, alg))
    finally:
        for f in files:
            f.close()
    return paths


def parse_sidecar(text: str) -> tuple[set[int], dict[int, set[tuple[int, int]]]]:
    devices: set[int] = set()
    cells: dict[int, set[tuple[int, int]]] = defaultdict(set)
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        parts = [p.strip() for p in line.split(",")]
        try:
            if parts[0] == "device" and len(parts) == 2:
                devices.add(int(parts[1]))
            elif len(parts) == 3:
                s, r, c = (int(p) for p in parts)
                cells[s].add((r, c))
            else:
                raise ValueError
        except ValueError:
            raise ContainerError(f"sidecar line {lineno}: cannot parse {line!r}") from None
    return devices, dict(cells)


def read_header(directory) -> ContainerHeader:
    headers = {}
    for path in sorted(Path(directory).glob("device_*.bin")):
        with open(path, "rb") as f:
            headers[path] = f.read(HEADER.size)
    if not headers:
        raise ContainerError(f"no device files in {directory}")
    raws = set(headers.values())
    if len(raws) != 1:
        raise HeaderMismatch("device files carry different headers")
    return ContainerHeader.unpack(raws.pop())


def unshard(directory, sidecar: str | None = None) -> bytes:
    directory = Path(directory)
    header = read_header(directory)
    params = header.params
    alg, m, n, S = params.algebra, params.m, params.n, header.stripe_count
    dead, extra = parse_sidecar(sidecar) if sidecar else (set(), {})

    cells = np.zeros((S, m, n), dtype=alg.array_dtype())
    for j in range(n):
        path = device_path(directory, j)
        if not path.exists():
            dead.add(j)
            continue
        raw = path.read_bytes()
        if len(raw) != header.device_size:
            raise ContainerError(f"{path.name}: expected {header.device_size} bytes, found {len(raw)}")
        cells[:, :, j] = bytes_to_symbols(raw[HEADER.size:], alg).reshape(S, m)

    for j in dead:
        if not 0 <= j < n:
            raise ContainerError(f"device {j} out of range")
    base = np.zeros((m, n), dtype=bool)
    base[:, sorted(dead)] = True

    groups: dict[bytes, list[int]] = defaultdict(list)
    masks = {base.tobytes(): base}
    for s, extra_cells in extra.items():
        if not 0 <= s < S:
            raise ContainerError(f"stripe {s} out of range")
        mask = base | ErasurePattern.of(extra_cells).mask(m, n)
        masks.setdefault(mask.tobytes(), mask)
        groups[mask.tobytes()].append(s)
    in_groups = np.zeros(S, dtype=bool)
    in_groups[list(extra)] = True
    groups[base.tobytes()].extend(np.flatnonzero(~in_groups).tolist())

    for key, stripes in groups.items():
        mask = masks[key]
        if not mask.any() or not stripes:
            continue
        for lo in range(0, len(stripes), BATCH):
            idx = np.array(stripes[lo:lo + BATCH])
            try:
                fixed = decode_cells(params, mask, np.moveaxis(cells[idx], 0, -1))
            except DecodeFailure as exc:
                raise StripeDecodeFailure(int(idx[0]), exc) from None
            cells[idx] = np.moveaxis(fixed, -1, 0)

    rows, cols = zip(*data_positions(params))
    symbols = cells[:, list(rows), list(cols)]  # (S, k)
    bits = _symbols_to_bits(symbols, alg.bits).reshape(-1)
    return np.packbits(bits[:8 * header.payload_length], bitorder="little").tobytes()


# -- failure injection ----------------------------------------------------------------

def corrupt(directory, *, devices: Iterable[int] = (), cells: Iterable[tuple[int, int, int]] = (),
            random: int = 0, profile: str = "sd", seed: int = 0, zero_fill: bool = False,
            sidecar=None, append: bool = False) -> Path:
    """Record erasures in a sidecar file, optionally zeroing the bytes they cover."""
    directory = Path(directory)
    header = read_header(directory)
    params = header.params
    m, n, S = params.m, params.n, header.stripe_count
    devices = list(devices)
    cells = [tuple(c) for c in cells]
    for j in devices:
        if not 0 <= j < n:
            raise ContainerError(f"device {j} out of range 0..{n - 1}")
    for s, r, c in cells:
        if not (0 <= s < S and 0 <= r < m and 0 <= c < n):
            raise ContainerError(f"cell {s},{r},{c} out of range")
    if random:
        if random > S:
            raise ContainerError(f"cannot pick {random} of {S} stripes")
        rng = np.random.default_rng(seed)
        prop = Property(profile)
        for s in sorted(int(x) for x in rng.choice(S, size=random, replace=False)):
            cells.extend((s, r, c) for r, c in sample_pattern(prop, m, n, rng))

    lines = [f"device,{j}" for j in devices] + [f"{s},{r},{c}" for s, r, c in cells]
    path = Path(sidecar) if sidecar else directory / SIDECAR_NAME
    with open(path, "a" if append else "w") as f:
        f.writelines(line + "\n" for line in lines)

    if zero_fill:
        sb = params.algebra.symbol_bytes
        for j in devices:
            p = device_path(directory, j)
            if p.exists():
                with open(p, "r+b") as f:
                    f.seek(HEADER.size)
                    f.write(bytes(header.device_size - HEADER.size))
        for s, r, c in cells:
            p = device_path(directory, c)
            if p.exists():
                with open(p, "r+b") as f:
                    f.seek(HEADER.size + (s * m + r) * sb)
                    f.write(bytes(sb))
    return path
