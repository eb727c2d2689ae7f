import struct

import numpy as np
import pytest

from pmds.algebra import AlgebraSpec
from pmds.construction import CodeParams, Variant
from pmds.container import (HEADER, MAGIC, ContainerError, ContainerHeader, HeaderMismatch,
                            StripeDecodeFailure, bytes_to_symbols, corrupt, device_path,
                            parse_sidecar, read_header, shard, symbols_to_bytes, unshard)

R17 = AlgebraSpec.ring(17)
C0_44R = CodeParams(4, 4, Variant.SD_C0, R17)
C1_35_GF7 = CodeParams(3, 5, Variant.PMDS_C1, AlgebraSpec.field(7))


def test_header_layout():
    raw = ContainerHeader(C0_44R, 3, 57).pack()
    assert len(raw) == HEADER.size == 36
    assert raw[:8] == b"PMDSAR1\0"
    fields = struct.unpack("<8sHBBIIHHIQ", raw)
    assert fields[1:] == (1, 0, 1, 17, 0, 4, 4, 3, 57)
    gf = ContainerHeader(C1_35_GF7, 0, 0).pack()
    assert struct.unpack("<8sHBBIIHHIQ", gf)[2:6] == (1, 0, 7, 0x83)


@pytest.mark.parametrize("offset,value", [
    (0, b"X"), (8, b"\x02"), (10, b"\x07"), (11, b"\x05"), (12, b"\x10"), (16, b"\x01"), (20, b"\x00"),
])
def test_header_mutations_rejected(offset, value):
    raw = bytearray(ContainerHeader(C0_44R, 1, 20).pack())
    raw[offset:offset + len(value)] = value
    with pytest.raises(ContainerError):
        ContainerHeader.unpack(bytes(raw))


def test_header_roundtrip():
    h = ContainerHeader(C1_35_GF7, 12, 345)
    assert ContainerHeader.unpack(h.pack()) == h


@pytest.mark.parametrize("alg", [R17, AlgebraSpec.field(7), AlgebraSpec.field(12), AlgebraSpec.ring(67)], ids=str)
def test_symbol_array_serialization(alg):
    rng = np.random.default_rng(1)
    vals = [int.from_bytes(rng.bytes(alg.symbol_bytes), "little") & (alg.size - 1) for _ in range(40)]
    arr = np.array(vals, dtype=alg.array_dtype())
    raw = symbols_to_bytes(arr, alg)
    assert raw == b"".join(alg.to_bytes(v) for v in vals)
    assert [int(v) for v in bytes_to_symbols(raw, alg)] == vals


def test_pad_bits_rejected():
    with pytest.raises(ContainerError):
        bytes_to_symbols(b"\x80\x01", AlgebraSpec.field(7))


def test_empty_input(tmp_path):
    paths = shard(b"", C0_44R, tmp_path)
    assert len(paths) == 4
    assert all(p.stat().st_size == HEADER.size for p in paths)
    assert read_header(tmp_path).stripe_count == 0
    assert unshard(tmp_path) == b""


def test_exactly_one_payload(tmp_path):
    # 10 data symbols of 16 bits
    data = bytes(range(20))
    shard(data, C0_44R, tmp_path)
    header = read_header(tmp_path)
    assert header.stripe_count == 1
    assert device_path(tmp_path, 0).stat().st_size == HEADER.size + 4 * 2
    assert unshard(tmp_path) == data


@pytest.mark.parametrize("params", [C0_44R, C1_35_GF7, CodeParams(2, 4, Variant.PMDS_C1, AlgebraSpec.ring(67))], ids=str)
@pytest.mark.parametrize("length", [1, 19, 21, 1000])
def test_roundtrip_odd_lengths(tmp_path, params, length):
    data = np.random.default_rng(length).bytes(length)
    shard(data, params, tmp_path)
    assert unshard(tmp_path) == data


def test_headers_identical_across_devices(tmp_path):
    shard(b"hello world" * 50, C0_44R, tmp_path)
    heads = {device_path(tmp_path, j).read_bytes()[:HEADER.size] for j in range(4)}
    assert len(heads) == 1


def test_whole_device_loss(tmp_path):
    data = np.random.default_rng(2).bytes(5000)
    shard(data, C0_44R, tmp_path)
    device_path(tmp_path, 2).unlink()
    assert unshard(tmp_path) == data


def test_device_loss_plus_sectors(tmp_path):
    data = np.random.default_rng(3).bytes(5000)
    shard(data, C0_44R, tmp_path)
    device_path(tmp_path, 1).unlink()
    side = corrupt(tmp_path, cells=[(0, 1, 0), (0, 3, 3), (7, 0, 2), (7, 2, 0)], zero_fill=True)
    assert unshard(tmp_path, side.read_text()) == data


def test_uncorrectable_stripe_reported(tmp_path):
    data = np.random.default_rng(4).bytes(5000)
    shard(data, C0_44R, tmp_path)
    side = corrupt(tmp_path, cells=[(5, 0, 0), (5, 0, 1), (5, 1, 2), (5, 1, 3)])
    with pytest.raises(StripeDecodeFailure) as info:
        unshard(tmp_path, side.read_text())
    assert info.value.stripe == 5


def test_header_mismatch(tmp_path):
    shard(b"abc" * 100, C0_44R, tmp_path)
    p = device_path(tmp_path, 3)
    raw = bytearray(p.read_bytes())
    raw[28] ^= 1  # stripe_count
    p.write_bytes(bytes(raw))
    with pytest.raises(HeaderMismatch):
        unshard(tmp_path)


def test_truncated_device_rejected(tmp_path):
    shard(b"abc" * 100, C0_44R, tmp_path)
    p = device_path(tmp_path, 0)
    p.write_bytes(p.read_bytes()[:-1])
    with pytest.raises(ContainerError):
        unshard(tmp_path)


def test_sidecar_parse():
    devices, cells = parse_sidecar("device,2\n# comment\n\n3,1,0\n3,2,4\n")
    assert devices == {2}
    assert cells == {3: {(1, 0), (2, 4)}}
    with pytest.raises(ContainerError):
        parse_sidecar("1,2\n")


def test_corrupt_device_line(tmp_path):
    shard(b"x" * 200, C0_44R, tmp_path)
    side = corrupt(tmp_path, devices=[2])
    assert side.read_text() == "device,2\n"


def test_corrupt_figure_left_lines(tmp_path):
    params = CodeParams(4, 5, Variant.PMDS_C1, AlgebraSpec.field(6))
    data = np.random.default_rng(5).bytes(300)
    shard(data, params, tmp_path)
    side = corrupt(tmp_path, cells=[(0, 1, 0), (0, 1, 2), (0, 3, 1), (0, 3, 4)], zero_fill=True)
    assert side.read_text().splitlines() == ["0,1,0", "0,1,2", "0,3,1", "0,3,4"]
    assert unshard(tmp_path, side.read_text()) == data


def test_corrupt_zero_fill_writes_zeros(tmp_path):
    shard(np.random.default_rng(6).bytes(400), C0_44R, tmp_path)
    corrupt(tmp_path, cells=[(2, 3, 1)], zero_fill=True)
    raw = device_path(tmp_path, 1).read_bytes()
    off = HEADER.size + (2 * 4 + 3) * 2
    assert raw[off:off + 2] == b"\0\0"


def test_corrupt_random_deterministic(tmp_path):
    shard(np.random.default_rng(7).bytes(4000), C0_44R, tmp_path)
    a = corrupt(tmp_path, random=5, profile="sd", seed=42, sidecar=tmp_path / "a.txt").read_text()
    b = corrupt(tmp_path, random=5, profile="sd", seed=42, sidecar=tmp_path / "b.txt").read_text()
    assert a == b and len(a.splitlines()) == 5 * 6


def test_corrupt_random_sd_profile_recovers(tmp_path):
    data = np.random.default_rng(8).bytes(4000)
    shard(data, C0_44R, tmp_path)
    side = corrupt(tmp_path, random=20, profile="sd", seed=1, zero_fill=True)
    assert unshard(tmp_path, side.read_text()) == data


def test_corrupt_out_of_range(tmp_path):
    shard(b"x" * 200, C0_44R, tmp_path)
    with pytest.raises(ContainerError):
        corrupt(tmp_path, cells=[(0, 4, 0)])
    with pytest.raises(ContainerError):
        corrupt(tmp_path, devices=[4])


def test_magic_constant():
    assert MAGIC == b"PMDSAR1\x00" and len(MAGIC) == 8
