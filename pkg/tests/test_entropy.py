import hashlib

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import golden_bytes
from mamcodec.container import read_container
from mamcodec.entropy import (
    AdaptiveByteModel,
    aac_decode,
    aac_encode,
    pack_bits,
    symbol_count,
    unpack_bits,
)
from mamcodec.errors import CorruptStreamError
from mamcodec.quantizer import LatentCode


def latent(n, values, shape=None):
    arr = np.asarray(values, np.uint16)
    if shape is None:
        shape = (1, 1, arr.size)
    return LatentCode(n, arr.reshape(shape))


class TestPackBits:
    def test_n2_example(self):
        assert pack_bits(latent(2, [3, 1, 0, 2])) == b"\xd2"

    def test_n12_example(self):
        assert pack_bits(latent(12, [0xABC, 0x123])) == b"\xab\xc1\x23"

    def test_n8_verbatim(self):
        values = np.arange(256, dtype=np.uint16)
        assert pack_bits(latent(8, values)) == bytes(range(256))

    def test_symbol_count_formula(self):
        rng = np.random.default_rng(0)
        for _ in range(50):
            c, k, m = (int(rng.integers(1, 20)) for _ in range(3))
            n = int(rng.integers(1, 17))
            values = rng.integers(0, 1 << n, (c, k, m)).astype(np.uint16)
            packed = pack_bits(LatentCode(n, values))
            assert len(packed) == symbol_count((c, k, m), n) == -(-(c * k * m * n) // 8)

    def test_row_major_channel_row_column_order(self):
        values = np.arange(8, dtype=np.uint16).reshape(2, 2, 2)
        # (channel, row, column) flattening is 0,1,2,3,4,5,6,7
        assert pack_bits(latent(8, values, shape=(2, 2, 2))) == bytes(range(8))


class TestUnpackBits:
    def test_n2_example(self):
        code = unpack_bits(b"\xd2", (1, 1, 4), 2)
        assert code.values.ravel().tolist() == [3, 1, 0, 2]

    def test_nonzero_padding_rejected(self):
        # 3 elements at n=2 use 6 bits; the last 2 must be zero.
        unpack_bits(b"\xd0", (1, 1, 3), 2)
        with pytest.raises(CorruptStreamError):
            unpack_bits(b"\xd1", (1, 1, 3), 2)

    def test_length_mismatch_rejected(self):
        with pytest.raises(CorruptStreamError):
            unpack_bits(b"\xd2\x00", (1, 1, 4), 2)

    def test_round_trip_random(self):
        rng = np.random.default_rng(42)
        for _ in range(1000):
            n = int(rng.integers(1, 17))
            shape = tuple(int(rng.integers(1, 9)) for _ in range(3))
            values = rng.integers(0, 1 << n, shape).astype(np.uint16)
            code = LatentCode(n, values)
            assert np.array_equal(
                unpack_bits(pack_bits(code), shape, n).values, values)


def skewed_stream(rng, length):
    symbols = rng.choice([7, 7, 7, 7, 7, 7, 7, 7, 7, 200], length)
    return symbols.astype(np.uint8).tobytes()


class TestArithmeticCoder:
    def test_empty_stream(self):
        assert aac_encode(b"") == b""
        assert aac_decode(b"", 0) == b""

    def test_golden_const_run(self, golden_manifest):
        # 1,000 copies of 0x41: length frozen from the reference coder.
        payload = aac_encode(b"\x41" * 1000)
        assert len(payload) == golden_manifest["const"]["payload_length"] == 114
        assert aac_decode(payload, 1000) == b"\x41" * 1000

    def test_random_round_trip_and_overhead(self, golden_manifest):
        data = golden_bytes("random", "sym")
        payload = aac_encode(data)
        # Frozen from the reference coder; adaptive order-0 learning costs
        # ~46 bytes over the in incompressible 4,096.
        assert len(payload) == golden_manifest["random"]["payload_length"] == 4142
        assert len(payload) <= 4096 + 64
        assert aac_decode(payload, 4096) == data

    @pytest.mark.parametrize("name", ["const", "random", "skewed"])
    def test_golden_bitstreams(self, name, golden_manifest):
        entry = golden_manifest[name]
        container = golden_bytes(name, "mamc")
        symbols = golden_bytes(name, "sym")
        header, payload = read_container(container)
        assert header.symbol_count == entry["symbol_count"]
        assert len(payload) == entry["payload_length"]
        assert hashlib.sha256(payload).hexdigest() == entry["payload_sha256"]
        assert aac_decode(payload, header.symbol_count) == symbols
        assert aac_encode(symbols) == payload

    def test_round_trip_fuzz(self):
        rng = np.random.default_rng(9)
        for trial in range(120):
            length = int(rng.integers(0, 4096))
            kind = trial % 4
            if kind == 0:
                data = rng.integers(0, 256, length, dtype=np.uint8).tobytes()
            elif kind == 1:
                data = bytes([int(rng.integers(0, 256))]) * length
            elif kind == 2:
                data = skewed_stream(rng, length)
            else:
                data = rng.integers(0, 4, length, dtype=np.uint8).tobytes()
            payload = aac_encode(data)
            assert aac_decode(payload, length) == data

    @settings(max_examples=60, deadline=None)
    @given(st.binary(max_size=512))
    def test_round_trip_property(self, data):
        assert aac_decode(aac_encode(data), len(data)) == data

    def test_determinism(self):
        rng = np.random.default_rng(1)
        data = rng.integers(0, 256, 10_000, dtype=np.uint8).tobytes()
        assert aac_encode(data) == aac_encode(data)

    def test_compression_sanity_skewed(self):
        rng = np.random.default_rng(2)
        values = rng.choice(256, 8192, p=[0.95] + [0.05 / 255] * 255)
        data = values.astype(np.uint8).tobytes()
        payload = aac_encode(data)
        assert len(payload) < 0.6 * len(data)
        assert aac_decode(payload, len(data)) == data

    def test_truncated_payload_raises(self):
        rng = np.random.default_rng(3)
        data = rng.integers(0, 256, 4096, dtype=np.uint8).tobytes()
        payload = aac_encode(data)
        with pytest.raises(CorruptStreamError):
            aac_decode(payload[:len(payload) // 2], 4096)
        with pytest.raises(CorruptStreamError):
            aac_decode(b"", 5)

    def test_decode_never_reads_far_past_payload(self):
        # Well-formed payloads decode with at most 32 virtual zero bits.
        rng = np.random.default_rng(4)
        for length in (1, 2, 64, 1000):
            data = rng.integers(0, 256, length, dtype=np.uint8).tobytes()
            assert aac_decode(aac_encode(data), length) == data


class TestAdaptiveByteModel:
    def test_invariants_under_stress(self):
        model = AdaptiveByteModel()
        rng = np.random.default_rng(5)
        for _ in range(70_000):
            model.update(int(rng.integers(0, 256)))
        assert min(model.counts) >= 1
        assert model.total == sum(model.counts)
        assert model.total < 1 << 16

    def test_rescale_halves_rounding_up(self):
        model = AdaptiveByteModel()
        for _ in range((1 << 16) - 256 - 1):
            model.update(0)
        assert model.total == (1 << 16) - 1
        before = list(model.counts)
        model.update(0)
        after_expected = [(c + (1 if i == 0 else 0) + 1) // 2
                          for i, c in enumerate(before)]
        assert model.counts == after_expected
        assert model.total == sum(after_expected)

    def test_cum_range_matches_counts(self):
        model = AdaptiveByteModel()
        for symbol in (3, 3, 3, 250, 7):
            model.update(symbol)
        lo, hi = model.cum_range(3)
        assert lo == 3 and hi == 3 + model.counts[3]
        symbol, lo2, hi2 = model.find(lo)
        assert (symbol, lo2, hi2) == (3, lo, hi)
