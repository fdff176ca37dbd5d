"""Generate the frozen golden bitstream fixtures in tests/golden/.

Run once, from the repository root:

    python tools/make_golden.py

Produces three (header, payload) container files plus the raw symbol
streams they encode, using only tools/oracle_aac.py and struct packing,
so the fixtures predate and stay independent of the package code.
"""

import hashlib
import json
import struct
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent))
import oracle_aac

GOLDEN_DIR = Path(__file__).resolve().parent.parent / "tests" / "golden"

HEADER_FMT = "<4sBBIIBBHIIQQQ"

# Fixture containers are not tied to any real weight file; the hash field
# just has to be a fixed 64-bit value (FNV-1a of a tag string).
HASH_TAG = b"mamcodec-golden-fixture"


def fnv1a64(data):
    h = 0xCBF29CE484222325
    for b in data:
        h ^= b
        h = (h * 0x100000001B3) & 0xFFFFFFFFFFFFFFFF
    return h


def xorshift64s_bytes(seed, count):
    mask = (1 << 64) - 1
    state = seed
    out = bytearray()
    while len(out) < count:
        state ^= (state >> 12)
        state ^= (state << 25) & mask
        state ^= (state >> 27)
        out.append(((state * 0x2545F4914F6CDD1D) >> 32) & 0xFF)
    return bytes(out)


def skewed_bytes(count):
    return bytes((i * 7) % 256 if i % 20 == 19 else 0 for i in range(count))


def make_container(width, height, depth, n, symbols):
    channels = 16
    k = -(-height // 16)
    m = -(-width // 16)
    count = -(-(k * m * channels * n) // 8)
    assert count == len(symbols), (count, len(symbols))
    payload = oracle_aac.encode(symbols)
    assert oracle_aac.decode(payload, count) == symbols
    header = struct.pack(
        HEADER_FMT, b"MAMC", 1, 0, width, height, depth, n, channels,
        k, m, fnv1a64(HASH_TAG), count, len(payload),
    )
    assert len(header) == 50
    return header + payload, payload


def main():
    GOLDEN_DIR.mkdir(parents=True, exist_ok=True)
    fixtures = {
        "const": dict(width=400, height=320, depth=12, n=1,
                      symbols=b"\x41" * 1000),
        "random": dict(width=256, height=256, depth=16, n=8,
                       symbols=xorshift64s_bytes(0x0123456789ABCDEF, 4096)),
        "skewed": dict(width=1024, height=512, depth=16, n=2,
                       symbols=skewed_bytes(8192)),
    }
    manifest = {}
    for name, spec in fixtures.items():
        symbols = spec.pop("symbols")
        container, payload = make_container(symbols=symbols, **spec)
        (GOLDEN_DIR / f"{name}.mamc").write_bytes(container)
        (GOLDEN_DIR / f"{name}.sym").write_bytes(symbols)
        manifest[name] = dict(
            spec,
            symbol_count=len(symbols),
            payload_length=len(payload),
            payload_sha256=hashlib.sha256(payload).hexdigest(),
            symbols_sha256=hashlib.sha256(symbols).hexdigest(),
        )
        print(f"{name}: {len(symbols)} symbols -> {len(payload)} payload bytes")
    (GOLDEN_DIR / "manifest.json").write_text(
        json.dumps(manifest, indent=2, sort_keys=True) + "\n")


if __name__ == "__main__":
    main()
