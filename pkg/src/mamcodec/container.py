"""MAMC compressed-file format and the compress/decompress pipelines.

Header, 50 bytes, all integers little-endian:

  magic "MAMC" | version u8 = 1 | flags u8 = 0
  original width u32 | original height u32
  bit depth u8 | n u8 | latent channels u16
  latent k u32 | latent m u32
  model hash u64 (FNV-1a of the MAMW bytes)
  symbol count u64 = ceil(k*m*c*n/8) | payload length u64

The payload is the arithmetic-coded packed latent.  Everything inside
the container is lossless: only the autoencoder itself loses
information.
"""

import struct
from dataclasses import dataclass

import numpy as np

from .entropy import aac_decode, aac_encode, pack_bits, symbol_count, unpack_bits
from .errors import (
    BadMagicError,
    BadVersionError,
    CorruptContainerError,
    HashMismatchError,
    ImageInputError,
)
from .model import (
    DOWNSCALE,
    LATENT_CHANNELS,
    compress_forward,
    crop_to,
    decompress_forward,
    pad_to_multiple,
)
from .quantizer import MAX_BITS, MIN_BITS, float2int, int2float

MAGIC = b"MAMC"
VERSION = 1
HEADER_FMT = "<4sBBIIBBHIIQQQ"
HEADER_SIZE = struct.calcsize(HEADER_FMT)
SUPPORTED_DEPTHS = (8, 12, 16)

assert HEADER_SIZE == 50


@dataclass
class ContainerHeader:
    width: int
    height: int
    depth: int
    n: int
    channels: int
    k: int
    m: int
    model_hash: int
    symbol_count: int
    payload_length: int
    version: int = VERSION
    flags: int = 0

    def pack(self):
        return struct.pack(
            HEADER_FMT, MAGIC, self.version, self.flags, self.width,
            self.height, self.depth, self.n, self.channels, self.k, self.m,
            self.model_hash, self.symbol_count, self.payload_length)

    def validate(self):
        if self.version != VERSION:
            raise BadVersionError(f"unsupported MAMC version {self.version}")
        if self.flags != 0:
            raise CorruptContainerError(f"unknown flags {self.flags:#04x}")
        if self.width < 1 or self.height < 1:
            raise CorruptContainerError(
                f"bad image dims {self.width}x{self.height}")
        if self.depth not in SUPPORTED_DEPTHS:
            raise CorruptContainerError(f"unsupported bit depth {self.depth}")
        if not MIN_BITS <= self.n <= MAX_BITS:
            raise CorruptContainerError(f"bit-length {self.n} out of range")
        if self.k != -(-self.height // DOWNSCALE) or self.m != -(-self.width // DOWNSCALE):
            raise CorruptContainerError(
                f"latent dims ({self.k}, {self.m}) inconsistent with image "
                f"dims {self.width}x{self.height}")
        expected = symbol_count((self.channels, self.k, self.m), self.n)
        if self.symbol_count != expected:
            raise CorruptContainerError(
                f"symbol count {self.symbol_count} != ceil(k*m*c*n/8) = {expected}")


def write_container(header, payload):
    if header.payload_length != len(payload):
        raise CorruptContainerError(
            f"declared payload length {header.payload_length} != {len(payload)}")
    header.validate()
    return header.pack() + bytes(payload)


def read_container(data):
    """Split container bytes into a validated (header, payload) pair."""
    data = bytes(data)
    if len(data) < HEADER_SIZE:
        raise CorruptContainerError(
            f"container has {len(data)} bytes, header needs {HEADER_SIZE}")
    fields = struct.unpack(HEADER_FMT, data[:HEADER_SIZE])
    magic = fields[0]
    if magic != MAGIC:
        raise BadMagicError(f"bad MAMC magic {magic!r}")
    header = ContainerHeader(
        version=fields[1], flags=fields[2], width=fields[3], height=fields[4],
        depth=fields[5], n=fields[6], channels=fields[7], k=fields[8],
        m=fields[9], model_hash=fields[10], symbol_count=fields[11],
        payload_length=fields[12])
    header.validate()
    payload = data[HEADER_SIZE:]
    if len(payload) != header.payload_length:
        raise CorruptContainerError(
            f"payload has {len(payload)} bytes, header declares "
            f"{header.payload_length}")
    return header, payload


def normalize(pixels, depth):
    """Integer pixels -> [0,1] float32, validating the declared depth."""
    if depth not in SUPPORTED_DEPTHS:
        raise ImageInputError(f"unsupported bit depth {depth}")
    pixels = np.asarray(pixels)
    if pixels.ndim != 2:
        raise ImageInputError(f"expected a 2-D image, got shape {pixels.shape}")
    if not np.issubdtype(pixels.dtype, np.integer):
        raise ImageInputError(f"expected integer pixels, got {pixels.dtype}")
    max_value = (1 << depth) - 1
    if pixels.size and (pixels.min() < 0 or pixels.max() > max_value):
        raise ImageInputError(
            f"pixel values [{pixels.min()}, {pixels.max()}] exceed "
            f"{depth}-bit range")
    return (pixels.astype(np.float64) / max_value).astype(np.float32)


def denormalize(pixels, depth):
    """[0,1] floats -> integer pixels (round half away from zero, clamped)."""
    max_value = (1 << depth) - 1
    scaled = np.floor(np.asarray(pixels, dtype=np.float64) * max_value + 0.5)
    return np.clip(scaled, 0, max_value).astype(np.uint16)


def compress_image(pixels, depth, weights, n):
    """Full pipeline: normalize, pad, analyze, quantize, pack, entropy-code.

    Returns the complete MAMC byte string."""
    normalized = normalize(pixels, depth)
    height, width = normalized.shape
    padded, _ = pad_to_multiple(normalized)
    latent = compress_forward(padded, weights)
    code = float2int(latent, n)
    symbols = pack_bits(code)
    payload = aac_encode(symbols)
    header = ContainerHeader(
        width=width, height=height, depth=depth, n=n,
        channels=LATENT_CHANNELS, k=code.shape[1], m=code.shape[2],
        model_hash=weights.content_hash, symbol_count=len(symbols),
        payload_length=len(payload))
    return write_container(header, payload)


def decompress_image(data, weights, force=False):
    """Inverse pipeline; returns (pixels uint16 (H, W), depth).

    The container's model hash must match the supplied weights unless
    force is set."""
    header, payload = read_container(data)
    if header.channels != LATENT_CHANNELS:
        raise CorruptContainerError(
            f"container has {header.channels} latent channels, "
            f"codec uses {LATENT_CHANNELS}")
    if header.model_hash != weights.content_hash and not force:
        raise HashMismatchError(
            f"container was written with weights {header.model_hash:#018x}, "
            f"got {weights.content_hash:#018x} (pass force to override)")
    symbols = aac_decode(payload, header.symbol_count)
    code = unpack_bits(symbols, (header.channels, header.k, header.m), header.n)
    latent = int2float(code)
    reconstruction = decompress_forward(latent, weights)
    cropped = crop_to(reconstruction, (header.height, header.width))
    return denormalize(cropped, header.depth), header.depth


def extract_latent(data):
    """Decode just the latent code from a container (no weights needed)."""
    header, payload = read_container(data)
    symbols = aac_decode(payload, header.symbol_count)
    return header, unpack_bits(symbols, (header.channels, header.k, header.m), header.n)
