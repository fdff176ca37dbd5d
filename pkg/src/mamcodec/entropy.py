"""Latent linearization and lossless recompression.

pack_bits walks the latent in (channel, row, column) row-major order,
emitting each element's n bits MSB-first and zero-padding the final
byte; the resulting ceil(k*m*c*n/8) symbols feed the adaptive
arithmetic coder.  The coder itself lives in the kernel backends; this
module is the byte-level surface used by the container.
"""

import numpy as np

from ._backend import aac_decode, aac_encode
from ._pykernels import AdaptiveByteModel  # frequency-model reference type
from .errors import ContractViolationError, CorruptStreamError
from .quantizer import LatentCode

__all__ = [
    "pack_bits", "unpack_bits", "aac_encode", "aac_decode",
    "symbol_count", "AdaptiveByteModel",
]


def symbol_count(shape, n):
    """ceil(k*m*c*n/8) for a (c, k, m) latent at bit-length n."""
    c, k, m = shape
    return -(-(k * m * c * n) // 8)


def pack_bits(code):
    """LatentCode -> packed byte stream (n bits per element, MSB-first)."""
    n = code.n
    flat = code.values.reshape(-1)
    # Big-endian u16 view -> 16 bit columns -> keep the low n, MSB-first.
    bits = np.unpackbits(flat.astype(">u2").view(np.uint8)).reshape(-1, 16)
    return np.packbits(bits[:, 16 - n:]).tobytes()


def unpack_bits(data, shape, n):
    """Inverse of pack_bits; validates length and zero padding."""
    c, k, m = shape
    count = c * k * m
    expected_bytes = symbol_count(shape, n)
    if len(data) != expected_bytes:
        raise CorruptStreamError(
            f"packed stream has {len(data)} bytes, expected {expected_bytes} "
            f"for shape {shape} at n={n}")
    bits = np.unpackbits(np.frombuffer(bytes(data), dtype=np.uint8))
    used = count * n
    if bits[used:].any():
        raise CorruptStreamError("nonzero padding bits in packed stream")
    values = np.zeros((count, 16), dtype=np.uint8)
    values[:, 16 - n:] = bits[:used].reshape(count, n)
    flat = np.packbits(values, axis=1).view(">u2").reshape(-1)
    return LatentCode(n, flat.astype(np.uint16).reshape(shape))
