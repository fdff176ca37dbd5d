"""Latent quantization at a configurable bit-length n.

float2int maps [0,1] reals onto [0, 2**n - 1] integers by scaling and
rounding (ties away from zero, which for non-negative input is round
half up); int2float divides back.  Integers are exact fixed points of
the round trip and the reconstruction error is at most half a
quantization step, 0.5/(2**n - 1).
"""

from dataclasses import dataclass

import numpy as np

from .errors import ContractViolationError

MIN_BITS = 1
MAX_BITS = 16


def _check_bits(n):
    if not isinstance(n, (int, np.integer)) or not MIN_BITS <= n <= MAX_BITS:
        raise ContractViolationError(
            f"bit-length must be an integer in [{MIN_BITS}, {MAX_BITS}], got {n!r}")


@dataclass
class LatentCode:
    """Integer latent tensor: n-bit values in (channels, k, m) layout."""

    n: int
    values: np.ndarray  # uint16 (channels, k, m)

    def __post_init__(self):
        _check_bits(self.n)
        self.values = np.ascontiguousarray(self.values, dtype=np.uint16)
        if self.values.ndim != 3:
            raise ContractViolationError(
                f"latent values must be 3-D, got shape {self.values.shape}")
        if self.values.size == 0:
            raise ContractViolationError("latent code is empty")
        if self.values.max() > self.max_value:
            raise ContractViolationError(
                f"latent value {self.values.max()} exceeds 2**{self.n} - 1")

    @property
    def max_value(self):
        return (1 << self.n) - 1

    @property
    def shape(self):
        return self.values.shape


def float2int(tensor, n):
    """Quantize a [0,1] float tensor to an n-bit LatentCode.

    The (2**n - 1) * value product is exact in float64 for float32
    input, so the half-up rounding below is the true ties-away rule."""
    _check_bits(n)
    tensor = np.ascontiguousarray(tensor, dtype=np.float32)
    if tensor.ndim != 3:
        raise ContractViolationError(f"expected a 3-D tensor, got {tensor.shape}")
    if tensor.size and (tensor.min() < 0.0 or tensor.max() > 1.0):
        raise ContractViolationError(
            f"values outside [0,1]: min {tensor.min()}, max {tensor.max()}")
    scaled = tensor.astype(np.float64) * ((1 << n) - 1)
    return LatentCode(n, np.floor(scaled + 0.5).astype(np.uint16))


def int2float(code):
    """Map an n-bit LatentCode back to [0,1].

    Returns float64: a float32 result can round outward at the half-step
    tie (e.g. float32(2/3) > 2/3) and break the reconstruction bound;
    callers that need float32 cast at their own boundary."""
    scale = np.float64((1 << code.n) - 1)
    return code.values.astype(np.float64) / scale
