"""Minimal deterministic tensor kernel: 3-D feature maps in (channel,
row, column) order, 3x3 convolution at stride 1 or 2 with zero padding
of 1, ReLU / ClippedReLU1 activations, and sub-pixel shuffling.

Feature maps are plain float32 ndarrays of shape (channels, height,
width).  The convolution follows the deep-learning correlation
convention (no kernel flip), so weights trained in standard frameworks
transfer verbatim.  All functions are pure.
"""

from dataclasses import dataclass

import numpy as np

from ._backend import conv2d_f32
from .errors import ContractViolationError

ACT_NONE = "none"
ACT_RELU = "relu"
ACT_CLIPPED_RELU1 = "clipped_relu1"

_ACT_CODES = {ACT_NONE: 0, ACT_RELU: 1, ACT_CLIPPED_RELU1: 2}


def check_tensor3(x, name="tensor"):
    """Validate a (channels, height, width) float map; returns it as f32."""
    x = np.asarray(x)
    if x.ndim != 3:
        raise ContractViolationError(f"{name} must be 3-D, got shape {x.shape}")
    if min(x.shape) < 1:
        raise ContractViolationError(f"{name} has a zero-sized dimension: {x.shape}")
    return np.ascontiguousarray(x, dtype=np.float32)


@dataclass
class ConvLayer:
    """One 3x3 convolution layer: weights, bias, stride, activation."""

    name: str
    in_channels: int
    out_channels: int
    kernel: np.ndarray  # (out, in, 3, 3) float32
    bias: np.ndarray    # (out,) float32
    stride: int = 1
    activation: str = ACT_NONE

    def __post_init__(self):
        self.kernel = np.ascontiguousarray(self.kernel, dtype=np.float32)
        self.bias = np.ascontiguousarray(self.bias, dtype=np.float32)
        if self.kernel.shape != (self.out_channels, self.in_channels, 3, 3):
            raise ContractViolationError(
                f"layer {self.name}: kernel shape {self.kernel.shape} != "
                f"({self.out_channels}, {self.in_channels}, 3, 3)")
        if self.bias.shape != (self.out_channels,):
            raise ContractViolationError(
                f"layer {self.name}: bias shape {self.bias.shape} != "
                f"({self.out_channels},)")
        if self.stride not in (1, 2):
            raise ContractViolationError(
                f"layer {self.name}: stride must be 1 or 2, got {self.stride}")
        if self.activation not in _ACT_CODES:
            raise ContractViolationError(
                f"layer {self.name}: unknown activation {self.activation!r}")

    @property
    def param_count(self):
        return self.out_channels * self.in_channels * 9 + self.out_channels


def conv2d(x, layer):
    """3x3 correlation with zero padding 1; output dims follow
    floor((D + 2 - 3)/stride) + 1, i.e. D at stride 1 and ceil(D/2) at 2."""
    x = check_tensor3(x, "conv2d input")
    if x.shape[0] != layer.in_channels:
        raise ContractViolationError(
            f"layer {layer.name}: input has {x.shape[0]} channels, "
            f"expected {layer.in_channels}")
    channels, height, width = x.shape
    padded = np.zeros((channels, height + 2, width + 2), dtype=np.float32)
    padded[:, 1:-1, 1:-1] = x
    return conv2d_f32(padded, layer.kernel, layer.bias, layer.stride,
                      _ACT_CODES[layer.activation])


def pixel_shuffle(x, r):
    """Rearrange r*r channel groups into an r-times upsampled map:
    out[c, r*y+dy, r*x+dx] = in[c*r*r + dy*r + dx, y, x]."""
    x = np.asarray(x)
    if x.ndim != 3:
        raise ContractViolationError(f"pixel_shuffle input must be 3-D, got {x.shape}")
    channels, height, width = x.shape
    if r < 1:
        raise ContractViolationError(f"upscale factor must be >= 1, got {r}")
    if channels % (r * r) != 0:
        raise ContractViolationError(
            f"channels ({channels}) not divisible by r*r ({r * r})")
    out = x.reshape(channels // (r * r), r, r, height, width)
    out = out.transpose(0, 3, 1, 4, 2)
    return np.ascontiguousarray(out.reshape(channels // (r * r), height * r, width * r))


def pixel_unshuffle(x, r):
    """Exact inverse of pixel_shuffle."""
    x = np.asarray(x)
    if x.ndim != 3:
        raise ContractViolationError(f"pixel_unshuffle input must be 3-D, got {x.shape}")
    channels, height, width = x.shape
    if r < 1:
        raise ContractViolationError(f"factor must be >= 1, got {r}")
    if height % r != 0 or width % r != 0:
        raise ContractViolationError(
            f"spatial dims ({height}, {width}) not divisible by r ({r})")
    out = x.reshape(channels, height // r, r, width // r, r)
    out = out.transpose(0, 2, 4, 1, 3)
    return np.ascontiguousarray(out.reshape(channels * r * r, height // r, width // r))
