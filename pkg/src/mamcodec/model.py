"""The fixed autoencoder architecture, its forward passes, and the MAMW
weight interchange format.

The compressor downsamples 16x through four stride-2 stages and emits a
16-channel map clipped to [0,1]; the decompressor mirrors it with four
sub-pixel shuffle upsamplings.  Parameter totals are 268,368 for the
compressor and 454,724 for the decompressor, asserted in tests.

MAMW layout (little-endian, bit-exact):
  magic "MAMW" | version u8 = 1 | layer count u16
  per layer, in canonical order:
    name length u8 | name UTF-8
    kernel rank u8 = 4 | kernel dims u32 x4 (out, in, kh, kw)
    bias rank u8 = 1 | bias dim u32 (out)
    kernel values f32, row-major | bias values f32
The 64-bit FNV-1a hash of the whole byte string identifies the weights;
it is not stored in the file but recorded in MAMC containers.
"""

import struct
from dataclasses import dataclass

import numpy as np

from ._backend import fnv1a64
from .errors import (
    BadMagicError,
    BadVersionError,
    ContractViolationError,
    DimMismatchError,
    HashMismatchError,
    TruncatedError,
)
from .tensor import ACT_CLIPPED_RELU1, ACT_RELU, ConvLayer, conv2d, pixel_shuffle

MAMW_MAGIC = b"MAMW"
MAMW_VERSION = 1

DOWNSCALE = 16
LATENT_CHANNELS = 16
HIDDEN_WIDTH = 64

COMPRESSOR_PARAMS = 268_368
DECOMPRESSOR_PARAMS = 454_724


@dataclass(frozen=True)
class LayerSpec:
    name: str
    in_channels: int
    out_channels: int
    stride: int
    activation: str
    shuffle: int = 1  # sub-pixel upscale applied after the activation

    @property
    def param_count(self):
        return self.out_channels * self.in_channels * 9 + self.out_channels


@dataclass(frozen=True)
class ArchitectureSpec:
    compressor: tuple
    decompressor: tuple

    @property
    def layers(self):
        return self.compressor + self.decompressor

    def layer(self, name):
        for spec in self.layers:
            if spec.name == name:
                return spec
        raise KeyError(name)

    @property
    def compressor_params(self):
        return sum(l.param_count for l in self.compressor)

    @property
    def decompressor_params(self):
        return sum(l.param_count for l in self.decompressor)


def build_architecture():
    """The canonical 14-layer table (4 down-conv stages + latent head,
    input stage + 4 shuffle-upsampled stages)."""
    h = HIDDEN_WIDTH
    compressor = [LayerSpec("enc.s1.c1", 1, h, 1, ACT_RELU),
                  LayerSpec("enc.s1.c2", h, h, 2, ACT_RELU)]
    for stage in (2, 3, 4):
        compressor.append(LayerSpec(f"enc.s{stage}.c1", h, h, 1, ACT_RELU))
        compressor.append(LayerSpec(f"enc.s{stage}.c2", h, h, 2, ACT_RELU))
    compressor.append(LayerSpec("enc.out", h, LATENT_CHANNELS, 1, ACT_CLIPPED_RELU1))

    decompressor = [LayerSpec("dec.in", LATENT_CHANNELS, h, 1, ACT_RELU)]
    for unit in (1, 2, 3):
        decompressor.append(LayerSpec(f"dec.u{unit}", h, 4 * h, 1, ACT_RELU, shuffle=2))
    decompressor.append(LayerSpec("dec.u4", h, 4, 1, ACT_CLIPPED_RELU1, shuffle=2))

    return ArchitectureSpec(tuple(compressor), tuple(decompressor))


ARCHITECTURE = build_architecture()


@dataclass
class WeightBundle:
    """Named kernels/biases for the 14 canonical layers plus the FNV-1a
    hash of their MAMW serialization.  Immutable after load; shareable
    across concurrent forward passes."""

    layers: dict  # name -> (kernel (out,in,3,3) f32, bias (out,) f32)
    content_hash: int

    def conv_layer(self, spec):
        kernel, bias = self.layers[spec.name]
        return ConvLayer(spec.name, spec.in_channels, spec.out_channels,
                         kernel, bias, spec.stride, spec.activation)


def save_weights(bundle):
    """Serialize to MAMW bytes (canonical layer order)."""
    parts = [MAMW_MAGIC, struct.pack("<BH", MAMW_VERSION, len(ARCHITECTURE.layers))]
    for spec in ARCHITECTURE.layers:
        try:
            kernel, bias = bundle.layers[spec.name]
        except KeyError:
            raise DimMismatchError(f"bundle is missing layer {spec.name}") from None
        kernel = np.ascontiguousarray(kernel, dtype=np.float32)
        bias = np.ascontiguousarray(bias, dtype=np.float32)
        name = spec.name.encode("utf-8")
        parts.append(struct.pack("<B", len(name)))
        parts.append(name)
        parts.append(struct.pack("<B4I", 4, *kernel.shape))
        parts.append(struct.pack("<BI", 1, bias.shape[0]))
        parts.append(kernel.astype("<f4").tobytes())
        parts.append(bias.astype("<f4").tobytes())
    return b"".join(parts)


class _Reader:
    def __init__(self, data):
        self.data = data
        self.pos = 0

    def take(self, count):
        if self.pos + count > len(self.data):
            raise TruncatedError(
                f"MAMW data ends at byte {len(self.data)}, "
                f"needed {self.pos + count}")
        chunk = self.data[self.pos:self.pos + count]
        self.pos += count
        return chunk

    def unpack(self, fmt):
        return struct.unpack(fmt, self.take(struct.calcsize(fmt)))


def load_weights(data, expected_hash=None):
    """Parse MAMW bytes into a WeightBundle, validating layer names and
    dims against the fixed architecture.  If expected_hash is given the
    recomputed content hash must match it."""
    reader = _Reader(bytes(data))
    magic = reader.take(4)
    if magic != MAMW_MAGIC:
        raise BadMagicError(f"bad MAMW magic {magic!r}")
    version, layer_count = reader.unpack("<BH")
    if version != MAMW_VERSION:
        raise BadVersionError(f"unsupported MAMW version {version}")
    if layer_count != len(ARCHITECTURE.layers):
        raise DimMismatchError(
            f"MAMW declares {layer_count} layers, "
            f"architecture has {len(ARCHITECTURE.layers)}")

    layers = {}
    for spec in ARCHITECTURE.layers:
        (name_len,) = reader.unpack("<B")
        name = reader.take(name_len).decode("utf-8")
        if name != spec.name:
            raise DimMismatchError(
                f"layer {name!r} out of canonical order (expected {spec.name!r})")
        (kernel_rank,) = reader.unpack("<B")
        if kernel_rank != 4:
            raise DimMismatchError(f"layer {name}: kernel rank {kernel_rank} != 4")
        kernel_dims = reader.unpack("<4I")
        (bias_rank,) = reader.unpack("<B")
        if bias_rank != 1:
            raise DimMismatchError(f"layer {name}: bias rank {bias_rank} != 1")
        (bias_dim,) = reader.unpack("<I")
        expected = (spec.out_channels, spec.in_channels, 3, 3)
        if kernel_dims != expected:
            raise DimMismatchError(
                f"layer {name}: kernel dims {kernel_dims} != {expected}")
        if bias_dim != spec.out_channels:
            raise DimMismatchError(
                f"layer {name}: bias dim {bias_dim} != {spec.out_channels}")
        kernel = np.frombuffer(
            reader.take(4 * int(np.prod(kernel_dims))), dtype="<f4",
        ).reshape(kernel_dims).astype(np.float32)
        bias = np.frombuffer(reader.take(4 * bias_dim), dtype="<f4").astype(np.float32)
        layers[name] = (kernel, bias)

    if reader.pos != len(reader.data):
        raise TruncatedError(
            f"{len(reader.data) - reader.pos} trailing bytes after MAMW content")
    content_hash = fnv1a64(reader.data)
    if expected_hash is not None and content_hash != expected_hash:
        raise HashMismatchError(
            f"MAMW hash {content_hash:#018x} != expected {expected_hash:#018x}")
    return WeightBundle(layers, content_hash)


def compress_forward(pixels, weights):
    """Run the compressor on a [0,1] image whose dims are multiples of 16.

    pixels: (H, W) float32 in [0,1].  Returns the (16, H/16, W/16)
    analysis tensor, all values in [0,1]."""
    pixels = np.asarray(pixels, dtype=np.float32)
    if pixels.ndim != 2:
        raise ContractViolationError(f"expected a 2-D image, got shape {pixels.shape}")
    height, width = pixels.shape
    if height % DOWNSCALE or width % DOWNSCALE:
        raise ContractViolationError(
            f"image dims ({height}, {width}) must be multiples of {DOWNSCALE}; "
            "use pad_to_multiple first")
    x = pixels[np.newaxis, :, :]
    for spec in ARCHITECTURE.compressor:
        x = conv2d(x, weights.conv_layer(spec))
    return x


def decompress_forward(latent, weights):
    """Run the decompressor on a (16, k, m) tensor; returns the
    (16k, 16m) reconstruction in [0,1]."""
    latent = np.asarray(latent, dtype=np.float32)
    if latent.ndim != 3 or latent.shape[0] != LATENT_CHANNELS:
        raise ContractViolationError(
            f"latent must be ({LATENT_CHANNELS}, k, m), got {latent.shape}")
    x = latent
    for spec in ARCHITECTURE.decompressor:
        x = conv2d(x, weights.conv_layer(spec))
        if spec.shuffle > 1:
            x = pixel_shuffle(x, spec.shuffle)
    return x[0]


def pad_to_multiple(pixels, multiple=DOWNSCALE):
    """Zero-pad bottom/right to the next multiples; returns (padded,
    (orig_height, orig_width)) so the crop can be undone later."""
    pixels = np.asarray(pixels)
    height, width = pixels.shape
    pad_h = (-height) % multiple
    pad_w = (-width) % multiple
    if pad_h == 0 and pad_w == 0:
        return pixels, (height, width)
    padded = np.pad(pixels, ((0, pad_h), (0, pad_w)))
    return padded, (height, width)


def crop_to(pixels, dims):
    height, width = dims
    return pixels[:height, :width]
