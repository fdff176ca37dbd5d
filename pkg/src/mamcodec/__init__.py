"""mamcodec: variable bit-length lossy compression for high bit-depth
grayscale images.

A fixed convolutional autoencoder produces a [0,1] latent map that is
quantized to n-bit integers, bit-packed, and losslessly recompressed
with an adaptive arithmetic coder into the MAMC container format.
Weights travel in the MAMW format.  Hot kernels run through a compiled
extension when available, with a bit-identical pure-Python fallback
(see mamcodec._backend).
"""

from ._backend import backend_name, has_compiled_backend
from .container import (
    ContainerHeader,
    compress_image,
    decompress_image,
    read_container,
    write_container,
)
from .entropy import aac_decode, aac_encode, pack_bits, unpack_bits
from .metrics import MetricsReport, bpp_report, latent_entropy, psnr, ssim
from .model import (
    ArchitectureSpec,
    WeightBundle,
    build_architecture,
    compress_forward,
    decompress_forward,
    load_weights,
    pad_to_multiple,
    save_weights,
)
from .quantizer import LatentCode, float2int, int2float
from .tensor import ConvLayer, conv2d, pixel_shuffle, pixel_unshuffle

__version__ = "0.1.0"

__all__ = [
    "ArchitectureSpec", "ContainerHeader", "ConvLayer", "LatentCode",
    "MetricsReport", "WeightBundle", "aac_decode", "aac_encode",
    "backend_name", "bpp_report", "build_architecture", "compress_forward",
    "compress_image", "conv2d", "decompress_forward", "decompress_image",
    "float2int", "has_compiled_backend", "int2float", "latent_entropy",
    "load_weights", "pack_bits", "pad_to_multiple", "pixel_shuffle",
    "pixel_unshuffle", "psnr", "read_container", "save_weights", "ssim",
    "unpack_bits", "write_container",
]
