"""Rate-distortion evaluation: pSNR, SSIM, latent entropy, bits per
pixel, compression factor.

Quality metrics operate in the normalized [0,1] domain (dynamic range
L = 1) so 12- and 16-bit sources are comparable.  SSIM uses the
classic 11x11 Gaussian window (sigma 1.5, K1=0.01, K2=0.03) over the
valid region only (no padding); identical images give pSNR infinity.
"""

import json
import math
from dataclasses import asdict, dataclass
from typing import Optional

import numpy as np
from scipy.ndimage import correlate1d

from .errors import ContractViolationError

SSIM_WINDOW = 11
SSIM_SIGMA = 1.5
SSIM_K1 = 0.01
SSIM_K2 = 0.03
DYNAMIC_RANGE = 1.0


def _as_pair(ref, test):
    ref = np.asarray(ref, dtype=np.float64)
    test = np.asarray(test, dtype=np.float64)
    if ref.shape != test.shape:
        raise ContractViolationError(
            f"image dims differ: {ref.shape} vs {test.shape}")
    if ref.ndim != 2 or ref.size == 0:
        raise ContractViolationError(f"expected non-empty 2-D images, got {ref.shape}")
    return ref, test


def psnr(ref, test):
    """10*log10(1/MSE) in dB on [0,1] images; inf for identical inputs."""
    ref, test = _as_pair(ref, test)
    mse = float(np.mean((ref - test) ** 2))
    if mse == 0.0:
        return math.inf
    return 10.0 * math.log10(1.0 / mse)


def _gaussian_taps():
    half = SSIM_WINDOW // 2
    offsets = np.arange(SSIM_WINDOW, dtype=np.float64) - half
    taps = np.exp(-(offsets ** 2) / (2.0 * SSIM_SIGMA ** 2))
    return taps / taps.sum()


def _windowed(img, taps):
    # Separable Gaussian; the interior slice equals valid-mode filtering.
    half = SSIM_WINDOW // 2
    smoothed = correlate1d(img, taps, axis=0, mode="constant")
    smoothed = correlate1d(smoothed, taps, axis=1, mode="constant")
    return smoothed[half:img.shape[0] - half, half:img.shape[1] - half]


def ssim(ref, test):
    """Mean local SSIM over all complete 11x11 windows."""
    ref, test = _as_pair(ref, test)
    if min(ref.shape) < SSIM_WINDOW:
        raise ContractViolationError(
            f"images must be at least {SSIM_WINDOW}x{SSIM_WINDOW}, got {ref.shape}")
    c1 = (SSIM_K1 * DYNAMIC_RANGE) ** 2
    c2 = (SSIM_K2 * DYNAMIC_RANGE) ** 2
    taps = _gaussian_taps()

    mu_x = _windowed(ref, taps)
    mu_y = _windowed(test, taps)
    var_x = _windowed(ref * ref, taps) - mu_x * mu_x
    var_y = _windowed(test * test, taps) - mu_y * mu_y
    cov = _windowed(ref * test, taps) - mu_x * mu_y

    num = (2.0 * mu_x * mu_y + c1) * (2.0 * cov + c2)
    den = (mu_x * mu_x + mu_y * mu_y + c1) * (var_x + var_y + c2)
    return float(np.mean(num / den))


def latent_entropy(values):
    """Shannon entropy (bits/element) of the latent value histogram."""
    values = np.asarray(getattr(values, "values", values))
    if values.size == 0:
        raise ContractViolationError("latent code is empty")
    _, counts = np.unique(values, return_counts=True)
    p = counts / values.size
    return float(-(p * np.log2(p)).sum() + 0.0)


def distinct_values(values):
    values = np.asarray(getattr(values, "values", values))
    return int(np.unique(values).size)


def bpp_report(data_or_size, width, height, depth):
    """bpp = 8*filesize/(W*H) and compression factor = depth/bpp."""
    if width < 1 or height < 1:
        raise ContractViolationError(f"bad pixel count {width}x{height}")
    size = data_or_size if isinstance(data_or_size, int) else len(data_or_size)
    bpp = 8.0 * size / (width * height)
    return bpp, depth / bpp


@dataclass
class MetricsReport:
    """One reference/test comparison; rate fields are present only when a
    compressed file was supplied."""

    psnr_db: float
    ssim: float
    entropy_bits: Optional[float] = None
    bpp: Optional[float] = None
    compression_factor: Optional[float] = None

    def to_kv_text(self):
        lines = [f"{key}={value}" for key, value in asdict(self).items()
                 if value is not None]
        return "\n".join(lines) + "\n"

    @classmethod
    def from_kv_text(cls, text):
        fields = {}
        for line in text.splitlines():
            line = line.strip()
            if not line:
                continue
            key, _, value = line.partition("=")
            fields[key] = float(value)
        return cls(**fields)

    def to_json(self):
        return json.dumps({k: v for k, v in asdict(self).items()
                           if v is not None}, sort_keys=True)

    @classmethod
    def from_json(cls, text):
        return cls(**json.loads(text))
