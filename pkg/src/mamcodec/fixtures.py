"""Deterministic fixtures: pseudo-random weight bundles and synthetic
images for tests, demos, and cross-implementation checks.

The weight generator is an xorshift64* stream (seed
0x9E3779B97F4A7C15); each output word maps to
((word >> 11) / 2**53 - 0.5) * 0.2 and the values fill kernels
(row-major) then biases, layer by layer in canonical order.
"""

import numpy as np

from ._backend import fnv1a64
from .model import ARCHITECTURE, WeightBundle, save_weights

FIXTURE_SEED = 0x9E3779B97F4A7C15

_MASK64 = (1 << 64) - 1
_MULT = 0x2545F4914F6CDD1D


def xorshift64s(seed=FIXTURE_SEED):
    """Infinite stream of xorshift64* outputs (64-bit ints)."""
    state = seed & _MASK64
    if state == 0:
        raise ValueError("xorshift64* state must be nonzero")
    while True:
        state ^= state >> 12
        state = (state ^ (state << 25)) & _MASK64
        state ^= state >> 27
        yield (state * _MULT) & _MASK64


def _uniform_values(gen, count):
    out = np.empty(count, dtype=np.float64)
    for i in range(count):
        out[i] = ((next(gen) >> 11) / float(1 << 53) - 0.5) * 0.2
    return out.astype(np.float32)


def fixture_weights(seed=FIXTURE_SEED):
    """WeightBundle with xorshift64*-generated parameters."""
    gen = xorshift64s(seed)
    layers = {}
    for spec in ARCHITECTURE.layers:
        kernel = _uniform_values(
            gen, spec.out_channels * spec.in_channels * 9,
        ).reshape(spec.out_channels, spec.in_channels, 3, 3)
        bias = _uniform_values(gen, spec.out_channels)
        layers[spec.name] = (kernel, bias)
    bundle = WeightBundle(layers, 0)
    bundle.content_hash = fnv1a64(save_weights(bundle))
    return bundle


def synthetic_image(height, width, depth=16, seed=1234):
    """Deterministic test image: smooth blob structure plus seeded noise,
    spanning the full depth range."""
    max_value = (1 << depth) - 1
    yy = np.linspace(0.0, np.pi * 3, height)[:, None]
    xx = np.linspace(0.0, np.pi * 4, width)[None, :]
    base = 0.5 + 0.35 * np.sin(yy) * np.cos(xx)
    rng = np.random.default_rng(seed)
    noisy = np.clip(base + rng.normal(0.0, 0.05, size=(height, width)), 0.0, 1.0)
    return np.round(noisy * max_value).astype(np.uint16)
