"""Kernel backend selection.

The compiled extension is preferred when importable; the pure-Python
fallback is always available.  Set MAMCODEC_BACKEND=python or =cython
to force one (forcing cython without the built extension is an error).
Both backends produce identical results for identical inputs.
"""

import os

from . import _pykernels

try:
    from . import _ckernels
except ImportError:
    _ckernels = None

_forced = os.environ.get("MAMCODEC_BACKEND", "").strip().lower()
if _forced == "python":
    _impl = _pykernels
elif _forced == "cython":
    if _ckernels is None:
        raise ImportError(
            "MAMCODEC_BACKEND=cython but mamcodec._ckernels is not built")
    _impl = _ckernels
elif _forced:
    raise ImportError(f"unknown MAMCODEC_BACKEND value: {_forced!r}")
else:
    _impl = _ckernels if _ckernels is not None else _pykernels

BACKEND = "cython" if _impl is _ckernels and _ckernels is not None else "python"

conv2d_f32 = _impl.conv2d_f32
aac_encode = _impl.aac_encode
aac_decode = _impl.aac_decode
fnv1a64 = _impl.fnv1a64


def backend_name():
    """Name of the active kernel backend ('cython' or 'python')."""
    return BACKEND


def has_compiled_backend():
    return _ckernels is not None
