"""Grayscale image I/O: binary PGM (P5) and raw little-endian with a
text sidecar.

PGM follows convention: 16-bit samples are big-endian, maxval encodes
the bit depth ((1<<depth)-1; other maxvals map to the smallest covering
depth).  The raw format stores u8 (depth 8) or little-endian u16
samples row-major, with "<path>.hdr" carrying width/height/depth lines;
12-bit data travels in 16-bit words with depth=12 recorded.
"""

import os
import re

import numpy as np

from .errors import ImageInputError

_DEPTH_TO_MAXVAL = {8: 255, 12: 4095, 16: 65535}


def _depth_for_maxval(maxval):
    for depth, mv in _DEPTH_TO_MAXVAL.items():
        if mv == maxval:
            return depth
    return max(8, int(maxval).bit_length())


def read_pgm(path):
    """Read a binary P5 PGM; returns (pixels uint8/uint16 (H, W), depth)."""
    with open(path, "rb") as fh:
        data = fh.read()

    # Header: magic, width, height, maxval, separated by whitespace;
    # '#' starts a comment running to end of line.
    tokens = []
    pos = 0
    while len(tokens) < 4:
        if pos >= len(data):
            raise ImageInputError(f"{path}: truncated PGM header")
        ch = data[pos:pos + 1]
        if ch == b"#":
            pos = data.find(b"\n", pos)
            if pos < 0:
                raise ImageInputError(f"{path}: unterminated PGM comment")
            pos += 1
        elif ch.isspace():
            pos += 1
        else:
            end = pos
            while end < len(data) and not data[end:end + 1].isspace():
                end += 1
            tokens.append(data[pos:end])
            pos = end
    pos += 1  # single whitespace after maxval

    if tokens[0] != b"P5":
        raise ImageInputError(f"{path}: not a binary PGM (magic {tokens[0]!r})")
    try:
        width, height, maxval = (int(t) for t in tokens[1:])
    except ValueError:
        raise ImageInputError(f"{path}: malformed PGM header") from None
    if width < 1 or height < 1 or not 0 < maxval < 65536:
        raise ImageInputError(f"{path}: bad PGM dimensions/maxval")

    dtype = np.dtype(">u2") if maxval > 255 else np.dtype("u1")
    expected = width * height * dtype.itemsize
    body = data[pos:pos + expected]
    if len(body) != expected:
        raise ImageInputError(
            f"{path}: PGM body has {len(body)} bytes, expected {expected}")
    pixels = np.frombuffer(body, dtype=dtype).reshape(height, width)
    pixels = pixels.astype(np.uint16 if maxval > 255 else np.uint8)
    if int(pixels.max(initial=0)) > maxval:
        raise ImageInputError(f"{path}: sample exceeds declared maxval {maxval}")
    return pixels, _depth_for_maxval(maxval)


def write_pgm(path, pixels, depth):
    pixels = np.asarray(pixels)
    maxval = _DEPTH_TO_MAXVAL.get(depth)
    if maxval is None:
        raise ImageInputError(f"unsupported bit depth {depth}")
    if pixels.size and int(pixels.max()) > maxval:
        raise ImageInputError(
            f"pixel value {int(pixels.max())} exceeds {depth}-bit range")
    header = f"P5\n{pixels.shape[1]} {pixels.shape[0]}\n{maxval}\n".encode()
    body = pixels.astype(">u2" if maxval > 255 else "u1").tobytes()
    with open(path, "wb") as fh:
        fh.write(header + body)


def _sidecar(path):
    return f"{path}.hdr"


def read_raw(path):
    """Read raw little-endian samples described by '<path>.hdr'."""
    sidecar = _sidecar(path)
    if not os.path.exists(sidecar):
        raise ImageInputError(f"{path}: missing sidecar header {sidecar}")
    fields = {}
    with open(sidecar, "r", encoding="utf-8") as fh:
        for line in fh:
            match = re.match(r"\s*(width|height|depth)\s*=\s*(\d+)\s*$", line)
            if match:
                fields[match.group(1)] = int(match.group(2))
    missing = {"width", "height", "depth"} - fields.keys()
    if missing:
        raise ImageInputError(f"{sidecar}: missing fields {sorted(missing)}")
    width, height, depth = fields["width"], fields["height"], fields["depth"]
    dtype = np.dtype("u1") if depth == 8 else np.dtype("<u2")
    with open(path, "rb") as fh:
        body = fh.read()
    expected = width * height * dtype.itemsize
    if len(body) != expected:
        raise ImageInputError(
            f"{path}: raw body has {len(body)} bytes, expected {expected}")
    pixels = np.frombuffer(body, dtype=dtype).reshape(height, width)
    return pixels.astype(np.uint16 if depth > 8 else np.uint8), depth


def write_raw(path, pixels, depth):
    pixels = np.asarray(pixels)
    body = pixels.astype("u1" if depth == 8 else "<u2").tobytes()
    with open(path, "wb") as fh:
        fh.write(body)
    with open(_sidecar(path), "w", encoding="utf-8") as fh:
        fh.write(f"width={pixels.shape[1]}\n"
                 f"height={pixels.shape[0]}\n"
                 f"depth={depth}\n")


def read_image(path):
    """Dispatch on extension: .pgm/.pnm -> PGM, anything else -> raw."""
    if str(path).lower().endswith((".pgm", ".pnm")):
        return read_pgm(path)
    return read_raw(path)


def write_image(path, pixels, depth):
    if str(path).lower().endswith((".pgm", ".pnm")):
        write_pgm(path, pixels, depth)
    else:
        write_raw(path, pixels, depth)
