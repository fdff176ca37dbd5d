"""Pure-Python/numpy implementations of the hot kernels.

This is the fallback backend used when the compiled extension
(mamcodec._ckernels) is unavailable; both backends must produce
identical bytes/values for identical inputs.

The convolution accumulates in float64 in a fixed order (bias, then
input channel, then kernel row, then kernel column) and stores float32.
The compiled backend replays exactly the same floating-point operation
sequence per output element, so the two agree bitwise, not just to
tolerance.

The arithmetic coder is the normative one: 32-bit registers, adaptive
order-0 byte model (counts start at 1, +1 per coded symbol, halved
rounding up once the total reaches 2**16), MSB-first bit output,
quarter-selector flush, zero-padded final byte.  An empty stream maps
to an empty payload.
"""

import numpy as np

from .errors import CorruptStreamError

ACT_NONE = 0
ACT_RELU = 1
ACT_CLIPPED_RELU1 = 2

AAC_FULL = 1 << 32
AAC_HALF = 1 << 31
AAC_QUARTER = 1 << 30
AAC_NUM_SYMBOLS = 256
AAC_MAX_TOTAL = 1 << 16


def conv2d_f32(padded, kernel, bias, stride, act):
    """3x3 correlation over a pre-padded (C, H+2, W+2) float32 input."""
    out_ch, in_ch = kernel.shape[0], kernel.shape[1]
    h_out = (padded.shape[1] - 3) // stride + 1
    w_out = (padded.shape[2] - 3) // stride + 1
    h_span = (h_out - 1) * stride + 1
    w_span = (w_out - 1) * stride + 1

    pf = padded.astype(np.float64)
    kf = kernel.astype(np.float64)
    bf = bias.astype(np.float64)

    out = np.empty((out_ch, h_out, w_out), dtype=np.float32)
    for oc in range(out_ch):
        acc = np.full((h_out, w_out), bf[oc])
        for ic in range(in_ch):
            plane = pf[ic]
            for ky in range(3):
                for kx in range(3):
                    acc += kf[oc, ic, ky, kx] * plane[
                        ky:ky + h_span:stride, kx:kx + w_span:stride]
        if act == ACT_RELU:
            np.maximum(acc, 0.0, out=acc)
        elif act == ACT_CLIPPED_RELU1:
            np.clip(acc, 0.0, 1.0, out=acc)
        out[oc] = acc
    return out


class AdaptiveByteModel:
    """Order-0 frequency model over 256 symbols, Fenwick-tree backed.

    Invariants: every count >= 1; total < 2**16 after rescale.
    """

    def __init__(self):
        self.counts = [1] * AAC_NUM_SYMBOLS
        self.total = AAC_NUM_SYMBOLS
        self._rebuild()

    def _rebuild(self):
        tree = [0] * (AAC_NUM_SYMBOLS + 1)
        for i, c in enumerate(self.counts):
            j = i + 1
            tree[j] += c
            parent = j + (j & -j)
            if parent <= AAC_NUM_SYMBOLS:
                tree[parent] += tree[j]
        self._tree = tree

    def cum_range(self, symbol):
        tree = self._tree
        s = 0
        j = symbol
        while j > 0:
            s += tree[j]
            j -= j & -j
        return s, s + self.counts[symbol]

    def find(self, value):
        """Symbol s with cumLow(s) <= value < cumHigh(s), plus that range."""
        tree = self._tree
        idx = 0
        rem = value
        bit = AAC_NUM_SYMBOLS
        while bit:
            nxt = idx + bit
            if nxt <= AAC_NUM_SYMBOLS and tree[nxt] <= rem:
                idx = nxt
                rem -= tree[nxt]
            bit >>= 1
        cum_low = value - rem
        return idx, cum_low, cum_low + self.counts[idx]

    def update(self, symbol):
        self.counts[symbol] += 1
        self.total += 1
        j = symbol + 1
        tree = self._tree
        while j <= AAC_NUM_SYMBOLS:
            tree[j] += 1
            j += j & -j
        if self.total >= AAC_MAX_TOTAL:
            self.counts = [(c + 1) // 2 for c in self.counts]
            self.total = sum(self.counts)
            self._rebuild()


def aac_encode(data):
    data = bytes(data)
    if not data:
        return b""
    model = AdaptiveByteModel()
    out = bytearray()
    cur = 0
    nbits = 0
    low = 0
    high = AAC_FULL - 1
    pending = 0

    def emit(bit):
        nonlocal cur, nbits, pending
        bits = [bit] + [bit ^ 1] * pending
        pending = 0
        for b in bits:
            cur = (cur << 1) | b
            nbits += 1
            if nbits == 8:
                out.append(cur)
                cur = 0
                nbits = 0

    for symbol in data:
        span = high - low + 1
        cum_low, cum_high = model.cum_range(symbol)
        total = model.total
        high = low + span * cum_high // total - 1
        low = low + span * cum_low // total
        while True:
            if high < AAC_HALF:
                emit(0)
            elif low >= AAC_HALF:
                emit(1)
                low -= AAC_HALF
                high -= AAC_HALF
            elif low >= AAC_QUARTER and high < AAC_HALF + AAC_QUARTER:
                pending += 1
                low -= AAC_QUARTER
                high -= AAC_QUARTER
            else:
                break
            low *= 2
            high = high * 2 + 1
        model.update(symbol)

    pending += 1
    emit(0 if low < AAC_QUARTER else 1)
    if nbits:
        out.append(cur << (8 - nbits))
    return bytes(out)


def aac_decode(payload, count):
    payload = bytes(payload)
    if count == 0:
        return b""
    model = AdaptiveByteModel()
    out = bytearray()
    payload_bits = 8 * len(payload)
    # A well-formed payload never needs more than 32 zero bits past its
    # end (the decoder pre-reads a full register); demanding more means
    # the payload was truncated.
    limit = payload_bits + 32
    consumed = 0

    def read_bit():
        nonlocal consumed
        if consumed >= limit:
            raise CorruptStreamError("arithmetic payload exhausted early")
        pos = consumed
        consumed += 1
        if pos >= payload_bits:
            return 0
        return (payload[pos >> 3] >> (7 - (pos & 7))) & 1

    low = 0
    high = AAC_FULL - 1
    code = 0
    for _ in range(32):
        code = (code << 1) | read_bit()

    for _ in range(count):
        span = high - low + 1
        total = model.total
        value = ((code - low + 1) * total - 1) // span
        symbol, cum_low, cum_high = model.find(value)
        high = low + span * cum_high // total - 1
        low = low + span * cum_low // total
        while True:
            if high < AAC_HALF:
                pass
            elif low >= AAC_HALF:
                low -= AAC_HALF
                high -= AAC_HALF
                code -= AAC_HALF
            elif low >= AAC_QUARTER and high < AAC_HALF + AAC_QUARTER:
                low -= AAC_QUARTER
                high -= AAC_QUARTER
                code -= AAC_QUARTER
            else:
                break
            low *= 2
            high = high * 2 + 1
            code = code * 2 + read_bit()
        model.update(symbol)
        out.append(symbol)
    return bytes(out)


def fnv1a64(data):
    h = 0xCBF29CE484222325
    for b in bytes(data):
        h ^= b
        h = (h * 0x100000001B3) & 0xFFFFFFFFFFFFFFFF
    return h
