# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled twins of the hot kernels in _pykernels.

Same contracts, same bytes/values out.  The convolution replays the
fallback's float64 accumulation order per output element (the extension
is built with -ffp-contract=off so no FMA contraction sneaks in), and
the arithmetic coder is pure integer math, so both backends agree
bitwise.
"""

import numpy as np

cimport numpy as cnp
from cpython.bytes cimport PyBytes_AsString, PyBytes_FromStringAndSize
from libc.string cimport memset

from .errors import CorruptStreamError

cnp.import_array()

ACT_NONE = 0
ACT_RELU = 1
ACT_CLIPPED_RELU1 = 2

cdef enum:
    AAC_NUM_SYMBOLS = 256
    CHUNK = 8192

cdef extern from *:
    """
    #define MAMC_AAC_FULL     0x100000000ULL
    #define MAMC_AAC_HALF     0x80000000ULL
    #define MAMC_AAC_QUARTER  0x40000000ULL
    #define MAMC_AAC_MAXTOTAL 0x10000ULL
    """
    unsigned long long MAMC_AAC_FULL
    unsigned long long MAMC_AAC_HALF
    unsigned long long MAMC_AAC_QUARTER
    unsigned long long MAMC_AAC_MAXTOTAL


def conv2d_f32(const float[:, :, ::1] padded, const float[:, :, :, ::1] kernel,
               const float[::1] bias, int stride, int act):
    """3x3 correlation over a pre-padded (C, H+2, W+2) float32 input."""
    cdef Py_ssize_t out_ch = kernel.shape[0]
    cdef Py_ssize_t in_ch = kernel.shape[1]
    cdef Py_ssize_t h_out = (padded.shape[1] - 3) // stride + 1
    cdef Py_ssize_t w_out = (padded.shape[2] - 3) // stride + 1

    out_arr = np.empty((out_ch, h_out, w_out), dtype=np.float32)
    acc_arr = np.empty((h_out, w_out), dtype=np.float64)
    cdef float[:, :, ::1] out = out_arr
    cdef double[:, ::1] acc = acc_arr

    cdef Py_ssize_t oc, ic, ky, kx, y, x
    cdef double w, b, v
    for oc in range(out_ch):
        b = <double> bias[oc]
        for y in range(h_out):
            for x in range(w_out):
                acc[y, x] = b
        for ic in range(in_ch):
            for ky in range(3):
                for kx in range(3):
                    w = <double> kernel[oc, ic, ky, kx]
                    for y in range(h_out):
                        for x in range(w_out):
                            acc[y, x] = acc[y, x] + w * <double> padded[ic, y * stride + ky, x * stride + kx]
        for y in range(h_out):
            for x in range(w_out):
                v = acc[y, x]
                if act == 1:
                    if v < 0.0:
                        v = 0.0
                elif act == 2:
                    if v < 0.0:
                        v = 0.0
                    elif v > 1.0:
                        v = 1.0
                out[oc, y, x] = <float> v
    return out_arr


# ---------------------------------------------------------------------------
# Adaptive arithmetic coder (order-0, 256 symbols, Fenwick-tree model)
# ---------------------------------------------------------------------------

cdef struct ByteModel:
    unsigned int counts[AAC_NUM_SYMBOLS]
    unsigned int tree[AAC_NUM_SYMBOLS + 1]
    unsigned long long total


cdef void model_rebuild(ByteModel* m) noexcept nogil:
    cdef Py_ssize_t i, j, parent
    memset(m.tree, 0, sizeof(m.tree))
    for i in range(AAC_NUM_SYMBOLS):
        j = i + 1
        m.tree[j] += m.counts[i]
        parent = j + (j & -j)
        if parent <= AAC_NUM_SYMBOLS:
            m.tree[parent] += m.tree[j]


cdef void model_init(ByteModel* m) noexcept nogil:
    cdef Py_ssize_t i
    for i in range(AAC_NUM_SYMBOLS):
        m.counts[i] = 1
    m.total = AAC_NUM_SYMBOLS
    model_rebuild(m)


cdef unsigned long long model_cum_low(ByteModel* m, int symbol) noexcept nogil:
    cdef unsigned long long s = 0
    cdef Py_ssize_t j = symbol
    while j > 0:
        s += m.tree[j]
        j -= j & -j
    return s


cdef int model_find(ByteModel* m, unsigned long long value,
                    unsigned long long* cum_low) noexcept nogil:
    cdef Py_ssize_t idx = 0, bit = AAC_NUM_SYMBOLS, nxt
    cdef unsigned long long rem = value
    while bit:
        nxt = idx + bit
        if nxt <= AAC_NUM_SYMBOLS and m.tree[nxt] <= rem:
            idx = nxt
            rem -= m.tree[nxt]
        bit >>= 1
    cum_low[0] = value - rem
    return <int> idx


cdef void model_update(ByteModel* m, int symbol) noexcept nogil:
    cdef Py_ssize_t i, j
    cdef unsigned long long total
    m.counts[symbol] += 1
    m.total += 1
    j = symbol + 1
    while j <= AAC_NUM_SYMBOLS:
        m.tree[j] += 1
        j += j & -j
    if m.total >= MAMC_AAC_MAXTOTAL:
        total = 0
        for i in range(AAC_NUM_SYMBOLS):
            m.counts[i] = (m.counts[i] + 1) >> 1
            total += m.counts[i]
        m.total = total
        model_rebuild(m)


cdef class _ChunkedWriter:
    cdef unsigned char buf[CHUNK]
    cdef Py_ssize_t fill
    cdef unsigned int cur
    cdef int nbits
    cdef bytearray out

    def __cinit__(self):
        self.fill = 0
        self.cur = 0
        self.nbits = 0
        self.out = bytearray()

    cdef void put_byte(self, unsigned char b):
        if self.fill == CHUNK:
            self.out += PyBytes_FromStringAndSize(<char*> self.buf, CHUNK)
            self.fill = 0
        self.buf[self.fill] = b
        self.fill += 1

    cdef void put_bit(self, int bit):
        self.cur = (self.cur << 1) | <unsigned int> bit
        self.nbits += 1
        if self.nbits == 8:
            self.put_byte(<unsigned char> self.cur)
            self.cur = 0
            self.nbits = 0

    cdef bytes finish(self):
        if self.nbits:
            self.put_byte(<unsigned char> (self.cur << (8 - self.nbits)))
        if self.fill:
            self.out += PyBytes_FromStringAndSize(<char*> self.buf, self.fill)
            self.fill = 0
        return bytes(self.out)


def aac_encode(data):
    cdef bytes data_b = bytes(data)
    cdef Py_ssize_t n = len(data_b)
    if n == 0:
        return b""
    cdef const unsigned char[::1] src = data_b
    cdef ByteModel model
    model_init(&model)
    cdef _ChunkedWriter writer = _ChunkedWriter()

    cdef unsigned long long low = 0, high = MAMC_AAC_FULL - 1
    cdef unsigned long long pending = 0, span, cum_low, cum_high, total
    cdef Py_ssize_t i
    cdef int symbol, bit

    for i in range(n):
        symbol = src[i]
        span = high - low + 1
        cum_low = model_cum_low(&model, symbol)
        cum_high = cum_low + model.counts[symbol]
        total = model.total
        high = low + span * cum_high / total - 1
        low = low + span * cum_low / total
        while True:
            if high < MAMC_AAC_HALF:
                bit = 0
            elif low >= MAMC_AAC_HALF:
                bit = 1
                low -= MAMC_AAC_HALF
                high -= MAMC_AAC_HALF
            elif low >= MAMC_AAC_QUARTER and high < MAMC_AAC_HALF + MAMC_AAC_QUARTER:
                pending += 1
                low -= MAMC_AAC_QUARTER
                high -= MAMC_AAC_QUARTER
                low <<= 1
                high = (high << 1) | 1
                continue
            else:
                break
            writer.put_bit(bit)
            while pending:
                writer.put_bit(bit ^ 1)
                pending -= 1
            low <<= 1
            high = (high << 1) | 1
        model_update(&model, symbol)

    pending += 1
    bit = 0 if low < MAMC_AAC_QUARTER else 1
    writer.put_bit(bit)
    while pending:
        writer.put_bit(bit ^ 1)
        pending -= 1
    return writer.finish()


def aac_decode(payload, Py_ssize_t count):
    cdef bytes payload_b = bytes(payload)
    if count == 0:
        return b""
    cdef Py_ssize_t nbytes = len(payload_b)
    cdef const unsigned char[::1] src = payload_b if nbytes else b"\x00"
    cdef unsigned long long payload_bits = 8 * nbytes
    cdef unsigned long long limit = payload_bits + 32
    cdef unsigned long long consumed = 0

    out_obj = PyBytes_FromStringAndSize(NULL, count)
    cdef unsigned char* out = <unsigned char*> PyBytes_AsString(out_obj)

    cdef ByteModel model
    model_init(&model)

    cdef unsigned long long low = 0, high = MAMC_AAC_FULL - 1, code = 0
    cdef unsigned long long span, value, cum_low, cum_high, total, pos
    cdef Py_ssize_t i
    cdef int symbol, bit, overrun = 0

    for i in range(32):
        if consumed >= limit:
            overrun = 1
            break
        pos = consumed
        consumed += 1
        bit = 0
        if pos < payload_bits:
            bit = (src[pos >> 3] >> (7 - (pos & 7))) & 1
        code = (code << 1) | <unsigned long long> bit
    if overrun:
        raise CorruptStreamError("arithmetic payload exhausted early")

    for i in range(count):
        span = high - low + 1
        total = model.total
        value = ((code - low + 1) * total - 1) / span
        symbol = model_find(&model, value, &cum_low)
        cum_high = cum_low + model.counts[symbol]
        high = low + span * cum_high / total - 1
        low = low + span * cum_low / total
        while True:
            if high < MAMC_AAC_HALF:
                pass
            elif low >= MAMC_AAC_HALF:
                low -= MAMC_AAC_HALF
                high -= MAMC_AAC_HALF
                code -= MAMC_AAC_HALF
            elif low >= MAMC_AAC_QUARTER and high < MAMC_AAC_HALF + MAMC_AAC_QUARTER:
                low -= MAMC_AAC_QUARTER
                high -= MAMC_AAC_QUARTER
                code -= MAMC_AAC_QUARTER
            else:
                break
            if consumed >= limit:
                raise CorruptStreamError("arithmetic payload exhausted early")
            pos = consumed
            consumed += 1
            bit = 0
            if pos < payload_bits:
                bit = (src[pos >> 3] >> (7 - (pos & 7))) & 1
            low <<= 1
            high = (high << 1) | 1
            code = (code << 1) | <unsigned long long> bit
        model_update(&model, symbol)
        out[i] = <unsigned char> symbol
    return out_obj


def fnv1a64(data):
    cdef bytes data_b = bytes(data)
    cdef Py_ssize_t n = len(data_b)
    cdef const unsigned char[::1] src = data_b if n else b"\x00"
    cdef unsigned long long h = 0xCBF29CE484222325ULL
    cdef Py_ssize_t i
    with nogil:
        for i in range(n):
            h ^= src[i]
            h *= 0x100000001B3ULL
    return h
