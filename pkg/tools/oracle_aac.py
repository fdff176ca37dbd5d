"""Reference adaptive arithmetic coder used to produce the golden fixtures.

Deliberately naive and transparent: Python big ints, a plain list of
frequency counts, and bit-at-a-time I/O.  The shipped coder in
``mamcodec`` must reproduce these bytes exactly; this file is the
independent oracle and must stay free of any mamcodec imports.

Coder parameters (normative):
  * 32-bit low/high registers, initial 0 / 0xFFFFFFFF
  * adaptive order-0 model over 256 symbols, counts start at 1,
    count += 1 after each coded symbol
  * counts halved (rounding up, never below 1) once total >= 2**16
  * low' = low + floor(range*cumLow/total),
    high' = low + floor(range*cumHigh/total) - 1, range = high - low + 1
  * MSB-first bit output, E1/E2/E3 renormalisation
  * flush: pending += 1, then emit 0 if low < QUARTER else 1 (plus the
    pending opposite bits), zero-pad the final byte
  * the empty stream encodes to an empty payload
"""

FULL = 1 << 32
HALF = 1 << 31
QUARTER = 1 << 30
MAX_TOTAL = 1 << 16
NUM_SYMBOLS = 256


class Model:
    def __init__(self):
        self.counts = [1] * NUM_SYMBOLS
        self.total = NUM_SYMBOLS

    def cum_range(self, symbol):
        cum_low = sum(self.counts[:symbol])
        return cum_low, cum_low + self.counts[symbol]

    def update(self, symbol):
        self.counts[symbol] += 1
        self.total += 1
        if self.total >= MAX_TOTAL:
            self.counts = [(c + 1) // 2 for c in self.counts]
            self.total = sum(self.counts)


class BitWriter:
    def __init__(self):
        self.out = bytearray()
        self.cur = 0
        self.nbits = 0

    def write(self, bit):
        self.cur = (self.cur << 1) | bit
        self.nbits += 1
        if self.nbits == 8:
            self.out.append(self.cur)
            self.cur = 0
            self.nbits = 0

    def finish(self):
        while self.nbits != 0:
            self.write(0)
        return bytes(self.out)


def encode(data):
    if len(data) == 0:
        return b""
    model = Model()
    writer = BitWriter()
    low, high, pending = 0, FULL - 1, 0

    def emit(bit):
        nonlocal pending
        writer.write(bit)
        for _ in range(pending):
            writer.write(bit ^ 1)
        pending = 0

    for symbol in data:
        span = high - low + 1
        cum_low, cum_high = model.cum_range(symbol)
        high = low + span * cum_high // model.total - 1
        low = low + span * cum_low // model.total
        while True:
            if high < HALF:
                emit(0)
            elif low >= HALF:
                emit(1)
                low -= HALF
                high -= HALF
            elif low >= QUARTER and high < HALF + QUARTER:
                pending += 1
                low -= QUARTER
                high -= QUARTER
            else:
                break
            low = low * 2
            high = high * 2 + 1
        model.update(symbol)

    pending += 1
    emit(0 if low < QUARTER else 1)
    return writer.finish()


def decode(payload, count):
    if count == 0:
        return b""
    model = Model()
    out = bytearray()
    nbits_avail = 8 * len(payload) + 32
    consumed = 0

    def read_bit():
        nonlocal consumed
        if consumed >= nbits_avail:
            raise ValueError("payload exhausted")
        pos = consumed
        consumed += 1
        if pos >= 8 * len(payload):
            return 0
        return (payload[pos >> 3] >> (7 - (pos & 7))) & 1

    low, high = 0, FULL - 1
    code = 0
    for _ in range(32):
        code = (code << 1) | read_bit()

    for _ in range(count):
        span = high - low + 1
        value = ((code - low + 1) * model.total - 1) // span
        symbol = 0
        cum_low = 0
        while cum_low + model.counts[symbol] <= value:
            cum_low += model.counts[symbol]
            symbol += 1
        cum_high = cum_low + model.counts[symbol]
        high = low + span * cum_high // model.total - 1
        low = low + span * cum_low // model.total
        while True:
            if high < HALF:
                pass
            elif low >= HALF:
                low -= HALF
                high -= HALF
                code -= HALF
            elif low >= QUARTER and high < HALF + QUARTER:
                low -= QUARTER
                high -= QUARTER
                code -= QUARTER
            else:
                break
            low = low * 2
            high = high * 2 + 1
            code = code * 2 + read_bit()
        model.update(symbol)
        out.append(symbol)
    return bytes(out)
