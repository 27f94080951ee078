"""Pure-Python kernels; the reference the compiled ``_kernels`` must match bit for bit.

Bi-level stream format
----------------------
Context: 10 causal pixels, concatenated MSB-first as
row y-2 at x-1, x, x+1; row y-1 at x-2 .. x+2; row y at x-2, x-1.
Pixels outside the plane read as 0.

Model: per-context counts (c0, c1), both starting at 1; after coding a bit
its count is incremented and, once it exceeds ``MAX_COUNT``, both counts
become ``(c + 1) >> 1``.

Coder: 32-bit range coder with a carry-propagating byte cache.  The split
for a symbol is ``range * c0 // (c0 + c1)``; renormalization shifts out one
byte whenever ``range < 2**24``.  The stream ends by flushing the low
register (byte aligned).  The always-zero leading cache byte is omitted, so
a decoder primes its code register with the first four bytes.  A valid
stream is consumed exactly and leaves the code register at zero.
"""
import numpy as np

from .errors import DecodeError

MAX_COUNT = 1024
TOP = 1 << 24
MASK32 = 0xFFFFFFFF
NUM_CONTEXTS = 1024


def generate_map(img, b):
    img = np.ascontiguousarray(img, dtype=np.uint8)
    shift = 8 - b
    top = img >> shift
    M, N = img.shape
    lmap = np.ones((M, N), dtype=np.uint8)
    omega = top[:, 0].copy()
    for j in range(1, N):
        col = top[:, j]
        same = col == omega
        lmap[:, j] = ~same
        omega = np.where(same, omega, col)
    zeros = int(M * N - int(lmap.sum()))
    return lmap, zeros


def reconstruct(img, lmap, b, mode):
    """``mode`` 0 restores bit positions 1..b, mode 1 restores 2..b."""
    out = np.array(img, dtype=np.uint8, copy=True)
    lmap = np.asarray(lmap, dtype=np.uint8)
    shift = 8 - b
    if mode == 0:
        gmask = (0xFF << shift) & 0xFF
    else:
        gmask = (((1 << (b - 1)) - 1) << shift) & 0xFF
    keep = np.uint8(0xFF ^ gmask)
    gmask = np.uint8(gmask)
    omega = out[:, 0] >> shift
    for j in range(1, out.shape[1]):
        col = out[:, j]
        fresh = lmap[:, j] != 0
        omega = np.where(fresh, col >> shift, omega)
        restored = (col & keep) | ((omega << shift).astype(np.uint8) & gmask)
        out[:, j] = np.where(fresh, col, restored)
    return out


class _Encoder:
    def __init__(self):
        self.low = 0
        self.range = MASK32
        self.cache = 0
        self.cache_size = 1
        self.out = bytearray()

    def shift_low(self):
        low = self.low
        if low < 0xFF000000 or low > MASK32:
            carry = low >> 32
            temp = self.cache
            out = self.out
            while True:
                out.append((temp + carry) & 0xFF)
                temp = 0xFF
                self.cache_size -= 1
                if self.cache_size == 0:
                    break
            self.cache = (low >> 24) & 0xFF
        self.cache_size += 1
        self.low = (low & 0x00FFFFFF) << 8

    def finish(self):
        for _ in range(5):
            self.shift_low()
        # leading byte is the initial cache and always zero
        assert self.out[0] == 0
        return bytes(self.out[1:])


def _padded(plane):
    M, N = plane.shape
    pad = [bytearray(N + 4) for _ in range(M + 2)]
    return pad


def encode_plane(plane):
    plane = np.asarray(plane, dtype=np.uint8)
    M, N = plane.shape
    rows = _padded(plane)
    for y in range(M):
        rows[y + 2][2 : N + 2] = plane[y].tobytes()
    c0 = [1] * NUM_CONTEXTS
    c1 = [1] * NUM_CONTEXTS
    enc = _Encoder()
    for y in range(M):
        r0, r1, r2 = rows[y], rows[y + 1], rows[y + 2]
        for x in range(N):
            ctx = (
                (r0[x + 1] << 9) | (r0[x + 2] << 8) | (r0[x + 3] << 7)
                | (r1[x] << 6) | (r1[x + 1] << 5) | (r1[x + 2] << 4)
                | (r1[x + 3] << 3) | (r1[x + 4] << 2)
                | (r2[x] << 1) | r2[x + 1]
            )
            a, z = c0[ctx], c1[ctx]
            bound = enc.range * a // (a + z)
            if r2[x + 2]:
                enc.low += bound
                enc.range -= bound
                z += 1
            else:
                enc.range = bound
                a += 1
            if a > MAX_COUNT or z > MAX_COUNT:
                a = (a + 1) >> 1
                z = (z + 1) >> 1
            c0[ctx], c1[ctx] = a, z
            while enc.range < TOP:
                enc.range = (enc.range << 8) & MASK32
                enc.shift_low()
    return enc.finish()


def decode_plane(data, M, N):
    data = bytes(data)
    if len(data) < 4:
        raise DecodeError("bi-level stream shorter than 4 bytes")
    code = int.from_bytes(data[:4], "big")
    pos = 4
    rng = MASK32
    rows = [bytearray(N + 4) for _ in range(M + 2)]
    c0 = [1] * NUM_CONTEXTS
    c1 = [1] * NUM_CONTEXTS
    for y in range(M):
        r0, r1, r2 = rows[y], rows[y + 1], rows[y + 2]
        for x in range(N):
            ctx = (
                (r0[x + 1] << 9) | (r0[x + 2] << 8) | (r0[x + 3] << 7)
                | (r1[x] << 6) | (r1[x + 1] << 5) | (r1[x + 2] << 4)
                | (r1[x + 3] << 3) | (r1[x + 4] << 2)
                | (r2[x] << 1) | r2[x + 1]
            )
            a, z = c0[ctx], c1[ctx]
            bound = rng * a // (a + z)
            if code < bound:
                rng = bound
                a += 1
            else:
                code -= bound
                rng -= bound
                z += 1
                r2[x + 2] = 1
            if a > MAX_COUNT or z > MAX_COUNT:
                a = (a + 1) >> 1
                z = (z + 1) >> 1
            c0[ctx], c1[ctx] = a, z
            while rng < TOP:
                if pos >= len(data):
                    raise DecodeError("bi-level stream exhausted before the plane was complete")
                rng = (rng << 8) & MASK32
                code = ((code << 8) | data[pos]) & MASK32
                pos += 1
    if pos != len(data) or code != 0:
        raise DecodeError("bi-level stream has trailing or inconsistent data")
    out = np.empty((M, N), dtype=np.uint8)
    for y in range(M):
        out[y] = np.frombuffer(bytes(rows[y + 2][2 : N + 2]), dtype=np.uint8)
    return out
