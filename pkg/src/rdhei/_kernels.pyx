# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled kernels; behaviour is defined by ``_purepy`` and must match it exactly."""
import numpy as np
cimport numpy as cnp
from libc.stdint cimport uint8_t, uint32_t, uint64_t, int64_t
from libc.string cimport memset

from .errors import DecodeError

cnp.import_array()

DEF MAX_COUNT = 1024
DEF TOP = 16777216  # 1 << 24
DEF NCTX = 1024


def generate_map(img, int b):
    cdef const uint8_t[:, ::1] src = np.ascontiguousarray(img, dtype=np.uint8)
    cdef Py_ssize_t M = src.shape[0], N = src.shape[1], i, j
    out = np.ones((M, N), dtype=np.uint8)
    cdef uint8_t[:, ::1] lmap = out
    cdef int shift = 8 - b
    cdef uint8_t w, t
    cdef int64_t zeros = 0
    with nogil:
        for i in range(M):
            w = src[i, 0] >> shift
            for j in range(1, N):
                t = src[i, j] >> shift
                if t == w:
                    lmap[i, j] = 0
                    zeros += 1
                else:
                    w = t
    return out, int(zeros)


def reconstruct(img, lmap_in, int b, int mode):
    out = np.array(img, dtype=np.uint8, copy=True, order="C")
    cdef uint8_t[:, ::1] px = out
    cdef const uint8_t[:, ::1] lmap = np.ascontiguousarray(lmap_in, dtype=np.uint8)
    cdef Py_ssize_t M = px.shape[0], N = px.shape[1], i, j
    cdef int shift = 8 - b
    cdef uint8_t gmask, keep, w
    if mode == 0:
        gmask = (0xFF << shift) & 0xFF
    else:
        gmask = (((1 << (b - 1)) - 1) << shift) & 0xFF
    keep = 0xFF ^ gmask
    with nogil:
        for i in range(M):
            w = px[i, 0] >> shift
            for j in range(1, N):
                if lmap[i, j]:
                    w = px[i, j] >> shift
                else:
                    px[i, j] = (px[i, j] & keep) | ((w << shift) & gmask)
    return out


cdef struct Enc:
    uint64_t low
    uint32_t rng
    uint8_t cache
    uint64_t cache_size
    uint8_t* buf
    Py_ssize_t pos


cdef inline void shift_low(Enc* e) noexcept nogil:
    cdef uint8_t temp
    cdef uint8_t carry
    if (e.low >> 24) < 0xFF or (e.low >> 32) != 0:
        carry = <uint8_t>(e.low >> 32)
        temp = e.cache
        while True:
            e.buf[e.pos] = <uint8_t>(temp + carry)
            e.pos += 1
            temp = 0xFF
            e.cache_size -= 1
            if e.cache_size == 0:
                break
        e.cache = <uint8_t>((e.low >> 24) & 0xFF)
    e.cache_size += 1
    e.low = (e.low & 0x00FFFFFFU) << 8


def encode_plane(plane):
    cdef const uint8_t[:, ::1] src = np.ascontiguousarray(plane, dtype=np.uint8)
    cdef Py_ssize_t M = src.shape[0], N = src.shape[1], x, y
    padded = np.zeros((M + 2, N + 4), dtype=np.uint8)
    padded[2:, 2:N + 2] = src
    cdef uint8_t[:, ::1] P = padded
    # each symbol costs < 11.01 bits even against the worst count skew
    cdef Py_ssize_t cap = (M * N * 12) // 8 + 16
    outbuf = np.zeros(cap, dtype=np.uint8)
    cdef uint8_t[::1] ob = outbuf
    cdef uint32_t c0[NCTX]
    cdef uint32_t c1[NCTX]
    cdef Py_ssize_t k
    for k in range(NCTX):
        c0[k] = 1
        c1[k] = 1
    cdef Enc e
    e.low = 0
    e.rng = <uint32_t>0xFFFFFFFFU
    e.cache = 0
    e.cache_size = 1
    e.buf = &ob[0]
    e.pos = 0
    cdef uint32_t ctx, a, z, bound
    cdef uint8_t* r0
    cdef uint8_t* r1
    cdef uint8_t* r2
    with nogil:
        for y in range(M):
            r0 = &P[y, 0]
            r1 = &P[y + 1, 0]
            r2 = &P[y + 2, 0]
            for x in range(N):
                ctx = ((r0[x + 1] << 9) | (r0[x + 2] << 8) | (r0[x + 3] << 7)
                       | (r1[x] << 6) | (r1[x + 1] << 5) | (r1[x + 2] << 4)
                       | (r1[x + 3] << 3) | (r1[x + 4] << 2)
                       | (r2[x] << 1) | r2[x + 1])
                a = c0[ctx]
                z = c1[ctx]
                bound = <uint32_t>((<uint64_t>e.rng * a) // (a + z))
                if r2[x + 2]:
                    e.low += bound
                    e.rng -= bound
                    z += 1
                else:
                    e.rng = bound
                    a += 1
                if a > MAX_COUNT or z > MAX_COUNT:
                    a = (a + 1) >> 1
                    z = (z + 1) >> 1
                c0[ctx] = a
                c1[ctx] = z
                while e.rng < TOP:
                    e.rng = e.rng << 8
                    shift_low(&e)
        for k in range(5):
            shift_low(&e)
    if e.pos < 1 or ob[0] != 0:
        raise AssertionError("range coder produced a non-zero leading byte")
    return bytes(outbuf[1:e.pos])


def decode_plane(data, Py_ssize_t M, Py_ssize_t N):
    cdef bytes raw = bytes(data)
    cdef const uint8_t[::1] src = np.frombuffer(raw, dtype=np.uint8) if len(raw) else np.zeros(0, dtype=np.uint8)
    cdef Py_ssize_t n = src.shape[0]
    if n < 4:
        raise DecodeError("bi-level stream shorter than 4 bytes")
    padded = np.zeros((M + 2, N + 4), dtype=np.uint8)
    cdef uint8_t[:, ::1] P = padded
    cdef uint32_t c0[NCTX]
    cdef uint32_t c1[NCTX]
    cdef Py_ssize_t k, x, y
    for k in range(NCTX):
        c0[k] = 1
        c1[k] = 1
    cdef uint32_t code = (<uint32_t>src[0] << 24) | (<uint32_t>src[1] << 16) | (<uint32_t>src[2] << 8) | src[3]
    cdef Py_ssize_t pos = 4
    cdef uint32_t rng = <uint32_t>0xFFFFFFFFU
    cdef uint32_t ctx, a, z, bound
    cdef int exhausted = 0
    cdef uint8_t* r0
    cdef uint8_t* r1
    cdef uint8_t* r2
    with nogil:
        for y in range(M):
            r0 = &P[y, 0]
            r1 = &P[y + 1, 0]
            r2 = &P[y + 2, 0]
            for x in range(N):
                ctx = ((r0[x + 1] << 9) | (r0[x + 2] << 8) | (r0[x + 3] << 7)
                       | (r1[x] << 6) | (r1[x + 1] << 5) | (r1[x + 2] << 4)
                       | (r1[x + 3] << 3) | (r1[x + 4] << 2)
                       | (r2[x] << 1) | r2[x + 1])
                a = c0[ctx]
                z = c1[ctx]
                bound = <uint32_t>((<uint64_t>rng * a) // (a + z))
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
                c0[ctx] = a
                c1[ctx] = z
                while rng < TOP:
                    if pos >= n:
                        exhausted = 1
                        break
                    rng = rng << 8
                    code = (code << 8) | src[pos]
                    pos += 1
                if exhausted:
                    break
            if exhausted:
                break
    if exhausted:
        raise DecodeError("bi-level stream exhausted before the plane was complete")
    if pos != n or code != 0:
        raise DecodeError("bi-level stream has trailing or inconsistent data")
    return np.ascontiguousarray(padded[2:, 2:N + 2])
