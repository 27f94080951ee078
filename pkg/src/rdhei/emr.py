"""EMR: high-capacity scheme with near-lossless recovery.

On-image layout: the LSB plane of the encrypted image carries the rotated
location map.  Its first three raster entries are forced to 1 (always safe:
a redundant pixel relabelled 1 only refreshes the row reference with the
value it already had) and their LSBs hold ``b - 2`` MSB-first instead.
"""
from __future__ import annotations

import numpy as np

from . import _embed
from .bitops import bits_to_int, int_to_bits, lsb_plane_read, lsb_plane_write
from .crypto_stream import keystream, parse_key
from .errors import FormatError, UnsupportedSizeError
from .location_map import EMR, TOP_B, reconstruct_msbs, select_optimal
from .pipeline import EncodeResult
from .pixmap_io import as_gray
from .rotation import FORWARD, INVERSE, emr_schedule, rotate_all

HEADER_BITS = 3
MIN_SIDE = 4


def _check_size(img):
    M, N = img.shape
    if M < MIN_SIDE or N < MIN_SIDE:
        raise UnsupportedSizeError(f"EMR needs at least {MIN_SIDE}x{MIN_SIDE} pixels, got {M}x{N}")


def emr_encode(img, key1) -> EncodeResult:
    img = as_gray(img)
    _check_size(img)
    key1 = parse_key(key1)
    choice = select_optimal(img, EMR)[0]
    M, N = img.shape
    s = keystream(key1, M, N)
    sched = emr_schedule(M, N)
    rotated = rotate_all(img, s, sched, FORWARD)
    lmap_r = rotate_all(choice.map, s, sched, FORWARD)
    encrypted = rotated ^ s

    lsb = lmap_r.copy().reshape(-1)
    lsb[:HEADER_BITS] = int_to_bits(choice.b - 2, HEADER_BITS)
    marked = lsb_plane_write(encrypted, lsb.reshape(M, N))
    stored = lmap_r.reshape(-1).copy()
    stored[:HEADER_BITS] = 1
    capacity = choice.b * int(np.count_nonzero(stored == 0))
    return EncodeResult(EMR, marked, choice, capacity)


def read_layout(img):
    """Recover ``(b, rotated_map)`` from the LSB plane; needs no key."""
    img = as_gray(img)
    _check_size(img)
    lsb = lsb_plane_read(img)
    b = bits_to_int(lsb.reshape(-1)[:HEADER_BITS]) + 2
    if b > 7:
        raise FormatError(f"EMR header encodes b={b}, outside [2, 7]")
    lmap = lsb.copy()
    lmap.reshape(-1)[:HEADER_BITS] = 1
    return b, lmap


def emr_capacity(img) -> int:
    b, lmap = read_layout(img)
    return b * int(np.count_nonzero(lmap == 0))


def emr_hide(encrypted, key2, message: bytes) -> np.ndarray:
    encrypted = as_gray(encrypted)
    b, lmap = read_layout(encrypted)
    bits = _embed.payload_bits(parse_key(key2), message)
    return _embed.embed(encrypted, lmap, b, 1, bits)


def emr_extract(marked, key2) -> bytes:
    b, lmap = read_layout(marked)
    return _embed.extract_message(as_gray(marked), lmap, b, 1, parse_key(key2))


def emr_recover(marked, key1) -> np.ndarray:
    """Original image in bit positions 1..7; the LSB plane is not recoverable."""
    marked = as_gray(marked)
    b, lmap_r = read_layout(marked)
    M, N = marked.shape
    s = keystream(parse_key(key1), M, N)
    sched = emr_schedule(M, N)
    decrypted = rotate_all(marked ^ s, s, sched, INVERSE)
    lmap = rotate_all(lmap_r, s, sched, INVERSE)
    return reconstruct_msbs(decrypted, lmap, b, TOP_B)
