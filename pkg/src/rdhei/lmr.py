"""LMR: lossless scheme with compressed maps stored in the first MSB plane.

MSB-plane layout, raster order, MSB-first::

    b - 2      3 bits
    len_eta   32 bits   (bit length of the compressed first-MSB map)
    len_map   32 bits   (bit length of the compressed location map)
    eta stream, then map stream

Plane bits after the two streams keep the encrypted image's own MSBs.
"""
from __future__ import annotations

import numpy as np

from . import _embed
from .bitops import bits_to_int, first_msb_map, int_to_bits, msb_plane_read, msb_plane_write
from .codec import CompressedPlane, compress, decompress
from .crypto_stream import keystream, parse_key
from .errors import FormatError
from .location_map import BITS_2_TO_B, LMR, reconstruct_msbs, select_optimal
from .pipeline import EncodeResult
from .pixmap_io import as_gray
from .rotation import FORWARD, INVERSE, lmr_schedule, rotate_all

B_FIELD = 3
LEN_FIELD = 32
HEADER_BITS = B_FIELD + 2 * LEN_FIELD
DEFAULT_E_MIN = 4


def _bytes_to_bits(data: bytes) -> np.ndarray:
    return np.unpackbits(np.frombuffer(data, dtype=np.uint8))


def pack_header(b: int, eta: CompressedPlane, lmap: CompressedPlane) -> np.ndarray:
    return np.concatenate(
        [
            int_to_bits(b - 2, B_FIELD),
            int_to_bits(eta.bit_length, LEN_FIELD),
            int_to_bits(lmap.bit_length, LEN_FIELD),
            _bytes_to_bits(eta.bitstream),
            _bytes_to_bits(lmap.bitstream),
        ]
    )


def lmr_encode(img, key1, e_min: int = DEFAULT_E_MIN) -> EncodeResult:
    """Encode, walking candidate maps in payload order until both maps fit.

    Returns a result with ``bad_case`` set when no candidate fits.
    """
    img = as_gray(img)
    key1 = parse_key(key1)
    M, N = img.shape
    s = keystream(key1, M, N)
    sched = lmr_schedule(M, N, e_min)
    rotated = rotate_all(img, s, sched, FORWARD)
    eta = compress(rotate_all(first_msb_map(img), s, sched, FORWARD))
    budget = M * N - HEADER_BITS - eta.bit_length

    tried = 0
    for choice in select_optimal(img, LMR):
        tried += 1
        if budget < 0:
            break
        cmap = compress(rotate_all(choice.map, s, sched, FORWARD))
        if cmap.bit_length > budget:
            continue
        block = pack_header(choice.b, eta, cmap)
        msb = msb_plane_read(rotated ^ s).reshape(-1)
        msb[: block.size] = block
        marked = msb_plane_write(rotated ^ s, msb.reshape(M, N))
        return EncodeResult(LMR, marked, choice, choice.payload_bits, tried)
    return EncodeResult(LMR, None, None, 0, tried)


def read_header(img):
    """Parse and validate ``(b, len_eta, len_map, plane_bits)``."""
    img = as_gray(img)
    M, N = img.shape
    if M * N < HEADER_BITS:
        raise FormatError(f"image of {M * N} pixels cannot hold the {HEADER_BITS}-bit header")
    plane = msb_plane_read(img).reshape(-1)
    b = bits_to_int(plane[:B_FIELD]) + 2
    len_eta = bits_to_int(plane[B_FIELD : B_FIELD + LEN_FIELD])
    len_map = bits_to_int(plane[B_FIELD + LEN_FIELD : HEADER_BITS])
    if b > 8:
        raise FormatError(f"LMR header encodes b={b}, outside [2, 8]")
    if len_eta % 8 or len_map % 8 or len_eta < 32 or len_map < 32:
        raise FormatError("LMR stream lengths must be byte aligned and at least 32 bits")
    if HEADER_BITS + len_eta + len_map > M * N:
        raise FormatError("LMR streams overrun the MSB plane")
    return b, len_eta, len_map, plane


def _stream(plane, start, length, M, N) -> CompressedPlane:
    return CompressedPlane(M, N, np.packbits(plane[start : start + length]).tobytes())


def read_location_map(img):
    """Recover ``(b, rotated_map)`` from the MSB plane; needs no key."""
    img = as_gray(img)
    M, N = img.shape
    b, len_eta, len_map, plane = read_header(img)
    lmap = decompress(_stream(plane, HEADER_BITS + len_eta, len_map, M, N))
    return b, lmap


def lmr_capacity(img) -> int:
    b, lmap = read_location_map(img)
    return (b - 1) * int(np.count_nonzero(lmap == 0))


def lmr_hide(encrypted, key2, message: bytes) -> np.ndarray:
    encrypted = as_gray(encrypted)
    b, lmap = read_location_map(encrypted)
    bits = _embed.payload_bits(parse_key(key2), message)
    return _embed.embed(encrypted, lmap, b - 1, 2, bits)


def lmr_extract(marked, key2) -> bytes:
    marked = as_gray(marked)
    b, lmap = read_location_map(marked)
    return _embed.extract_message(marked, lmap, b - 1, 2, parse_key(key2))


def lmr_recover(marked, key1, e_min: int = DEFAULT_E_MIN) -> np.ndarray:
    """Bit-exact original image."""
    marked = as_gray(marked)
    M, N = marked.shape
    b, len_eta, len_map, plane = read_header(marked)
    eta_r = decompress(_stream(plane, HEADER_BITS, len_eta, M, N))
    lmap_r = decompress(_stream(plane, HEADER_BITS + len_eta, len_map, M, N))
    s = keystream(parse_key(key1), M, N)
    sched = lmr_schedule(M, N, e_min)
    decrypted = msb_plane_write(marked ^ s, eta_r)
    restored = rotate_all(decrypted, s, sched, INVERSE)
    lmap = rotate_all(lmap_r, s, sched, INVERSE)
    return reconstruct_msbs(restored, lmap, b, BITS_2_TO_B)
