"""Bit-plane and multi-MSB primitives.

Bit positions are numbered 1 (MSB, weight 128) through 8 (LSB, weight 1).
The scalar helpers also accept numpy integer arrays and operate elementwise.
"""
import numpy as np

from .pixmap_io import as_gray


def _check_b(b, lo=1, hi=8):
    if not lo <= b <= hi:
        raise ValueError(f"b must be in [{lo}, {hi}], got {b}")


def _check_value(value, limit):
    v = np.asarray(value)
    if v.size and (v.min() < 0 or v.max() >= limit):
        raise ValueError(f"value must lie in [0, {limit})")


def top_bits(pixel, b):
    """The ``b`` most significant bits of ``pixel``, as an integer in [0, 2**b)."""
    _check_b(b)
    return pixel >> (8 - b)


def replace_top_bits(pixel, b, value):
    """Overwrite bit positions 1..b of ``pixel`` with ``value``."""
    _check_b(b)
    _check_value(value, 1 << b)
    low_mask = (1 << (8 - b)) - 1
    return (value << (8 - b)) | (pixel & low_mask)


def bits_2_to_b_mask(b):
    """Mask selecting bit positions 2..b (empty for b == 1)."""
    return ((1 << (b - 1)) - 1) << (8 - b)


def extract_bits_2_to_b(pixel, b):
    _check_b(b, 2)
    return (pixel & bits_2_to_b_mask(b)) >> (8 - b)


def replace_bits_2_to_b(pixel, b, value):
    """Overwrite bit positions 2..b; position 1 and b+1..8 are kept."""
    _check_b(b, 2)
    _check_value(value, 1 << (b - 1))
    mask = bits_2_to_b_mask(b)
    return (pixel & ~mask & 0xFF) | (value << (8 - b))


def first_msb_map(img) -> np.ndarray:
    """First-MSB map: 1 where the pixel is >= 128.

    Equivalent to ``(p & 128) % 127`` evaluated per pixel.
    """
    return (as_gray(img) >> 7).astype(np.uint8)


def _plane_read(img, shift):
    return ((as_gray(img) >> shift) & 1).astype(np.uint8)


def _plane_write(img, bits, shift):
    arr = as_gray(img)
    bits = np.asarray(bits)
    if bits.shape != arr.shape:
        raise ValueError(f"bit plane shape {bits.shape} does not match image {arr.shape}")
    keep = np.uint8(0xFF ^ (1 << shift))
    return (arr & keep) | ((bits.astype(np.uint8) & 1) << shift).astype(np.uint8)


def lsb_plane_read(img) -> np.ndarray:
    return _plane_read(img, 0)


def lsb_plane_write(img, bits) -> np.ndarray:
    return _plane_write(img, bits, 0)


def msb_plane_read(img) -> np.ndarray:
    return _plane_read(img, 7)


def msb_plane_write(img, bits) -> np.ndarray:
    return _plane_write(img, bits, 7)


def as_bits(plane) -> np.ndarray:
    """Validate a strictly binary 2-D matrix and return it as uint8."""
    arr = np.asarray(plane)
    if arr.ndim != 2:
        raise ValueError(f"expected a 2-D bit matrix, got shape {arr.shape}")
    if arr.size and not np.isin(arr, (0, 1)).all():
        raise ValueError("bit matrix must contain only 0 and 1")
    return arr.astype(np.uint8, copy=False)


def int_to_bits(value: int, width: int) -> np.ndarray:
    """Big-endian (MSB-first) bit vector of ``value``."""
    if value < 0 or value >= 1 << width:
        raise ValueError(f"{value} does not fit in {width} bits")
    return np.array([(value >> (width - 1 - i)) & 1 for i in range(width)], dtype=np.uint8)


def bits_to_int(bits) -> int:
    out = 0
    for bit in bits:
        out = (out << 1) | int(bit)
    return out
