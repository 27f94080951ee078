"""Payload framing and the bit transport into redundant pixels.

The payload is a 32-bit big-endian length followed by the message, encrypted
as a whole under the data-hiding key.  Its bits fill the 0-labelled pixels in
raster order, MSB-first, ``k`` bits per pixel starting at bit position
``first`` (1 for EMR, 2 for LMR).
"""
import numpy as np

from .crypto_stream import crypt_message
from .errors import CapacityError, IntegrityError

LENGTH_BITS = 32


def payload_bits(key2, message: bytes) -> np.ndarray:
    framed = len(message).to_bytes(4, "big") + bytes(message)
    return np.unpackbits(np.frombuffer(crypt_message(key2, framed), dtype=np.uint8))


def required_bits(message: bytes) -> int:
    return LENGTH_BITS + 8 * len(message)


def _field(first, k):
    shift = 9 - first - k
    return shift, ((1 << k) - 1) << shift


def embed(img, lmap, k: int, first: int, bits: np.ndarray) -> np.ndarray:
    """Write ``bits`` into the redundant pixels of ``img``; returns a new image."""
    slots = np.flatnonzero(np.asarray(lmap).ravel() == 0)
    capacity = k * slots.size
    if bits.size > capacity:
        raise CapacityError(capacity, int(bits.size))
    out = np.array(img, dtype=np.uint8, copy=True)
    used = slots[: -(-bits.size // k)] if bits.size else slots[:0]
    if used.size == 0:
        return out
    shift, mask = _field(first, k)
    flat = out.reshape(-1)
    current = (flat[used] & mask) >> shift
    # unused trailing bits of the last pixel keep their prior value
    stream = np.unpackbits(current.astype(np.uint8)[:, None], axis=1)[:, 8 - k :].ravel()
    stream[: bits.size] = bits
    values = np.packbits(
        np.concatenate([np.zeros((used.size, 8 - k), np.uint8), stream.reshape(-1, k)], axis=1),
        axis=1,
    ).ravel()
    flat[used] = (flat[used] & (0xFF ^ mask)) | (values << shift).astype(np.uint8)
    return out


def gather(img, lmap, k: int, first: int, count=None) -> np.ndarray:
    slots = np.flatnonzero(np.asarray(lmap).ravel() == 0)
    if count is not None:
        slots = slots[: -(-count // k)]
    shift, mask = _field(first, k)
    values = ((np.asarray(img).reshape(-1)[slots] & mask) >> shift).astype(np.uint8)
    bits = np.unpackbits(values[:, None], axis=1)[:, 8 - k :].ravel()
    return bits if count is None else bits[:count]


def extract_message(img, lmap, k: int, first: int, key2) -> bytes:
    capacity = k * int(np.count_nonzero(np.asarray(lmap) == 0))
    if capacity < LENGTH_BITS:
        raise IntegrityError(f"capacity of {capacity} bits cannot hold the length field")
    head = np.packbits(gather(img, lmap, k, first, LENGTH_BITS)).tobytes()
    length = int.from_bytes(crypt_message(key2, head), "big")
    total = LENGTH_BITS + 8 * length
    if total > capacity:
        raise IntegrityError(
            f"decrypted length {length} bytes exceeds capacity of {capacity} bits "
            "(wrong key or tampered image)"
        )
    raw = np.packbits(gather(img, lmap, k, first, total)).tobytes()
    return crypt_message(key2, raw)[4:]
