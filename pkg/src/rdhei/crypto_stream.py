"""Keystreams, image encryption and message encryption.

The keystream is ChaCha20 (RFC 8439) with the secret key, an all-zero
96-bit nonce and initial block counter 0.  Image and message keystreams
are independent invocations under their own keys.
"""
from __future__ import annotations

import os

import numpy as np
from cryptography.hazmat.primitives.ciphers import Cipher, algorithms

from .errors import KeyFormatError
from .pixmap_io import as_gray

KEY_BYTES = 32


def parse_key(key: str | bytes) -> bytes:
    """Accept a 32-byte key or its 64-character hex encoding."""
    if isinstance(key, str):
        text = key.strip()
        if len(text) != 2 * KEY_BYTES:
            raise KeyFormatError(f"key must be {2 * KEY_BYTES} hex characters, got {len(text)}")
        try:
            return bytes.fromhex(text)
        except ValueError:
            raise KeyFormatError("key is not valid hexadecimal") from None
    key = bytes(key)
    if len(key) != KEY_BYTES:
        raise KeyFormatError(f"key must be {KEY_BYTES} bytes, got {len(key)}")
    return key


def random_key() -> bytes:
    return os.urandom(KEY_BYTES)


def keystream_bytes(key, length: int) -> bytes:
    key = parse_key(key)
    if length <= 0:
        return b""
    # 16-byte nonce for this API = 32-bit LE block counter || 96-bit nonce
    enc = Cipher(algorithms.ChaCha20(key, bytes(16)), mode=None).encryptor()
    return enc.update(bytes(length))


def keystream(key, M: int, N: int) -> np.ndarray:
    """Row-major M x N keystream of bytes derived from ``key``."""
    if M < 1 or N < 1:
        raise ValueError("keystream dimensions must be positive")
    return np.frombuffer(keystream_bytes(key, M * N), dtype=np.uint8).reshape(M, N)


def xor_image(img, s) -> np.ndarray:
    arr = as_gray(img)
    s = np.asarray(s, dtype=np.uint8)
    if s.shape != arr.shape:
        raise ValueError(f"keystream shape {s.shape} does not match image {arr.shape}")
    return arr ^ s


def crypt_message(key, payload: bytes) -> bytes:
    """XOR ``payload`` with the key's keystream; its own inverse."""
    payload = bytes(payload)
    if not payload:
        return b""
    ks = np.frombuffer(keystream_bytes(key, len(payload)), dtype=np.uint8)
    return (np.frombuffer(payload, dtype=np.uint8) ^ ks).tobytes()
