import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from oracles import chacha20_block, chacha20_stream
from rdhei.crypto_stream import (
    crypt_message, keystream, keystream_bytes, parse_key, random_key, xor_image,
)
from rdhei.errors import KeyFormatError
from rdhei.metrics import chi2, entropy

# RFC 8439 appendix A.1, test vector #1: all-zero key and nonce, counter 0
RFC_ZERO_KEY_HEAD = bytes.fromhex("76b8e0ada0f13d90405d6ae55386bd28")
# RFC 8439 block function test: key 00..1f, nonce 00:00:00:09:00:00:00:4a:00:00:00:00, counter 1
RFC_BLOCK_HEAD = bytes.fromhex("10f1e7e4d13b5915500fdd1fa32071c4")

CHI2_CRIT_255 = 293.25


def test_oracle_matches_rfc_block_vector():
    nonce = bytes.fromhex("000000090000004a00000000")
    assert chacha20_block(bytes(range(32)), 1, nonce)[:16] == RFC_BLOCK_HEAD
    assert chacha20_block(bytes(32), 0, bytes(12))[:16] == RFC_ZERO_KEY_HEAD


def test_zero_key_vector():
    assert keystream_bytes(bytes(32), 16) == RFC_ZERO_KEY_HEAD
    assert keystream(bytes(32), 4, 4).tobytes() == RFC_ZERO_KEY_HEAD


@given(st.binary(min_size=32, max_size=32), st.integers(1, 700))
@settings(max_examples=50)
def test_matches_independent_chacha20(key, n):
    assert keystream_bytes(key, n) == chacha20_stream(key, n)


def test_deterministic_and_row_major():
    k = random_key()
    a = keystream(k, 3, 5)
    assert np.array_equal(a, keystream(k, 3, 5))
    assert a.tobytes() == keystream_bytes(k, 15)


def test_avalanche_single_bit():
    k = bytearray(np.random.default_rng(0).bytes(32))
    a = np.frombuffer(keystream_bytes(bytes(k), 4096), np.uint8)
    for bit in (0, 77, 255):
        k2 = bytearray(k)
        k2[bit // 8] ^= 1 << (bit % 8)
        b = np.frombuffer(keystream_bytes(bytes(k2), 4096), np.uint8)
        assert np.mean(a != b) >= 0.40


def test_parse_key():
    assert parse_key("ab" * 32) == bytes([0xAB]) * 32
    assert parse_key(bytes(32)) == bytes(32)
    for bad in ("ab" * 31, "zz" * 32, b"short", bytes(33)):
        with pytest.raises(KeyFormatError):
            parse_key(bad)


@given(arrays(np.uint8, (6, 9)), arrays(np.uint8, (6, 9)))
def test_xor_involution(img, s):
    assert np.array_equal(xor_image(xor_image(img, s), s), img)


def test_xor_zero_keystream_is_identity():
    img = np.arange(20, dtype=np.uint8).reshape(4, 5)
    assert np.array_equal(xor_image(img, np.zeros_like(img)), img)


def test_xor_shape_mismatch():
    with pytest.raises(ValueError):
        xor_image(np.zeros((2, 2), np.uint8), np.zeros((2, 3), np.uint8))


def test_xor_is_pixelwise_bijection():
    s = keystream(random_key(), 16, 16)
    img = np.arange(256, dtype=np.uint8).reshape(16, 16)
    # for a fixed keystream byte, the 256 inputs map to 256 distinct outputs
    for v in (0, 91, 255):
        out = np.arange(256, dtype=np.uint8) ^ np.uint8(v)
        assert len(set(out.tolist())) == 256
    assert xor_image(img, s).shape == img.shape


@given(st.binary(max_size=300))
def test_crypt_message_involution(m):
    k = bytes(range(32))
    c = crypt_message(k, m)
    assert len(c) == len(m)
    assert crypt_message(k, c) == m


def test_crypt_empty():
    assert crypt_message(random_key(), b"") == b""


def test_message_stream_entropy():
    c = np.frombuffer(crypt_message(bytes(range(32)), bytes(1 << 20)), np.uint8)
    assert abs(entropy(c.reshape(1024, 1024)) - 8.0) <= 0.01


def test_encrypted_lena_entropy(lena):
    enc = xor_image(lena, keystream(random_key(), *lena.shape))
    assert entropy(enc) >= 7.999


def test_histogram_uniform_over_keys(lena):
    rng = np.random.default_rng(11)
    below = sum(
        chi2(xor_image(lena, keystream(rng.bytes(32), *lena.shape))) < CHI2_CRIT_255
        for _ in range(100)
    )
    assert below >= 90
