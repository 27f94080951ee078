"""Reading and writing 8-bit grayscale images as PGM (P5 binary / P2 ASCII).

Images are plain ``numpy.ndarray`` objects of shape ``(M, N)`` and dtype
``uint8``; ``as_gray`` validates arbitrary array-likes into that form.
"""
from __future__ import annotations

import os

import numpy as np

from .errors import PgmError, UnsupportedDepthError

_WHITESPACE = b" \t\r\n\v\f"


def as_gray(img) -> np.ndarray:
    """Validate ``img`` as an M x N grayscale raster and return it as uint8."""
    arr = np.asarray(img)
    if arr.ndim != 2 or arr.shape[0] < 1 or arr.shape[1] < 1:
        raise ValueError(f"expected a non-empty 2-D image, got shape {arr.shape}")
    if arr.dtype == np.uint8:
        return arr
    if arr.dtype.kind not in "iub":
        raise ValueError(f"image must hold integers, got dtype {arr.dtype}")
    if arr.size and (arr.min() < 0 or arr.max() > 255):
        raise ValueError("pixel values must lie in [0, 255]")
    return arr.astype(np.uint8)


class _HeaderReader:
    def __init__(self, data: bytes):
        self.data = data
        self.pos = 0

    def skip_space(self):
        data = self.data
        while self.pos < len(data):
            c = data[self.pos : self.pos + 1]
            if c == b"#":
                nl = data.find(b"\n", self.pos)
                self.pos = len(data) if nl < 0 else nl + 1
            elif c in _WHITESPACE:
                self.pos += 1
            else:
                break

    def token(self, what: str) -> bytes:
        self.skip_space()
        start = self.pos
        data = self.data
        while self.pos < len(data) and data[self.pos : self.pos + 1] not in _WHITESPACE + b"#":
            self.pos += 1
        if self.pos == start:
            raise PgmError(f"missing {what}", start)
        return data[start : self.pos]

    def integer(self, what: str) -> int:
        self.skip_space()
        start = self.pos
        tok = self.token(what)
        if not tok.isdigit():
            raise PgmError(f"invalid {what} {tok!r}", start)
        return int(tok)


def read_pgm(data: bytes) -> np.ndarray:
    """Parse a P5 or P2 PGM byte string with maxval <= 255."""
    if len(data) < 2 or data[:1] != b"P" or data[1:2] not in (b"5", b"2"):
        raise PgmError("not a PGM file (expected magic P5 or P2)", 0)
    binary = data[1:2] == b"5"
    rd = _HeaderReader(data)
    rd.pos = 2
    if rd.pos < len(data) and data[rd.pos : rd.pos + 1] not in _WHITESPACE + b"#":
        raise PgmError("expected whitespace after magic number", rd.pos)
    width = rd.integer("width")
    height = rd.integer("height")
    rd.skip_space()
    maxval_at = rd.pos
    maxval = rd.integer("maxval")
    if width < 1 or height < 1:
        raise PgmError(f"invalid dimensions {width}x{height}", maxval_at)
    if maxval < 1 or maxval > 65535:
        raise PgmError(f"invalid maxval {maxval}", maxval_at)
    if maxval > 255:
        raise UnsupportedDepthError(f"maxval {maxval} > 255 is not supported", maxval_at)

    count = width * height
    if binary:
        # exactly one whitespace byte separates the header from the raster
        if rd.pos >= len(data) or data[rd.pos : rd.pos + 1] not in _WHITESPACE:
            raise PgmError("expected single whitespace before raster", rd.pos)
        start = rd.pos + 1
        raster = data[start : start + count]
        if len(raster) < count:
            raise PgmError(f"truncated raster: need {count} bytes, have {len(raster)}", start)
        pixels = np.frombuffer(raster, dtype=np.uint8)
    else:
        values = []
        for _ in range(count):
            values.append(rd.integer("sample"))
        pixels = np.asarray(values, dtype=np.int64)
    if pixels.size and int(pixels.max()) > maxval:
        raise PgmError(f"sample exceeds maxval {maxval}")
    return pixels.astype(np.uint8).reshape(height, width)


def write_pgm(img) -> bytes:
    """Serialize ``img`` as binary P5 with maxval 255."""
    arr = as_gray(img)
    header = b"P5\n%d %d\n255\n" % (arr.shape[1], arr.shape[0])
    return header + np.ascontiguousarray(arr).tobytes()


def load_pgm(path: str | os.PathLike) -> np.ndarray:
    with open(path, "rb") as fh:
        return read_pgm(fh.read())


def save_pgm(path: str | os.PathLike, img) -> None:
    with open(path, "wb") as fh:
        fh.write(write_pgm(img))
