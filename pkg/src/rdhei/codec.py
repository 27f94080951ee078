"""Lossless compression of bit matrices (location maps, first-MSB maps).

Context-adaptive binary arithmetic coding over a JBIG-style three-line,
10-pixel causal template.  The exact bitstream layout is documented in
``rdhei._purepy``; both ends of the protocol are this package.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._backend import kernels
from .bitops import as_bits
from .errors import DecodeError


@dataclass(frozen=True)
class CompressedPlane:
    height: int
    width: int
    bitstream: bytes

    @property
    def bit_length(self) -> int:
        return 8 * len(self.bitstream)


def compress(plane) -> CompressedPlane:
    bits = as_bits(plane)
    M, N = bits.shape
    return CompressedPlane(M, N, kernels.encode_plane(np.ascontiguousarray(bits)))


def decompress(c: CompressedPlane) -> np.ndarray:
    if c.bit_length % 8:
        raise DecodeError("bit_length must be a multiple of 8")
    return kernels.decode_plane(c.bitstream, c.height, c.width)
