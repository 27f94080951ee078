"""Redundancy location maps, optimal-b selection and MSB reconstruction.

For a fixed ``b`` each row is scanned left to right while tracking the top
``b`` bits of the most recent non-redundant pixel.  The first column is
always non-redundant (label 1).  A pixel whose top ``b`` bits equal the
tracked value is redundant (label 0); any other pixel is labelled 1 and
becomes the new reference.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import List

import numpy as np

from ._backend import kernels
from .bitops import as_bits
from .pixmap_io import as_gray

EMR = "emr"
LMR = "lmr"

B_RANGE = {EMR: range(2, 8), LMR: range(2, 9)}

TOP_B = "top_b"
BITS_2_TO_B = "bits_2_to_b"
_MODES = {TOP_B: 0, BITS_2_TO_B: 1}


@dataclass(frozen=True, eq=False)
class LocationMapChoice:
    map: np.ndarray
    b: int
    zeros: int
    method: str = EMR

    @property
    def bits_per_pixel(self) -> int:
        """Embeddable bits per redundant pixel."""
        return self.b if self.method == EMR else self.b - 1

    @property
    def payload_bits(self) -> int:
        return self.bits_per_pixel * self.zeros

    @property
    def der(self) -> float:
        M, N = self.map.shape
        return self.payload_bits / (M * N)


def _check_method(method):
    if method not in B_RANGE:
        raise ValueError(f"unknown method {method!r}; expected 'emr' or 'lmr'")


def generate_map(img, b: int, method: str = EMR) -> LocationMapChoice:
    _check_method(method)
    if not 1 <= b <= 8:
        raise ValueError(f"b must be in [1, 8], got {b}")
    lmap, zeros = kernels.generate_map(np.ascontiguousarray(as_gray(img)), b)
    return LocationMapChoice(lmap, b, zeros, method)


def select_optimal(img, method: str = EMR) -> List[LocationMapChoice]:
    """All candidate maps ordered by payload (descending), ties to smaller b."""
    _check_method(method)
    img = as_gray(img)
    choices = [generate_map(img, b, method) for b in B_RANGE[method]]
    return sorted(choices, key=lambda c: (-c.payload_bits, c.b))


def reconstruct_msbs(img, lmap, b: int, mode: str = TOP_B) -> np.ndarray:
    """Restore the governed bits of every 0-labelled pixel from its row reference.

    ``mode`` is ``"top_b"`` (bit positions 1..b) or ``"bits_2_to_b"``.
    1-labelled pixels, and every pixel in column 0, refresh the reference from
    their own bits and are returned unchanged.
    """
    img = as_gray(img)
    lmap = as_bits(lmap)
    if lmap.shape != img.shape:
        raise ValueError(f"map shape {lmap.shape} does not match image {img.shape}")
    if mode not in _MODES:
        raise ValueError(f"unknown mode {mode!r}")
    if not 1 <= b <= 8 or (mode == BITS_2_TO_B and b < 2):
        raise ValueError(f"b={b} is invalid for mode {mode}")
    return kernels.reconstruct(np.ascontiguousarray(img), np.ascontiguousarray(lmap), b, _MODES[mode])
