"""Deterministic test imagery: random smooth fields and derived photo corpora."""
from __future__ import annotations

import numpy as np


def smooth_field(rng: np.random.Generator, M: int, N: int) -> np.ndarray:
    """A random smooth grayscale field: coarse random lattice, bilinearly upsampled, plus mild noise."""
    gy, gx = rng.integers(2, 6, size=2)
    lattice = rng.uniform(0, 255, size=(gy, gx))
    ys = np.linspace(0, gy - 1, M)
    xs = np.linspace(0, gx - 1, N)
    rows = np.array([np.interp(xs, np.arange(gx), r) for r in lattice])
    field = np.array([np.interp(ys, np.arange(gy), c) for c in rows.T]).T
    field += rng.normal(0.0, rng.uniform(0.0, 2.0), size=(M, N))
    return np.clip(np.rint(field), 0, 255).astype(np.uint8)


def quadrants(img: np.ndarray):
    M, N = img.shape
    h, w = M // 2, N // 2
    return [img[:h, :w], img[:h, w : 2 * w], img[h : 2 * h, :w], img[h : 2 * h, w : 2 * w]]


def downscale2(img: np.ndarray) -> np.ndarray:
    """2x2 box-filter decimation."""
    M, N = img.shape
    a = img[: M // 2 * 2, : N // 2 * 2].astype(np.uint16)
    s = a[0::2, 0::2] + a[0::2, 1::2] + a[1::2, 0::2] + a[1::2, 1::2]
    return ((s + 2) // 4).astype(np.uint8)


def derived_corpus(images: dict) -> dict:
    """Four quadrant crops plus a half-resolution copy of every source image."""
    out = {}
    for name, img in sorted(images.items()):
        for i, q in enumerate(quadrants(img)):
            out[f"{name}_q{i}"] = np.ascontiguousarray(q)
        out[f"{name}_half"] = downscale2(img)
    return out
