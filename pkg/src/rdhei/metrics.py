"""Image quality and encryption-strength statistics."""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from typing import Optional

import numpy as np
from scipy.ndimage import gaussian_filter

from .pixmap_io import as_gray


def _pair(a, b):
    a, b = as_gray(a), as_gray(b)
    if a.shape != b.shape:
        raise ValueError(f"image shapes differ: {a.shape} vs {b.shape}")
    return a, b


def histogram(img) -> np.ndarray:
    return np.bincount(as_gray(img).ravel(), minlength=256)


def entropy(img) -> float:
    """Shannon entropy of the grey-level histogram, in bits."""
    p = histogram(img) / as_gray(img).size
    p = p[p > 0]
    return float(-(p * np.log2(p)).sum()) + 0.0


def chi2(img) -> float:
    """Divergence from a uniform histogram: ``256 * MN * sum((P - 1/256)**2)``."""
    img = as_gray(img)
    p = histogram(img) / img.size
    return float(256 * img.size * np.sum((p - 1 / 256) ** 2))


def chi2_counts(img) -> float:
    """Pearson form ``sum((O - E)**2 / E)`` with ``E = MN / 256``."""
    img = as_gray(img)
    expected = img.size / 256
    return float(np.sum((histogram(img) - expected) ** 2 / expected))


def npcr(a, b) -> float:
    """Percentage of pixel positions whose values differ."""
    a, b = _pair(a, b)
    return 100.0 * float(np.count_nonzero(a != b)) / a.size


def uaci(a, b) -> float:
    a, b = _pair(a, b)
    return 100.0 * float(np.abs(a.astype(np.int16) - b.astype(np.int16)).mean()) / 255


def mse(a, b) -> float:
    a, b = _pair(a, b)
    return float(np.mean((a.astype(np.float64) - b.astype(np.float64)) ** 2))


def psnr(a, b) -> float:
    err = mse(a, b)
    if err == 0:
        return math.inf
    return 10 * math.log10(255**2 / err)


def ssim(a, b, sigma: float = 1.5, k1: float = 0.01, k2: float = 0.03, data_range: float = 255.0) -> float:
    """Mean SSIM over an 11x11 Gaussian window (sigma 1.5), borders excluded.

    Uses population (not sample) variances; equal inputs give exactly 1.
    """
    a, b = _pair(a, b)
    if np.array_equal(a, b):
        return 1.0
    x = a.astype(np.float64)
    y = b.astype(np.float64)

    def blur(z):
        return gaussian_filter(z, sigma=sigma, truncate=3.5, mode="reflect")

    ux, uy = blur(x), blur(y)
    vx = blur(x * x) - ux * ux
    vy = blur(y * y) - uy * uy
    vxy = blur(x * y) - ux * uy
    c1 = (k1 * data_range) ** 2
    c2 = (k2 * data_range) ** 2
    smap = ((2 * ux * uy + c1) * (2 * vxy + c2)) / ((ux**2 + uy**2 + c1) * (vx + vy + c2))
    pad = int(3.5 * sigma + 0.5)
    inner = smap[pad:-pad, pad:-pad] if min(smap.shape) > 2 * pad else smap
    return float(inner.mean())


def der(payload_bits: int, shape) -> float:
    M, N = shape
    return payload_bits / (M * N)


@dataclass
class MetricsReport:
    der_bpp: Optional[float] = None
    psnr_db: Optional[float] = None
    ssim: Optional[float] = None
    entropy_bits: Optional[float] = None
    chi2: Optional[float] = None
    npcr_pct: Optional[float] = None
    uaci_pct: Optional[float] = None

    def to_dict(self) -> dict:
        """JSON-safe mapping; infinite values become the string ``"inf"``."""
        return {k: ("inf" if isinstance(v, float) and math.isinf(v) else v) for k, v in asdict(self).items()}


def analyze(a, b=None, der_bpp: Optional[float] = None) -> MetricsReport:
    """Statistics of ``a``; with ``b``, also the pairwise comparison ``a`` vs ``b``."""
    target = a if b is None else b
    report = MetricsReport(der_bpp=der_bpp, entropy_bits=entropy(target), chi2=chi2(target))
    if b is not None:
        report.psnr_db = psnr(a, b)
        report.ssim = ssim(a, b)
        report.npcr_pct = npcr(a, b)
        report.uaci_pct = uaci(a, b)
    return report
