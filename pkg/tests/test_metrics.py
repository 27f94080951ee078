import json
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays
from scipy.stats import chisquare
from skimage.metrics import peak_signal_noise_ratio, structural_similarity

from oracles import entropy_loop
from rdhei.crypto_stream import keystream, xor_image
from rdhei.metrics import (
    MetricsReport, analyze, chi2, chi2_counts, der, entropy, mse, npcr, psnr, ssim, uaci,
)

pairs = st.tuples(st.integers(12, 30), st.integers(12, 30)).flatmap(
    lambda shape: st.tuples(arrays(np.uint8, shape), arrays(np.uint8, shape))
)


def ssim_oracle(a, b):
    return structural_similarity(
        a, b, gaussian_weights=True, sigma=1.5, use_sample_covariance=False, data_range=255
    )


def test_entropy_examples():
    assert entropy(np.full((8, 8), 3, np.uint8)) == 0.0
    two = np.zeros((8, 8), np.uint8)
    two[:4] = 200
    assert entropy(two) == pytest.approx(1.0)
    assert entropy(np.arange(256, dtype=np.uint8).reshape(16, 16)) == pytest.approx(8.0)


def test_entropy_matches_loop(lena):
    assert entropy(lena) == pytest.approx(entropy_loop(lena), abs=1e-12)


def test_lena_entropy(lena):
    # this Lena is a different scan from the reference one; see the README
    assert entropy(lena) == pytest.approx(7.4456, abs=0.05)


def test_chi2_closed_forms():
    assert chi2(np.arange(256, dtype=np.uint8).reshape(16, 16)) == pytest.approx(0.0, abs=1e-9)
    assert chi2(np.zeros((512, 512), np.uint8)) == pytest.approx(66_846_720)


@given(arrays(np.uint8, (16, 24)))
def test_chi2_forms_agree(img):
    a, b = chi2(img), chi2_counts(img)
    assert a == pytest.approx(b, rel=1e-6)
    ref = chisquare(np.bincount(img.ravel(), minlength=256)).statistic
    assert a == pytest.approx(ref, rel=1e-6)


def test_npcr_uaci_examples():
    a = np.random.default_rng(0).integers(0, 256, (32, 32), dtype=np.uint8)
    assert npcr(a, a) == 0 and uaci(a, a) == 0
    full = np.zeros((4, 4), np.uint8)
    assert npcr(full, full + 255) == 100.0
    assert uaci(full, full + 255) == 100.0


def test_lena_vs_encrypted(lena):
    rng = np.random.default_rng(1)
    for _ in range(5):
        enc = xor_image(lena, keystream(rng.bytes(32), *lena.shape))
        assert npcr(lena, enc) == pytest.approx(99.60, abs=0.05)
        assert uaci(lena, enc) == pytest.approx(28.7, abs=0.6)


@given(pairs)
@settings(max_examples=80, deadline=None)
def test_symmetry(pair):
    a, b = pair
    assert npcr(a, b) == npcr(b, a)
    assert uaci(a, b) == uaci(b, a)
    assert psnr(a, b) == psnr(b, a)
    assert ssim(a, b) == pytest.approx(ssim(b, a), abs=1e-12)


@given(pairs)
@settings(max_examples=80, deadline=None)
def test_ssim_matches_skimage(pair):
    a, b = pair
    assert ssim(a, b) == pytest.approx(ssim_oracle(a, b), abs=1e-9)
    if mse(a, b):
        assert psnr(a, b) == pytest.approx(peak_signal_noise_ratio(a, b, data_range=255))


def test_ssim_on_photos(standard_images):
    rng = np.random.default_rng(2)
    for img in list(standard_images.values())[:3]:
        noisy = np.clip(img + rng.normal(0, 6, img.shape), 0, 255).astype(np.uint8)
        assert ssim(img, noisy) == pytest.approx(ssim_oracle(img, noisy), abs=1e-9)


def test_identical():
    a = np.random.default_rng(3).integers(0, 256, (20, 20), dtype=np.uint8)
    assert psnr(a, a) == math.inf
    assert ssim(a, a) == 1.0


def test_one_pixel_psnr():
    a = np.zeros((512, 512), np.uint8)
    b = a.copy()
    b[100, 100] = 255
    assert psnr(a, b) == pytest.approx(10 * math.log10(262144))
    assert psnr(a, b) == pytest.approx(54.19, abs=0.01)


def test_random_lsb_psnr():
    """Each LSB flipped with p = 1/2 gives MSE 1/2 in the limit."""
    rng = np.random.default_rng(4)
    a = rng.integers(0, 256, (512, 512), dtype=np.uint8)
    b = a ^ rng.integers(0, 2, a.shape, dtype=np.uint8)
    assert psnr(a, b) == pytest.approx(10 * math.log10(2 * 255**2), abs=0.15)
    assert 10 * math.log10(2 * 255**2) == pytest.approx(51.1411, abs=1e-4)


def test_der():
    assert der(2 * 262144, (512, 512)) == 2.0


def test_shape_mismatch():
    with pytest.raises(ValueError):
        npcr(np.zeros((2, 2), np.uint8), np.zeros((2, 3), np.uint8))


def test_analyze_report():
    a = np.random.default_rng(5).integers(0, 256, (16, 16), dtype=np.uint8)
    single = analyze(a)
    assert single.psnr_db is None and single.entropy_bits == entropy(a)
    pair = analyze(a, a, der_bpp=1.5).to_dict()
    assert pair["psnr_db"] == "inf" and pair["ssim"] == 1.0 and pair["der_bpp"] == 1.5
    json.dumps(pair)
    assert set(pair) == set(MetricsReport().to_dict())
