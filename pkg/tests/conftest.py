import os
import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from rdhei.pixmap_io import load_pgm  # noqa: E402

DATA = Path(__file__).parent / "data"
STANDARD = ["lena", "ascent", "face", "camera", "moon", "astronaut", "hubble", "retina", "brick", "gravel"]


@pytest.fixture(scope="session")
def data_dir():
    return DATA


@pytest.fixture(scope="session")
def standard_images():
    return {name: load_pgm(DATA / f"{name}.pgm") for name in STANDARD}


@pytest.fixture(scope="session")
def lena(standard_images):
    return standard_images["lena"]


@pytest.fixture
def rng(request):
    seed = abs(hash(request.node.nodeid)) % (2**32)
    return np.random.default_rng(seed)


def key_from(seed: int) -> bytes:
    return np.random.default_rng(seed).bytes(32)


@pytest.fixture(autouse=True)
def _no_key_env(monkeypatch):
    for var in ("RDHEI_KEY1", "RDHEI_KEY2"):
        monkeypatch.delenv(var, raising=False)
