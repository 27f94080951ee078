"""Method-agnostic entry points used by the CLI and the benchmark."""
from __future__ import annotations

from . import emr, lmr
from .errors import FormatError
from .location_map import EMR, LMR

METHODS = (EMR, LMR)
AUTO = "auto"


def detect_method(img) -> str:
    """LMR if the MSB plane parses as an LMR header block, else EMR."""
    try:
        lmr.read_location_map(img)
    except FormatError:
        return EMR
    return LMR


def _resolve(img, method):
    if method == AUTO:
        return detect_method(img)
    if method not in METHODS:
        raise ValueError(f"unknown method {method!r}")
    return method


def encode(img, key1, method: str, e_min: int = lmr.DEFAULT_E_MIN):
    if method == EMR:
        return emr.emr_encode(img, key1)
    if method == LMR:
        return lmr.lmr_encode(img, key1, e_min=e_min)
    raise ValueError(f"unknown method {method!r}")


def capacity(img, method: str = AUTO) -> int:
    method = _resolve(img, method)
    return emr.emr_capacity(img) if method == EMR else lmr.lmr_capacity(img)


def hide(img, key2, message: bytes, method: str = AUTO):
    method = _resolve(img, method)
    fn = emr.emr_hide if method == EMR else lmr.lmr_hide
    return fn(img, key2, message)


def extract(img, key2, method: str = AUTO) -> bytes:
    method = _resolve(img, method)
    fn = emr.emr_extract if method == EMR else lmr.lmr_extract
    return fn(img, key2)


def recover(img, key1, method: str, e_min: int = lmr.DEFAULT_E_MIN):
    if method == EMR:
        return emr.emr_recover(img, key1)
    if method == LMR:
        return lmr.lmr_recover(img, key1, e_min=e_min)
    raise ValueError(f"unknown method {method!r}")
