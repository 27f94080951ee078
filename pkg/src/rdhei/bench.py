"""Corpus benchmark: per-image records and min/avg/max aggregates."""
from __future__ import annotations

import csv
import json
import math
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import List, Optional

import numpy as np

from . import api
from .crypto_stream import keystream_bytes
from .location_map import EMR
from .metrics import psnr, ssim
from .pixmap_io import load_pgm

CSV_FIELDS = ["path", "method", "b", "der_bpp", "psnr_db", "ssim", "case", "ms"]
FORMAT_VERSION = 1


@dataclass
class BenchRecord:
    path: str
    method: str
    b: Optional[int]
    der_bpp: float
    psnr_db: Optional[float]
    ssim: Optional[float]
    case: str  # good | bad | error
    ms: float


def derive_keys(seed: int, count: int):
    """Per-image ``(key1, key2)`` pairs drawn from the keystream of a seed-derived master key."""
    master = int(seed).to_bytes(32, "big")
    stream = keystream_bytes(master, 64 * count)
    return [(stream[64 * i : 64 * i + 32], stream[64 * i + 32 : 64 * i + 64]) for i in range(count)]


def fill_message(key2: bytes, capacity_bits: int) -> bytes:
    """Deterministic message using all of the net capacity."""
    n = max(0, (capacity_bits - 32) // 8)
    return np.random.default_rng(int.from_bytes(key2[:8], "big")).bytes(n)


def run_one(path, method, key1, key2, e_min=4) -> BenchRecord:
    img = load_pgm(path)
    t0 = time.perf_counter()
    enc = api.encode(img, key1, method, e_min=e_min)
    if enc.bad_case:
        return BenchRecord(str(path), method, None, 0.0, None, None, "bad", _ms(t0))
    message = fill_message(key2, enc.capacity_bits)
    marked = api.hide(enc.image, key2, message, method)
    ok = api.extract(marked, key2, method) == message
    rec = api.recover(marked, key1, method, e_min=e_min)
    ms = _ms(t0)
    if method == EMR:
        ok = ok and bool(np.array_equal(rec >> 1, img >> 1))
    else:
        ok = ok and bool(np.array_equal(rec, img))
    return BenchRecord(
        str(path), method, enc.b, enc.der, psnr(img, rec), ssim(img, rec), "good" if ok else "error", ms
    )


def _ms(t0):
    return round(1000 * (time.perf_counter() - t0), 3)


def _run_star(args):
    return run_one(*args)


def list_images(directory) -> List[Path]:
    return sorted(p for p in Path(directory).iterdir() if p.suffix.lower() in (".pgm", ".pnm"))


def run_bench(directory, method, seed=0, e_min=4, jobs=1) -> List[BenchRecord]:
    paths = list_images(directory)
    keys = derive_keys(seed, len(paths))
    tasks = [(p, method, k1, k2, e_min) for p, (k1, k2) in zip(paths, keys)]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            records = list(pool.map(_run_star, tasks))
    else:
        records = [run_one(*t) for t in tasks]
    return sorted(records, key=lambda r: r.path)


def _stats(values):
    values = [v for v in values if v is not None]
    if not values:
        return None
    return {"min": min(values), "avg": float(np.mean(values)), "max": max(values)}


def aggregate(records: List[BenchRecord]) -> dict:
    good = [r for r in records if r.case == "good"]
    n = len(records)
    return {
        "images": n,
        "good": len(good),
        "bad": sum(r.case == "bad" for r in records),
        "error": sum(r.case == "error" for r in records),
        "good_rate": len(good) / n if n else 0.0,
        "der_bpp": _stats([r.der_bpp for r in good]),
        "psnr_db": _stats([r.psnr_db for r in good]),
        "ssim": _stats([r.ssim for r in good]),
    }


def _jsonable(v):
    if isinstance(v, float) and math.isinf(v):
        return "inf"
    if isinstance(v, dict):
        return {k: _jsonable(x) for k, x in v.items()}
    return v


def _csv_value(v):
    if v is None:
        return ""
    if isinstance(v, float) and math.isinf(v):
        return "inf"
    return v


def write_csv(records, path):
    with open(path, "w", newline="") as fh:
        w = csv.DictWriter(fh, fieldnames=CSV_FIELDS)
        w.writeheader()
        for r in records:
            w.writerow({k: _csv_value(v) for k, v in asdict(r).items()})


def report_dict(records, method, seed) -> dict:
    return {
        "format": FORMAT_VERSION,
        "method": method,
        "seed": seed,
        "records": [_jsonable(asdict(r)) for r in records],
        "aggregate": _jsonable(aggregate(records)),
    }


def write_json(records, path, method, seed):
    with open(path, "w") as fh:
        json.dump(report_dict(records, method, seed), fh, indent=2)
        fh.write(os.linesep)
