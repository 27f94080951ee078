"""Compiled kernels vs the pure-Python fallback on 512x512 inputs.

    python benchmarks/bench_backends.py [--repeat 3] [--json out.json]

Both backends must produce identical outputs; the script checks that before
reporting timings.
"""
import argparse
import json
import sys
import time
from pathlib import Path

import numpy as np

from rdhei import _purepy
from rdhei.pixmap_io import load_pgm

try:
    from rdhei import _kernels
except ImportError:
    _kernels = None

DATA = Path(__file__).resolve().parent.parent / "tests" / "data"


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t0)
    return min(times), out


def cases(img):
    lmap, _ = _purepy.generate_map(img, 4)
    eta = (img >> 7).astype(np.uint8)
    damaged = img ^ np.uint8(0x55)
    stream = _purepy.encode_plane(lmap)
    return {
        "generate_map b=4": lambda k: k.generate_map(img, 4),
        "reconstruct b=4": lambda k: k.reconstruct(damaged, lmap, 4, 0),
        "encode_plane (MSB plane)": lambda k: k.encode_plane(eta),
        "encode_plane (map)": lambda k: k.encode_plane(lmap),
        "decode_plane (map)": lambda k: k.decode_plane(stream, *lmap.shape),
    }


def same(a, b):
    if isinstance(a, tuple):
        return all(same(x, y) for x, y in zip(a, b))
    if isinstance(a, np.ndarray):
        return np.array_equal(a, b)
    return a == b


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--image", default=str(DATA / "lena.pgm"))
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--json")
    args = ap.parse_args(argv)
    if _kernels is None:
        print("compiled kernels are not built; run `pip install -e . --no-build-isolation`", file=sys.stderr)
        return 1
    img = np.ascontiguousarray(load_pgm(args.image))
    rows = []
    print(f"{'kernel':28s} {'python ms':>11s} {'cython ms':>11s} {'speedup':>9s}")
    for name, fn in cases(img).items():
        tp, op = best_of(lambda: fn(_purepy), args.repeat)
        tc, oc = best_of(lambda: fn(_kernels), max(args.repeat, 5))
        if not same(op, oc):
            print(f"{name}: backends disagree", file=sys.stderr)
            return 1
        rows.append({"kernel": name, "python_ms": 1e3 * tp, "cython_ms": 1e3 * tc, "speedup": tp / tc})
        print(f"{name:28s} {1e3 * tp:11.2f} {1e3 * tc:11.2f} {tp / tc:8.0f}x")
    if args.json:
        Path(args.json).write_text(json.dumps({"image": args.image, "shape": img.shape, "rows": rows}, indent=2))
    return 0


if __name__ == "__main__":
    sys.exit(main())
