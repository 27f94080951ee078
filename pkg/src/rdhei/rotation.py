"""Key-driven multi-scale block rotation.

Each pass partitions the grid into complete ``2**e x 2**e`` blocks; the sum
of the keystream over a block, taken mod 4, selects a clockwise quarter-turn
count for that block.  Pixels outside complete blocks never move.  The
keystream is read at fixed absolute coordinates and is itself never rotated.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

FORWARD = "forward"
INVERSE = "inverse"

# quarter-turns clockwise for each (block sum mod 4)
_TURNS = {FORWARD: (0, 1, 2, 3), INVERSE: (0, 3, 2, 1)}


@dataclass(frozen=True)
class RotationSchedule:
    """Ascending list of block-size exponents (block side ``2**e``)."""

    exponents: tuple

    @classmethod
    def for_shape(cls, M: int, N: int, e_min: int = 1) -> "RotationSchedule":
        if e_min < 1:
            raise ValueError("e_min must be >= 1")
        e_max = max_exponent(M, N)
        return cls(tuple(range(min(e_min, e_max) if e_max else 1, e_max + 1)))

    @property
    def e_min(self):
        return self.exponents[0] if self.exponents else None

    @property
    def e_max(self):
        return self.exponents[-1] if self.exponents else None


def max_exponent(M: int, N: int) -> int:
    return int(math.floor(math.log2(min(M, N))))


def emr_schedule(M, N):
    return RotationSchedule.for_shape(M, N, e_min=1)


def lmr_schedule(M, N, e_min=4):
    """Coarser blocks keep the maps compressible; ``e_min`` is clipped to ``e_max``."""
    return RotationSchedule.for_shape(M, N, e_min=e_min)


def block_turns(s, e: int, direction: str = FORWARD) -> np.ndarray:
    """Clockwise quarter-turn count for every complete block at exponent ``e``."""
    side = 1 << e
    s = np.asarray(s)
    bm, bn = s.shape[0] // side, s.shape[1] // side
    sums = (
        s[: bm * side, : bn * side]
        .reshape(bm, side, bn, side)
        .sum(axis=(1, 3), dtype=np.int64)
    )
    return np.asarray(_TURNS[direction], dtype=np.int64)[sums % 4]


def rotate_pass(grid, s, e: int, direction: str = FORWARD) -> np.ndarray:
    grid = np.asarray(grid)
    s = np.asarray(s)
    if grid.shape != s.shape:
        raise ValueError(f"grid shape {grid.shape} does not match keystream {s.shape}")
    if direction not in _TURNS:
        raise ValueError(f"unknown direction {direction!r}")
    side = 1 << e
    bm, bn = grid.shape[0] // side, grid.shape[1] // side
    out = grid.copy()
    if bm == 0 or bn == 0:
        return out
    turns = block_turns(s, e, direction)
    region = out[: bm * side, : bn * side]
    blocks = region.reshape(bm, side, bn, side).transpose(0, 2, 1, 3).copy()
    for k in (1, 2, 3):
        sel = turns == k
        if sel.any():
            # negative k in rot90 = clockwise
            blocks[sel] = np.rot90(blocks[sel], k=-k, axes=(1, 2))
    region[...] = blocks.transpose(0, 2, 1, 3).reshape(bm * side, bn * side)
    return out


def rotate_all(grid, s, schedule: RotationSchedule, direction: str = FORWARD) -> np.ndarray:
    """Forward: ascending block sizes.  Inverse: descending, with inverse angles."""
    exps = schedule.exponents if direction == FORWARD else tuple(reversed(schedule.exponents))
    out = np.asarray(grid)
    if not exps:
        return out.copy()
    for e in exps:
        out = rotate_pass(out, s, e, direction)
    return out
