"""Types shared by the EMR and LMR pipelines."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .location_map import LocationMapChoice


@dataclass(eq=False)
class EncodeResult:
    """Outcome of the content owner's encoding phase.

    ``image`` is None for an LMR bad case: no candidate map fit the MSB plane.
    """

    method: str
    image: Optional[np.ndarray]
    choice: Optional[LocationMapChoice]
    capacity_bits: int = 0
    candidates_tried: int = 1

    @property
    def bad_case(self) -> bool:
        return self.image is None

    @property
    def b(self):
        return self.choice.b if self.choice is not None else None

    @property
    def der(self) -> float:
        """Gross embedding rate of the selected map, in bits per pixel."""
        return self.choice.der if self.choice is not None else 0.0
