"""Run configuration shared by the CLI and the verification suites."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Tuple

from .cartan import CartanDatum, preset


@dataclass(frozen=True)
class RunConfig:
    """Everything a suite run depends on; the seed fully determines any
    randomized choices."""

    type: str = "A1"
    cartan_matrix: Optional[Tuple[Tuple[int, ...], ...]] = None
    cutoff: Optional[Tuple[int, ...]] = None
    depth: Optional[Tuple[int, ...]] = None
    seed: int = 0
    max: int = 4
    corrupt: bool = False
    max_height: Optional[int] = None

    def datum(self) -> CartanDatum:
        if self.cartan_matrix is not None:
            return CartanDatum(self.cartan_matrix, name="custom",
                               max_height=self.max_height)
        return preset(self.type, max_height=self.max_height)

    def describe(self) -> dict:
        return {
            "type": self.type,
            "cartan_matrix": [list(r) for r in self.cartan_matrix]
            if self.cartan_matrix else None,
            "cutoff": list(self.cutoff) if self.cutoff else None,
            "depth": list(self.depth) if self.depth else None,
            "seed": self.seed,
            "max": self.max,
            "corrupt": self.corrupt,
        }
