"""Sampled auxiliary correction (w, v) attached to a profile.

The correction solves ``(y' - a1(ubar) y)' = (i tau0 + i xi0 a2(ubar)) ubar'``
at a neutral frequency; w and v are its real and imaginary parts.  Both
construction methods (integrating factor and coupled solve) produce this type
on the profile's uniform grid.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

from .errors import TailNotResolved
from .model import NeutralFrequency
from .profile import Grid

DEFAULT_DECAY_TOL = 1e-4


class AuxMethod(str, enum.Enum):
    INTEGRATING_FACTOR = "if"
    COUPLED = "coupled"


@dataclass
class AuxiliarySolution:
    grid: Grid
    w: np.ndarray
    v: np.ndarray
    method: AuxMethod
    freq: NeutralFrequency
    diagnostics: dict = field(default_factory=dict)

    @property
    def y(self) -> np.ndarray:
        """The complex correction w + i v."""
        return self.w + 1j * self.v

    def tail_magnitudes(self) -> float:
        """Largest of |w|, |v| at the two domain ends."""
        return float(
            max(abs(self.w[0]), abs(self.w[-1]), abs(self.v[0]), abs(self.v[-1]))
        )

    def check_decay(self, tol: float = DEFAULT_DECAY_TOL) -> None:
        mag = self.tail_magnitudes()
        if mag > tol:
            raise TailNotResolved(
                f"correction tails |y(+-L)| = {mag:.3e} exceed {tol:.1e}; increase L"
            )
