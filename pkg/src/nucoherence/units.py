"""Natural-unit bookkeeping.

Everything inside the package is expressed in powers of eV. Lengths enter and
leave in meters through the two functions below.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DomainError

__all__ = ["PhysicalScales", "SCALES", "HBAR_C", "length_to_natural", "natural_to_length"]


@dataclass(frozen=True)
class PhysicalScales:
    #: hbar * c in eV m (CODATA 2018)
    hbar_c: float = 1.973269804e-7

    def __post_init__(self):
        if not (self.hbar_c > 0 and math.isfinite(self.hbar_c)):
            raise DomainError("hbar_c must be positive and finite")


SCALES = PhysicalScales()
HBAR_C = SCALES.hbar_c


def _check(x, what):
    if not math.isfinite(x) or x < 0:
        raise DomainError(f"{what} must be finite and non-negative, got {x!r}")


def length_to_natural(length_m: float) -> float:
    """Meters -> eV^-1."""
    _check(length_m, "length")
    return length_m / HBAR_C


def natural_to_length(x_inv_ev: float) -> float:
    """eV^-1 -> meters."""
    _check(x_inv_ev, "inverse energy")
    return x_inv_ev * HBAR_C
