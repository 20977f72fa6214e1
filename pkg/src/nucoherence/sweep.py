"""Grids along baseline, potential or energy, evaluated with the batch kernel."""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from . import backend
from .errors import DomainError
from .kinematics import DEGENERACY_FLOOR, VELOCITY_RTOL
from .params import Flavor, OscillationParams, ParticleKind

__all__ = ["Axis", "Spacing", "AxisSpec", "probability_scan", "probability_rows"]


class Axis(enum.Enum):
    BASELINE = "baseline"
    POTENTIAL = "potential"
    ENERGY = "energy"

    @classmethod
    def parse(cls, value) -> "Axis":
        if isinstance(value, Axis):
            return value
        key = str(value).strip().lower()
        aliases = {"l": cls.BASELINE, "baseline": cls.BASELINE, "v": cls.POTENTIAL, "potential": cls.POTENTIAL,
                   "e": cls.ENERGY, "energy": cls.ENERGY}
        try:
            return aliases[key]
        except KeyError:
            raise DomainError(f"unknown scan axis {value!r}; expected baseline, potential or energy") from None

    @property
    def unit(self) -> str:
        return "m" if self is Axis.BASELINE else "eV"


class Spacing(enum.Enum):
    LINEAR = "linear"
    LOG = "log"

    @classmethod
    def parse(cls, value) -> "Spacing":
        if isinstance(value, Spacing):
            return value
        key = str(value).strip().lower()
        if key in ("lin", "linear"):
            return cls.LINEAR
        if key in ("log", "logarithmic"):
            return cls.LOG
        raise DomainError(f"unknown spacing {value!r}; expected linear or log")


@dataclass(frozen=True)
class AxisSpec:
    axis: Axis
    min: float
    max: float
    points: int
    spacing: Spacing = Spacing.LOG

    def __post_init__(self):
        object.__setattr__(self, "axis", Axis.parse(self.axis))
        object.__setattr__(self, "spacing", Spacing.parse(self.spacing))
        if not (math.isfinite(self.min) and math.isfinite(self.max)) or not self.min < self.max:
            raise DomainError(f"axis range needs min < max, got [{self.min}, {self.max}]")
        if int(self.points) != self.points or self.points < 2:
            raise DomainError(f"points must be an integer >= 2, got {self.points!r}")
        if self.spacing is Spacing.LOG and self.min <= 0:
            raise DomainError("log spacing requires min > 0")
        if self.axis is Axis.ENERGY and self.min <= 0:
            raise DomainError("energy axis requires min > 0")
        if self.min < 0:
            raise DomainError(f"{self.axis.value} axis cannot be negative")

    def values(self) -> np.ndarray:
        n = int(self.points)
        if self.spacing is Spacing.LOG:
            return np.logspace(math.log10(self.min), math.log10(self.max), n)
        return np.linspace(self.min, self.max, n)


def probability_rows(p: OscillationParams, wp, alpha, baselines, energies, potentials, kind=ParticleKind.NEUTRINO):
    """Rows P[alpha, :] at matched arrays of baselines (m), energies (eV), potentials (eV)."""
    baselines, energies, potentials = np.broadcast_arrays(
        np.asarray(baselines, dtype=float), np.asarray(energies, dtype=float), np.asarray(potentials, dtype=float)
    )
    if np.any(baselines < 0) or not np.all(np.isfinite(baselines)):
        raise DomainError("baselines must be finite and non-negative")
    if np.any(energies <= 0) or not np.all(np.isfinite(energies)):
        raise DomainError("energies must be finite and positive")
    if np.any(potentials < 0) or not np.all(np.isfinite(potentials)):
        raise DomainError("potentials must be finite and non-negative")
    kind = ParticleKind.parse(kind)
    return backend.probability_rows(
        p,
        energies.ravel(),
        potentials.ravel(),
        baselines.ravel(),
        int(Flavor.parse(alpha)),
        kind.sign,
        wp.sigma_x,
        wp.rho,
        wp.wave_packet,
        DEGENERACY_FLOOR,
        VELOCITY_RTOL,
    )


def probability_scan(p, wp, alpha, axis: AxisSpec, *, baseline=None, energy=None, potential=None, kind=ParticleKind.NEUTRINO):
    """(axis values, (n, 3) rows) with the non-scanned quantities held fixed."""
    x = axis.values()
    fixed = {"baseline": baseline, "energy": energy, "potential": potential}
    fixed[axis.axis.value] = x
    missing = [k for k, v in fixed.items() if v is None]
    if missing:
        raise DomainError(f"fixed value required for: {', '.join(missing)}")
    rows = probability_rows(p, wp, alpha, fixed["baseline"], fixed["energy"], fixed["potential"], kind)
    return x, rows
