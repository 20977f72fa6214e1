"""Oscillation parameters and the vacuum mixing matrix."""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError

__all__ = [
    "Flavor",
    "ParticleKind",
    "OscillationParams",
    "default_params",
    "build_rotation",
    "phase_matrix",
    "build_pmns",
    "pmns_from_angles",
]


class Flavor(enum.IntEnum):
    E = 0
    MU = 1
    TAU = 2

    @classmethod
    def parse(cls, value) -> "Flavor":
        if isinstance(value, Flavor):
            return value
        if isinstance(value, int):
            return cls(value)
        key = str(value).strip().lower()
        aliases = {"e": cls.E, "nue": cls.E, "mu": cls.MU, "numu": cls.MU, "tau": cls.TAU, "nutau": cls.TAU}
        try:
            return aliases[key]
        except KeyError:
            raise DomainError(f"unknown flavor {value!r}; expected one of e, mu, tau") from None

    @property
    def label(self) -> str:
        return ("e", "mu", "tau")[self]


class ParticleKind(enum.Enum):
    NEUTRINO = "neutrino"
    ANTINEUTRINO = "antineutrino"

    @classmethod
    def parse(cls, value) -> "ParticleKind":
        if isinstance(value, ParticleKind):
            return value
        key = str(value).strip().lower()
        if key in ("nu", "neutrino"):
            return cls.NEUTRINO
        if key in ("nubar", "antinu", "antineutrino"):
            return cls.ANTINEUTRINO
        raise DomainError(f"unknown particle kind {value!r}")

    @property
    def sign(self) -> int:
        """Sign multiplying the matter potential (and the CP phase)."""
        return 1 if self is ParticleKind.NEUTRINO else -1


@dataclass(frozen=True)
class OscillationParams:
    """Mixing angles and CP phase in radians, mass splittings in eV^2.

    The sign of ``dm31_sq`` carries the mass ordering.
    """

    theta12: float
    theta13: float
    theta23: float
    delta_cp: float
    dm21_sq: float
    dm31_sq: float

    def __post_init__(self):
        for name in ("theta12", "theta13", "theta23"):
            angle = getattr(self, name)
            if not (0.0 <= angle < math.pi / 2):
                raise DomainError(f"{name} = {angle!r} outside [0, pi/2)")
        if not (0.0 <= self.delta_cp < 2 * math.pi):
            raise DomainError(f"delta_cp = {self.delta_cp!r} outside [0, 2pi)")
        if not (self.dm21_sq > 0 and math.isfinite(self.dm21_sq)):
            raise DomainError(f"dm21_sq must be positive, got {self.dm21_sq!r}")
        if self.dm31_sq == 0 or not math.isfinite(self.dm31_sq):
            raise DomainError("dm31_sq must be finite and nonzero")

    @classmethod
    def from_degrees(cls, theta12, theta13, theta23, delta, dm21_sq, dm31_sq) -> "OscillationParams":
        return cls(
            math.radians(theta12),
            math.radians(theta13),
            math.radians(theta23),
            math.radians(delta % 360.0),
            dm21_sq,
            dm31_sq,
        )

    def replace(self, **changes) -> "OscillationParams":
        fields = {k: getattr(self, k) for k in self.__dataclass_fields__}
        fields.update(changes)
        return OscillationParams(**fields)


def default_params() -> OscillationParams:
    """Global-fit mixing parameters, normal ordering."""
    return OscillationParams.from_degrees(33.82, 8.61, 49.7, 217.0, 7.39e-5, 2.451e-3)


_AXES = {"12": (0, 1), "13": (0, 2), "23": (1, 2)}


def build_rotation(axes, angle: float) -> np.ndarray:
    """Real rotation in the (i, j) plane with +sin above the diagonal.

    ``axes`` is one of ``"12"``, ``"13"``, ``"23"`` (ints 12, 13, 23 accepted).
    """
    try:
        i, j = _AXES[str(axes)]
    except KeyError:
        raise DomainError(f"invalid axis pair {axes!r}; expected 12, 13 or 23") from None
    if not math.isfinite(angle):
        raise DomainError("rotation angle must be finite")
    c, s = math.cos(angle), math.sin(angle)
    r = np.eye(3, dtype=complex)
    r[i, i] = r[j, j] = c
    r[i, j] = s
    r[j, i] = -s
    return r


def phase_matrix(delta: float) -> np.ndarray:
    return np.diag([1.0, 1.0, np.exp(1j * delta)])


def pmns_from_angles(theta12, theta13, theta23, delta) -> np.ndarray:
    """Closed-form standard parameterization (delta enters as exp(-i delta) in U_e3)."""
    c12, s12 = math.cos(theta12), math.sin(theta12)
    c13, s13 = math.cos(theta13), math.sin(theta13)
    c23, s23 = math.cos(theta23), math.sin(theta23)
    eid = complex(math.cos(delta), math.sin(delta))
    return np.array(
        [
            [c13 * c12, c13 * s12, s13 / eid],
            [-s12 * c23 - eid * c12 * s23 * s13, c12 * c23 - eid * s12 * s23 * s13, c13 * s23],
            [s12 * s23 - eid * c12 * c23 * s13, -c12 * s23 - eid * s12 * c23 * s13, c13 * c23],
        ],
        dtype=complex,
    )


def build_pmns(p: OscillationParams, kind=ParticleKind.NEUTRINO) -> np.ndarray:
    """Vacuum mixing matrix; antineutrinos use the conjugate phase."""
    kind = ParticleKind.parse(kind)
    return pmns_from_angles(p.theta12, p.theta13, p.theta23, kind.sign * p.delta_cp)
