"""Flavor transition probabilities with Gaussian wave-packet damping.

Each interference term i != j carries three factors: the oscillation phase,
a Gaussian decoherence factor exp(-(L / l_coh)^2) from wave-packet
separation, and a localization factor exp(-2 pi^2 rho^2 (sigma_x / l_osc)^2).
Plane-wave mode keeps only the phase. The i == j terms are undamped, so rows
stay normalized.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError
from .kinematics import DEGENERACY_FLOOR, VELOCITY_RTOL, velocity_differences, velocity_floor
from .matter import EXT, _signed, _solve, matter_system
from .params import Flavor, OscillationParams, ParticleKind, build_pmns, pmns_from_angles
from .units import HBAR_C, length_to_natural

__all__ = [
    "Mode",
    "WavePacketConfig",
    "FlavorProbabilities",
    "IMAG_TOLERANCE",
    "vacuum_probability",
    "matter_probability",
    "probability_matrix",
    "averaged_probability",
    "interference_sum",
]

IMAG_TOLERANCE = 1e-12
CLIP_SLACK = 1e-12
_PAIRS = ((1, 0), (2, 0), (2, 1))


class Mode(enum.Enum):
    PLANE_WAVE = "pw"
    WAVE_PACKET = "wp"

    @classmethod
    def parse(cls, value) -> "Mode":
        if isinstance(value, Mode):
            return value
        key = str(value).strip().lower().replace("-", "_")
        if key in ("pw", "plane_wave"):
            return cls.PLANE_WAVE
        if key in ("wp", "wave_packet"):
            return cls.WAVE_PACKET
        raise DomainError(f"unknown mode {value!r}; expected pw or wp")


@dataclass(frozen=True)
class WavePacketConfig:
    """Combined wave-packet width in meters, localization factor, treatment mode."""

    sigma_x: float = 0.5e-9
    rho: float = 1.0
    mode: Mode = Mode.WAVE_PACKET

    def __post_init__(self):
        if not (self.sigma_x > 0 and math.isfinite(self.sigma_x)):
            raise DomainError(f"sigma_x must be positive, got {self.sigma_x!r}")
        if not (self.rho >= 0 and math.isfinite(self.rho)):
            raise DomainError(f"rho must be non-negative, got {self.rho!r}")
        object.__setattr__(self, "mode", Mode.parse(self.mode))

    @property
    def wave_packet(self) -> bool:
        return self.mode is Mode.WAVE_PACKET

    def with_mode(self, mode) -> "WavePacketConfig":
        return WavePacketConfig(self.sigma_x, self.rho, Mode.parse(mode))


@dataclass(frozen=True)
class FlavorProbabilities:
    """P[alpha, beta] for flavors ordered (e, mu, tau)."""

    matrix: np.ndarray
    baseline: float
    potential: float
    mode: Mode
    kind: ParticleKind = ParticleKind.NEUTRINO
    initial: Flavor | None = None
    medium: str = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "medium", "vacuum" if self.potential == 0 else "matter")

    def row(self, alpha) -> np.ndarray:
        return self.matrix[Flavor.parse(alpha)]

    def __getitem__(self, idx):
        a, b = idx
        return self.matrix[Flavor.parse(a), Flavor.parse(b)]


def _clip(x: float) -> float:
    if -CLIP_SLACK <= x < 0.0:
        return 0.0
    if 1.0 < x <= 1.0 + CLIP_SLACK:
        return 1.0
    return x


def interference_sum(u, alpha, beta, phase, damping) -> float:
    """Re sum_ij U*_ai U_bi U_aj U*_bj exp(-i phase_ij) damping_ij.

    ``phase`` and ``damping`` are 3x3 arrays indexed by mass eigenstates;
    the imaginary part must cancel between (i, j) and (j, i).
    """
    ua, ub = u[alpha], u[beta]
    w = np.outer(ua.conj() * ub, ua * ub.conj())
    rot = (np.cos(phase) - 1j * np.sin(phase)).astype(complex)
    residue = np.sum(w * rot * damping).imag
    if abs(residue) > IMAG_TOLERANCE:
        raise ArithmeticError(f"imaginary residue {residue:.3e} in probability sum")
    # unitarity turns the sum into delta_ab minus pair terms that vanish with
    # the phase, so small transition probabilities keep their relative accuracy
    total = float(alpha == beta)
    for i, j in _PAIRS:
        d = float(damping[i, j])
        half = float(np.sin(phase[i, j] / 2))
        keep = (1.0 - d) + 2.0 * d * half * half
        total -= 2.0 * (w[i, j].real * keep - d * w[i, j].imag * float(np.sin(phase[i, j])))
    return _clip(total)


def _natural_ext(length_m):
    """Baseline in eV^-1 as long double; phases are formed in this precision."""
    length_to_natural(length_m)  # validation only
    return np.longdouble(length_m) / np.longdouble(HBAR_C)


def _check_inputs(baseline, energy):
    if not (baseline >= 0 and math.isfinite(baseline)):
        raise DomainError(f"baseline must be finite and non-negative, got {baseline!r}")
    if not (energy > 0 and math.isfinite(energy)):
        raise DomainError(f"energy must be positive, got {energy!r}")


def _damping(gauss, loc, wave_packet):
    if not wave_packet:
        return np.ones((3, 3))
    return np.exp(-gauss - loc)


def vacuum_probability(
    p: OscillationParams,
    wp: WavePacketConfig,
    alpha,
    beta,
    baseline: float,
    energy: float,
    kind=ParticleKind.NEUTRINO,
) -> float:
    """Vacuum P(alpha -> beta) at baseline (m) and energy (eV)."""
    _check_inputs(baseline, energy)
    L_ext = _natural_ext(baseline)
    L = float(L_ext)
    sx = length_to_natural(wp.sigma_x)
    m2_ext = np.array([0.0, p.dm21_sq, p.dm31_sq], dtype=np.longdouble)
    dm2_ext = m2_ext[:, None] - m2_ext[None, :]
    dm2 = dm2_ext.astype(float)
    # 2 pi L / l_osc, (L / l_coh)^2 and 2 pi^2 rho^2 (sigma_x / l_osc)^2 with
    # l_osc = 4 pi E / dm2, l_coh = 4 sqrt(2) sigma_x E^2 / |dm2|
    phase = (dm2_ext / (2 * np.longdouble(energy))) * L_ext
    gauss = (L * dm2 / (4.0 * math.sqrt(2.0) * sx * energy**2)) ** 2
    loc = 2.0 * math.pi**2 * wp.rho**2 * (sx * dm2 / (4.0 * math.pi * energy)) ** 2
    u = build_pmns(p, kind)
    return interference_sum(u, Flavor.parse(alpha), Flavor.parse(beta), phase, _damping(gauss, loc, wp.wave_packet))


def _matter_terms(p, wp, energy, potential, kind, floor, velocity_rtol):
    """Mixing matrix, signed splittings (long double), per-pair Gaussian rate and localization exponent."""
    kind = ParticleKind.parse(kind)
    lv = _solve(p, energy, _signed(potential, kind), EXT)
    t13m, t12m, e_ext = lv.t13m, lv.t12m, lv.e
    mixing = pmns_from_angles(float(t12m), float(t13m), p.theta23, kind.sign * p.delta_cp)
    e_ext = np.array(e_ext, dtype=np.longdouble)
    dE_ext = e_ext[:, None] - e_ext[None, :]
    dE = dE_ext.astype(float)
    sx = length_to_natural(wp.sigma_x)
    if wp.wave_packet:
        dv = velocity_differences(p, energy, potential, kind, floor)
        vfloor = velocity_floor(p, energy, velocity_rtol)
        v = np.zeros((3, 3))
        for (i, j), val in (((1, 0), dv.dv21), ((2, 0), dv.dv31), ((2, 1), dv.dv32)):
            val = 0.0 if abs(val) <= vfloor else val
            v[i, j] = val
            v[j, i] = -val
        # (L / l_coh)^2 = L^2 * rate with l_coh = 2 sqrt(2) sigma_x / |dv|
        rate = (v / (2.0 * math.sqrt(2.0) * sx)) ** 2
        # 2 pi^2 rho^2 (sigma_x / l_osc)^2 with l_osc = 2 pi / dE
        loc = 0.5 * (wp.rho * sx * dE) ** 2
    else:
        rate = np.zeros((3, 3))
        loc = np.zeros((3, 3))
    return mixing, dE_ext, rate, loc


def matter_probability(
    p: OscillationParams,
    wp: WavePacketConfig,
    alpha,
    beta,
    baseline: float,
    energy: float,
    potential: float,
    kind=ParticleKind.NEUTRINO,
    floor: float = DEGENERACY_FLOOR,
    velocity_rtol: float = VELOCITY_RTOL,
) -> float:
    """P(alpha -> beta) in uniform matter of potential V (eV)."""
    _check_inputs(baseline, energy)
    if not (potential >= 0 and math.isfinite(potential)):
        raise DomainError(f"potential must be finite and non-negative, got {potential!r}")
    u, dE, rate, loc = _matter_terms(p, wp, energy, potential, kind, floor, velocity_rtol)
    L = _natural_ext(baseline)
    damping = _damping(rate * float(L) ** 2, loc, wp.wave_packet)
    return interference_sum(u, Flavor.parse(alpha), Flavor.parse(beta), dE * L, damping)


def probability_matrix(
    p: OscillationParams,
    wp: WavePacketConfig,
    baseline: float,
    energy: float,
    potential: float,
    kind=ParticleKind.NEUTRINO,
    alpha=None,
) -> FlavorProbabilities:
    """All nine P[alpha, beta]; ``alpha`` only tags the initial flavor of interest."""
    _check_inputs(baseline, energy)
    if not (potential >= 0 and math.isfinite(potential)):
        raise DomainError(f"potential must be finite and non-negative, got {potential!r}")
    kind = ParticleKind.parse(kind)
    u, dE, rate, loc = _matter_terms(p, wp, energy, potential, kind, DEGENERACY_FLOOR, VELOCITY_RTOL)
    L = _natural_ext(baseline)
    damping = _damping(rate * float(L) ** 2, loc, wp.wave_packet)
    m = np.array([[interference_sum(u, a, b, dE * L, damping) for b in range(3)] for a in range(3)])
    return FlavorProbabilities(
        m, baseline, potential, wp.mode, kind, None if alpha is None else Flavor.parse(alpha)
    )


def averaged_probability(
    p: OscillationParams, alpha, beta, energy: float, potential: float, kind=ParticleKind.NEUTRINO
) -> float:
    """Fully decohered limit: sum_i |U_ai|^2 |U_bi|^2."""
    u = matter_system(p, energy, potential, kind).mixing
    return float(np.sum(np.abs(u[Flavor.parse(alpha)]) ** 2 * np.abs(u[Flavor.parse(beta)]) ** 2))
