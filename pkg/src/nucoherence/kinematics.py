"""Group-velocity differences, oscillation/coherence lengths and special potentials.

The velocity differences are the analytic energy derivatives of the
zeroth-order level splittings. Delta v_31 is always assembled as
Delta v_32 + Delta v_21.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateConfigurationError, DomainError, RootNotFoundError
from .matter import _check_energy, _radicand, _signed, _solve, epsilon
from .params import OscillationParams, ParticleKind
from .units import HBAR_C, length_to_natural

__all__ = [
    "DEGENERACY_FLOOR",
    "VELOCITY_RTOL",
    "velocity_floor",
    "PAIRS",
    "VelocityDifferences",
    "PairLengths",
    "dl_dE",
    "velocity_differences",
    "splittings",
    "vacuum_lengths",
    "matter_lengths",
    "bisect",
    "log_bisect",
    "find_resonance_potentials",
    "find_infinite_coherence_potentials",
]

#: floor on 4E E2m - (l1 + l2), in eV^2
DEGENERACY_FLOOR = 1e-30
#: |Delta v| at or below VELOCITY_RTOL * |dm31^2| / (2 E^2) counts as zero (infinite coherence length)
VELOCITY_RTOL = 1e-12

PAIRS = ("21", "31", "32")
_PAIR_INDEX = {"21": (1, 0), "31": (2, 0), "32": (2, 1)}

SEARCH_BRACKET = (1e-18, 1e-11)


@dataclass(frozen=True)
class VelocityDifferences:
    dv21: float
    dv32: float

    @property
    def dv31(self) -> float:
        return self.dv32 + self.dv21

    def __getitem__(self, pair: str) -> float:
        return {"21": self.dv21, "31": self.dv31, "32": self.dv32}[pair]


@dataclass(frozen=True)
class PairLengths:
    """Oscillation and coherence length of one eigenstate pair, in meters."""

    pair: str
    l_osc: float
    l_coh: float


def _dl_dE(p, eps, energy, a, s13):
    root = math.sqrt(_radicand(p, eps, 2.0 * energy * a))
    if root <= 0.0:
        raise DegenerateConfigurationError("sqrt radicand of l1,3", root, 0.0)
    ratio = s13 * (2.0 * energy * a - eps * math.cos(2 * p.theta13)) / root
    return a * (1.0 - ratio), a * (1.0 + ratio)


def dl_dE(p: OscillationParams, energy: float, potential: float, kind=ParticleKind.NEUTRINO):
    """(dl1/dE, dl3/dE) in eV."""
    _check_energy(energy)
    a = _signed(potential, kind)
    return _dl_dE(p, epsilon(p), energy, a, _solve(p, energy, a).s13)


def _velocity(p, energy, a, floor):
    lv = _solve(p, energy, a)
    eps, t13m = lv.eps, lv.t13m
    (l1, l2, _l3), (e1, e2, e3) = lv.l, lv.e
    dl1, dl3 = _dl_dE(p, eps, energy, a, lv.s13)
    split = lv.split
    if abs(split) <= floor:
        raise DegenerateConfigurationError("4E*E2m - (l1+l2)", split, floor)
    # zeta / (eps cos 2th13 - 2Ea)^2 using cos^2(2 th13m) = D^2 / (D^2 + (eps sin 2th13)^2),
    # which stays finite where D = eps cos 2th13 - 2Ea crosses zero
    s2t13 = math.sin(2 * p.theta13)
    d = eps * math.cos(2 * p.theta13) - 2.0 * energy * a
    zeta_over_d2 = (
        4.0
        * p.dm21_sq**2
        * eps
        * a
        * math.sin(2 * p.theta12) ** 2
        * s2t13
        * math.sin(2 * (p.theta13 - t13m))
        / (d * d + (eps * s2t13) ** 2)
    )
    xi = 0.5 / split * (8.0 * (l1 - l2) * dl1 + zeta_over_d2)
    dv21 = (-8.0 * (e2 - e1) + xi) / (8.0 * energy)
    dv32 = (6.0 * dl3 - 4.0 * a - 8.0 * (e3 - e2) - 0.5 * xi) / (8.0 * energy)
    return dv21, dv32


def velocity_differences(
    p: OscillationParams,
    energy: float,
    potential: float,
    kind=ParticleKind.NEUTRINO,
    floor: float = DEGENERACY_FLOOR,
) -> VelocityDifferences:
    _check_energy(energy)
    return VelocityDifferences(*_velocity(p, energy, _signed(potential, kind), floor))


def splittings(p, energy, potential, kind=ParticleKind.NEUTRINO) -> dict:
    """Signed Delta E_ij = E_i - E_j in eV for the three pairs."""
    _check_energy(energy)
    e = _solve(p, energy, _signed(potential, kind)).e
    return {pair: e[i] - e[j] for pair, (i, j) in _PAIR_INDEX.items()}


def velocity_floor(p: OscillationParams, energy: float, rtol: float = VELOCITY_RTOL) -> float:
    return rtol * abs(p.dm31_sq) / (2.0 * energy * energy)


def _to_meters(x):
    return math.inf if math.isinf(x) else x * HBAR_C


def vacuum_lengths(p: OscillationParams, energy: float, sigma_x: float) -> dict:
    """4 pi E / |dm^2| and 4 sqrt(2) sigma_x E^2 / |dm^2| per pair, in meters."""
    _check_energy(energy)
    sx = length_to_natural(sigma_x)
    dm = {"21": p.dm21_sq, "31": p.dm31_sq, "32": p.dm31_sq - p.dm21_sq}
    return {
        pair: PairLengths(
            pair,
            _to_meters(4 * math.pi * energy / abs(d)),
            _to_meters(4 * math.sqrt(2) * sx * energy**2 / abs(d)),
        )
        for pair, d in dm.items()
    }


def matter_lengths(
    p: OscillationParams,
    energy: float,
    potential: float,
    kind=ParticleKind.NEUTRINO,
    sigma_x: float = 0.5e-9,
    floor: float = DEGENERACY_FLOOR,
    velocity_rtol: float = VELOCITY_RTOL,
) -> dict:
    """PairLengths for pairs 21, 31, 32 keyed by label.

    ``sigma_x`` may also be a WavePacketConfig. A velocity difference at or
    below ``velocity_floor(p, energy, velocity_rtol)`` gives ``l_coh = inf``.
    """
    _check_energy(energy)
    sigma_x = getattr(sigma_x, "sigma_x", sigma_x)
    if not sigma_x > 0:
        raise DomainError("sigma_x must be positive")
    sx = length_to_natural(sigma_x)
    dE = splittings(p, energy, potential, kind)
    dv = velocity_differences(p, energy, potential, kind, floor)
    vfloor = velocity_floor(p, energy, velocity_rtol)
    out = {}
    for pair in PAIRS:
        v = abs(dv[pair])
        l_coh = math.inf if v <= vfloor else 2 * math.sqrt(2) * sx / v
        out[pair] = PairLengths(pair, _to_meters(2 * math.pi / abs(dE[pair])), _to_meters(l_coh))
    return out


def _shrink(f, lo, hi, flo, done):
    while not done(lo, hi):
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        fm = f(mid)
        if fm == 0:
            return mid, mid
        if (fm > 0) == (flo > 0):
            lo, flo = mid, fm
        else:
            hi = mid
    return lo, hi


def _endpoints(f, lo, hi):
    flo, fhi = f(lo), f(hi)
    if (flo > 0) == (fhi > 0) and flo != 0 and fhi != 0:
        raise RootNotFoundError(f"no sign change on [{lo:.6g}, {hi:.6g}]")
    return flo, fhi


def bisect(f, lo: float, hi: float, rtol: float = 0.0) -> float:
    """Root of f on a sign-change bracket [lo, hi].

    ``rtol = 0`` bisects to full floating-point resolution.
    """
    flo, fhi = _endpoints(f, lo, hi)
    if flo == 0:
        return lo
    if fhi == 0:
        return hi
    lo, hi = _shrink(f, lo, hi, flo, lambda a, b: rtol > 0 and b - a <= rtol * abs(0.5 * (a + b)))
    return 0.5 * (lo + hi)


def log_bisect(f, lo: float, hi: float, rtol: float = 0.0) -> float:
    """Bisection in log(x) on a positive bracket spanning decades, finished in x."""
    flo, fhi = _endpoints(f, lo, hi)
    if flo == 0:
        return lo
    if fhi == 0:
        return hi
    g = lambda t: f(math.exp(t))  # noqa: E731
    tlo, thi = _shrink(g, math.log(lo), math.log(hi), flo, lambda a, b: b - a <= 1e-6)
    if tlo == thi:
        return math.exp(tlo)
    return bisect(f, math.exp(tlo), math.exp(thi), rtol=rtol)


def find_resonance_potentials(
    p: OscillationParams,
    energy: float,
    kind=ParticleKind.NEUTRINO,
    bracket=SEARCH_BRACKET,
    rtol: float = 0.0,
):
    """(V_res1, V_res2) in eV: where theta12m and theta13m reach pi/4."""
    _check_energy(energy)
    sign = ParticleKind.parse(kind).sign

    def t12(v):
        return _solve(p, energy, sign * v).t12m - math.pi / 4

    def t13(v):
        return _solve(p, energy, sign * v).t13m - math.pi / 4

    return log_bisect(t12, *bracket, rtol=rtol), log_bisect(t13, *bracket, rtol=rtol)


def find_infinite_coherence_potentials(
    p: OscillationParams,
    energy: float,
    kind=ParticleKind.NEUTRINO,
    bracket=SEARCH_BRACKET,
    points: int = 400,
    floor: float = DEGENERACY_FLOOR,
):
    """Potentials where Delta v_21 or Delta v_32 vanishes, as (pair, V) sorted by V."""
    _check_energy(energy)
    sign = ParticleKind.parse(kind).sign
    grid = np.logspace(math.log10(bracket[0]), math.log10(bracket[1]), points)

    def dv(v, idx):
        try:
            return _velocity(p, energy, sign * v, floor)[idx]
        except DegenerateConfigurationError:
            return math.nan

    roots = []
    for idx, pair in ((0, "21"), (1, "32")):
        vals = [dv(v, idx) for v in grid]
        for k in range(points - 1):
            a, b = vals[k], vals[k + 1]
            if math.isnan(a) or math.isnan(b):
                continue
            if a == 0.0:
                roots.append((pair, float(grid[k])))
            elif (a > 0) != (b > 0) and b != 0.0:
                roots.append((pair, log_bisect(lambda v: dv(v, idx), grid[k], grid[k + 1])))
        if vals[-1] == 0.0:
            roots.append((pair, float(grid[-1])))
    return sorted(roots, key=lambda r: r[1])
