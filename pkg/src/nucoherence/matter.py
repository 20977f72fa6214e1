"""Zeroth-order diagonalization of the constant-density matter Hamiltonian.

Two successive rotations (first in the 1-3 plane, then in the 1-2 plane)
bring the flavor Hamiltonian to a diagonal piece plus a small 1-3/2-3
coupling that is dropped. Everything here is evaluated with the signed
potential ``a = +V`` for neutrinos and ``a = -V`` for antineutrinos; the CP
phase is conjugated for antineutrinos when the mixing matrix is built.

Angles come from a two-argument arctangent mapped to [0, pi) before
halving, so they are continuous through both resonances.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .eigh3 import eigh3
from .errors import DomainError
from .params import OscillationParams, ParticleKind, build_pmns, pmns_from_angles

__all__ = [
    "MatterEigenSystem",
    "epsilon",
    "theta13_matter",
    "theta12_matter",
    "l_eigenvalues",
    "matter_eigenvalues",
    "matter_mixing",
    "matter_system",
    "flavor_hamiltonian",
    "exact_eigensystem",
]


@dataclass(frozen=True)
class MatterEigenSystem:
    energy: float
    potential: float
    kind: ParticleKind
    theta13m: float
    theta12m: float
    l1: float
    l2: float
    l3: float
    e1m: float
    e2m: float
    e3m: float
    epsilon: float
    mixing: np.ndarray

    @property
    def eigenvalues(self) -> np.ndarray:
        return np.array([self.e1m, self.e2m, self.e3m])

    @property
    def l_values(self) -> tuple[float, float, float]:
        return self.l1, self.l2, self.l3


def _check_energy(energy):
    if not (energy > 0 and math.isfinite(energy)):
        raise DomainError(f"energy must be positive and finite, got {energy!r}")


def _signed(potential, kind) -> float:
    if not math.isfinite(potential):
        raise DomainError(f"potential must be finite, got {potential!r}")
    return ParticleKind.parse(kind).sign * potential


class _Arith:
    """Scalar math in one floating-point format: plain floats or numpy long double."""

    def __init__(self, num, sin, cos, sqrt, atan2, hypot, pi):
        self.num, self.sin, self.cos, self.sqrt = num, sin, cos, sqrt
        self.atan2, self.hypot, self.pi = atan2, hypot, pi


F64 = _Arith(float, math.sin, math.cos, math.sqrt, math.atan2, math.hypot, math.pi)
# splittings multiply baselines up to ~1e25 eV^-1, so phases reach ~1e11 rad;
# an ulp of error in double would move P by ~1e-6 there
EXT = _Arith(np.longdouble, np.sin, np.cos, np.sqrt, np.arctan2, np.hypot, np.longdouble("3.14159265358979323846264338327950288"))


def _half_angle(y, x, m=F64):
    """(angle, branch): half of atan2(y, x) mapped to [0, pi).

    ``branch`` is -1 when the mapping shifted atan2 by pi. The rotated
    diagonal entries then swap roles, so the closed forms for the two levels
    of that block change sign in front of the square root.
    """
    t = m.atan2(y, x)
    if t < 0:
        return 0.5 * (t + m.pi), -1
    if t >= m.pi:
        return 0.5 * (t - m.pi), -1
    return 0.5 * t, 1


def epsilon(p: OscillationParams, m=F64) -> float:
    """dm31^2 - dm21^2 sin^2(theta12), in eV^2."""
    return m.num(p.dm31_sq) - m.num(p.dm21_sq) * m.sin(m.num(p.theta12)) ** 2


def _radicand(p, eps, ea2, m=F64):
    # (2Ea)^2 + eps^2 - 4Ea eps cos(2th13), written as a sum of squares
    t13 = m.num(p.theta13)
    return (ea2 - eps * m.cos(2 * t13)) ** 2 + (eps * m.sin(2 * t13)) ** 2


def _theta13m(p, eps, ea2, m=F64):
    t13 = m.num(p.theta13)
    return _half_angle(eps * m.sin(2 * t13), eps * m.cos(2 * t13) - ea2, m)


def _pair_roots(total, root, product, branch):
    """(low, high) = (total - branch*root)/2, (total + branch*root)/2.

    The larger-magnitude root is formed directly and the other from
    ``product`` = low * high, so neither suffers cancellation.
    """
    sg = 1 if total >= 0 else -1
    big = 0.5 * (total + sg * root)
    small = product / big if big != 0 else 0.5 * (total - sg * root)
    return (big, small) if branch == -sg else (small, big)


def _l_values(p, eps, ea2, s13=1, m=F64):
    dm21, dm31 = m.num(p.dm21_sq), m.num(p.dm31_sq)
    s12sq = m.sin(m.num(p.theta12)) ** 2
    total = dm31 + ea2 + dm21 * s12sq
    root = m.sqrt(_radicand(p, eps, ea2, m))
    product = dm21 * s12sq * dm31 + 0.5 * ea2 * (dm31 + dm21 * s12sq + eps * m.cos(2 * m.num(p.theta13)))
    l1, l3 = _pair_roots(total, root, product, s13)
    l2 = dm21 * m.cos(m.num(p.theta12)) ** 2
    return l1, l2, l3


class Levels(NamedTuple):
    """Zeroth-order solution at one (E, a); ``split`` = 4E E2 - (l1 + l2)."""

    eps: float
    t13m: float
    t12m: float
    l: tuple
    e: tuple
    s13: int
    s12: int
    split: float


def _solve(p, energy, a, m=F64) -> Levels:
    """All zeroth-order quantities at signed potential ``a``, in the arithmetic ``m``."""
    energy = m.num(energy)
    eps = epsilon(p, m)
    ea2 = 2 * energy * m.num(a)
    t13m, s13 = _theta13m(p, eps, ea2, m)
    l1, l2, l3 = _l_values(p, eps, ea2, s13, m)
    coupling = m.num(p.dm21_sq) * m.sin(2 * m.num(p.theta12)) * m.cos(m.num(p.theta13) - t13m)
    t12m, s12 = _half_angle(coupling, l2 - l1, m)
    split = m.hypot(l1 - l2, coupling)
    # (2E E1)(2E E2) = l1 l2 - coupling^2 / 4
    q1, q2 = _pair_roots(l1 + l2, split, l1 * l2 - 0.25 * coupling**2, s12)
    e1, e2 = q1 / (2 * energy), q2 / (2 * energy)
    e3 = l3 / (2 * energy)
    return Levels(eps, t13m, t12m, (l1, l2, l3), (e1, e2, e3), s13, s12, s12 * split)


def theta13_matter(p: OscillationParams, energy: float, potential: float, kind=ParticleKind.NEUTRINO) -> float:
    _check_energy(energy)
    return _theta13m(p, epsilon(p), 2.0 * energy * _signed(potential, kind))[0]


def l_eigenvalues(p: OscillationParams, energy: float, potential: float, kind=ParticleKind.NEUTRINO):
    """(l1, l2, l3) in eV^2; l2 does not depend on the potential."""
    _check_energy(energy)
    return _solve(p, energy, _signed(potential, kind)).l


def theta12_matter(p: OscillationParams, energy: float, potential: float, kind=ParticleKind.NEUTRINO) -> float:
    _check_energy(energy)
    return _solve(p, energy, _signed(potential, kind)).t12m


def matter_eigenvalues(p: OscillationParams, energy: float, potential: float, kind=ParticleKind.NEUTRINO):
    """(E1m, E2m, E3m) in eV, labelled by the branch signs of the closed forms, not sorted."""
    _check_energy(energy)
    return _solve(p, energy, _signed(potential, kind)).e


def matter_mixing(p: OscillationParams, energy: float, potential: float, kind=ParticleKind.NEUTRINO) -> np.ndarray:
    return matter_system(p, energy, potential, kind).mixing


def matter_system(p: OscillationParams, energy: float, potential: float, kind=ParticleKind.NEUTRINO) -> MatterEigenSystem:
    _check_energy(energy)
    kind = ParticleKind.parse(kind)
    eps, t13m, t12m, ls, es = _solve(p, energy, _signed(potential, kind))[:5]
    mixing = pmns_from_angles(t12m, t13m, p.theta23, kind.sign * p.delta_cp)
    return MatterEigenSystem(energy, potential, kind, t13m, t12m, *ls, *es, eps, mixing)


def flavor_hamiltonian(p: OscillationParams, energy: float, potential: float, kind=ParticleKind.NEUTRINO) -> np.ndarray:
    """Full flavor-basis Hamiltonian (1/2E)[U diag(0, dm21, dm31) U^+ + diag(2Ea, 0, 0)] in eV."""
    _check_energy(energy)
    kind = ParticleKind.parse(kind)
    u = build_pmns(p, kind)
    h = u @ np.diag([0.0, p.dm21_sq, p.dm31_sq]) @ u.conj().T
    h[0, 0] += 2.0 * energy * _signed(potential, kind)
    return h / (2.0 * energy)


def exact_eigensystem(p: OscillationParams, energy: float, potential: float, kind=ParticleKind.NEUTRINO):
    """Brute-force eigenvalues (ascending, eV) and eigenvectors of the full Hamiltonian."""
    return eigh3(flavor_hamiltonian(p, energy, potential, kind))
