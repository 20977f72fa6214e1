"""l1-norm of coherence for flavor density matrices.

For a pure state the off-diagonal moduli factor as sqrt(P_a P_b), which
gives c = 2 (sqrt(P1 P2) + sqrt(P1 P3) + sqrt(P2 P3)) from one probability
row. Wave-packet scans apply the same expression to the damped row.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .matter import EXT, _signed, _solve
from .params import Flavor, ParticleKind, pmns_from_angles
from .sweep import AxisSpec, probability_scan
from .units import HBAR_C, length_to_natural

__all__ = [
    "C_MAX",
    "FlavorDensityMatrix",
    "l1_norm",
    "l1_from_probabilities",
    "l1_from_rows",
    "amplitudes",
    "plane_wave_density_matrix",
    "l1_scan",
]

#: maximal l1-norm for a qutrit, d - 1
C_MAX = 2.0
_NEG_SLACK = 1e-12


@dataclass(frozen=True)
class FlavorDensityMatrix:
    rho: np.ndarray
    initial: Flavor | None = None

    def __post_init__(self):
        rho = np.asarray(self.rho, dtype=complex)
        if rho.shape != (3, 3):
            raise DomainError("density matrix must be 3x3")
        if np.max(np.abs(rho - rho.conj().T)) > 1e-13:
            raise DomainError("density matrix is not Hermitian")
        if abs(np.trace(rho).real - 1.0) > 1e-12:
            raise DomainError(f"density matrix trace {np.trace(rho).real!r} != 1")
        if np.min(np.diag(rho).real) < -_NEG_SLACK:
            raise DomainError("negative population on the diagonal")
        object.__setattr__(self, "rho", rho)

    @property
    def populations(self) -> np.ndarray:
        return np.diag(self.rho).real.copy()


def l1_norm(rho) -> float:
    """Sum of |rho_ij| over the six off-diagonal entries."""
    m = rho.rho if isinstance(rho, FlavorDensityMatrix) else np.asarray(rho)
    return float(np.sum(np.abs(m)) - np.sum(np.abs(np.diag(m))))


def _clean_row(probs):
    p = np.asarray(probs, dtype=float)
    if np.any(p < -_NEG_SLACK):
        raise DomainError(f"negative probability in row {p.tolist()}")
    return np.maximum(p, 0.0)


def l1_from_probabilities(probs) -> float:
    p1, p2, p3 = _clean_row(probs)
    return 2.0 * (math.sqrt(p1 * p2) + math.sqrt(p1 * p3) + math.sqrt(p2 * p3))


def l1_from_rows(rows) -> np.ndarray:
    """Vectorized l1_from_probabilities over an (n, 3) array."""
    rows = np.asarray(rows, dtype=float)
    if np.any(rows < -_NEG_SLACK):
        raise DomainError("negative probability in scan rows")
    r = np.sqrt(np.maximum(rows, 0.0))
    return 2.0 * (r[:, 0] * r[:, 1] + r[:, 0] * r[:, 2] + r[:, 1] * r[:, 2])


def amplitudes(p, alpha, baseline, energy, potential, kind=ParticleKind.NEUTRINO) -> np.ndarray:
    """A_ab(L) = sum_i U*_ai U_bi exp(-i E_i L) for b = e, mu, tau.

    The common phase exp(-i E_1 L) is dropped: it cancels in every
    observable, and keeping it costs digits at long baselines.
    """
    kind = ParticleKind.parse(kind)
    lv = _solve(p, energy, _signed(potential, kind), EXT)
    t13m, t12m, e_ext = lv.t13m, lv.t12m, lv.e
    u = pmns_from_angles(float(t12m), float(t13m), p.theta23, kind.sign * p.delta_cp)
    a = Flavor.parse(alpha)
    length_to_natural(baseline)
    e_ext = np.array(e_ext, dtype=np.longdouble)
    phi = (e_ext - e_ext[0]) * (np.longdouble(baseline) / np.longdouble(HBAR_C))
    phases = (np.cos(phi) - 1j * np.sin(phi)).astype(complex)
    return (u[a].conj() * phases) @ u.T


def plane_wave_density_matrix(p, alpha, baseline, energy, potential, kind=ParticleKind.NEUTRINO) -> FlavorDensityMatrix:
    """Pure-state rho_bc = A_ab A*_ac of the evolved flavor state."""
    amp = amplitudes(p, alpha, baseline, energy, potential, kind)
    return FlavorDensityMatrix(np.outer(amp, amp.conj()), Flavor.parse(alpha))


def l1_scan(p, wp, alpha, axis: AxisSpec, *, baseline=None, energy=None, potential=None, kind=ParticleKind.NEUTRINO):
    """(axis values, c) along one axis; other quantities held at the given values."""
    x, rows = probability_scan(p, wp, alpha, axis, baseline=baseline, energy=energy, potential=potential, kind=kind)
    return x, l1_from_rows(rows)
