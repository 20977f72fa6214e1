"""Pure-Python batch kernel; the compiled ``_kernels`` module mirrors this signature.

``probability_rows`` evaluates one probability row per sample point
(energy_k, potential_k, baseline_k). Consecutive points that share energy and
potential reuse the same eigensystem, so baseline scans vectorize over L.
"""
from __future__ import annotations

import math

import numpy as np

from .errors import DegenerateConfigurationError
from .kinematics import _velocity
from .matter import EXT, _solve
from .params import pmns_from_angles
from .units import HBAR_C

KERNEL_ABI = 3

_PAIRS = ((1, 0), (2, 0), (2, 1))


def _pair_terms(p, energy, a, sign, sx, rho, wave_packet, floor, velocity_rtol):
    lv = _solve(p, energy, a, EXT)
    t13m, t12m, e = lv.t13m, lv.t12m, lv.e
    u = pmns_from_angles(float(t12m), float(t13m), p.theta23, sign * p.delta_cp)
    dE_ext = np.array([e[i] - e[j] for i, j in _PAIRS], dtype=np.longdouble)
    dE = dE_ext.astype(float)
    if wave_packet:
        dv21, dv32 = _velocity(p, energy, a, floor)
        vfloor = velocity_rtol * abs(p.dm31_sq) / (2.0 * energy * energy)
        dv = np.array([dv21, dv21 + dv32, dv32])
        dv[np.abs(dv) <= vfloor] = 0.0
        rate = (dv / (2.0 * math.sqrt(2.0) * sx)) ** 2
        loc = 0.5 * (rho * sx * dE) ** 2
    else:
        rate = np.zeros(3)
        loc = np.zeros(3)
    return u, dE_ext, rate, loc


def _rows_fixed_system(u, alpha, dE, rate, loc, L_ext):
    L = L_ext.astype(float)
    ua = u[alpha]
    out = np.empty((L.size, 3))
    for beta in range(3):
        ub = u[beta]
        # delta_ab minus pair terms; see probability.interference_sum
        acc = np.full(L.size, float(alpha == beta))
        for k, (i, j) in enumerate(_PAIRS):
            w = np.conj(ua[i]) * ub[i] * ua[j] * np.conj(ub[j])
            damp = np.exp(-rate[k] * L * L - loc[k])
            phase = dE[k] * L_ext
            half = np.sin(phase / 2).astype(float)
            keep = (1.0 - damp) + 2.0 * damp * half * half
            acc -= 2.0 * (w.real * keep - damp * w.imag * np.sin(phase).astype(float))
        out[:, beta] = acc
    return out


def probability_rows(
    p,
    energies,
    potentials,
    baselines,
    alpha,
    sign,
    sigma_x,
    rho,
    wave_packet,
    floor,
    velocity_rtol,
):
    """Rows P[alpha, :] at each point; baselines and sigma_x in meters, potentials unsigned."""
    energies = np.ascontiguousarray(energies, dtype=float)
    potentials = np.ascontiguousarray(potentials, dtype=float)
    baselines = np.asarray(baselines, dtype=np.longdouble) / np.longdouble(HBAR_C)
    sigma_x = sigma_x / HBAR_C
    n = energies.size
    out = np.empty((n, 3))
    start = 0
    while start < n:
        stop = start + 1
        while stop < n and energies[stop] == energies[start] and potentials[stop] == potentials[start]:
            stop += 1
        try:
            terms = _pair_terms(
                p, energies[start], sign * potentials[start], sign, sigma_x, rho, wave_packet, floor, velocity_rtol
            )
        except DegenerateConfigurationError as exc:
            exc.index = start
            raise
        out[start:stop] = _rows_fixed_system(terms[0], alpha, *terms[1:], baselines[start:stop])
        start = stop
    return out
