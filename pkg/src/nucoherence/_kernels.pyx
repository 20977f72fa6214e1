# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled batch kernel; same contract as ``_kernels_py.probability_rows``."""
import numpy as np

from libc.math cimport acosl, atan2l, cos, cosl, exp, fabs, hypotl, sin, sinl, sqrt, sqrtl

from .errors import DegenerateConfigurationError
from .units import HBAR_C

#: bumped whenever the calling convention changes; a stale build is ignored
KERNEL_ABI = 3

# splittings and phases run in long double: phases reach ~1e11 rad at 1e18 m
cdef long double PI_L = acosl(-1.0)


cdef struct System:
    long double eps
    long double t13m
    long double t12m
    long double l1
    long double l2
    long double l3
    long double e1
    long double e2
    long double e3
    long double split   # 4E E2 - (l1 + l2)
    int s13
    int s12


cdef inline long double half_angle(long double y, long double x, int* branch) noexcept nogil:
    cdef long double t = atan2l(y, x)
    branch[0] = 1
    if t < 0.0:
        t += PI_L
        branch[0] = -1
    elif t >= PI_L:
        t -= PI_L
        branch[0] = -1
    return 0.5 * t


cdef inline long double radicand(long double th13, long double eps, long double ea2) noexcept nogil:
    cdef long double x = ea2 - eps * cosl(2.0 * th13)
    cdef long double y = eps * sinl(2.0 * th13)
    return x * x + y * y


cdef inline void pair_roots(long double total, long double root, long double product, int branch,
                            long double* low, long double* high) noexcept nogil:
    cdef int sg = 1 if total >= 0.0 else -1
    cdef long double big = 0.5 * (total + sg * root)
    cdef long double small
    if big != 0.0:
        small = product / big
    else:
        small = 0.5 * (total - sg * root)
    if branch == -sg:
        low[0] = big
        high[0] = small
    else:
        low[0] = small
        high[0] = big


cdef void solve(long double th12, long double th13, long double dm21, long double dm31,
                long double energy, long double a, System* s) noexcept nogil:
    cdef long double s12sq = sinl(th12) ** 2
    cdef long double eps = dm31 - dm21 * s12sq
    cdef long double ea2 = 2.0 * energy * a
    cdef long double total, root, product, coupling, split, q1, q2
    s.eps = eps
    s.t13m = half_angle(eps * sinl(2.0 * th13), eps * cosl(2.0 * th13) - ea2, &s.s13)
    total = dm31 + ea2 + dm21 * s12sq
    root = sqrtl(radicand(th13, eps, ea2))
    product = dm21 * s12sq * dm31 + 0.5 * ea2 * (dm31 + dm21 * s12sq + eps * cosl(2.0 * th13))
    pair_roots(total, root, product, s.s13, &s.l1, &s.l3)
    s.l2 = dm21 * cosl(th12) ** 2
    coupling = dm21 * sinl(2.0 * th12) * cosl(th13 - s.t13m)
    s.t12m = half_angle(coupling, s.l2 - s.l1, &s.s12)
    split = hypotl(s.l1 - s.l2, coupling)
    pair_roots(s.l1 + s.l2, split, s.l1 * s.l2 - 0.25 * coupling * coupling, s.s12, &q1, &q2)
    s.split = s.s12 * split
    s.e1 = q1 / (2.0 * energy)
    s.e2 = q2 / (2.0 * energy)
    s.e3 = s.l3 / (2.0 * energy)


cdef int velocity(double th12, double th13, double dm21, double energy, double a,
                  System* s, double floor, double* dv21, double* dv32,
                  double* bad) noexcept nogil:
    """0 on success; 1 for a degenerate xi denominator, 2 for a vanishing radicand."""
    cdef double ea2 = 2.0 * energy * a
    cdef double eps = <double>s.eps
    cdef double t13m = <double>s.t13m
    cdef double l1 = <double>s.l1, l2 = <double>s.l2
    cdef double e1 = <double>s.e1, e2 = <double>s.e2, e3 = <double>s.e3
    cdef double root = sqrt(<double>radicand(th13, eps, ea2))
    cdef double ratio, dl1, dl3, split, s2t13, d, zeta_over_d2, xi
    if root <= 0.0:
        bad[0] = root
        return 2
    ratio = s.s13 * (ea2 - eps * cos(2.0 * th13)) / root
    dl1 = a * (1.0 - ratio)
    dl3 = a * (1.0 + ratio)
    split = <double>s.split
    if fabs(split) <= floor:
        bad[0] = split
        return 1
    s2t13 = sin(2.0 * th13)
    d = eps * cos(2.0 * th13) - ea2
    zeta_over_d2 = (4.0 * dm21 * dm21 * eps * a * sin(2.0 * th12) ** 2 * s2t13
                    * sin(2.0 * (th13 - t13m)) / (d * d + (eps * s2t13) ** 2))
    xi = 0.5 / split * (8.0 * (l1 - l2) * dl1 + zeta_over_d2)
    dv21[0] = (-8.0 * (e2 - e1) + xi) / (8.0 * energy)
    dv32[0] = (6.0 * dl3 - 4.0 * a - 8.0 * (e3 - e2) - 0.5 * xi) / (8.0 * energy)
    return 0


cdef void pmns(double th12, double th13, double th23, double delta,
               double complex u[3][3]) noexcept nogil:
    cdef double c12 = cos(th12), s12 = sin(th12)
    cdef double c13 = cos(th13), s13 = sin(th13)
    cdef double c23 = cos(th23), s23 = sin(th23)
    cdef double complex eid = cos(delta) + 1j * sin(delta)
    cdef double complex emid = cos(delta) - 1j * sin(delta)
    u[0][0] = c13 * c12
    u[0][1] = c13 * s12
    u[0][2] = s13 * emid
    u[1][0] = -s12 * c23 - eid * c12 * s23 * s13
    u[1][1] = c12 * c23 - eid * s12 * s23 * s13
    u[1][2] = c13 * s23
    u[2][0] = s12 * s23 - eid * c12 * c23 * s13
    u[2][1] = -c12 * s23 - eid * s12 * c23 * s13
    u[2][2] = c13 * c23


cdef inline double complex conj(double complex z) noexcept nogil:
    return z.real - 1j * z.imag


def probability_rows(p, energies, potentials, baselines, int alpha, int sign,
                     double sigma_x, double rho, bint wave_packet, double floor,
                     double velocity_rtol):
    """Rows P[alpha, :] at each point; baselines and sigma_x in meters, potentials unsigned."""
    cdef double[::1] en = np.ascontiguousarray(energies, dtype=np.float64)
    cdef double[::1] pot = np.ascontiguousarray(potentials, dtype=np.float64)
    cdef double[::1] bl = np.ascontiguousarray(baselines, dtype=np.float64)
    cdef Py_ssize_t n = en.shape[0]
    out_arr = np.empty((n, 3), dtype=np.float64)
    cdef double[:, ::1] out = out_arr

    cdef double th12 = p.theta12, th13 = p.theta13, th23 = p.theta23
    cdef double dm21 = p.dm21_sq, dm31 = p.dm31_sq, delta = sign * p.delta_cp
    cdef long double hbar_c = HBAR_C
    sigma_x = sigma_x / HBAR_C
    cdef double inv = 1.0 / (2.0 * sqrt(2.0) * sigma_x)

    cdef System s
    cdef double complex u[3][3]
    cdef double complex w[3][3]   # w[beta][pair]
    cdef long double dE[3]
    cdef double rate[3]
    cdef double loc[3]
    cdef double dv[3]
    cdef double keep_[3]
    cdef double turn_[3]
    cdef int pi_[3]
    cdef int pj_[3]
    pi_[0] = 1; pj_[0] = 0
    pi_[1] = 2; pj_[1] = 0
    pi_[2] = 2; pj_[2] = 1

    cdef double last_e = -1.0, last_v = -1.0, energy, a, L, acc, vfloor, damp, half, bad = 0.0
    cdef long double L_ext, phase
    cdef double dv21 = 0.0, dv32 = 0.0
    cdef Py_ssize_t k
    cdef int beta, q, i, j, status
    cdef bint fresh = True

    for k in range(n):
        energy = en[k]
        if fresh or energy != last_e or pot[k] != last_v:
            fresh = False
            last_e = energy
            last_v = pot[k]
            a = sign * pot[k]
            solve(th12, th13, dm21, dm31, energy, a, &s)
            pmns(<double>s.t12m, <double>s.t13m, th23, delta, u)
            dE[0] = s.e2 - s.e1
            dE[1] = s.e3 - s.e1
            dE[2] = s.e3 - s.e2
            for beta in range(3):
                for q in range(3):
                    i = pi_[q]
                    j = pj_[q]
                    w[beta][q] = conj(u[alpha][i]) * u[beta][i] * u[alpha][j] * conj(u[beta][j])
            if wave_packet:
                status = velocity(th12, th13, dm21, energy, a, &s, floor, &dv21, &dv32, &bad)
                if status != 0:
                    term = "4E*E2m - (l1+l2)" if status == 1 else "sqrt radicand of l1,3"
                    exc = DegenerateConfigurationError(term, bad, floor if status == 1 else 0.0)
                    exc.index = k
                    raise exc
                vfloor = velocity_rtol * fabs(dm31) / (2.0 * energy * energy)
                dv[0] = dv21
                dv[1] = dv21 + dv32
                dv[2] = dv32
                for q in range(3):
                    if fabs(dv[q]) <= vfloor:
                        dv[q] = 0.0
                    rate[q] = (dv[q] * inv) ** 2
                    loc[q] = 0.5 * (rho * sigma_x * <double>dE[q]) ** 2
            else:
                for q in range(3):
                    rate[q] = 0.0
                    loc[q] = 0.0
        L_ext = bl[k] / hbar_c
        L = <double>L_ext
        for q in range(3):
            phase = dE[q] * L_ext
            damp = exp(-rate[q] * L * L - loc[q])
            half = <double>sinl(0.5 * phase)
            keep_[q] = (1.0 - damp) + 2.0 * damp * half * half
            turn_[q] = damp * <double>sinl(phase)
        for beta in range(3):
            # delta_ab minus pair terms that vanish with the phase
            acc = 1.0 if beta == alpha else 0.0
            for q in range(3):
                acc -= 2.0 * (w[beta][q].real * keep_[q] - w[beta][q].imag * turn_[q])
            out[k, beta] = acc
    return out_arr
