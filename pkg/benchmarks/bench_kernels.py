"""Time the pure-Python and compiled probability kernels on recipe-sized grids.

    python3 benchmarks/bench_kernels.py [--repeat N]
"""
import argparse
import time

import numpy as np

import nucoherence as nc
from nucoherence import backend
from nucoherence.kinematics import DEGENERACY_FLOOR, VELOCITY_RTOL

P = nc.default_params()
WP = nc.WavePacketConfig()


def grids():
    n = 2000
    e = np.full(n, nc.DEFAULT_ENERGY)
    # potential scan: a fresh eigensystem per point
    yield "V-scan, 2000 pts", e, np.logspace(-18, -11, n), np.full(n, 1e17)
    # baseline scan: five curves sharing eigensystems
    L = np.tile(np.logspace(13, 18, 1000), 5)
    v = np.repeat([0.0, 2.242e-15, 1.099e-14, 2.824e-14, 1e-12], 1000)
    yield "L-scan, 5x1000 pts", np.full(L.size, nc.DEFAULT_ENERGY), v, L


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    kernels = [("python", backend.python_probability_rows)]
    if backend.compiled_probability_rows is not None:
        kernels.append(("cython", backend.compiled_probability_rows))
    else:
        print("compiled kernel not built; timing the fallback only")
    print(f"{'grid':<20}{'mode':<6}" + "".join(f"{name:>12}" for name, _ in kernels) + f"{'speedup':>10}")
    for label, e, v, L in grids():
        for wave_packet in (False, True):
            t = []
            for _, fn in kernels:
                args_ = (P, e, v, L, 0, 1, WP.sigma_x, WP.rho, wave_packet, DEGENERACY_FLOOR, VELOCITY_RTOL)
                t.append(best_of(lambda: fn(*args_), args.repeat))
            speed = f"{t[0] / t[1]:>9.0f}x" if len(t) == 2 else ""
            mode = "wp" if wave_packet else "pw"
            print(f"{label:<20}{mode:<6}" + "".join(f"{x * 1e3:>10.2f}ms" for x in t) + speed)


if __name__ == "__main__":
    main()
