"""Benchmark the compiled Weierstrass kernels against the pure-Python twins.

Run:  python benchmarks/bench_kernels.py

Times the three scalar kernels on fundamental-cell points and one
end-to-end quantity (the beta integrals at the default surface point),
which is quadrature-driven and therefore kernel-bound.
"""

import cmath
import math
import os
import time

import numpy as np

from mlsurf import _wp_py

try:
    from mlsurf import _wp_cy
except ImportError:
    _wp_cy = None


def bench(fn, args_iter, repeat):
    args = list(args_iter)
    t0 = time.perf_counter()
    for _ in range(repeat):
        for a in args:
            fn(*a)
    dt = time.perf_counter() - t0
    return 1e6 * dt / (repeat * len(args))


def kernel_table():
    beta = 2 * 1.3 + 1.0 / 1.69
    g2 = 4 * beta**2 / 3
    g3 = 16.0 - 8 * beta**3 / 27
    c_list = _wp_py.series_coefficients(g2, g3)
    c_arr = np.asarray(c_list)
    from scipy.special import elliprf

    e3, e2, e1 = sorted(np.roots([4, 0, -g2, -g3]).real)
    tw = 2 * float(elliprf(0.0, e1 - e2, e1 - e3))
    twp = 2 * float(elliprf(0.0, e1 - e3, e2 - e3))
    zh = complex(tw / 4)
    zt = _wp_py.zeta(zh, g2, c_list, tw, twp, 0.0, 0.0)
    p, pp = _wp_py.wp_pair(zh, g2, c_list, tw, twp)
    eta = (2 * zt + (6 * p * p - g2 / 2) / (2 * pp)).real
    zt2 = _wp_py.zeta(0.25j * twp, g2, c_list, tw, twp, 0.0, 0.0)
    p2, pp2 = _wp_py.wp_pair(0.25j * twp, g2, c_list, tw, twp)
    etap = (2 * zt2 + (6 * p2 * p2 - g2 / 2) / (2 * pp2)).imag

    rng = np.random.default_rng(0)
    pts = [complex(rng.uniform(-6, 6), rng.uniform(-6, 6)) for _ in range(64)]
    pts = [z for z in pts if abs(_wp_py._reduce(z, tw, twp)[0]) > 0.2][:48]

    rows = []
    for name, py_fn, cy_fn, extra in [
        ("wp_pair", _wp_py.wp_pair, _wp_cy.wp_pair if _wp_cy else None, ()),
        ("zeta", _wp_py.zeta, _wp_cy.zeta if _wp_cy else None, (eta, etap)),
        ("sigma", _wp_py.sigma, _wp_cy.sigma if _wp_cy else None, (eta, etap)),
    ]:
        t_py = bench(py_fn, [(z, g2, c_list, tw, twp, *extra) for z in pts], 60)
        t_cy = (bench(cy_fn, [(z, g2, c_arr, tw, twp, *extra) for z in pts], 600)
                if cy_fn else float("nan"))
        rows.append((name, t_py, t_cy))
    return rows


def beta_integral_time(pure):
    # run in a subprocess so the backend choice takes effect at import
    import subprocess
    import sys

    env = dict(os.environ)

    code = (
        "import time, cmath, math\n"
        "from mlsurf import metric, iwasawa, backend\n"
        "prof = metric.profile_from_a1_psi(1.3, -1.0)\n"
        "lam = cmath.exp(1j*math.pi/5)\n"
        "t0 = time.perf_counter()\n"
        "for _ in range(5):\n"
        "    iwasawa.beta_integrals(prof, lam, 2*prof.elliptic.omega)\n"
        "dt = (time.perf_counter()-t0)/5\n"
        "print(f'{backend.backend_name()}\\t{1e3*dt:.2f}')\n"
    )
    if pure:
        env["MLSURF_PURE_PYTHON"] = "1"
    else:
        env.pop("MLSURF_PURE_PYTHON", None)
    out = subprocess.run([sys.executable, "-c", code], env=env,
                         capture_output=True, text=True, check=True)
    return out.stdout.strip()


def main():
    print("scalar kernels (microseconds per call):")
    print(f"{'kernel':10s} {'pure-python':>12s} {'compiled':>10s} {'speedup':>8s}")
    for name, t_py, t_cy in kernel_table():
        sp = t_py / t_cy if t_cy == t_cy else float("nan")
        print(f"{name:10s} {t_py:12.2f} {t_cy:10.2f} {sp:7.1f}x")
    print()
    print("beta integrals over one full period (ms per pair):")
    for pure in (True, False):
        name, ms = beta_integral_time(pure).split("\t")
        print(f"  {name:12s} {ms} ms")


if __name__ == "__main__":
    main()
