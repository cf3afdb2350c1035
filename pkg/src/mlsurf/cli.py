"""Command-line surface: compute, verify, clifford-closing, vacuum.

Exit codes: 0 success, 1 verification failure, 2 invalid input,
3 numeric degeneracy.
"""

import argparse
import cmath
import json
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np

from . import immersion, iwasawa, metric, spectral, verify
from .backend import backend_name
from .elliptic import DegenerateKind
from .errors import NumericDegeneracyError
from .iwasawa import REAL_PSI_TOL

DEFAULT_GRID = (-0.5, 0.5, 0.0, 1.0, 8, 8)

CSV_HEADER = "theta,x,y,u,w,f1_re,f1_im,f2_re,f2_im,f3_re,f3_im"


@dataclass
class RunConfig:
    a1: float = 1.3
    psi_re: float = -1.0
    psi_im: float = 0.0
    thetas: list = field(default_factory=lambda: [0.0])
    grid: tuple = DEFAULT_GRID
    tolerances: dict = field(default_factory=dict)
    csv_path: str = ""
    report_path: str = ""
    threads: int = 1

    @property
    def psi(self):
        return complex(self.psi_re, self.psi_im)

    def validate(self):
        if not self.a1 > 0:
            raise ValueError(f"a1 must be positive, got {self.a1}")
        x0, x1, y0, y1, nx, ny = self.grid
        if nx < 2 or ny < 2:
            raise ValueError(f"grid needs nx, ny >= 2, got {nx}, {ny}")
        if not (x1 > x0 and y1 > y0):
            raise ValueError(f"grid extents must be increasing: {self.grid}")
        for name, v in self.tolerances.items():
            if not v >= 0.0:
                raise ValueError(f"tolerance {name} must be >= 0, got {v}")
        if self.threads < 1:
            raise ValueError(f"threads must be >= 1, got {self.threads}")

    def to_dict(self):
        d = asdict(self)
        d["grid"] = list(self.grid)
        return d

    @classmethod
    def from_dict(cls, d):
        cfg = cls()
        for k, v in d.items():
            if not hasattr(cfg, k):
                raise ValueError(f"unknown config key {k!r}")
            if k == "grid":
                v = tuple(v)
            setattr(cfg, k, v)
        return cfg


def _jsonable(x):
    if isinstance(x, float):
        return x if math.isfinite(x) else repr(x)
    if isinstance(x, complex):
        return {"re": _jsonable(x.real), "im": _jsonable(x.imag)}
    if isinstance(x, dict):
        return {k: _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    return x


def _fmt(v):
    return f"{v:.17g}"


def _lift_for(profile, lam):
    """Per-lambda lift closure; spectral data computed once."""
    if profile.kind is DegenerateKind.FLAT:
        return lambda z: immersion.flat_frame_lift(profile, z, lam)
    if profile.kind is DegenerateKind.PSI_ZERO:
        return lambda z: immersion.psi_zero_lift(profile, z)
    dmat = spectral.build_D(profile, lam)
    spec = spectral.eigen(dmat, profile.beta, profile.psi)

    def lift_row(y, xs):
        fac = iwasawa.factors_at(profile, lam, y)
        return [immersion.lift_loop(profile, spec, fac, complex(x, y), lam)
                for x in xs]

    return lift_row


def _compute_rows(profile, theta, xs, ys, threads):
    lam = cmath.exp(1j * theta)
    lift = _lift_for(profile, lam)
    per_point = profile.kind is not DegenerateKind.GENERIC

    def row(y):
        if per_point:
            fs = [lift(complex(x, y)) for x in xs]
        else:
            fs = lift(y, xs)
        w, u, _, _ = metric.evaluate(profile, y)
        lines = []
        for x, f in zip(xs, fs):
            vals = [theta, x, y, u, w,
                    f[0].real, f[0].imag, f[1].real, f[1].imag,
                    f[2].real, f[2].imag]
            lines.append(",".join(_fmt(v) for v in vals))
        return lines

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as ex:
            chunks = list(ex.map(row, ys))
    else:
        chunks = [row(y) for y in ys]
    return [line for chunk in chunks for line in chunk]


def _reject_degenerate_thetas(profile, thetas):
    if profile.kind is not DegenerateKind.GENERIC:
        return
    bad = [t for t in thetas
           if abs((profile.psi / cmath.exp(3j * t)).imag) < REAL_PSI_TOL]
    if bad:
        raise NumericDegeneracyError(
            f"degenerate theta values {bad}: lambda^-3 psi is real there "
            "(beta integrands singular); choose different angles"
        )


def cmd_compute(cfg):
    cfg.validate()
    profile = metric.profile_from_a1_psi(cfg.a1, cfg.psi)
    thetas = list(cfg.thetas) if cfg.thetas else [0.0]
    _reject_degenerate_thetas(profile, thetas)
    x0, x1, y0, y1, nx, ny = cfg.grid
    xs = np.linspace(x0, x1, int(nx))
    ys = np.linspace(y0, y1, int(ny))

    lines = [CSV_HEADER]
    for th in thetas:
        lines.extend(_compute_rows(profile, th, xs, ys, cfg.threads))
    csv_text = "\n".join(lines) + "\n"
    if cfg.csv_path:
        with open(cfg.csv_path, "w", newline="") as fh:
            fh.write(csv_text)
    else:
        sys.stdout.write(csv_text)

    params = profile.elliptic
    report = {
        "backend": backend_name(),
        "config": cfg.to_dict(),
        "kind": profile.kind.value,
        "constants": {
            "beta": profile.beta, "g2": params.g2, "g3": params.g3,
            "delta": params.delta,
            "e": [params.e1, params.e2, params.e3],
            "omega": params.omega, "omega_prime_im": params.omega_prime.imag,
        },
        "per_theta": [],
    }
    for th in thetas:
        lam = cmath.exp(1j * th)
        entry = {"theta": th}
        if profile.kind is DegenerateKind.GENERIC:
            spec = spectral.eigen(spectral.build_D(profile, lam),
                                  profile.beta, profile.psi)
            b1, b2 = iwasawa.beta_closed_2omega(profile, lam)
            entry.update({
                "d": list(spec.d),
                "beta1_2omega": b1, "beta2_2omega": b2,
                "g_2omega": list(immersion.g_closed_2omega(profile, lam)),
            })
        report["per_theta"].append(entry)

    checks = verify.run_suites(cfg.a1, cfg.psi, thetas=thetas,
                               tolerances=cfg.tolerances)
    report["residuals"] = [
        {"suite": c.suite, "name": c.name, "residual": c.residual,
         "tolerance": c.tolerance, "passed": c.passed} for c in checks
    ]
    report["all_passed"] = all(c.passed for c in checks)
    report_text = json.dumps(_jsonable(report), indent=2) + "\n"
    if cfg.report_path:
        with open(cfg.report_path, "w") as fh:
            fh.write(report_text)
    elif cfg.csv_path:
        sys.stdout.write(report_text)
    return 0


def cmd_verify(cfg):
    cfg.validate()
    checks = verify.run_suites(cfg.a1, cfg.psi, thetas=cfg.thetas or None,
                               tolerances=cfg.tolerances)
    payload = {
        "backend": backend_name(),
        "checks": [
            {"suite": c.suite, "name": c.name, "residual": c.residual,
             "tolerance": c.tolerance, "passed": c.passed} for c in checks
        ],
        "all_passed": all(c.passed for c in checks),
    }
    text = json.dumps(_jsonable(payload), indent=2) + "\n"
    if cfg.report_path:
        with open(cfg.report_path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0 if payload["all_passed"] else 1


def cmd_clifford_closing(args):
    res = immersion.clifford_closing(cmath.exp(1j * args.theta),
                                     args.l1, args.l2, args.l3, args.k)
    payload = {
        "delta": res.delta,
        "c": res.c,
        "checks": {
            "off_diagonal": res.off_diagonal,
            "c_cubed_error": res.c_cubed_error,
        },
    }
    sys.stdout.write(json.dumps(_jsonable(payload), indent=2) + "\n")
    return 0


def cmd_vacuum(args):
    a = complex(args.a_re, args.a_im)
    b = complex(args.b_re, args.b_im)
    delta_rot, scale, residual = immersion.normalize_vacuum(a, b)
    payload = {"delta_rot": delta_rot, "scale": scale, "residual": residual}
    sys.stdout.write(json.dumps(_jsonable(payload), indent=2) + "\n")
    return 0


def _parse_tol(items):
    out = {}
    for item in items or []:
        if "=" not in item:
            raise ValueError(f"--tol expects NAME=VALUE, got {item!r}")
        name, _, val = item.partition("=")
        out[name.strip()] = float(val)
    return out


def _config_from_args(args):
    if args.config:
        with open(args.config) as fh:
            cfg = RunConfig.from_dict(json.load(fh))
    else:
        cfg = RunConfig()
    if args.a1 is not None:
        cfg.a1 = args.a1
    if args.psi_re is not None:
        cfg.psi_re = args.psi_re
    if args.psi_im is not None:
        cfg.psi_im = args.psi_im
    if args.theta:
        cfg.thetas = list(args.theta)
    if getattr(args, "grid", None):
        parts = [p.strip() for p in args.grid.split(",")]
        if len(parts) != 6:
            raise ValueError(f"--grid needs 6 comma-separated values, got {args.grid!r}")
        cfg.grid = (float(parts[0]), float(parts[1]), float(parts[2]),
                    float(parts[3]), int(parts[4]), int(parts[5]))
    if getattr(args, "csv", None):
        cfg.csv_path = args.csv
    if getattr(args, "report", None):
        cfg.report_path = args.report
    tols = _parse_tol(args.tol)
    if tols:
        cfg.tolerances.update(tols)
    if args.threads is not None:
        cfg.threads = args.threads
    elif os.environ.get("MLSURF_THREADS"):
        cfg.threads = int(os.environ["MLSURF_THREADS"])
    return cfg


def _add_common(parser, grid=True):
    parser.add_argument("--config", help="JSON config file; flags override it")
    parser.add_argument("--a1", type=float, help="w(0), largest critical value")
    parser.add_argument("--psi-re", dest="psi_re", type=float)
    parser.add_argument("--psi-im", dest="psi_im", type=float)
    parser.add_argument("--theta", type=float, action="append",
                        help="lambda = exp(i theta); repeatable")
    if grid:
        parser.add_argument("--grid", help="x0,x1,y0,y1,nx,ny")
        parser.add_argument("--csv", help="CSV output path (default stdout)")
    parser.add_argument("--report", help="JSON report path")
    parser.add_argument("--tol", action="append",
                        help="NAME=VALUE tolerance override; repeatable")
    parser.add_argument("--threads", type=int,
                        help="worker threads (or env MLSURF_THREADS)")


def build_parser():
    ap = argparse.ArgumentParser(
        prog="mlsurf",
        description="Equivariant minimal Lagrangian surfaces in CP^2: "
                    "explicit frames, lifts and identity verification.",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("compute", help="sample the immersion, emit CSV + JSON report")
    _add_common(p)
    p.set_defaults(func=lambda a: cmd_compute(_config_from_args(a)))

    p = sub.add_parser("verify", help="run all identity suites, exit 1 on failure")
    _add_common(p, grid=False)
    p.set_defaults(func=lambda a: cmd_verify(_config_from_args(a)))

    p = sub.add_parser("clifford-closing", help="closing lattice of the Clifford torus")
    p.add_argument("--theta", type=float, default=0.0, help="lambda_0 angle")
    p.add_argument("--l1", type=int, required=True)
    p.add_argument("--l2", type=int, required=True)
    p.add_argument("--l3", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.set_defaults(func=cmd_clifford_closing)

    p = sub.add_parser("vacuum", help="normalize a vacuum potential to the Clifford one")
    p.add_argument("--a-re", dest="a_re", type=float, required=True)
    p.add_argument("--a-im", dest="a_im", type=float, required=True)
    p.add_argument("--b-re", dest="b_re", type=float, required=True)
    p.add_argument("--b-im", dest="b_im", type=float, required=True)
    p.set_defaults(func=cmd_vacuum)
    return ap


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except NumericDegeneracyError as exc:
        print(f"error (numeric degeneracy): {exc}", file=sys.stderr)
        return 3
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
