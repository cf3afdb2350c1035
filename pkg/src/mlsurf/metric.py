"""Conformal factor w(y) = e^{u(y)} of the induced metric.

The Gauss equation for a translationally equivariant surface reduces to the
ODE (w')^2 + 8w^3 - 4 beta w^2 + 4|psi|^2 = 0 with first integral constant
beta; with the convention u'(0) = 0 and w(0) the largest critical value,
the solution is w(y) = beta/6 - wp(y - omega')/2 on the generic stratum,
beta / (2 cosh^2(sqrt(beta) y)) when psi = 0, and the constant beta/3 on
the flat stratum.
"""

import math
from dataclasses import dataclass
from typing import NamedTuple

from . import elliptic
from .elliptic import DegenerateKind, EllipticParams


@dataclass(frozen=True, eq=False)
class MetricProfile:
    psi: complex            # constant Hopf coefficient
    a1: float               # e^{u(0)}, the largest critical value of w
    beta: float             # 2 a1 + |psi|^2 / a1^2
    elliptic: EllipticParams
    kind: DegenerateKind


class MetricSample(NamedTuple):
    w: float
    u: float
    up: float               # u'
    upp: float              # u''


def beta_from_a1(a1, psi):
    """First-integral constant fixed by u'(0) = 0 and w(0) = a1 > 0.

    The value 2 a1 + |psi|^2/a1^2 always satisfies beta^3 >= 27 |psi|^2
    (AM-GM), so any positive a1 yields an admissible metric.
    """
    if not (a1 > 0.0) or not math.isfinite(a1):
        raise ValueError(f"a1 must be positive and finite, got {a1}")
    return 2.0 * a1 + abs(psi) ** 2 / (a1 * a1)


def profile_from_a1_psi(a1, psi):
    """MetricProfile for the surface with w(0) = a1 and Hopf coefficient psi.

    a1 must be the largest critical value of w.  The other positive root of
    8w^3 - 4 beta w^2 + 4|psi|^2 gives the same surface shifted by the real
    half-period (u(y + omega)), so such inputs are rejected rather than
    silently re-based.
    """
    psi = complex(psi)
    beta = beta_from_a1(a1, psi)
    params = elliptic.invariants_from_surface(beta, abs(psi) ** 2)
    kind = params.degenerate_kind
    if kind is DegenerateKind.GENERIC:
        largest = beta / 6.0 - params.e3 / 2.0
        if a1 < largest * (1.0 - 1e-9):
            raise ValueError(
                f"a1={a1} is the middle critical value of w (largest is "
                f"{largest:.12g}); the same surface with the convention "
                "w(0) = largest root is obtained by the half-period shift"
            )
    return MetricProfile(psi=psi, a1=float(a1), beta=beta, elliptic=params, kind=kind)


def evaluate(profile, y):
    """MetricSample (w, u, u', u'') at real y."""
    beta = profile.beta
    kind = profile.kind
    if kind is DegenerateKind.GENERIC:
        params = profile.elliptic
        z = complex(y) - params.omega_prime
        v, vp = elliptic.wp_with_prime(z, params)
        w = beta / 6.0 - 0.5 * v.real
        wp_ = -0.5 * vp.real
        wpp = -0.5 * (6.0 * v.real * v.real - 0.5 * params.g2)
    elif kind is DegenerateKind.PSI_ZERO:
        sb = math.sqrt(beta)
        ch = math.cosh(sb * y)
        th = math.tanh(sb * y)
        sech2 = 1.0 / (ch * ch)
        w = 0.5 * beta * sech2
        wp_ = -beta * sb * sech2 * th
        wpp = beta * beta * sech2 * (2.0 * th * th - sech2)
    else:  # FLAT
        w = beta / 3.0
        wp_ = 0.0
        wpp = 0.0
    u = math.log(w)
    up = wp_ / w
    upp = wpp / w - up * up
    return MetricSample(w=w, u=u, up=up, upp=upp)


def check_gauss(profile, y):
    """Residuals (r1, r2) of the Gauss ODE and its first integral at y."""
    w, u, up, upp = evaluate(profile, y)
    p2 = abs(profile.psi) ** 2
    r1 = 0.25 * upp + w - p2 / (w * w)
    r2 = 2.0 * w + p2 / (w * w) + 0.25 * up * up - profile.beta
    return r1, r2
