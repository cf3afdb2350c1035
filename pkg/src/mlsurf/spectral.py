"""Potential matrix D(lambda), its spectrum and the commutant generator.

D is built from the metric data at y = 0 (a = i e^{u(0)/2}, b = -i psi
e^{-u(0)}) and is skew-Hermitian trace-free on |lambda| = 1 with
characteristic polynomial mu^3 + beta mu - 2i Re(lambda^-3 psi); the
eigenvalues i d_j therefore have real d_j solving
d^3 - beta d + 2 Re(lambda^-3 psi) = 0.
"""

import cmath
import math
from dataclasses import dataclass

import numpy as np

from ._cubic import three_real_roots_descending
from .errors import DegenerateSpectrumError

# Below this eigenvalue gap the eigenvector continuation and the kappa
# branch are unreliable in double precision.
GAP_THRESHOLD = 1e-8


@dataclass(frozen=True, eq=False)
class LoopMatrixD:
    lam: complex
    a: complex              # i e^{u(0)/2}
    b: complex              # -i psi e^{-u(0)}
    entries: np.ndarray     # 3x3 complex


@dataclass(frozen=True, eq=False)
class SpectralData:
    d: tuple                # (d1, d2, d3) real, descending
    L: np.ndarray           # unitary, columns are eigenvectors for i d_j
    L0: np.ndarray          # D^2 - tr(D^2)/3 I


def build_D(profile, lam):
    """Potential matrix at the given spectral parameter.

    |lam| = 1 gives the skew-Hermitian loop matrix; small |lam| != 1 is
    permitted for holomorphy probes (the skew-Hermitian property is then
    waived).
    """
    lam = complex(lam)
    if lam == 0:
        raise ValueError("lambda must be nonzero")
    eu0 = profile.a1
    psi = profile.psi
    a = 1j * math.sqrt(eu0)
    b = -1j * psi / eu0
    li = 1.0 / lam
    eh = math.sqrt(eu0)
    entries = np.array(
        [
            [0.0, -1j * lam * psi.conjugate() / eu0, 1j * li * eh],
            [-1j * li * psi / eu0, 0.0, 1j * lam * eh],
            [1j * lam * eh, 1j * li * eh, 0.0],
        ],
        dtype=complex,
    )
    return LoopMatrixD(lam=lam, a=a, b=b, entries=entries)


def eigen(dmat, beta, psi):
    """Spectral data of D: real d_j (descending), unitary L, commutant L0.

    Raises DegenerateSpectrumError when the eigenvalue gap falls below
    GAP_THRESHOLD (flat/psi-zero loci excluded by the caller).
    """
    lam = dmat.lam
    r = (psi / lam**3).real
    d = three_real_roots_descending(-beta, 2.0 * r)
    gap = min(d[0] - d[1], d[1] - d[2])
    if gap < GAP_THRESHOLD:
        raise DegenerateSpectrumError(
            f"eigenvalue gap {gap:.3e} at lambda={lam} below {GAP_THRESHOLD}"
        )
    h = -1j * dmat.entries
    h = 0.5 * (h + h.conj().T)
    w, v = np.linalg.eigh(h)          # ascending
    L = np.array(v[:, ::-1], order="C")
    if max(abs(w[::-1][k] - d[k]) for k in range(3)) > 1e-7 * max(1.0, abs(d[0])):
        raise DegenerateSpectrumError(
            f"trig-cubic roots {d} disagree with Hermitian spectrum {w[::-1]}"
        )
    for k in range(3):
        col = L[:, k]
        idx = int(np.argmax(np.abs(col)))
        ph = col[idx]
        L[:, k] = col * (ph.conjugate() / abs(ph))
    d2 = dmat.entries @ dmat.entries
    L0 = d2 - (np.trace(d2) / 3.0) * np.eye(3)
    return SpectralData(d=d, L=L, L0=L0)


def degenerate_lambdas(psi):
    """The six unit-circle lambda with lambda^-3 psi purely imaginary.

    There D(lambda) acquires the eigenvalue 0 (d1 d2 d3 = -2 Re = 0).
    Sorted by argument in [0, 2 pi).
    """
    psi = complex(psi)
    if psi == 0:
        raise ValueError("psi must be nonzero")
    phi = cmath.phase(psi)
    thetas = sorted(((phi - math.pi / 2.0) / 3.0 + k * math.pi / 3.0) % (2.0 * math.pi)
                    for k in range(6))
    return [cmath.exp(1j * t) for t in thetas]
