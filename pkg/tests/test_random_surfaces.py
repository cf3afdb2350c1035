"""Cross-cutting sweep: the whole chain at random (a1, psi) with complex psi.

The factorization entries treat psi and conj(psi) asymmetrically, so real
psi alone could mask transcription errors; this sweep pins the identities
on generic complex Hopf coefficients.
"""

import cmath

import numpy as np

from mlsurf import immersion, iwasawa, metric, spectral
from mlsurf.verify import admissible_thetas


def random_generic_profile(rng):
    a1 = float(rng.uniform(0.9, 2.2))
    psi = complex(rng.uniform(-1.5, 1.5), rng.uniform(-1.5, 1.5))
    if abs(psi) < 0.2:
        psi = 0.8 * psi / abs(psi) if psi != 0 else 0.8
    if a1**3 <= abs(psi) ** 2 * 1.2:
        a1 = abs(psi) ** (2.0 / 3.0) * 1.5
    return metric.profile_from_a1_psi(a1, psi)


def test_identities_hold_for_complex_psi():
    rng = np.random.default_rng(99)
    for trial in range(3):
        prof = random_generic_profile(rng)
        th = admissible_thetas(prof.psi, 1, seed=trial + 50)[0]
        lam = cmath.exp(1j * th)
        dmat = spectral.build_D(prof, lam)
        spec = spectral.eigen(dmat, prof.beta, prof.psi)
        y = 0.41 * prof.elliptic.omega
        fac = iwasawa.factors_at(prof, lam, y)

        f = iwasawa.extended_frame(prof, spec, fac, complex(0.6, y), lam)
        assert np.linalg.norm(f.conj().T @ f - np.eye(3)) < 1e-9

        om = iwasawa.omega_matrix(prof, y, lam)
        assert np.linalg.norm(
            fac.Q @ dmat.entries @ np.linalg.inv(fac.Q) - om) < 1e-9

        assert max(abs(r) for r in immersion.monodromy_vanishing(prof, lam)) < 1e-8

        two_w = 2.0 * prof.elliptic.omega
        b1q, b2q = iwasawa.beta_integrals(prof, lam, two_w)
        b1c, b2c = iwasawa.beta_closed_2omega(prof, lam)
        assert abs(b1q - b1c) < 1e-8 and abs(b2q - b2c) < 1e-8

        gq = immersion.g_quadrature(prof, spec, lam, two_w)
        gc = immersion.g_closed_2omega(prof, lam)
        assert max(abs(a - b) for a, b in zip(gq, gc)) < 1e-8

        co = immersion.lift_coefficients(prof, spec, lam, y)
        assert abs(float((co.h**2).sum()) - 1.0) < 1e-9
