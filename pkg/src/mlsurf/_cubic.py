"""Trigonometric solver for depressed cubics with three real roots."""

import math


def three_real_roots_descending(p, q):
    """Real roots of t^3 + p t + q = 0, sorted descending.

    Requires the casus irreducibilis p < 0 and discriminant
    -4p^3 - 27q^2 > 0 (three distinct real roots); the trigonometric form
    then produces exactly real values with no imaginary dust.
    """
    if not (p < 0.0):
        raise ValueError(f"trigonometric branch needs p < 0, got p={p}")
    m = 2.0 * math.sqrt(-p / 3.0)
    arg = -4.0 * q / (m * m * m)
    if abs(arg) > 1.0:
        if abs(arg) > 1.0 + 1e-12:
            raise ValueError(f"discriminant not positive (cos argument {arg})")
        arg = math.copysign(1.0, arg)
    phi = math.acos(arg) / 3.0
    # phi in [0, pi/3]: cos(phi) >= cos(phi - 2pi/3) >= cos(phi + 2pi/3)
    return (
        m * math.cos(phi),
        m * math.cos(phi - 2.0 * math.pi / 3.0),
        m * math.cos(phi + 2.0 * math.pi / 3.0),
    )
