"""Arbitrary-precision twins of the spectrum primitives (mpmath).

The production code is double precision throughout.  One verification,
however, is out of reach of float64: the coefficient ratio a_{n+1}/a_n of
the analytic-at-zero branch at an eigenvalue approaches -3/5 only while
the surviving (-3/5)^n branches stand above the rounding-noise-seeded
dominant branch, and at n = 2000 that requires the eigenvalue (and the
arithmetic) to carry roughly (5/3)^2000 ~ 10^443 of dynamic range.  These
helpers refine an eigenvalue to hundreds of digits with a secant iteration
on the continued-fraction residual and run the recurrence at matching
precision.  They are deliberately slow and are used by verification tests
and demos, never by the production scan.
"""

from __future__ import annotations

import mpmath as mp

from .errors import ConvergenceError


def _p_coeffs_mp(n, lam):
    p3 = -100 * n * n - 850 * n - 1650
    p2 = -20 * n * n + (100 * lam - 130) * n + 25 * lam * lam + 325 * lam - 750
    p1 = 84 * n * n + (120 * lam + 378) * n + 30 * lam * lam + 270 * lam + 618
    p0 = 36 * n * n + (36 * lam + 90) * n + 9 * lam * lam + 45 * lam + 54
    return p0, p1, p2, p3


def eigen_residual_mp(lam, N=None):
    """High-precision residual F(lambda); N defaults to the working
    precision's needs (one continued-fraction level damps by 3/5)."""
    lam = mp.mpf(lam)
    if N is None:
        # (3/5)^N below resolution, with margin
        N = int(mp.mp.dps * mp.log(10) / mp.log(mp.mpf(5) / 3)) + 50
    g = 5 * (lam - 1) / 16
    r = mp.mpf(-3) / 5
    for n in range(N - 1, -2, -1):
        p0, p1, p2, p3 = _p_coeffs_mp(n, lam)
        d2 = n + 2 + g
        d3 = n + 3 + g
        q0 = p1 - mp.mpf(3) / 5 * (d3 / d2) * p2 + mp.mpf(9) / 25 * ((n + 4 + g) / d2) * p3
        q1 = p2 - mp.mpf(3) / 5 * ((n + 4 + g) / d3) * p3
        r = -(q0 / p3) / (q1 / p3 + r)
    closed = (25 * lam * lam + 125 * lam - 570) / 350 + (96 + 15 * (lam - 1)) / (
        80 + 25 * (lam - 1)
    )
    return closed - r


def refine_eigenvalue_mp(lam0, dps=520):
    """Polish a double-precision eigenvalue to ``dps`` digits.

    Secant iteration with a ladder of working precisions (each level
    roughly doubles the trusted digits, so a handful of F evaluations per
    level suffices).
    """
    levels = [30]
    while levels[-1] < dps:
        levels.append(min(2 * levels[-1], dps))
    lam = mp.mpf(repr(float(lam0)))
    for level in levels:
        with mp.workdps(level + 10):
            x0 = lam - mp.mpf(10) ** (-min(10, level // 2))
            x1 = lam
            f0 = eigen_residual_mp(x0)
            f1 = eigen_residual_mp(x1)
            for _ in range(60):
                if f1 == f0:
                    break
                x2 = x1 - f1 * (x1 - x0) / (f1 - f0)
                x0, f0 = x1, f1
                x1 = x2
                f1 = eigen_residual_mp(x1)
                if abs(x1 - x0) < mp.mpf(10) ** (-(level + 2)) * max(1, abs(x1)):
                    break
            else:
                raise ConvergenceError(f"eigenvalue refinement stalled near {lam0}")
            lam = x1
    return lam


def tail_ratio_mp(lam, N, dps=520):
    """a_{N+1}/a_N of the analytic-at-zero branch at full precision.

    ``lam`` should carry ``dps`` digits (see :func:`refine_eigenvalue_mp`)
    for the eigenvalue plateau at -3/5 to survive out to large N.
    """
    with mp.workdps(dps):
        lam = mp.mpf(lam)
        _, _, p2m2, p3m2 = _p_coeffs_mp(-2, lam)
        a1 = -p2m2 / p3m2
        _, p1m1, p2m1, p3m1 = _p_coeffs_mp(-1, lam)
        a2 = -(p1m1 + p2m1 * a1) / p3m1
        w = [mp.mpf(1), a1, a2]
        for n in range(0, N - 1):
            p0, p1, p2, p3 = _p_coeffs_mp(n, lam)
            w = [w[1], w[2], -(p0 * w[0] + p1 * w[1] + p2 * w[2]) / p3]
        return float(w[2] / w[1])
