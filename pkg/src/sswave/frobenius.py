"""Power-series (Frobenius) machinery for the eigenvalue ODE.

The perturbation equation

    -(1 - rho^2) v'' + 2 lambda rho v' + lambda(lambda - 1) v
        + V(rho)/rho^2 v = 0

has regular singular points at rho = 0 and rho = 1.  The branch analytic
at the center is

    v0(rho) = sum_n a_n(lambda) rho^(2n+3),      a_0 = 1,

whose coefficients obey a four-term recurrence with quadratic-in-n
polynomial coefficients p0..p3.  This module builds that series, evaluates
it and its derivative inside the unit interval, measures the asymptotic
ratio a_{n+1}/a_n (which distinguishes eigenvalues from generic lambda),
and provides local data for the branch analytic at rho = 1 used to seed
inward integration.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConvergenceError, ValidationError

# Rescale the running coefficient window when magnitudes leave this band;
# only ratios matter downstream.
_RESCALE_HI = 1e200
_RESCALE_LO = 1e-200


def p_coeffs(n, lam):
    """Recurrence polynomials (p0, p1, p2, p3) at index n, parameter lambda.

    p3(n) a_{n+3} + p2(n) a_{n+2} + p1(n) a_{n+1} + p0(n) a_n = 0.

    All four are quadratic in n; p3 is lambda-independent with integer
    coefficients.  Vectorized in both arguments.
    """
    n = np.asarray(n, dtype=float) if not np.isscalar(n) else float(n)
    p3 = -100.0 * n * n - 850.0 * n - 1650.0
    p2 = -20.0 * n * n + (100.0 * lam - 130.0) * n + 25.0 * lam * lam + 325.0 * lam - 750.0
    p1 = 84.0 * n * n + (120.0 * lam + 378.0) * n + 30.0 * lam * lam + 270.0 * lam + 618.0
    p0 = 36.0 * n * n + (36.0 * lam + 90.0) * n + 9.0 * lam * lam + 45.0 * lam + 54.0
    return p0, p1, p2, p3


@dataclass(frozen=True)
class SeriesAtZero:
    """Truncated coefficient table of the analytic-at-zero branch.

    v0(rho) = sum_{n=0}^{N} a[n] rho^(2n+3) with a[0] = 1.
    """

    lam: float
    a: np.ndarray
    N: int

    def recurrence_residuals(self):
        """Relative residual of every stored four-term relation.

        Returns max_n |p3 a_{n+3} + p2 a_{n+2} + p1 a_{n+1} + p0 a_n|
        scaled by the largest participating term, over n = -2 .. N-3.
        """
        a = self.a
        worst = 0.0
        for n in range(-2, self.N - 2):
            p0, p1, p2, p3 = p_coeffs(n, self.lam)
            terms = [
                p3 * a[n + 3],
                p2 * a[n + 2] if n + 2 >= 0 else 0.0,
                p1 * a[n + 1] if n + 1 >= 0 else 0.0,
                p0 * a[n] if n >= 0 else 0.0,
            ]
            scale = max(abs(t) for t in terms)
            if scale == 0.0:
                continue
            worst = max(worst, abs(sum(terms)) / scale)
        return worst


def series_coeffs(lam, N):
    """First N+1 coefficients a_0..a_N of the analytic-at-zero branch.

    Runs the recurrence from its seed rows (a_0 = 1, a_n = 0 for n < 0);
    p3(n) has no zeros for n >= -2 so every step is well defined.
    """
    if N < 3:
        raise ValidationError(f"series_coeffs needs N >= 3, got {N}")
    a = np.zeros(N + 1)
    a[0] = 1.0
    # n = -2 and n = -1 reproduce the printed seed relations; thereafter
    # the generic four-term row determines a_{n+3}.
    for n in range(-2, N - 2):
        acc = 0.0
        p0, p1, p2, p3 = p_coeffs(n, lam)
        if n >= 0:
            acc += p0 * a[n]
        if n + 1 >= 0:
            acc += p1 * a[n + 1]
        if n + 2 >= 0:
            acc += p2 * a[n + 2]
        a[n + 3] = -acc / p3
    return SeriesAtZero(lam=float(lam), a=a, N=N)


def eval_v0(lam, rho, tol=1e-12, max_terms=100_000, full_output=False):
    """Sum v0 and v0' at a point 0 <= rho < 1, adaptively truncated.

    Terms are generated from the running recurrence until three successive
    terms fall below ``tol`` relative to the accumulated sums (the series
    is even-stepped, so a single small term is not trusted).  Raises
    :class:`ConvergenceError` past ``max_terms`` — expected only for
    rho -> 1 with tight tolerances.
    """
    if not 0.0 <= rho < 1.0:
        raise ValidationError(f"eval_v0 requires 0 <= rho < 1, got {rho}")
    if rho == 0.0:
        return (0.0, 0.0, 0) if full_output else (0.0, 0.0)

    r2 = rho * rho
    # rolling window (a_n, a_{n+1}, a_{n+2}) with a common scale factor;
    # the first three coefficients come from the seed rows
    _, _, p2m2, p3m2 = p_coeffs(-2, lam)
    a1 = -p2m2 / p3m2
    _, p1m1, p2m1, p3m1 = p_coeffs(-1, lam)
    a2 = -(p1m1 * 1.0 + p2m1 * a1) / p3m1
    w = [1.0, a1, a2]

    pw = rho**3  # rho^(2n+3) at n = 0
    v = 0.0
    dv = 0.0
    small_run = 0
    n = 0
    log_scale = 0.0  # running coefficients are true a_n * exp(-log_scale)
    while n <= max_terms:
        an = w[0]
        term = an * pw * np.exp(log_scale) if log_scale != 0.0 else an * pw
        dterm = (2 * n + 3) * term / rho
        v += term
        dv += dterm
        if abs(term) <= tol * max(abs(v), 1e-300) and abs(dterm) <= tol * max(abs(dv), 1e-300):
            small_run += 1
            if small_run >= 3:
                break
        else:
            small_run = 0
        # advance the window
        p0, p1, p2, p3 = p_coeffs(n, lam)
        a_next = -(p0 * w[0] + p1 * w[1] + p2 * w[2]) / p3
        w = [w[1], w[2], a_next]
        big = max(abs(x) for x in w)
        if big > _RESCALE_HI or (0.0 < big < _RESCALE_LO):
            w = [x / big for x in w]
            log_scale += np.log(big)
        pw *= r2
        n += 1
    else:
        raise ConvergenceError(
            f"v0 series did not converge at rho={rho} (lambda={lam}) within {max_terms} terms"
        )
    return (v, dv, n) if full_output else (v, dv)


def tail_ratio(lam, N):
    """Ratio a_{N+1}/a_N of the analytic-branch coefficients.

    Generic lambda gives ratio -> 1 (branch-point singularity at rho = 1);
    at eigenvalues the surviving branches give ratio -> -3/5.  The window
    of N over which double precision resolves the -3/5 plateau is limited:
    rounding noise re-seeds the dominant branch at relative 1e-16, so at
    eigenvalues the plateau is visible only for N up to a few tens.
    """
    _, _, p2m2, p3m2 = p_coeffs(-2, lam)
    a1 = -p2m2 / p3m2
    _, p1m1, p2m1, p3m1 = p_coeffs(-1, lam)
    a2 = -(p1m1 + p2m1 * a1) / p3m1
    w = [1.0, a1, a2]
    for n in range(0, N - 1):
        p0, p1, p2, p3 = p_coeffs(n, lam)
        a_next = -(p0 * w[0] + p1 * w[1] + p2 * w[2]) / p3
        w = [w[1], w[2], a_next]
        big = max(abs(x) for x in w)
        if big > _RESCALE_HI or (0.0 < big < _RESCALE_LO):
            w = [x / big for x in w]
    # w now holds (a_{N-1}, a_N, a_{N+1}) up to a common scale
    if w[1] == 0.0:
        raise ConvergenceError(f"a_N underflowed to zero at N={N}, lambda={lam}")
    return w[2] / w[1]


def boundary_data_at_one(lam):
    """Local data (v(1), v'(1)) of the branch analytic at rho = 1.

    Normalization v(1) = 1; the ODE evaluated at rho = 1 (where the
    second-derivative term drops out) fixes

        v'(1) = -(lambda^2 - lambda - 3) / (2 lambda),

    using V(1) = -3.  Degenerates at lambda = 0.
    """
    if abs(lam) < 1e-12:
        raise ValidationError("boundary data at rho=1 degenerates at lambda = 0")
    return 1.0, -(lam * lam - lam - 3.0) / (2.0 * lam)


def _ode_poly_coeffs(lam):
    """Polynomial coefficients of the ODE about x = 1 - rho.

    Multiplying the eigenvalue equation by rho^2 (5 + 3 rho^2)^2 and
    substituting rho = 1 - x gives A(x) v_xx + B(x) v_x + C(x) v = 0 with
    polynomial A, B, C (A has a simple zero at x = 0).  Returns the three
    coefficient arrays in ascending order.
    """
    pmul = np.polynomial.polynomial.polymul
    padd = np.polynomial.polynomial.polyadd
    one_minus = np.array([1.0, -1.0])                 # 1 - x
    q = np.array([8.0, -6.0, 3.0])                    # 5 + 3(1-x)^2
    q2 = pmul(q, q)
    m2 = pmul(one_minus, one_minus)                   # (1-x)^2 = rho^2
    m3 = pmul(m2, one_minus)
    m4 = pmul(m2, m2)
    x_two_minus = np.array([0.0, 2.0, -1.0])          # x(2 - x) = 1 - rho^2
    A = -pmul(x_two_minus, pmul(m2, q2))
    B = -2.0 * lam * pmul(m3, q2)
    # lambda(lambda-1) rho^2 (5+3 rho^2)^2 + 6 (25 - 90 rho^2 + 33 rho^4)
    pot = padd(25.0 * np.array([1.0]), padd(-90.0 * m2, 33.0 * m4))
    C = padd(lam * (lam - 1.0) * pmul(m2, q2), 6.0 * pot)
    return A, B, C


def series_coeffs_at_one(lam, order):
    """Taylor coefficients b_0..b_order of the analytic branch at rho = 1.

    Works in x = 1 - rho with b_0 = 1; the coefficients come from a
    runtime recursion on the polynomial form of the ODE (no closed-form
    recurrence is constructed).  The leading divisor is
    -128 (s + 1)(s + lambda), so the recursion degenerates when lambda is
    a nonpositive integer within reach of the order — there the branch
    normalized to v(1) = 1 does not exist.
    """
    A, B, C = _ode_poly_coeffs(lam)
    b = np.zeros(order + 1)
    b[0] = 1.0
    for s in range(0, order):
        # residual of the x^s coefficient using b_0..b_s, then solve for b_{s+1}
        acc = 0.0
        for j in range(len(A)):
            m = s - j + 2
            if 2 <= m <= s:
                acc += A[j] * m * (m - 1) * b[m]
        for j in range(len(B)):
            m = s - j + 1
            if 1 <= m <= s:
                acc += B[j] * m * b[m]
        for j in range(len(C)):
            m = s - j
            if 0 <= m <= s:
                acc += C[j] * b[m]
        div = (s + 1.0) * (A[1] * s + B[0])  # = -128 (s+1)(s+lam)
        if abs(div) < 1e-9 * 128.0 * (s + 1.0) * max(1.0, abs(lam)):
            raise ValidationError(
                f"analytic branch at rho=1 degenerates: lambda={lam} resonates at order {s}"
            )
        b[s + 1] = -acc / div
    return b


def eval_branch_at_one(lam, rho, order=40, coeffs=None):
    """Value and rho-derivative of the analytic-at-one branch near rho = 1.

    Evaluates the Taylor jet of :func:`series_coeffs_at_one` at x = 1 - rho
    by Horner's rule.  Accurate for |1 - rho| well inside the unit radius
    of convergence; used to seed inward integration.
    """
    b = series_coeffs_at_one(lam, order) if coeffs is None else coeffs
    x = 1.0 - rho
    v = 0.0
    dv_dx = 0.0
    for c in b[::-1]:
        dv_dx = dv_dx * x + v
        v = v * x + c
    return v, -dv_dx  # d/drho = -d/dx
