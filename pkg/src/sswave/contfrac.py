"""Spectrum of the linearized operator via Pincherle continued fractions.

The four-term coefficient recurrence of the analytic-at-zero branch admits
the exact solution

    a_n^exact = (-3/5)^n [ n + 1 + (5/16)(lambda - 1) ],

which lets the order be reduced: the combination

    b_n = a_{n+1} + (3/5) (n + 2 + g)/(n + 1 + g) a_n,   g = 5(lambda-1)/16,

obeys a three-term recurrence q2 b_{n+2} + q1 b_{n+1} + q0 b_n = 0.  The
branch is analytic at rho = 1 exactly when its b-image is the *minimal*
solution of that recurrence, and by Pincherle's theorem the minimal-ratio
b_0/b_{-1} equals a convergent continued fraction.  Eigenvalues are the
real roots of

    F(lambda) = b_0/b_{-1}(closed form from the series seeds)
                - r_{-1}(continued fraction).

The reduction introduces isolated rational poles at g = -1, -2, ... i.e.
lambda = 1 - 16k/5; these produce sign changes of F that must be told
apart from genuine roots.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConvergenceError, ValidationError
from .frobenius import p_coeffs

#: Default downward-recursion seed: asymptotic ratio of the minimal branch.
DEFAULT_SEED = -0.6

#: A refined sign-change bracket counts as a root only below this residual.
ROOT_RESIDUAL_TOL = 1e-6


def gamma_of(lam):
    """Reduction parameter g = 5 (lambda - 1) / 16."""
    return 5.0 * (lam - 1.0) / 16.0


def exact_solution(n, lam):
    """Closed-form solution (-3/5)^n [n + 1 + (5/16)(lambda-1)] of the
    four-term recurrence (does not satisfy the series seeds)."""
    n = np.asarray(n, dtype=float) if not np.isscalar(n) else float(n)
    return (-0.6) ** n * (n + 1.0 + 0.3125 * (lam - 1.0))


def reduction_pole_distance(lam):
    """Distance in lambda from the nearest order-reduction pole.

    Poles sit at g = -k for integers k >= 1, i.e. lambda = 1 - 16k/5.
    """
    g = gamma_of(lam)
    k = np.round(-g)
    k = np.maximum(k, 1.0)
    return np.abs(g + k) * 16.0 / 5.0


def reduction_poles(lam_min, lam_max):
    """All order-reduction poles inside [lam_min, lam_max], descending."""
    poles = []
    k = 1
    while True:
        pole = 1.0 - 16.0 * k / 5.0
        if pole < lam_min:
            break
        if pole <= lam_max:
            poles.append(pole)
        k += 1
    return poles


@dataclass(frozen=True)
class ThreeTermRecurrence:
    """q-coefficient evaluators of the reduced recurrence at fixed lambda."""

    lam: float
    gamma: float

    def q(self, n):
        """(q0, q1, q2) at index n; q2(n) = p3(n)."""
        g = self.gamma
        p0, p1, p2, p3 = p_coeffs(n, self.lam)
        d2 = n + 2.0 + g
        d3 = n + 3.0 + g
        q0 = p1 - 0.6 * (d3 / d2) * p2 + 0.36 * ((n + 4.0 + g) / d2) * p3
        q1 = p2 - 0.6 * ((n + 4.0 + g) / d3) * p3
        q2 = p3
        return q0, q1, q2


def reduce_order(lam, n_max=None):
    """Build the reduced three-term recurrence at lambda.

    If ``n_max`` is given, flags lambda values whose reduction denominators
    n + 2 + g or n + 3 + g vanish for some n in [-1, n_max] (isolated
    rational poles) by raising :class:`ValidationError`.
    """
    g = gamma_of(lam)
    if n_max is not None:
        # denominators hit zero when g is a negative integer in range
        k = round(-g)
        if 1 <= k <= n_max + 3 and abs(g + k) < 1e-12 * max(1.0, abs(g)):
            raise ValidationError(
                f"order reduction degenerates at lambda={lam} (gamma={g} ~ -{k})"
            )
    return ThreeTermRecurrence(lam=float(lam), gamma=float(g))


def b_from_a(a_n, a_np1, n, lam):
    """Image b_n of a pair of neighbouring a-coefficients.

    b_{-1} = a_0 under the seed conventions (a_{-1} = 0).
    """
    g = gamma_of(lam)
    den = n + 1.0 + g
    if abs(den) < 1e-14 * max(1.0, abs(g)):
        raise ValidationError(f"b_from_a pole: n+1+gamma = 0 at n={n}, lambda={lam}")
    return a_np1 + 0.6 * ((n + 2.0 + g) / den) * a_n


def _cf_once(lam, N, r_init):
    """One downward recursion pass; lam may be a scalar or ndarray.

    Returns (r_minus1, bad_mask) where bad entries hit a denominator
    smaller than 1e-300 in magnitude.
    """
    lam = np.asarray(lam, dtype=float)
    g = 5.0 * (lam - 1.0) / 16.0
    r = np.full(lam.shape, float(r_init))
    bad = np.zeros(lam.shape, dtype=bool)
    for n in range(N - 1, -2, -1):
        p0, p1, p2, p3 = p_coeffs(n, lam)
        d2 = n + 2.0 + g
        d3 = n + 3.0 + g
        with np.errstate(divide="ignore", invalid="ignore"):
            q0 = p1 - 0.6 * (d3 / d2) * p2 + 0.36 * ((n + 4.0 + g) / d2) * p3
            q1 = p2 - 0.6 * ((n + 4.0 + g) / d3) * p3
            An = q1 / p3
            Bn = q0 / p3
            den = An + r
            bad |= np.abs(den) < 1e-300
            r = -Bn / den
    return r, bad


def continued_fraction(lam, N=800, r_init=DEFAULT_SEED, max_restarts=3):
    """Minimal-solution ratio r_{-1} by downward recursion from depth N.

    The recursion r_n = -B_n/(A_n + r_{n+1}) runs from n = N-1 down to
    n = -1 with seed r_N = ``r_init``; by Pincherle the result is
    independent of the seed once N is large enough (geometric damping with
    ratio 3/5 per level).  Vanishing intermediate denominators are rescued
    by restarting at depth N+1 (shifts the arithmetic off the degeneracy);
    persistent failure raises :class:`ConvergenceError`.
    """
    if N < 1:
        raise ValidationError(f"continued_fraction needs N >= 1, got {N}")
    scalar = np.isscalar(lam)
    lam_arr = np.atleast_1d(np.asarray(lam, dtype=float))
    r, bad = _cf_once(lam_arr, N, r_init)
    for k in range(1, max_restarts + 1):
        if not np.any(bad):
            break
        r_retry, bad_retry = _cf_once(lam_arr[bad], N + k, r_init)
        r[bad] = r_retry
        new_bad = np.zeros_like(bad)
        new_bad[bad] = bad_retry
        bad = new_bad
    if np.any(bad):
        raise ConvergenceError(
            f"continued fraction hit vanishing denominators at lambda={lam_arr[bad]}"
        )
    return float(r[0]) if scalar else r


def seed_ratio_closed_form(lam):
    """b_0/b_{-1} from the series seeds (left side of the root equation).

    Equals (25 l^2 + 125 l - 570)/350 + (96 + 15(l-1))/(80 + 25(l-1));
    the second term has a genuine pole at lambda = -11/5.
    """
    lam = np.asarray(lam, dtype=float) if not np.isscalar(lam) else lam
    return (25.0 * lam * lam + 125.0 * lam - 570.0) / 350.0 + (
        96.0 + 15.0 * (lam - 1.0)
    ) / (80.0 + 25.0 * (lam - 1.0))


def eigen_residual(lam, N=800, r_init=DEFAULT_SEED, pole_guard=True):
    """Root function F(lambda) whose zeros are the eigenvalues.

    F = seed ratio (closed form) - continued fraction.  The closed-form
    side blows up at lambda = -11/5; with ``pole_guard`` a scalar call
    within 1e-12 of that point raises instead of returning a huge number.
    """
    if pole_guard and np.isscalar(lam) and abs(lam + 11.0 / 5.0) < 1e-12:
        raise ValidationError("F(lambda) has a pole at lambda = -11/5, not a root")
    return seed_ratio_closed_form(lam) - continued_fraction(lam, N=N, r_init=r_init)


@dataclass(frozen=True)
class EigenvalueRecord:
    """A refined sign-change bracket of F, classified root or pole."""

    index: int | None
    lam: float
    residual: float
    bracket: tuple[float, float]
    classification: str  # "root" | "pole-rejected"


def find_spectrum(
    lam_min,
    lam_max,
    step=0.01,
    tol=1e-10,
    N=800,
    r_init=DEFAULT_SEED,
    residual_tol=ROOT_RESIDUAL_TOL,
):
    """Scan F on a grid, refine every sign change, classify, and sort.

    Returns all refined brackets as :class:`EigenvalueRecord`, descending
    in lambda.  Roots (|F| <= ``residual_tol`` at the refined point) carry
    indices 0, 1, 2, ... from the top; reduction poles also flip the sign
    of F and are kept with classification "pole-rejected".
    """
    if not (lam_min < lam_max):
        raise ValidationError(f"need lam_min < lam_max, got [{lam_min}, {lam_max}]")
    if step <= 0.0:
        raise ValidationError(f"scan step must be positive, got {step}")
    if tol <= 0.0:
        raise ValidationError(f"bracket tolerance must be positive, got {tol}")

    n_cells = int(np.ceil((lam_max - lam_min) / step))
    grid = lam_min + step * np.arange(n_cells + 1)
    grid[-1] = lam_max
    F = eigen_residual(grid, N=N, r_init=r_init)

    records = []
    for i in range(n_cells):
        f_lo, f_hi = F[i], F[i + 1]
        if not (np.isfinite(f_lo) and np.isfinite(f_hi)):
            continue
        if f_lo == 0.0:
            records.append((grid[i], grid[i], grid[i], 0.0))
            continue
        if f_lo * f_hi < 0.0:
            lo, hi = grid[i], grid[i + 1]
            flo = f_lo
            while hi - lo > tol:
                mid = 0.5 * (lo + hi)
                fmid = float(eigen_residual(mid, N=N, r_init=r_init, pole_guard=False))
                if not np.isfinite(fmid):
                    break
                if flo * fmid <= 0.0:
                    hi = mid
                else:
                    lo, flo = mid, fmid
            mid = 0.5 * (lo + hi)
            fmid = float(eigen_residual(mid, N=N, r_init=r_init, pole_guard=False))
            records.append((mid, lo, hi, abs(fmid)))

    records.sort(key=lambda rec: -rec[0])
    out = []
    idx = 0
    for lam, lo, hi, resid in records:
        if resid <= residual_tol:
            out.append(EigenvalueRecord(idx, float(lam), float(resid), (float(lo), float(hi)), "root"))
            idx += 1
        else:
            out.append(EigenvalueRecord(None, float(lam), float(resid), (float(lo), float(hi)), "pole-rejected"))
    return out


def eigenvalues(records):
    """Just the root lambdas from :func:`find_spectrum`, descending."""
    return [rec.lam for rec in records if rec.classification == "root"]
