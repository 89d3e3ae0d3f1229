"""Spectrum cross-check by two-sided shooting on the eigenvalue ODE.

The branch analytic at rho = 0 is integrated outward from a series seed;
the branch analytic at rho = 1 is integrated inward from a Taylor-jet
seed.  Their Wronskian at a midpoint vanishes exactly at eigenvalues,
giving a check that is independent of the continued-fraction route.

Seeding the inward integration needs care: the second solution at rho = 1
behaves like (1 - rho)^(1-lambda), so for negative lambda both its value
and slope vanish at the endpoint and any O(delta) seed error explodes into
an O(delta^(1+lambda)) admixture.  A one-term Taylor seed very close to
the endpoint is therefore useless below lambda ~ -1; instead we seed at a
moderate distance (default 0.15) with a deep Taylor jet evaluated from a
runtime recursion, which keeps the admixture far below the integrator
noise floor for the whole scan window.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.integrate import solve_ivp

from . import frobenius, model
from .errors import IntegrationError, ValidationError

#: Inward-integration seed distance from rho = 1 and jet truncation order.
SEED_DELTA = 0.15
SEED_ORDER = 40

#: Outward-integration seam: the center series is summed up to here.
SERIES_SEAM = 0.1


@dataclass(frozen=True)
class OdeSolutionSample:
    """One branch of the eigenvalue ODE sampled at a single rho."""

    rho: float
    v: float
    vp: float
    lam: float
    origin: str  # "from-zero" | "from-one"


def _rhs(rho, y, lam):
    v, vp = y
    vpp = (
        2.0 * lam * rho * vp
        + lam * (lam - 1.0) * v
        + model.potential_v(rho) * v / (rho * rho)
    ) / (1.0 - rho * rho)
    return (vp, vpp)


def _integrate(lam, rho0, v0, vp0, rho1, rtol, atol):
    sol = solve_ivp(
        _rhs,
        (rho0, rho1),
        (v0, vp0),
        args=(lam,),
        method="DOP853",
        rtol=rtol,
        atol=atol,
        dense_output=False,
    )
    if not sol.success:
        raise IntegrationError(
            f"ODE integration failed at rho={sol.t[-1]:.6f} (lambda={lam}): {sol.message}"
        )
    return sol.y[0][-1], sol.y[1][-1]


def integrate_from_zero(lam, rho_match, seam=SERIES_SEAM, tol=1e-12, rtol=1e-12, atol=1e-14):
    """Analytic-at-zero branch at rho_match, series-seeded at the seam.

    Normalization is the series convention a_0 = 1.
    """
    if not 0.0 < rho_match < 1.0:
        raise ValidationError(f"need 0 < rho_match < 1, got {rho_match}")
    v0, vp0 = frobenius.eval_v0(lam, seam, tol=tol)
    if rho_match == seam:
        return OdeSolutionSample(rho_match, v0, vp0, lam, "from-zero")
    v, vp = _integrate(lam, seam, v0, vp0, rho_match, rtol, atol)
    return OdeSolutionSample(rho_match, v, vp, lam, "from-zero")


def integrate_from_one(
    lam, rho_match, delta=SEED_DELTA, order=SEED_ORDER, rtol=1e-12, atol=1e-14
):
    """Analytic-at-one branch at rho_match, jet-seeded at 1 - delta.

    Normalization v(1) = 1.  Rejects lambda = 0 and other nonpositive
    integers, where this normalization does not exist.
    """
    if not 0.0 < rho_match < 1.0:
        raise ValidationError(f"need 0 < rho_match < 1, got {rho_match}")
    frobenius.boundary_data_at_one(lam)  # rejects lambda ~ 0 early
    rho0 = 1.0 - delta
    v0, vp0 = frobenius.eval_branch_at_one(lam, rho0, order=order)
    if rho_match >= rho0:
        v, vp = frobenius.eval_branch_at_one(lam, rho_match, order=order)
        return OdeSolutionSample(rho_match, v, vp, lam, "from-one")
    v, vp = _integrate(lam, rho0, v0, vp0, rho_match, rtol, atol)
    return OdeSolutionSample(rho_match, v, vp, lam, "from-one")


def wronskian(lam, rho_match=0.5, **kwargs):
    """W = v0 v1' - v0' v1 at the match point; zero iff dependent."""
    s0 = integrate_from_zero(lam, rho_match, **{k: v for k, v in kwargs.items() if k in ("seam", "tol", "rtol", "atol")})
    s1 = integrate_from_one(lam, rho_match, **{k: v for k, v in kwargs.items() if k in ("delta", "order", "rtol", "atol")})
    return s0.v * s1.vp - s0.vp * s1.v


def wronskian_scale(lam, rho_match=0.5, **kwargs):
    """(W, scale) where scale = |v0 v1'| + |v0' v1| bounds cancellation."""
    s0 = integrate_from_zero(lam, rho_match, **{k: v for k, v in kwargs.items() if k in ("seam", "tol", "rtol", "atol")})
    s1 = integrate_from_one(lam, rho_match, **{k: v for k, v in kwargs.items() if k in ("delta", "order", "rtol", "atol")})
    w = s0.v * s1.vp - s0.vp * s1.v
    return w, abs(s0.v * s1.vp) + abs(s0.vp * s1.v)


def _nudge_degenerate(lam, eps):
    """Shift lambda off nonpositive integers, where the analytic-at-one
    normalization degenerates (indicial resonance)."""
    k = round(lam)
    if k <= 0 and abs(lam - k) < eps:
        return k + eps if lam >= k else k - eps
    return lam


def wronskian_scan(lam_min, lam_max, step=0.05, rho_match=0.5, refine_tol=1e-10, **kwargs):
    """Sample W on a grid, bracket sign changes, bisect to refine zeros.

    Returns (curve, zeros): the sampled (lambda, W) list for plotting and
    the refined zero list, descending.  Integration failures at isolated
    lambdas are recorded as NaN in the curve and skipped for bracketing.
    """
    if not (lam_min < lam_max):
        raise ValidationError(f"need lam_min < lam_max, got [{lam_min}, {lam_max}]")
    if step <= 0.0:
        raise ValidationError(f"scan step must be positive, got {step}")
    n_cells = int(np.ceil((lam_max - lam_min) / step))
    grid = lam_min + step * np.arange(n_cells + 1)
    grid[-1] = lam_max
    nudge = step * 1e-3
    curve = []
    for lam in grid:
        lam = _nudge_degenerate(float(lam), nudge)
        try:
            w = wronskian(lam, rho_match, **kwargs)
        except (IntegrationError, ValidationError):
            w = np.nan
        curve.append((lam, w))

    zeros = []
    for (l0, w0), (l1, w1) in zip(curve[:-1], curve[1:]):
        if not (np.isfinite(w0) and np.isfinite(w1)):
            continue
        if w0 == 0.0:
            zeros.append(l0)
            continue
        if w0 * w1 < 0.0:
            lo, hi, wlo = l0, l1, w0
            while hi - lo > refine_tol:
                mid = _nudge_degenerate(0.5 * (lo + hi), refine_tol * 0.1)
                try:
                    wmid = wronskian(mid, rho_match, **kwargs)
                except (IntegrationError, ValidationError):
                    break
                if wlo * wmid <= 0.0:
                    hi = mid
                else:
                    lo, wlo = mid, wmid
            zeros.append(0.5 * (lo + hi))
    zeros.sort(reverse=True)
    return curve, zeros
