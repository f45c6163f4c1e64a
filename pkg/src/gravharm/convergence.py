"""Convergence-radius estimation and divergence classification.

The primary estimator applies the root test to the lumped per-degree
direction sums b_n: the least-squares slope of log|b_n| against n gives
limsup |b_n|^(1/n), hence the critical radius R * exp(slope).  Raw
partial-sum behaviour near the critical radius is too slow to classify
robustly, so partial sums serve only as a corroborating check.
"""

import math

import numpy as np
from dataclasses import dataclass

from .geometry import brillouin_radius, pointmass_brillouin_radius
from .she import (Direction, coeffs_from_point_masses,
                  direction_coefficient_table, direction_term_sequence,
                  fibonacci_directions)

__all__ = ["ConvergenceReport", "PartialSumReport", "DescentReport",
           "estimate_rc_direction", "estimate_rc", "classify_partial_sums",
           "epsilon_descent_check", "AllDirectionsInconclusive"]

ABS_FLOOR = 1e-300
DEFAULT_WINDOW_FRACTION = 0.25
DEFAULT_DIRECTIONS = 64
DEFAULT_GROWTH_FACTOR = 1e6


class AllDirectionsInconclusive(RuntimeError):
    """No direction produced a usable coefficient-decay fit."""


@dataclass(frozen=True)
class ConvergenceReport:
    direction: Direction
    rc_estimate: float
    method: str
    fit_window: tuple
    residual: float
    classification: str          # convergent_at / divergent_at / inconclusive
    test_radius: float = float("nan")


@dataclass(frozen=True)
class PartialSumReport:
    classification: str
    radius: float
    n_used: int
    final_sum: float
    max_abs_sum: float
    late_fluctuation: float


@dataclass(frozen=True)
class DescentReport:
    descends: bool
    brillouin_radius: float
    rc_estimate: float
    eps: float
    inconclusive_rc: bool = False


def _fit_report(b, d, window, ref_radius):
    n_lo, n_hi = int(window[0]), int(window[1])
    if not (0 <= n_lo < n_hi <= len(b) - 1):
        raise ValueError("fit window must lie within [0, n_max]")
    if n_hi - n_lo < 8:
        raise ValueError("fit window must span at least 8 degrees")
    ns = np.arange(n_lo, n_hi + 1)
    vals = np.abs(b[n_lo:n_hi + 1])
    keep = vals > ABS_FLOOR
    if keep.sum() <= len(ns) / 2:
        return ConvergenceReport(d, 0.0, "root_test", (n_lo, n_hi),
                                 float("inf"), "inconclusive")
    x, y = ns[keep], np.log(vals[keep])
    slope, intercept = np.polyfit(x, y, 1)
    resid = float(np.sqrt(np.mean((y - (slope * x + intercept)) ** 2)))
    rc = float(ref_radius * math.exp(slope))
    return ConvergenceReport(d, rc, "root_test", (n_lo, n_hi), resid,
                             "convergent_at")


def estimate_rc_direction(c, d, window):
    """Root-test convergence-radius estimate along one direction.

    Degrees whose lumped coefficient falls below the 1e-300 floor are
    skipped; when more than half the window is skipped the report is
    inconclusive rather than an estimate of zero (parity cancellations on
    symmetric configurations would otherwise masquerade as descent).
    """
    b = direction_coefficient_table(c, [d.theta], [d.phi])[0]
    return _fit_report(b, d, window, c.ref_radius)


def estimate_rc(c, k=DEFAULT_DIRECTIONS, window=None):
    """Max per-direction estimate over a Fibonacci direction sample."""
    if k < 1:
        raise ValueError("need at least one direction")
    if window is None:
        window = (max(0, int(c.n_max * DEFAULT_WINDOW_FRACTION)), c.n_max)
    dirs = fibonacci_directions(k)
    thetas = np.array([d.theta for d in dirs])
    phis = np.array([d.phi for d in dirs])
    b_all = direction_coefficient_table(c, thetas, phis)
    best = None
    for i, d in enumerate(dirs):
        rep = _fit_report(b_all[i], d, window, c.ref_radius)
        if rep.classification == "inconclusive":
            continue
        if best is None or rep.rc_estimate > best:
            best = rep.rc_estimate
    if best is None:
        raise AllDirectionsInconclusive(
            "coefficient decay unresolved in every sampled direction")
    return float(best)


def estimate_rc_reports(c, k=DEFAULT_DIRECTIONS, window=None):
    """Per-direction reports in lattice order (CSV-friendly)."""
    if window is None:
        window = (max(0, int(c.n_max * DEFAULT_WINDOW_FRACTION)), c.n_max)
    dirs = fibonacci_directions(k)
    thetas = np.array([d.theta for d in dirs])
    phis = np.array([d.phi for d in dirs])
    b_all = direction_coefficient_table(c, thetas, phis)
    return [_fit_report(b_all[i], d, window, c.ref_radius)
            for i, d in enumerate(dirs)]


def classify_partial_sums(c, r, d, N_max=None, growth_factor=DEFAULT_GROWTH_FACTOR,
                          tol_converge=None):
    """Classify the truncated series at radius r along direction d.

    divergent_at: the running partial sums blow up by `growth_factor`
    while late term magnitudes keep increasing.  convergent_at: the
    partial sums over the last quarter of the window fluctuate by less
    than `tol_converge` (default 1e-9 of the final sum).  Anything else
    is inconclusive.
    """
    r = float(r)
    if not r > 0:
        raise ValueError("radius must be positive")
    if not growth_factor > 1:
        raise ValueError("growth factor must exceed 1")
    N_max = c.n_max if N_max is None else int(N_max)
    if N_max > c.n_max:
        raise ValueError("N_max exceeds the available degrees")
    t = direction_term_sequence(c, d, r)[:N_max + 1]
    S = np.cumsum(t)
    absS = np.abs(S)
    q = max(1, (N_max + 1) // 4)
    last = slice(len(S) - q, len(S))
    second = slice(q, 2 * q)
    tmag = np.abs(t)
    late_growth = np.median(tmag[last]) > np.median(tmag[second])
    fluct = float(S[last].max() - S[last].min())
    if tol_converge is None:
        tol_converge = 1e-9 * max(abs(S[-1]), ABS_FLOOR)
    if absS.max() > growth_factor * max(absS[0], ABS_FLOOR) and late_growth:
        cls = "divergent_at"
    elif fluct < tol_converge:
        cls = "convergent_at"
    else:
        cls = "inconclusive"
    return PartialSumReport(cls, r, N_max, float(S[-1]), float(absS.max()),
                            fluct)


def epsilon_descent_check(spma, eps, n_max=400, k=DEFAULT_DIRECTIONS,
                          window=None, G=1.0):
    """Does the array's expansion reach eps below its Brillouin sphere?

    Outside its support the array's potential is exactly that of the
    equivalent point-mass array (shell theorem), so the convergence
    radius is estimated from the analytic point-mass coefficients.  A
    radially symmetric configuration leaves every direction inconclusive;
    that is reported as R_c = 0 (the exterior field is exactly GM/r).
    """
    eps = float(eps)
    if not eps > 0:
        raise ValueError("eps must be positive")
    R_support = brillouin_radius(spma.support_region())
    pms = spma.as_point_masses()
    R_ref = max(pointmass_brillouin_radius(pms), ABS_FLOOR)
    if R_ref <= ABS_FLOOR:
        R_ref = 1.0
    coeffs = coeffs_from_point_masses(pms, R_ref, n_max, G=G)
    inconclusive = False
    try:
        rc = estimate_rc(coeffs, k=k, window=window)
    except AllDirectionsInconclusive:
        rc, inconclusive = 0.0, True
    return DescentReport(rc <= R_support - eps, R_support, rc, eps,
                         inconclusive)
