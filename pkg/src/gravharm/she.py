"""Spherical-harmonic machinery.

Real harmonics are 4-pi fully normalized (geodesy convention, no
Condon-Shortley phase): the mean square of each Ybar_{n,m} over the unit
sphere is 1, and Ybar_{n,0} = sqrt(2n+1) P_n.  Negative orders carry the
sin(|m| phi) part.  Associated Legendre values are generated by the
forward column recurrence on fully normalized functions, which stays in
range to degree 2000 and beyond.

Coefficients are stored mass-normalized: GM carries the scale and
C_{0,0} = 1, so the potential series reads
(GM/R) * sum (R/r)^(n+1) C_{n,m} Ybar_{n,m}.
"""

import math
import warnings

import numpy as np
from dataclasses import dataclass

__all__ = ["Direction", "SHECoefficients", "legendre_p", "ynm_bar",
           "ynm_table", "coeffs_from_point_masses",
           "coeffs_from_sphere_quadrature", "evaluate_partial_sum",
           "direction_term_sequence", "direction_coefficient_table",
           "fibonacci_directions"]


@dataclass(frozen=True)
class Direction:
    """Colatitude theta in [0, pi], longitude phi in [0, 2 pi)."""

    theta: float
    phi: float

    def __post_init__(self):
        if not 0.0 <= self.theta <= np.pi:
            raise ValueError("theta must lie in [0, pi]")
        if not 0.0 <= self.phi < 2.0 * np.pi:
            raise ValueError("phi must lie in [0, 2 pi)")

    @classmethod
    def from_vector(cls, v):
        v = np.asarray(v, dtype=float)
        r = np.linalg.norm(v)
        if r == 0:
            raise ValueError("zero vector has no direction")
        theta = math.acos(min(1.0, max(-1.0, v[2] / r)))
        phi = math.atan2(v[1], v[0]) % (2.0 * np.pi)
        return cls(theta, phi)

    def unit_vector(self):
        s = math.sin(self.theta)
        return np.array([s * math.cos(self.phi), s * math.sin(self.phi),
                         math.cos(self.theta)])


def fibonacci_directions(k):
    """k quasi-uniform directions from the spherical Fibonacci lattice."""
    from .geometry import fibonacci_sphere
    return [Direction.from_vector(v) for v in fibonacci_sphere(k)]


def legendre_p(n, x):
    """Legendre polynomial P_n(x) on [-1, 1] by the three-term recurrence."""
    n = int(n)
    if n < 0:
        raise ValueError("degree must be non-negative")
    x = np.asarray(x, dtype=float)
    if np.any(np.abs(x) > 1.0):
        raise ValueError("argument must lie in [-1, 1]")
    p_prev = np.ones_like(x)
    if n == 0:
        return p_prev if p_prev.ndim else float(p_prev)
    p = x.copy() if x.ndim else np.asarray(x, dtype=float)
    for k in range(2, n + 1):
        p, p_prev = ((2 * k - 1) * x * p - (k - 1) * p_prev) / k, p
    return p if np.ndim(p) else float(p)


def _recurrence_ab(n, m):
    a = math.sqrt((2 * n - 1) * (2 * n + 1) / ((n - m) * (n + m)))
    b = -math.sqrt((2 * n + 1) * (n + m - 1) * (n - m - 1)
                   / ((n - m) * (n + m) * (2 * n - 3)))
    return a, b


def _pbar_column(m, n_max, u, s):
    """Fully normalized P̄_{n,m}(u) for n = m..n_max; u = cos, s = sin.

    u and s may be arrays; yields a (n_max - m + 1, ...) array.
    """
    u = np.asarray(u, dtype=float)
    s = np.asarray(s, dtype=float)
    pmm = np.ones_like(u)
    for k in range(1, m + 1):
        pmm = pmm * s * math.sqrt((2 * k + 1) / (2 * k)) if k > 1 \
            else pmm * s * math.sqrt(3.0)
    out = np.empty((n_max - m + 1,) + u.shape)
    out[0] = pmm
    if n_max == m:
        return out
    p_prev = pmm
    p_prev2 = np.zeros_like(u)
    for n in range(m + 1, n_max + 1):
        a, b = _recurrence_ab(n, m)
        p = a * u * p_prev + b * p_prev2
        out[n - m] = p
        p_prev2, p_prev = p_prev, p
    return out


def ynm_bar(n, m, d):
    """Fully normalized real harmonic Ybar_{n,m} at a direction."""
    n, m = int(n), int(m)
    if abs(m) > n:
        raise ValueError("|m| must not exceed n")
    u, s = math.cos(d.theta), math.sin(d.theta)
    col = _pbar_column(abs(m), n, np.asarray(u), np.asarray(s))
    pbar = float(col[n - abs(m)])
    if m == 0:
        return pbar
    return pbar * (math.cos(m * d.phi) if m > 0 else math.sin(-m * d.phi))


def ynm_table(n_max, theta, phi):
    """Full (n_max+1, 2 n_max+1) table Y[n, n_max + m] at one direction."""
    u, s = math.cos(theta), math.sin(theta)
    Y = np.zeros((n_max + 1, 2 * n_max + 1))
    for m in range(n_max + 1):
        col = _pbar_column(m, n_max, np.asarray(u), np.asarray(s))
        cm, sm = math.cos(m * phi), math.sin(m * phi)
        for n in range(m, n_max + 1):
            Y[n, n_max + m] = col[n - m] * cm
            if m > 0:
                Y[n, n_max - m] = col[n - m] * sm
    return Y


class SHECoefficients:
    """Triangular coefficient array with reference radius and GM scale.

    C has shape (n_max+1, 2 n_max+1); order m is stored at column
    n_max + m.  Mass-normalized sets have C[0, 0] = 1.
    """

    def __init__(self, ref_radius, GM, n_max, coeffs):
        self.ref_radius = float(ref_radius)
        self.GM = float(GM)
        self.n_max = int(n_max)
        if not self.ref_radius > 0 or not self.GM > 0:
            raise ValueError("reference radius and GM must be positive")
        coeffs = np.asarray(coeffs, dtype=float)
        if coeffs.shape != (self.n_max + 1, 2 * self.n_max + 1):
            raise ValueError("coefficient array has wrong shape")
        if not np.all(np.isfinite(coeffs)):
            raise ValueError("coefficients must be finite")
        self.coeffs = coeffs

    def get(self, n, m):
        if abs(m) > n or n > self.n_max:
            raise IndexError("order out of range")
        return float(self.coeffs[n, self.n_max + m])

    def save(self, path, threshold=0.0):
        with open(path, "w") as fh:
            fh.write("# R=%.17g GM=%.17g n_max=%d\n"
                     % (self.ref_radius, self.GM, self.n_max))
            fh.write("n,m,C\n")
            for n in range(self.n_max + 1):
                for m in range(-n, n + 1):
                    c = self.coeffs[n, self.n_max + m]
                    if threshold and abs(c) <= threshold:
                        continue
                    fh.write("%d,%d,%.17g\n" % (n, m, c))

    @classmethod
    def load(cls, path):
        with open(path) as fh:
            meta = fh.readline().strip()
            if not meta.startswith("#"):
                raise ValueError("missing metadata line in coefficient file")
            kv = dict(tok.split("=") for tok in meta[1:].split())
            R, GM, n_max = float(kv["R"]), float(kv["GM"]), int(kv["n_max"])
            header = fh.readline().strip()
            if header != "n,m,C":
                raise ValueError("missing 'n,m,C' header")
            C = np.zeros((n_max + 1, 2 * n_max + 1))
            for lineno, line in enumerate(fh, 3):
                line = line.strip()
                if not line:
                    continue
                n_s, m_s, c_s = line.split(",")
                C[int(n_s), n_max + int(m_s)] = float(c_s)
        return cls(R, GM, n_max, C)


def coeffs_from_point_masses(masses, R, n_max, G=1.0):
    """Analytic expansion coefficients of a finite point-mass array.

    C_{n,m} = (1/(M (2n+1))) sum_i m_i (||x_i||/R)^n Ybar_{n,m}(x_i_hat),
    with GM = G * sum m_i.  Exact path, no surface quadrature.  Warns when
    a mass sits outside the reference sphere.
    """
    masses = list(masses)
    if not masses:
        raise ValueError("empty point-mass list")
    R = float(R)
    if not R > 0:
        raise ValueError("reference radius must be positive")
    n_max = int(n_max)
    pos = np.array([m.position for m in masses])
    mval = np.array([m.mass for m in masses])
    M = float(mval.sum())
    if M <= 0:
        raise ValueError("total mass must be positive")
    d = np.linalg.norm(pos, axis=1)
    if np.any(d > R):
        warnings.warn("point mass outside the reference sphere; coefficient "
                      "decay is not guaranteed", stacklevel=2)
    with np.errstate(invalid="ignore", divide="ignore"):
        u = np.where(d > 0, pos[:, 2] / np.where(d > 0, d, 1.0), 1.0)
    u = np.clip(u, -1.0, 1.0)
    s = np.sqrt(np.maximum(0.0, 1.0 - u * u))
    phi = np.arctan2(pos[:, 1], pos[:, 0])
    ratio = d / R
    weights = mval / M

    C = np.zeros((n_max + 1, 2 * n_max + 1))
    # column recurrence with the radius ratio folded in:
    # Q_{n,m} = ratio^n * Pbar_{n,m}(u)
    ru = ratio * u
    r2 = ratio * ratio
    q_mm = np.ones_like(u)            # Q_{m,m} accumulated sectorally
    for m in range(n_max + 1):
        if m == 1:
            q_mm = q_mm * (ratio * s) * math.sqrt(3.0)
        elif m > 1:
            q_mm = q_mm * (ratio * s) * math.sqrt((2 * m + 1) / (2 * m))
        wc = weights * np.cos(m * phi)
        ws = weights * np.sin(m * phi) if m > 0 else None
        q_prev, q_prev2 = q_mm, np.zeros_like(u)
        for n in range(m, n_max + 1):
            if n > m:
                a, b = _recurrence_ab(n, m)
                q = a * ru * q_prev + b * r2 * q_prev2
                q_prev2, q_prev = q_prev, q
            q = q_prev
            scale = 1.0 / (2 * n + 1)
            C[n, n_max + m] += scale * float(wc @ q)
            if m > 0:
                C[n, n_max - m] += scale * float(ws @ q)
    return SHECoefficients(R, G * M, n_max, C)


def coeffs_from_sphere_quadrature(potential_fn, R_quad, R, n_max,
                                  brillouin_radius=None, oversample=0):
    """Recover coefficients from potential samples on a sphere.

    Orthogonality integrals over the sphere of radius R_quad using
    Gauss-Legendre nodes in cos(theta) (n_max+1 of them) and a uniform
    phi grid (2 n_max+2 points); exact for potentials band-limited to
    degree n_max at this resolution.  GM comes from the degree-0 integral.

    `oversample` adds that many extra degrees of quadrature resolution,
    which pushes the aliasing floor down for potentials that are not
    band-limited.  Note the error budget: the degree-n rescaling
    multiplies quadrature noise by (R_quad/R)^(n+1), so tight recovery of
    high degrees needs a quadrature sphere not much larger than the
    Brillouin sphere.
    """
    R_quad, R = float(R_quad), float(R)
    if brillouin_radius is not None and R_quad < brillouin_radius:
        warnings.warn("quadrature sphere lies inside the Brillouin sphere; "
                      "recovered coefficients are unreliable", stacklevel=2)
    n_band = n_max + int(oversample)
    n_theta = n_band + 1
    n_phi = 2 * n_band + 2
    x_gl, w_gl = np.polynomial.legendre.leggauss(n_theta)
    phis = 2.0 * np.pi * np.arange(n_phi) / n_phi
    sin_t = np.sqrt(np.maximum(0.0, 1.0 - x_gl * x_gl))
    # sample the potential on the full product grid
    V = np.empty((n_theta, n_phi))
    for j in range(n_theta):
        pts = R_quad * np.column_stack([
            sin_t[j] * np.cos(phis), sin_t[j] * np.sin(phis),
            np.full(n_phi, x_gl[j])])
        V[j] = np.asarray(potential_fn(pts), dtype=float)
    # phi transform: mean of V * cos(m phi), V * sin(m phi)
    mvals = np.arange(n_max + 1)
    cosm = np.cos(np.outer(mvals, phis))
    sinm = np.sin(np.outer(mvals, phis))
    Vc = V @ cosm.T / n_phi            # (n_theta, n_max+1)
    Vs = V @ sinm.T / n_phi
    C = np.zeros((n_max + 1, 2 * n_max + 1))
    for m in range(n_max + 1):
        cols = _pbar_column(m, n_max, x_gl, sin_t)   # (n-m+1, n_theta)
        proj_c = 0.5 * cols @ (w_gl * Vc[:, m])
        proj_s = 0.5 * cols @ (w_gl * Vs[:, m]) if m > 0 else None
        for n in range(m, n_max + 1):
            C[n, n_max + m] = proj_c[n - m]
            if m > 0:
                C[n, n_max - m] = proj_s[n - m]
    GM = R_quad * C[0, n_max]
    if GM <= 0:
        raise ValueError("non-positive recovered GM; potential is not a "
                         "positive mass potential on this sphere")
    # rescale: integrals are (GM/R)(R/R_quad)^(n+1) C_{n,m}
    nvals = np.arange(n_max + 1)
    scale = (R / GM) * (R_quad / R) ** (nvals + 1)
    C *= scale[:, None]
    return SHECoefficients(R, GM, n_max, C)


def direction_coefficient_table(c, thetas, phis):
    """Per-degree direction sums b_n = sum_m C_{n,m} Ybar_{n,m}(d).

    thetas/phis are arrays of equal length k; returns a (k, n_max+1)
    array.  This is the lumped coefficient sequence whose decay rate sets
    the convergence radius along each direction.
    """
    thetas = np.atleast_1d(np.asarray(thetas, dtype=float))
    phis = np.atleast_1d(np.asarray(phis, dtype=float))
    n_max = c.n_max
    u, s = np.cos(thetas), np.sin(thetas)
    b = np.zeros((len(thetas), n_max + 1))
    for m in range(n_max + 1):
        cols = _pbar_column(m, n_max, u, s)          # (n-m+1, k)
        cm = np.cos(m * phis)
        sm = np.sin(m * phis) if m > 0 else None
        for n in range(m, n_max + 1):
            b[:, n] += c.coeffs[n, n_max + m] * cols[n - m] * cm
            if m > 0:
                b[:, n] += c.coeffs[n, n_max - m] * cols[n - m] * sm
    return b


def direction_term_sequence(c, d, r):
    """Series terms t_n = (GM/R) (R/r)^(n+1) b_n(d) for n = 0..n_max."""
    r = float(r)
    if not r > 0:
        raise ValueError("radius must be positive")
    b = direction_coefficient_table(c, [d.theta], [d.phi])[0]
    nvals = np.arange(c.n_max + 1)
    return (c.GM / c.ref_radius) * (c.ref_radius / r) ** (nvals + 1) * b


def evaluate_partial_sum(c, N, r, d):
    """Truncated series value through degree N, compensated summation."""
    N = int(N)
    if not 0 <= N <= c.n_max:
        raise ValueError("N must lie in [0, n_max]")
    t = direction_term_sequence(c, d, r)
    return float(math.fsum(t[:N + 1]))


def partial_sum_sequence(c, d, r, N_max=None):
    """Cumulative partial sums S_0..S_Nmax along one direction."""
    t = direction_term_sequence(c, d, r)
    if N_max is not None:
        t = t[:int(N_max) + 1]
    return np.cumsum(t), t
