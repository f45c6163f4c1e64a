"""Mass-density models: radial profiles, smoothed point masses, arrays,
sampled grids, weighted L^p metrics and compact-set statistics.

A smoothed point mass is a continuous, radially symmetric density
supported on a closed ball, vanishing on the ball's boundary.  Profiles
come in three flavours: a quadratic bump, a cosine bump, and a sampled
table with linear interpolation (the constant-interior taper is a
three-knot table).  All profile integrals used downstream are exact
closed forms, never numeric quadrature.
"""

import math

import numpy as np
from dataclasses import dataclass, field
from scipy import ndimage
from scipy.interpolate import RegularGridInterpolator

from .geometry import Ball, as_vec3

__all__ = [
    "RadialProfile", "quadratic_bump", "cosine_bump", "constant_taper",
    "table_profile", "PointMass", "SmoothedPointMass", "SPMA",
    "GridDensity", "WeightFn", "evaluate", "evaluate_on_grid",
    "total_mass", "lp_metric", "var_over", "mean_over",
    "density_bounding_box", "midpoint_nodes",
]


# ---------------------------------------------------------------------------
# radial profiles

class RadialProfile:
    """Radial rule g on [0, a], continuous with g(a) = 0.

    kind is one of "quadratic_bump", "cosine_bump", "table".  Closed-form
    kinds carry an amplitude; tables carry knots and values with linear
    interpolation.  Tables are also used for limit cases (e.g. a uniform
    ball) where the boundary-vanishing invariant is deliberately relaxed.
    """

    def __init__(self, kind, outer_radius, amplitude=None, knots=None,
                 values=None, check_boundary=True):
        self.kind = kind
        self.outer_radius = a = float(outer_radius)
        if not a > 0:
            raise ValueError("outer radius must be positive")
        if kind in ("quadratic_bump", "cosine_bump"):
            self.amplitude = float(amplitude)
            if not self.amplitude > 0:
                raise ValueError("amplitude must be positive")
            self.knots = self.values = None
        elif kind == "table":
            self.knots = np.asarray(knots, dtype=float)
            self.values = np.asarray(values, dtype=float)
            if self.knots.ndim != 1 or self.knots.shape != self.values.shape:
                raise ValueError("knots and values must be matching 1-D arrays")
            if self.knots[0] != 0.0 or not np.isclose(self.knots[-1], a):
                raise ValueError("table knots must span [0, outer_radius]")
            if np.any(np.diff(self.knots) <= 0):
                raise ValueError("table knots must be strictly increasing")
            if np.any(self.values < 0):
                raise ValueError("profile values must be non-negative")
            if check_boundary and self.values[-1] != 0.0:
                raise ValueError("profile must vanish at the outer radius")
            self.amplitude = None
        else:
            raise ValueError("unknown profile kind %r" % kind)
        if not self.total_mass() > 0:
            raise ValueError("profile must carry positive mass")

    def __call__(self, s):
        s = np.asarray(s, dtype=float)
        a = self.outer_radius
        inside = (s >= 0) & (s <= a)
        if self.kind == "quadratic_bump":
            g = self.amplitude * (1.0 - (s / a) ** 2)
        elif self.kind == "cosine_bump":
            g = 0.5 * self.amplitude * (1.0 + np.cos(np.pi * s / a))
        else:
            g = np.interp(np.clip(s, 0.0, a), self.knots, self.values)
        return np.where(inside, np.maximum(g, 0.0), 0.0)

    # -- exact integrals ---------------------------------------------------

    def mass_within(self, s):
        """M(s) = 4 pi * integral_0^s t^2 g(t) dt, exact."""
        s = np.clip(np.asarray(s, dtype=float), 0.0, self.outer_radius)
        a = self.outer_radius
        if self.kind == "quadratic_bump":
            val = self.amplitude * (s**3 / 3.0 - s**5 / (5.0 * a * a))
        elif self.kind == "cosine_bump":
            k = np.pi / a
            trig = (s * s / k) * np.sin(k * s) + (2 * s / k**2) * np.cos(k * s) \
                - (2 / k**3) * np.sin(k * s)
            # the t^2 cos(kt) antiderivative vanishes at 0
            val = 0.5 * self.amplitude * (s**3 / 3.0 + trig)
        else:
            val = self._table_moment(s, power=2)
        return 4.0 * np.pi * val

    def total_mass(self):
        return float(self.mass_within(self.outer_radius))

    def tail_first_moment(self, rho):
        """integral_rho^a t g(t) dt, exact."""
        rho = np.clip(np.asarray(rho, dtype=float), 0.0, self.outer_radius)
        a = self.outer_radius
        if self.kind == "quadratic_bump":
            F = lambda t: self.amplitude * (t * t / 2.0 - t**4 / (4.0 * a * a))
            return F(a) - F(rho)
        if self.kind == "cosine_bump":
            k = np.pi / a
            F = lambda t: 0.5 * self.amplitude * (
                t * t / 2.0 + (t / k) * np.sin(k * t) + np.cos(k * t) / k**2)
            return F(a) - F(rho)
        return self._table_moment(a, power=1) - self._table_moment(rho, power=1)

    def _table_moment(self, s, power):
        """integral_0^s t^power g(t) dt for piecewise-linear tables."""
        s = np.asarray(s, dtype=float)
        scalar = s.ndim == 0
        s = np.atleast_1d(s)
        out = np.zeros_like(s)
        k0, k1 = self.knots[:-1], self.knots[1:]
        v0, v1 = self.values[:-1], self.values[1:]
        slope = (v1 - v0) / (k1 - k0)
        alpha = v0 - slope * k0          # g(t) = alpha + slope * t on segment
        p = power

        def antider(t, al, sl):
            return al * t**(p + 1) / (p + 1) + sl * t**(p + 2) / (p + 2)

        for i in range(len(k0)):
            hi = np.clip(s, k0[i], k1[i])
            out += antider(hi, alpha[i], slope[i]) - antider(k0[i], alpha[i], slope[i])
        return out[0] if scalar else out


def quadratic_bump(amplitude, outer_radius):
    return RadialProfile("quadratic_bump", outer_radius, amplitude=amplitude)


def cosine_bump(amplitude, outer_radius):
    return RadialProfile("cosine_bump", outer_radius, amplitude=amplitude)


def constant_taper(amplitude, outer_radius, taper_width):
    """Constant interior value with a linear taper to zero at the rim."""
    a, tau = float(outer_radius), float(taper_width)
    if not 0 < tau < a:
        raise ValueError("taper width must lie strictly inside (0, outer_radius)")
    return RadialProfile("table", a, knots=[0.0, a - tau, a],
                         values=[amplitude, amplitude, 0.0])


def table_profile(knots, values, check_boundary=True):
    knots = np.asarray(knots, dtype=float)
    return RadialProfile("table", knots[-1], knots=knots, values=values,
                         check_boundary=check_boundary)


# ---------------------------------------------------------------------------
# mass models

@dataclass(frozen=True)
class PointMass:
    position: np.ndarray
    mass: float

    def __post_init__(self):
        object.__setattr__(self, "position", as_vec3(self.position))
        object.__setattr__(self, "mass", float(self.mass))
        if not self.mass > 0:
            raise ValueError("point mass must be positive")


@dataclass(frozen=True)
class SmoothedPointMass:
    """Radially symmetric density supported on a closed ball."""

    center: np.ndarray
    profile: RadialProfile

    def __post_init__(self):
        object.__setattr__(self, "center", as_vec3(self.center))

    @property
    def radius(self):
        return self.profile.outer_radius

    @property
    def mass(self):
        return self.profile.total_mass()

    def support_ball(self):
        return Ball(self.center, self.radius)

    def as_point_mass(self):
        return PointMass(self.center, self.mass)


class SPMA:
    """Finite, ordered sum of smoothed point masses."""

    def __init__(self, components):
        components = tuple(components)
        if not components:
            raise ValueError("SPMA must have at least one component")
        self.components = components
        self.centers = np.array([c.center for c in components])
        self.radii = np.array([c.radius for c in components])
        self.masses = np.array([c.mass for c in components])

    def __len__(self):
        return len(self.components)

    def __iter__(self):
        return iter(self.components)

    def support_region(self):
        from .geometry import BallRegion
        return BallRegion(tuple(c.support_ball() for c in self.components))

    def as_point_masses(self):
        return [c.as_point_mass() for c in self.components]

    def bounding_box(self):
        r = self.radii[:, None]
        return (self.centers - r).min(axis=0), (self.centers + r).max(axis=0)


class GridDensity:
    """Non-negative density sampled on a regular grid, trilinear in between.

    Values live at nodes origin + (i, j, k) * spacing; the density is zero
    outside the grid box.  The positive support must be 6-connected.
    """

    def __init__(self, origin, spacing, values):
        self.origin = as_vec3(origin)
        self.spacing = float(spacing)
        if not self.spacing > 0:
            raise ValueError("grid spacing must be positive")
        self.values = np.asarray(values, dtype=float)
        if self.values.ndim != 3:
            raise ValueError("values must be a 3-D array")
        if not np.all(np.isfinite(self.values)) or np.any(self.values < 0):
            raise ValueError("grid values must be finite and non-negative")
        support = self.values > 0
        if not support.any():
            raise ValueError("grid support is empty")
        _, ncomp = ndimage.label(support)
        if ncomp != 1:
            raise ValueError("grid support must be 6-connected (found %d components)" % ncomp)
        axes = [self.origin[d] + self.spacing * np.arange(self.values.shape[d])
                for d in range(3)]
        self._interp = RegularGridInterpolator(
            axes, self.values, method="linear", bounds_error=False, fill_value=0.0)

    @property
    def shape(self):
        return self.values.shape

    def node_coordinates(self):
        nx, ny, nz = self.shape
        ii, jj, kk = np.meshgrid(np.arange(nx), np.arange(ny), np.arange(nz),
                                 indexing="ij")
        return self.origin + self.spacing * np.stack(
            [ii, jj, kk], axis=-1).reshape(-1, 3)

    def bounding_box(self):
        hi = self.origin + self.spacing * (np.array(self.shape) - 1)
        return self.origin.copy(), hi

    def save(self, path):
        nx, ny, nz = self.shape
        with open(path, "w") as fh:
            fh.write("%d %d %d %.17g %.17g %.17g %.17g\n"
                     % (nx, ny, nz, self.spacing, *self.origin))
            flat = np.ravel(self.values, order="F")  # x fastest
            for i in range(0, flat.size, 8):
                fh.write(" ".join("%.17g" % v for v in flat[i:i + 8]) + "\n")

    @classmethod
    def load(cls, path):
        with open(path) as fh:
            header = fh.readline().split()
            if len(header) != 7:
                raise ValueError("bad grid header (expected 'nx ny nz h ox oy oz')")
            nx, ny, nz = (int(v) for v in header[:3])
            h = float(header[3])
            origin = [float(v) for v in header[4:]]
            flat = np.array(fh.read().split(), dtype=float)
        if flat.size != nx * ny * nz:
            raise ValueError("grid file has %d values, expected %d"
                             % (flat.size, nx * ny * nz))
        values = flat.reshape((nx, ny, nz), order="F")
        return cls(origin, h, values)


@dataclass(frozen=True)
class WeightFn:
    """Strictly positive weight, one of a few named closed forms."""

    kind: str = "constant"
    params: tuple = (1.0,)

    def __call__(self, points):
        pts = np.atleast_2d(np.asarray(points, dtype=float))
        if self.kind == "constant":
            return np.full(len(pts), float(self.params[0]))
        r = np.linalg.norm(pts, axis=1)
        if self.kind == "gaussian":
            sigma, = self.params
            return np.exp(-0.5 * (r / sigma) ** 2)
        if self.kind == "radial_poly":
            w = np.polyval(self.params, r)
            if np.any(w <= 0):
                raise ValueError("radial polynomial weight must stay positive")
            return w
        raise ValueError("unknown weight kind %r" % self.kind)


UNIT_WEIGHT = WeightFn()


# ---------------------------------------------------------------------------
# evaluation

def _is_zero(density):
    return isinstance(density, (int, float)) and density == 0


def evaluate(density, x):
    """Density value at one point or an (n, 3) batch of points.

    SPMA components superpose; grid densities interpolate trilinearly and
    vanish outside their box.  For dense regular grids of points prefer
    :func:`evaluate_on_grid`.
    """
    pts = np.asarray(x, dtype=float)
    scalar = pts.ndim == 1
    pts = np.atleast_2d(pts)
    if _is_zero(density):
        out = np.zeros(len(pts))
    elif isinstance(density, SmoothedPointMass):
        out = density.profile(np.linalg.norm(pts - density.center, axis=1))
    elif isinstance(density, SPMA):
        out = np.zeros(len(pts))
        for comp in density.components:
            d = np.linalg.norm(pts - comp.center, axis=1)
            m = d <= comp.radius
            if m.any():
                out[m] += comp.profile(d[m])
    elif isinstance(density, GridDensity):
        out = density._interp(pts)
    else:
        raise TypeError("cannot evaluate %r" % type(density))
    return float(out[0]) if scalar else out


def evaluate_on_grid(density, origin, spacing, shape):
    """Density sampled on a regular grid, component-scatter for SPMAs.

    origin is the first node, spacing a scalar or 3-vector, shape (nx,ny,nz).
    Returns an array of that shape.  For arrays with many components this
    touches only the nodes inside each support ball.
    """
    origin = as_vec3(origin)
    spacing = np.broadcast_to(np.asarray(spacing, dtype=float), (3,))
    shape = tuple(int(n) for n in shape)
    if _is_zero(density):
        return np.zeros(shape)
    if isinstance(density, SPMA):
        out = np.zeros(shape)
        for comp in density.components:
            lo = np.ceil((comp.center - comp.radius - origin) / spacing).astype(int)
            hi = np.floor((comp.center + comp.radius - origin) / spacing).astype(int)
            lo = np.maximum(lo, 0)
            hi = np.minimum(hi, np.array(shape) - 1)
            if np.any(hi < lo):
                continue
            ax = [origin[d] + spacing[d] * np.arange(lo[d], hi[d] + 1)
                  for d in range(3)]
            dx = ax[0][:, None, None] - comp.center[0]
            dy = ax[1][None, :, None] - comp.center[1]
            dz = ax[2][None, None, :] - comp.center[2]
            dist = np.sqrt(dx * dx + dy * dy + dz * dz)
            mask = dist <= comp.radius
            if mask.any():
                block = out[lo[0]:hi[0] + 1, lo[1]:hi[1] + 1, lo[2]:hi[2] + 1]
                block[mask] += comp.profile(dist[mask])
        return out
    # grid densities and single SPMs: direct evaluation
    ax = [origin[d] + spacing[d] * np.arange(shape[d]) for d in range(3)]
    pts = np.stack(np.meshgrid(*ax, indexing="ij"), axis=-1).reshape(-1, 3)
    return evaluate(density, pts).reshape(shape)


def total_mass(density):
    """Total mass, exact closed forms for profiles, node sum for grids."""
    if _is_zero(density):
        return 0.0
    if isinstance(density, SmoothedPointMass):
        return density.mass
    if isinstance(density, SPMA):
        return float(math.fsum(c.mass for c in density.components))
    if isinstance(density, GridDensity):
        return float(math.fsum(np.ravel(density.values, order="F"))
                     * density.spacing**3)
    raise TypeError("cannot integrate %r" % type(density))


# ---------------------------------------------------------------------------
# metrics

def density_bounding_box(density):
    if _is_zero(density):
        return None
    if isinstance(density, SmoothedPointMass):
        c, r = density.center, density.radius
        return c - r, c + r
    return density.bounding_box()


def midpoint_nodes(lo, hi, resolution):
    """Midpoint tensor grid over a box: per-axis coordinates + cell volume."""
    lo, hi = as_vec3(lo), as_vec3(hi)
    n = int(resolution)
    widths = (hi - lo) / n
    axes = [lo[d] + widths[d] * (np.arange(n) + 0.5) for d in range(3)]
    return axes, float(np.prod(widths)), widths


def _union_box(f, g):
    boxes = [b for b in (density_bounding_box(f), density_bounding_box(g))
             if b is not None]
    if not boxes:
        raise ValueError("both densities are identically zero")
    lo = np.min([b[0] for b in boxes], axis=0)
    hi = np.max([b[1] for b in boxes], axis=0)
    return lo, hi


def lp_metric(f, g, p=1, w=None, trunc_N=None, resolution=64):
    """Weighted L^p distance between two densities by midpoint quadrature.

    The quadrature box is the union of the two bounding boxes, intersected
    with the origin-centered ball of radius trunc_N when given.  p = inf
    returns the unweighted sup over quadrature nodes, matching the sup-norm
    convention.
    """
    if not (p == np.inf or p >= 1):
        raise ValueError("p must lie in [1, inf]")
    lo, hi = _union_box(f, g)
    if trunc_N is not None:
        N = float(trunc_N)
        lo, hi = np.maximum(lo, -N), np.minimum(hi, N)
        if np.any(hi <= lo):
            return 0.0
    axes, cellvol, widths = midpoint_nodes(lo, hi, resolution)
    origin = np.array([a[0] for a in axes])
    shape = (resolution,) * 3
    diff = np.abs(evaluate_on_grid(f, origin, widths, shape)
                  - evaluate_on_grid(g, origin, widths, shape))
    if trunc_N is not None:
        xx, yy, zz = np.meshgrid(*axes, indexing="ij")
        diff = np.where(xx**2 + yy**2 + zz**2 <= trunc_N**2, diff, 0.0)
    if p == np.inf:
        return float(diff.max())
    flat = np.ravel(diff, order="F")
    if w is not None and not (w.kind == "constant" and w.params[0] == 1.0):
        pts = np.stack([a.ravel(order="F") for a in
                        np.meshgrid(*axes, indexing="ij")], axis=-1)
        wv = w(pts)
    else:
        wv = None
    if p == 1:
        terms = flat if wv is None else flat * wv
    else:
        terms = flat**p if wv is None else flat**p * wv
    total = math.fsum(terms) * cellvol
    return float(total if p == 1 else total ** (1.0 / p))


def _ball_nodes(K, resolution):
    lo, hi = K.center - K.radius, K.center + K.radius
    axes, cellvol, widths = midpoint_nodes(lo, hi, resolution)
    xx, yy, zz = np.meshgrid(*axes, indexing="ij")
    pts = np.stack([xx.ravel(), yy.ravel(), zz.ravel()], axis=-1)
    inside = np.linalg.norm(pts - K.center, axis=1) <= K.radius
    return pts[inside]


def var_over(f, K, resolution=32):
    """Oscillation (max - min) of f over quadrature nodes in the ball K."""
    vals = evaluate(f, _ball_nodes(K, resolution))
    return float(vals.max() - vals.min())


def mean_over(f, K, resolution=32):
    """Node average of f over the ball K (equal-volume cells)."""
    vals = evaluate(f, _ball_nodes(K, resolution))
    return float(np.mean(vals))


# ---------------------------------------------------------------------------
# SPMA file format: one component per line "cx cy cz a kind param..."

def _profile_tokens(profile):
    if profile.kind == "table":
        return ["table"] + ["%.17g" % v for v in profile.knots] \
            + ["%.17g" % v for v in profile.values]
    return [profile.kind, "%.17g" % profile.amplitude]


def save_spma(spma, path):
    with open(path, "w") as fh:
        for c in spma.components:
            fields = ["%.17g" % v for v in c.center] + \
                ["%.17g" % c.radius] + _profile_tokens(c.profile)
            fh.write(" ".join(fields) + "\n")


def load_spma(path):
    comps = []
    with open(path) as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            tok = line.split()
            try:
                center = [float(v) for v in tok[:3]]
                a = float(tok[3])
                kind = tok[4]
                if kind == "table":
                    rest = np.array([float(v) for v in tok[5:]])
                    if rest.size % 2:
                        raise ValueError("odd table payload")
                    half = rest.size // 2
                    prof = RadialProfile("table", a, knots=rest[:half],
                                         values=rest[half:],
                                         check_boundary=False)
                else:
                    prof = RadialProfile(kind, a, amplitude=float(tok[5]))
            except (IndexError, ValueError) as exc:
                raise ValueError("bad SPMA file line %d: %s" % (lineno, exc))
            comps.append(SmoothedPointMass(center, prof))
    return SPMA(comps)
