"""Shared fixtures: small grid densities and random mass arrays."""

import numpy as np
import pytest

from gravharm import GridDensity, PointMass


def unit_ball_grid(n):
    """Constant unit-ball indicator sampled on an n^3 grid over [-1, 1]^3."""
    h = 2.0 / (n - 1)
    ax = -1.0 + h * np.arange(n)
    xx, yy, zz = np.meshgrid(ax, ax, ax, indexing="ij")
    vals = (xx**2 + yy**2 + zz**2 <= 1.0).astype(float)
    return GridDensity((-1.0, -1.0, -1.0), h, vals)


def random_point_masses(seed, max_count=10, radius=1.0):
    """Up to max_count masses drawn uniformly from the ball of that radius."""
    rng = np.random.default_rng(seed)
    k = int(rng.integers(1, max_count + 1))
    pts = rng.normal(size=(k, 3))
    pts *= (radius * rng.uniform(0, 1, k) ** (1.0 / 3.0)
            / np.linalg.norm(pts, axis=1))[:, None]
    ms = rng.uniform(0.1, 1.0, k)
    return [PointMass(p, m) for p, m in zip(pts, ms)]


@pytest.fixture(scope="session")
def ball16():
    return unit_ball_grid(16)
