"""A single off-center point mass: divergence strictly inside its radius.

The exterior expansion of a point mass at distance d converges for r > d
and diverges for r < d along the mass direction, even though the
potential itself is perfectly smooth between the mass and the sphere of
radius d.  The root test on the lumped per-degree coefficients recovers
d; partial sums at nearby radii show both behaviours directly.

Run:  python3 demos/single_mass_divergence.py
"""

import numpy as np

from gravharm import (Direction, PointMass, classify_partial_sums,
                      coeffs_from_point_masses, estimate_rc,
                      partial_sum_sequence)


def main():
    d, m = 0.8, 2.0
    c = coeffs_from_point_masses([PointMass((0, 0, d), m)], 1.0, 400)
    rc = estimate_rc(c, k=64, window=(50, 200))
    print("mass %.1f at distance %.1f; root-test Rc estimate: %.6f\n"
          % (m, d, rc))

    pole = Direction(0.0, 0.0)
    for r in (0.7, 0.9):
        rep = classify_partial_sums(c, r, pole)
        print("r = %.1f: %s" % (r, rep.classification))
        S, _ = partial_sum_sequence(c, pole, r)
        for N in (25, 50, 100, 200, 400):
            print("    S_%-3d = %.6e" % (N, S[N]))
        if r > d:
            limit = m / (r - d)
            print("    geometric limit Gm/(r - d) = %.6e  (rel. err %.1e)"
                  % (limit, abs(S[-1] - limit) / limit))
        print()


if __name__ == "__main__":
    main()
