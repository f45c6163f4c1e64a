"""The two-ball snowman: when does the expansion reach the topography?

Two overlapping smoothed point masses sit at (+-1, 0, 0) with radii
1 + gamma.  Their waist circle -- the deepest point of the topography --
has radius sqrt((1 + gamma)^2 - 1), while the series' critical radius is
pinned at the point-mass distance 1.  For gamma above sqrt(2) - 1 the
waist clears the critical sphere and the expansion converges all the way
down to the surface; below it, it does not.

Run:  python3 demos/snowman_descent.py
"""

import math

import numpy as np

from gravharm import (Direction, SnowmanParams, build_snowman,
                      coeffs_from_point_masses, evaluate_partial_sum,
                      potential_point_masses, snowman_descends_to_topography,
                      snowman_waist_radius)


def main():
    threshold = math.sqrt(2.0) - 1.0
    print("gamma threshold sqrt(2) - 1 = %.10f\n" % threshold)
    print("%8s %14s %10s %10s" % ("gamma", "waist", "Rc(est)", "descends"))
    for gamma in (0.2, 0.3, threshold, 0.45, 0.5, 0.8):
        rep = snowman_descends_to_topography(SnowmanParams(gamma),
                                             n_max=200, k=16)
        print("%8.4f %14.10f %10.4f %10s"
              % (gamma, rep.waist_radius, rep.rc_estimate, rep.descends))

    # descent in action: partial sums at a free-space point for gamma=0.5
    gamma = 0.5
    spma = build_snowman(SnowmanParams(gamma))
    pm = spma.as_point_masses()
    c = coeffs_from_point_masses(pm, 1.0, 400)
    u = np.array([0.0, 0.0, 1.0])       # on the z-axis, off both balls
    r = 1.2                              # well below the Brillouin radius 2.5
    v_exact = potential_point_masses(pm, r * u)
    print("\ngamma=0.5, point at r=%.2f on the z-axis "
          "(Brillouin radius %.1f):" % (r, 2.0 + gamma))
    print("%6s %22s %12s" % ("N", "partial sum", "rel. error"))
    for N in (10, 50, 100, 200, 400):
        s = evaluate_partial_sum(c, N, r, Direction.from_vector(u))
        print("%6d %22.15f %12.2e" % (N, s, abs(s - v_exact) / v_exact))
    print("%6s %22.15f" % ("exact", v_exact))


if __name__ == "__main__":
    main()
