"""Follow a C2 solution through its blow-up and print the cusp fit.

    python scripts/c2_cusp_demo.py --s 0.25 --position 1.0

--position picks the point on the boundary curve of the slice: 0 is the
entry into the locally univalent region, 1 is the endpoint on the x1 axis.
"""

import argparse

import numpy as np

from pgcubic import (Trajectory, blow_up, classify, coefficients_from_moments,
                     continue_after_blowup, lambda_map, time_of_tau, univalence_oracle)
from pgcubic.criterion import g1, g2, tau_double_star, tau_end, tau_star


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--s", type=float, default=0.25)
    ap.add_argument("--position", type=float, default=1.0)
    args = ap.parse_args()

    s = args.s
    lo = tau_double_star(s) or tau_star(s)
    tau_c = lo + args.position * (tau_end(s) - lo)
    f0 = coefficients_from_moments(np.sqrt(g1(s, tau_c)), np.sqrt(max(g2(s, tau_c), 0.0)), s, 1.0)
    print(f"initial map     a2 = {f0.a2:.12f}, a3 = {f0.a3}")
    res = classify(f0)
    print(f"classification  {res.tag}  sup h = {res.sup.sup_value:.15f} at tau = {res.sup.arg_tau:.12f}")

    r = blow_up(f0)
    print(f"blow-up         tau_b = {r.tau_blow:.12f}  t* = {r.t_star:.12e}  zeta0 = {r.zeta0:.9f}")
    c = r.cusp
    print(f"cusp            order {c.declared_order}  exponent {c.fitted_exponent:.6f}  "
          f"log-log residual {c.fit_residual:.2e}")

    traj = Trajectory.from_map(f0)
    print("after blow-up   dtau    x1        x2        x3        univalent")
    for dtau in (0.01, 0.05, 0.1, 0.5, 2.0):
        g = continue_after_blowup(f0, time_of_tau(traj, r.tau_blow + dtau))
        x = lambda_map(g)
        print(f"                {dtau:<6}  {x.x1:.6f}  {x.x2:.6f}  {x.x3:.6f}  {univalence_oracle(g).member}")


if __name__ == "__main__":
    main()
