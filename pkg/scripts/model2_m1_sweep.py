"""Closed-form probability that the auxiliary crossing comes first, against
simulation, over every auxiliary level of the reference Model 2 sets.

Usage: python scripts/model2_m1_sweep.py [--paths N] [--seed S]
"""

import argparse

from damagewalk.experiments import MODEL2_SETS, model2_crossing_check


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--paths", type=int, default=10**5)
    ap.add_argument("--seed", type=int, default=0)
    ns = ap.parse_args()
    worst = 0.0
    for i, mp in enumerate(MODEL2_SETS):
        rows = model2_crossing_check(mp, ns.paths, ns.seed, point=i)
        print(rows[0].label)
        print(f"  {'M1':>3} {'closed form':>12} {'simulated':>12} {'std err':>10} {'|z|':>6}")
        for r in rows:
            print(f"  {r.m1:>3} {r.analytic:12.6f} {r.empirical:12.6f} {r.std_error:10.2e} {r.abs_z:6.2f}")
            worst = max(worst, r.abs_z)
    print(f"max |z| = {worst:.2f}")


if __name__ == "__main__":
    main()
