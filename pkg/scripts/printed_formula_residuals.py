"""Measure literal transcriptions of five closed forms against the derived
evaluators and against simulation.

Each transcription differs from the derived form in one factor.  The table
shows both values, the finite-sum oracle and a Monte Carlo estimate, so the
size of each discrepancy can be read off directly.  The weight rate is set
away from 1 so that a misplaced weight-rate factor becomes visible.

Usage: python scripts/printed_formula_residuals.py [--paths N]
"""

import argparse
from dataclasses import replace

import numpy as np

from damagewalk import model2
from damagewalk.model2 import Model2Params
from damagewalk.operator.functionals import crossing_levels
from damagewalk.process_model import TransformArgs
from damagewalk.simulator import estimate_phi
from damagewalk.transcribed import TRANSCRIPTIONS

DERIVED = {
    "joint_at_mu1": (lambda mp, x: model2.joint_at_mu1(mp, u=x), "u"),
    "marginal_mu1_time": (lambda mp, x: model2.marginal_at_mu1(mp, "T", x), "theta"),
    "marginal_min_nodes": (lambda mp, x: model2.marginal_at_min(mp, "N", x), "alpha"),
    "marginal_min_weight": (lambda mp, x: model2.marginal_at_min(mp, "W", x), "beta"),
    "marginal_min_time": (lambda mp, x: model2.marginal_at_min(mp, "T", x), "h"),
}
ORACLE = {
    "joint_at_mu1": lambda mp, x: model2.joint_at_mu1_sum(mp, u=x),
    "marginal_mu1_time": lambda mp, x: model2.joint_at_mu1_sum(mp, theta=x),
    "marginal_min_nodes": lambda mp, x: model2.joint_at_min_sum(mp, alpha=x),
    "marginal_min_weight": lambda mp, x: model2.joint_at_min_sum(mp, beta=x),
    "marginal_min_time": lambda mp, x: model2.joint_at_min_sum(mp, h=x),
}


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--paths", type=int, default=10**5)
    ap.add_argument("--seed", type=int, default=0)
    ns = ap.parse_args()
    mp = Model2Params(lam=1.0, a=0.5, xi=1.5, mu_obs=1.0, m1=3, m=8, v=10.0)
    p = mp.to_process_params()
    sim = replace(p, thresholds=crossing_levels(p.thresholds))
    print(f"{'form':<22}{'arg':>10}{'transcribed':>13}{'derived':>11}{'finite sum':>12}"
          f"{'simulated':>11}{'std err':>10}")
    for i, (name, (fn, argname, x)) in enumerate(TRANSCRIPTIONS.items()):
        derived, _ = DERIVED[name]
        est = estimate_phi(sim, TransformArgs(**{argname: x}), "mu1<min", ns.paths,
                           ns.seed, point=i)
        vals = [fn(mp, x), derived(mp, x), ORACLE[name](mp, x)]
        vals = [float(np.real(v)) for v in vals]
        print(f"{name:<22}{argname + '=' + str(x):>10}{vals[0]:13.6f}{vals[1]:11.6f}"
              f"{vals[2]:12.6f}{est.real:11.6f}{est.std_error:10.1e}")


if __name__ == "__main__":
    main()
