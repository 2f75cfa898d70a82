"""Reference parameter sets and closed-form versus simulation checks.

Shared by the scripts in ``scripts/`` and the acceptance tests.
"""

from dataclasses import dataclass, replace

import numpy as np

from .model1 import Model1Params, joint_transform_mu1
from .model2 import Model2Params, prob_mu1_first
from .operator.functionals import crossing_levels
from .process_model import TransformArgs
from .simulator import simulate_crossings

MODEL2_SETS = (
    Model2Params(lam=1.0, a=0.5, xi=1.0, mu_obs=1.0, m1=3, m=8, v=10.0),
    Model2Params(lam=2.0, a=0.4, xi=1.5, mu_obs=1.0, m1=2, m=6, v=4.0),
    Model2Params(lam=0.5, a=0.7, xi=0.8, mu_obs=2.0, m1=2, m=7, v=6.0),
    Model2Params(lam=1.5, a=0.3, xi=2.0, mu_obs=0.5, m1=3, m=10, v=5.0),
    Model2Params(lam=1.0, a=0.9, xi=0.5, mu_obs=3.0, m1=1, m=5, v=12.0),
)

MODEL1_SETS = (
    Model1Params(lam=1.0, c=0.5, p=(0.5, 0.3, 0.2), alpha_w=1.5, xi=1.0, m1=3, m=8, v=10.0),
    Model1Params(lam=2.0, c=0.3, p=(0.2, 0.2, 0.6), alpha_w=1.0, xi=2.0, m1=4, m=10, v=6.0),
    Model1Params(lam=0.7, c=1.0, p=(0.6, 0.0, 0.4), alpha_w=2.5, xi=1.5, m1=2, m=7, v=8.0),
)


@dataclass(frozen=True)
class CheckRow:
    label: str
    m1: int
    analytic: float
    empirical: float
    std_error: float

    @property
    def abs_z(self):
        if self.std_error == 0:
            return 0.0 if self.empirical == self.analytic else float("inf")
        return abs(self.empirical - self.analytic) / self.std_error


def _mc_over_levels(process, m1_values, n_paths, seed, point):
    # one path set serves every auxiliary level
    sim = replace(process, thresholds=crossing_levels(process.thresholds))
    levels = {m1: m1 - 1 for m1 in m1_values}
    sample = simulate_crossings(sim, n_paths, seed, m1_levels=levels.values(), point=point)
    return {m1: sample.estimate(TransformArgs(), "mu1<min", m1=lvl)
            for m1, lvl in levels.items()}


def model2_crossing_check(mp, n_paths=10**5, seed=0, point=0, m1_values=None):
    """Probability that the auxiliary crossing is observed first, closed form
    against simulation, at every ``M1`` in ``1 .. M - 2``."""
    m1_values = list(m1_values or range(1, mp.m - 1))
    est = _mc_over_levels(mp.to_process_params(), m1_values, n_paths, seed, point)
    label = f"lam={mp.lam} a={mp.a} xi={mp.xi} mu={mp.mu_obs} M={mp.m} V={mp.v}"
    return [CheckRow(label, m1, prob_mu1_first(mp.with_thresholds(m1=m1)),
                     est[m1].real, est[m1].std_error) for m1 in m1_values]


def model1_crossing_check(mp, n_paths=10**5, seed=0, point=0, m1_values=None):
    """Joint transform at ``(u, v, theta) = (1, 0, 0)`` against simulation."""
    m1_values = list(m1_values or (mp.m1,))
    est = _mc_over_levels(mp.to_process_params(), m1_values, n_paths, seed, point)
    label = f"lam={mp.lam} c={mp.c} p={mp.p} shape={mp.alpha_w} xi={mp.xi} M={mp.m} V={mp.v}"
    return [CheckRow(label, m1, float(np.real(joint_transform_mu1(mp.with_thresholds(m1=m1)))),
                     est[m1].real, est[m1].std_error) for m1 in m1_values]
