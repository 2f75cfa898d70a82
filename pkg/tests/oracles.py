"""Brute-force reference computations shared by several test modules."""

import numpy as np

from damagewalk.distributions import ConstantTime, FiniteDiscrete, GammaWeight, ObservationLaw
from damagewalk.process_model import ProcessParams, Thresholds
from damagewalk.simulator import simulate_path


def operator_on_indicator(nodes, weights, j, k, n, x, y, w):
    """Truncated sums over p, q and a piecewise integral over s of the
    crossing-index indicator, computed by brute force."""
    def first_above(vals, level):
        idx = np.flatnonzero(vals > level)
        return idx[0] if idx.size else None

    p_sum = 0.0
    for pp in range(int(nodes[j]) + 1):
        if first_above(nodes, pp) != j:
            continue
        for qq in range(int(nodes[k]) + 1):
            if qq > pp and first_above(nodes, qq) == k:
                p_sum += x**pp * y**qq
    # nu(s) is constant between consecutive distinct weight values
    cuts = np.unique(np.concatenate([[0.0], weights]))
    s_int = 0.0
    for lo, hi in zip(cuts, cuts[1:]):
        if first_above(weights, 0.5 * (lo + hi)) == n:
            s_int += (np.exp(-w * lo) - np.exp(-w * hi)) / w
    return (1 - x) * (1 - y) * w * p_sum * s_int


def level_insensitivity_error(n_paths=20, n_triples=10, seed=7):
    """Worst gap between the brute-force operator on the crossing-index
    indicator and its product form, over random paths and index triples."""
    rng = np.random.default_rng(seed)
    p = ProcessParams(1.0, FiniteDiscrete((0.5, 0.3, 0.2)), GammaWeight(1.5, 2.0),
                      ObservationLaw(ConstantTime(0.7)), Thresholds(1, 2, 1.0))
    worst = 0.0
    for _ in range(n_paths):
        path = simulate_path(p, rng, horizon=12, stop=False)
        N = np.concatenate([[0], path.node_cum])
        W = np.concatenate([[0.0], path.weight_cum])
        for _ in range(n_triples):
            j, k, n = sorted(rng.choice(np.arange(1, len(N)), size=3, replace=False))
            x = rng.uniform(0, 0.95) * np.exp(2j * np.pi * rng.uniform())
            y = rng.uniform(0, 0.95) * np.exp(2j * np.pi * rng.uniform())
            w = rng.uniform(0.05, 2) + 1j * rng.uniform(-2, 2)
            lhs = operator_on_indicator(N, W, j, k, n, x, y, w)
            rhs = ((x ** N[j - 1] - x ** N[j]) * (y ** N[k - 1] - y ** N[k])
                   * (np.exp(-w * W[n - 1]) - np.exp(-w * W[n])))
            worst = max(worst, abs(lhs - rhs))
    return worst
