"""Literal transcriptions of closed-form variants that disagree with the
derived evaluators in :mod:`damagewalk.model2`.

Each function reproduces one display term for term, including the factor
that differs, so the size of the discrepancy can be measured against the
simulation and the finite-sum forms.  None of these are used by the library.
"""

import numpy as np

from .model2 import _pref_mu1, c_of, d_of, gamma_p, r_kj, s_of


def joint_at_mu1(mp, u=1.0, v=0.0, theta=0.0):
    """Weight-factor denominator written as ``v + xi (1 - d(theta))`` (no ``u``)."""
    M1, M, V, xi = mp.m1, mp.m, mp.v, mp.xi
    s = v + xi
    d = d_of(mp, theta)
    duxi = d * u * xi
    bracket = (
        gamma_p(M1 - 1, s * V) / s ** (M1 - 1)
        - r_kj(mp, M1 - 1, M - 2, u, v, theta, scale_power=M1 - 1)
        - duxi ** (M - M1) * gamma_p(M - 1, s * V) / s ** (M - 1)
    )
    return _pref_mu1(mp, theta) * (u * xi) ** M1 / (v + xi * (1.0 - d)) * bracket


def marginal_mu1_time(mp, theta):
    """Middle term divided by ``d(theta)^(M - M1)`` instead of ``d(theta)^(M1 - 1)``."""
    M1, M, V, xi = mp.m1, mp.m, mp.v, mp.xi
    d = d_of(mp, theta)
    r = r_kj(mp, M1 - 1, M - 2, 1.0, 0.0, theta)
    br = gamma_p(M1 - 1, xi * V) - r / d ** (M - M1) - d ** (M - M1) * gamma_p(M - 1, xi * V)
    return _pref_mu1(mp, theta) / (1.0 - d) * br


def marginal_min_nodes(mp, alpha):
    """Node-count transform at the first passage with ``(d(0) alpha xi)^(M - M1)``
    in the last term."""
    M1, M, V, xi, lam, mu = mp.m1, mp.m, mp.v, mp.xi, mp.lam, mp.mu_obs
    d0 = d_of(mp, 0.0)
    x = d0 * alpha
    T = lambda k: (gamma_p(k - 1, xi * V)
                   - np.exp(-xi * (1 - x) * V) * gamma_p(k - 1, xi * x * V) / x ** (k - 1))
    mix = (alpha - 1.0) / alpha
    pre = (mp.a * mu) ** 2 * alpha ** (M1 + 1) / ((1 - x) ** 2 * (mu + lam) ** 2)
    body = T(M1) + mix * sum(alpha**j * T(M1 + j) for j in range(1, M - M1))
    body -= (x * xi) ** (M - M1) * (1 + mix * s_of(mp, 0.0, 0.0)) * T(M)
    return pre * body


def marginal_min_weight(mp, beta):
    """Weight transform at the first passage whose last bracket uses
    ``r_0^{M-2}(1, 0, 0)`` next to ``exp(-(beta + xi (1 - d)) V)``."""
    M1, M, V, xi, lam, mu = mp.m1, mp.m, mp.v, mp.xi, mp.lam, mp.mu_obs
    d0 = d_of(mp, 0.0)
    s = beta + xi
    lb = xi / s
    q = beta + xi * (1 - d0)

    def U(k, r_beta):
        r = r_kj(mp, 0, k - 2, 1.0, r_beta, 0.0)
        return gamma_p(k - 1, s * V) / s ** (k - 1) - (np.exp(-q * V) - r) / (d0 * xi) ** (k - 1)

    pre = (mp.a * mu) ** 2 * xi**M1 / ((1 - d0 * lb) * (mu + lam) ** 2 * q)
    body = lb * U(M1, beta) + (lb - 1) * sum(xi**j * U(M1 + j, beta) for j in range(1, M - M1))
    body -= (d0 * xi) ** (M - M1) * (lb + (lb - 1) * s_of(mp, 0.0, 0.0)) * U(M, 0.0)
    return pre * body


def marginal_min_time(mp, h):
    """Time transform at the first passage with ``1 - P(M1 + j - 1, xi V)`` in
    the middle sum."""
    M1, M, V, xi, lam, mu = mp.m1, mp.m, mp.v, mp.xi, mp.lam, mp.mu_obs
    c, d = c_of(mp, h), d_of(mp, h)
    tail = lambda k: np.exp(-xi * (1 - d) * V) * gamma_p(k - 1, xi * d * V) / d ** (k - 1)
    T = lambda k: gamma_p(k - 1, xi * V) - tail(k)
    T_mid = lambda k: 1.0 - gamma_p(k - 1, xi * V) - tail(k)
    mix = (c - 1) / c
    pre = (mp.a * mu * lam) ** 2 * c ** (M1 - 1) / ((1 - d) ** 2 * (h + lam) ** 2 * (mu + h + lam) ** 2)
    body = T(M1) + mix * sum(c**j * T_mid(M1 + j) for j in range(1, M - M1))
    body -= d ** (M - M1) * (1 + mix * s_of(mp, h, h)) * T(M)
    return pre * body


TRANSCRIPTIONS = {
    "joint_at_mu1": (joint_at_mu1, "u", 0.6),
    "marginal_mu1_time": (marginal_mu1_time, "theta", 0.4),
    "marginal_min_nodes": (marginal_min_nodes, "alpha", 0.8),
    "marginal_min_weight": (marginal_min_weight, "beta", 0.3),
    "marginal_min_time": (marginal_min_time, "h", 0.4),
}
