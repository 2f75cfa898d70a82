"""Closed form for constant observation spacing, finite-discrete node counts
and gamma node weights: the joint transform upon the auxiliary crossing.

With ``z = exp(-c (theta + lam))`` and ``G(t) = sum_s p_s t^s``, define the
coefficient sequences

* ``F_n(theta) = [t^n] 1 / (1 - z exp(c lam G(t)))``
* ``E_n = [t^n] exp(c lam G(t))``

evaluated in closed form as finite sums over bounded compositions, with
polylogarithms of nonpositive order carrying the geometric sum over windows.
Thresholds follow the inverted-functional convention of
:mod:`damagewalk.model2`.
"""

from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy import special as sp

from .distributions import ConstantTime, FiniteDiscrete, GammaWeight, ObservationLaw
from .errors import DomainError
from .process_model import ProcessParams, Thresholds
from .special import CompositionConstraint, enumerate_compositions, poisson_tail, polylog_nonpos


@dataclass(frozen=True)
class Model1Params:
    lam: float
    c: float
    p: tuple
    alpha_w: float
    xi: float
    m1: int
    m: int
    v: float

    def __post_init__(self):
        object.__setattr__(self, "p", tuple(float(x) for x in self.p))
        FiniteDiscrete(self.p)
        if not (self.lam > 0 and self.c > 0 and self.alpha_w > 0 and self.xi > 0):
            raise ValueError("lam, c, alpha_w and xi must be positive")
        Thresholds(self.m1, self.m, self.v)
        if self.m1 < 1:
            raise ValueError("closed forms need m1 >= 1")

    @property
    def R(self):
        return len(self.p)

    @property
    def thresholds(self):
        return Thresholds(self.m1, self.m, self.v)

    def with_thresholds(self, **kw):
        d = dict(m1=self.m1, m=self.m, v=self.v)
        d.update(kw)
        return Model1Params(self.lam, self.c, self.p, self.alpha_w, self.xi, **d)

    def to_process_params(self):
        return ProcessParams(
            self.lam,
            FiniteDiscrete(self.p),
            GammaWeight(self.alpha_w, self.xi),
            ObservationLaw(ConstantTime(self.c)),
            self.thresholds,
        )


def _window_factor(mp, theta):
    # exp(-c (theta + lam)) computed from its logarithm
    log_z = -mp.c * (theta + mp.lam)
    if np.real(log_z) >= 0:
        raise DomainError("need Re(c (theta + lam)) > 0")
    return np.exp(log_z)


def _composition_mass(p, strikes, nodes):
    return sum(w for _, w in enumerate_compositions(CompositionConstraint(len(p), strikes, nodes), p))


@lru_cache(maxsize=None)
def _coeff(j, p, c_lam, z):
    total = 0.0
    R = len(p)
    for r in range((R - 1) * j // R + 1):
        k = j - r
        mass = _composition_mass(p, k, j)
        if mass == 0.0:
            continue
        term = c_lam**k * mass
        if z is not None:
            term = term * (1.0 / (1.0 - z) if k == 0 else polylog_nonpos(-k, z))
        total = total + term
    return total


def coeff_F(j, theta, mp):
    """``F_j(theta)``; ``F_0 = 1 / (1 - exp(-c (theta + lam)))``."""
    if j < 0:
        raise ValueError("j must be >= 0")
    z = _window_factor(mp, theta)
    z = complex(z) if np.iscomplexobj(z) else float(z)
    return _coeff(int(j), mp.p, mp.c * mp.lam, z)


def coeff_E(j, mp):
    """``E_j``, the theta-free analogue of :func:`coeff_F`; ``E_0 = 1``."""
    if j < 0:
        raise ValueError("j must be >= 0")
    return _coeff(int(j), mp.p, mp.c * mp.lam, None)


def _gamma_p(shape, y):
    # shape 0 is the point mass at zero, so its distribution function is 1
    if shape == 0:
        return 1.0
    if np.isreal(y) and np.real(y) >= 0:
        return float(sp.gammainc(shape, np.real(y)))
    n = int(round(shape))
    if abs(n - shape) > 1e-12:
        raise DomainError("complex weight arguments need an integer gamma shape")
    return poisson_tail(n, y)


def joint_transform_mu1(mp, u=1.0, v=0.0, theta=0.0):
    """``E[u^N e^{-vW} e^{-theta tau}; mu1 < min(mu, nu)]`` upon the auxiliary crossing."""
    if abs(u) > 1 + 1e-12 or np.real(v) < 0 or np.real(theta) < 0:
        raise DomainError("need |u| <= 1, Re(v) >= 0 and Re(theta) >= 0")
    M1, M, V = mp.m1, mp.m, mp.v
    z = _window_factor(mp, theta)
    ratio = mp.xi / (v + mp.xi)
    y = (v + mp.xi) * V
    F = [coeff_F(k, theta, mp) for k in range(M1)]
    E = [coeff_E(k, mp) for k in range(M)]

    def tail(n):
        return ratio ** (mp.alpha_w * n) * _gamma_p(mp.alpha_w * n, y)

    tails = [tail(n) for n in range(M)]
    first = 0.0
    second = 0.0
    for k in range(M1):
        inner = sum(u**m * E[m] * tails[k + m] for m in range(M - k))
        first = first + u**k * F[k] * inner
        conv = sum(E[n] * F[k - n] for n in range(k + 1))
        second = second + u**k * tails[k] * conv
    out = z * (first - second)
    return complex(out) if np.iscomplexobj(out) else float(out)
