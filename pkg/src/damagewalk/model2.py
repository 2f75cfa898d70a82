"""Closed forms for exponential observations, geometric node counts and
exponential node weights.

Notation used throughout (``b = 1 - a``, ``mu`` is the observation rate):

* ``c(x) = (lam + b x) / (lam + x)``
* ``d(x) = (lam + b (mu + x)) / (lam + mu + x)``
* ``k_j(v) = exp(-(v+xi)V) sum_{i<=j} ((v+xi)V)^i / i!``
* ``r_k^j(u, v, theta) = exp(-(v+xi)V) sum_{i=k}^{j} (xi d(theta) u V)^i / i!``
* ``s(x, y) = sum_{i=1}^{M-M1-1} (c(x)/d(y))^i``

Thresholds follow the inverted-functional convention: ``P`` below is the
value of the functional at ``(M1, M, V)`` with partial sums at
``(M1 - 1, M - 1)``.  Simulated at strict levels, it describes paths first
observed with ``N >= M1`` before ``N >= M`` or ``W > V``
(see :func:`damagewalk.operator.functionals.crossing_levels`).

Empty sums
    ``sum_convention="standard"`` gives an empty sum the value 0, so
    ``P(0, y) = 1``.  ``"paper"`` gives an empty sum the value 1, which turns
    ``1 - k_{-1}(v)`` into ``1 - exp(-(v+xi)V)`` and an empty ``r`` into
    ``exp(-(v+xi)V)``.  Only ``M1 = 1`` is affected.

Every public evaluator has a finite-sum twin (``*_sum``) obtained by
expanding the transform into powers of the weight LST before inverting.  The
twins are free of removable singularities and are used as fallbacks there.
"""

from dataclasses import dataclass
from math import factorial

import numpy as np
from scipy import special as sp

from .distributions import ExponentialTime, ExponentialWeight, Geometric, ObservationLaw
from .errors import DomainError, SingularityError
from .process_model import ProcessParams, Thresholds
from .special import poisson_tail

SUM_CONVENTIONS = ("standard", "paper")
SINGULAR_RADIUS = 1e-6


@dataclass(frozen=True)
class Model2Params:
    lam: float
    a: float
    xi: float
    mu_obs: float
    m1: int
    m: int
    v: float

    def __post_init__(self):
        if not (self.lam > 0 and self.xi > 0 and self.mu_obs > 0):
            raise ValueError("lam, xi and mu_obs must be positive")
        if not 0 < self.a <= 1:
            raise ValueError(f"geometric parameter must lie in (0, 1], got {self.a}")
        Thresholds(self.m1, self.m, self.v)
        if self.m1 < 1:
            raise ValueError("closed forms need m1 >= 1")

    @property
    def b(self):
        return 1.0 - self.a

    @property
    def thresholds(self):
        return Thresholds(self.m1, self.m, self.v)

    def with_thresholds(self, **kw):
        d = dict(m1=self.m1, m=self.m, v=self.v)
        d.update(kw)
        return Model2Params(self.lam, self.a, self.xi, self.mu_obs, **d)

    def to_process_params(self):
        return ProcessParams(
            self.lam,
            Geometric(self.a),
            ExponentialWeight(rate=self.xi),
            ObservationLaw(ExponentialTime(self.mu_obs)),
            self.thresholds,
        )


# notation -----------------------------------------------------------------


def c_of(mp, x):
    return (mp.lam + mp.b * x) / (mp.lam + x)


def d_of(mp, x):
    return (mp.lam + mp.b * (mp.mu_obs + x)) / (mp.lam + mp.mu_obs + x)


def s_of(mp, x, y):
    ratio = c_of(mp, x) / d_of(mp, y)
    return sum(ratio**i for i in range(1, mp.m - mp.m1))


def _check_conv(conv):
    if conv not in SUM_CONVENTIONS:
        raise ValueError(f"sum_convention must be one of {SUM_CONVENTIONS}")


def gamma_p(k, y, sum_convention="standard"):
    """``P(k, y)`` for integer ``k >= 0`` and any complex ``y``.

    ``P(0, y)`` follows the empty-sum convention (see module docstring).
    """
    if k < 0:
        raise DomainError("negative gamma shape")
    if k == 0:
        _check_conv(sum_convention)
        return 1.0 if sum_convention == "standard" else 1.0 - np.exp(-y)
    if np.isreal(y) and np.real(y) >= 0:
        return float(sp.gammainc(k, np.real(y)))
    return poisson_tail(k, y)


def k_j(mp, j, v=0.0, sum_convention="standard"):
    """``1 - P(j + 1, (v + xi) V)``; ``j = -1`` follows the empty-sum convention."""
    y = (v + mp.xi) * mp.v
    return 1.0 - gamma_p(j + 1, y, sum_convention)


def r_kj(mp, k, j, u=1.0, v=0.0, theta=0.0, sum_convention="standard", scale_power=0):
    """``r_k^j(u, v, theta) / (xi d(theta) u)^scale_power`` by direct summation."""
    _check_conv(sum_convention)
    s = (v + mp.xi) * mp.v
    base = mp.xi * d_of(mp, theta) * u
    if j < k:
        if sum_convention == "paper":
            return np.exp(-s) / base**scale_power
        return 0.0
    terms = [base ** (i - scale_power) * mp.v**i / factorial(i) for i in range(k, j + 1)]
    return np.exp(-s) * sum(terms)


def _check_args(**kw):
    for name, x in kw.items():
        if name in ("u", "alpha"):
            if abs(x) > 1 + 1e-12:
                raise DomainError(f"{name} must have modulus <= 1")
        elif np.real(x) < 0:
            raise DomainError(f"{name} must have nonnegative real part")


def _finite(x):
    return complex(x) if np.iscomplexobj(x) or isinstance(x, complex) else float(np.real(x))


# transforms upon the auxiliary crossing -----------------------------------


def _pref_mu1(mp, theta):
    return (mp.a * mp.lam * mp.mu_obs * c_of(mp, theta) ** (mp.m1 - 1)
            / ((mp.mu_obs + theta + mp.lam) * (theta + mp.lam)))


def joint_at_mu1_sum(mp, u=1.0, v=0.0, theta=0.0):
    """Finite-sum form of :func:`joint_at_mu1`."""
    M1, M = mp.m1, mp.m
    s = v + mp.xi
    du = d_of(mp, theta) * u
    lw = mp.xi / s
    total = sum(du**i * lw ** (M1 + i) * gamma_p(M1 + i, s * mp.v) for i in range(M - M1))
    return _finite(_pref_mu1(mp, theta) * u**M1 * total)


def joint_at_mu1(mp, u=1.0, v=0.0, theta=0.0, sum_convention="standard"):
    """``E[u^N e^{-vW} e^{-theta tau}; mu1 < min(mu, nu)]`` upon the auxiliary crossing."""
    _check_args(u=u, v=v, theta=theta)
    M1, M, V, xi = mp.m1, mp.m, mp.v, mp.xi
    s = v + xi
    K0 = _pref_mu1(mp, theta)
    if M == M1 + 1:
        return _finite(K0 * u**M1 * (xi / s) ** M1 * gamma_p(M1, s * V))
    d = d_of(mp, theta)
    den = v + xi * (1.0 - d * u)
    if abs(den) < SINGULAR_RADIUS * abs(s):
        return joint_at_mu1_sum(mp, u, v, theta)
    duxi = d * u * xi
    bracket = (
        gamma_p(M1 - 1, s * V, sum_convention) / s ** (M1 - 1)
        - r_kj(mp, M1 - 1, M - 2, u, v, theta, sum_convention, scale_power=M1 - 1)
        - duxi ** (M - M1) * gamma_p(M - 1, s * V) / s ** (M - 1)
    )
    return _finite(K0 * (u * xi) ** M1 / den * bracket)


def prob_mu1_first(mp, sum_convention="standard"):
    """Probability that the auxiliary crossing is observed first."""
    M1, M, V, xi = mp.m1, mp.m, mp.v, mp.xi
    if M == M1 + 1:
        return mp.a * mp.mu_obs / (mp.mu_obs + mp.lam) * gamma_p(M1, xi * V)
    d0 = d_of(mp, 0.0)
    out = (
        gamma_p(M1 - 1, xi * V, sum_convention)
        - r_kj(mp, M1 - 1, M - 2, 1.0, 0.0, 0.0, sum_convention) / d0 ** (M1 - 1)
        - d0 ** (M - M1) * gamma_p(M - 1, xi * V)
    )
    return float(np.real(out))


def prob_mu1_first_sum(mp):
    d0 = d_of(mp, 0.0)
    xiV = mp.xi * mp.v
    total = sum(d0**i * gamma_p(mp.m1 + i, xiV) for i in range(mp.m - mp.m1))
    return mp.a * mp.mu_obs / (mp.mu_obs + mp.lam) * total


MARGINALS = ("N", "W", "T")


def marginal_at_mu1(mp, which, arg, sum_convention="standard"):
    """One-component transform upon the auxiliary crossing.

    ``which`` is ``"N"`` (``arg = u``), ``"W"`` (``arg = v``) or ``"T"``
    (``arg = theta``).
    """
    M1, M, V, xi, lam, mu = mp.m1, mp.m, mp.v, mp.xi, mp.lam, mp.mu_obs
    base = mp.a * mu / (mu + lam)
    d0 = d_of(mp, 0.0)
    conv = sum_convention
    if which == "N":
        u = arg
        _check_args(u=u)
        if M == M1 + 1:
            return _finite(base * u**M1 * gamma_p(M1, xi * V))
        x = d0 * u
        br = (
            gamma_p(M1 - 1, xi * V, conv)
            - r_kj(mp, M1 - 1, M - 2, u, 0.0, 0.0, conv, M1 - 1) * xi ** (M1 - 1)
            - x ** (M - M1) * gamma_p(M - 1, xi * V)
        )
        return _finite(base * u**M1 / (1.0 - x) * br)
    if which == "W":
        v = arg
        _check_args(v=v)
        s = v + xi
        if M == M1 + 1:
            return _finite(base * (xi / s) ** M1 * gamma_p(M1, s * V))
        den = v + xi * (1.0 - d0)
        br = (
            gamma_p(M1 - 1, s * V, conv) / s ** (M1 - 1)
            - r_kj(mp, M1 - 1, M - 2, 1.0, v, 0.0, conv, M1 - 1)
            - (d0 * xi) ** (M - M1) * gamma_p(M - 1, s * V) / s ** (M - 1)
        )
        return _finite(base * xi**M1 / den * br)
    if which == "T":
        theta = arg
        _check_args(theta=theta)
        K0 = _pref_mu1(mp, theta)
        if M == M1 + 1:
            return _finite(K0 * gamma_p(M1, xi * V))
        d = d_of(mp, theta)
        br = (
            gamma_p(M1 - 1, xi * V, conv)
            - r_kj(mp, M1 - 1, M - 2, 1.0, 0.0, theta, conv, M1 - 1) * xi ** (M1 - 1)
            - d ** (M - M1) * gamma_p(M - 1, xi * V)
        )
        return _finite(K0 / (1.0 - d) * br)
    raise ValueError(f"which must be one of {MARGINALS}")


# transforms upon the first observed passage --------------------------------


def _lc_term(k, xi, s, q, dax, V, conv):
    """Inverse Laplace-Carson of ``l^k / (1 - d alpha l)``.

    ``s = beta + xi``, ``q = beta + xi (1 - d alpha)``, ``dax = d alpha xi``.
    """
    tail = np.exp(-q * V) * gamma_p(k - 1, dax * V, conv)
    if k - 1 > 0:
        tail = tail / dax ** (k - 1)
    return xi**k / q * (gamma_p(k - 1, s * V, conv) / s ** (k - 1) - tail)


def _pref_min(mp, alpha, beta, h):
    lam, mu = mp.lam, mp.mu_obs
    d = d_of(mp, h)
    lb = mp.xi / (mp.xi + beta)
    den = 1.0 - d * alpha * lb
    if abs(den) < 1e-14:
        raise SingularityError("1 - d(h) alpha l(beta) vanishes")
    return ((mp.a * mu * lam) ** 2 * alpha ** (mp.m1 + 1) * c_of(mp, h) ** (mp.m1 - 1)
            / (den * (h + lam) ** 2 * (mu + h + lam) ** 2))


def _pair_sums(x, y, n):
    # h_j = sum_{i+k=j} x^i y^k for j = 0..n
    return [sum(x**i * y ** (j - i) for i in range(j + 1)) for j in range(n + 1)]


def joint_at_min_sum(mp, alpha=1.0, beta=0.0, h=0.0):
    """Finite-sum form of :func:`joint_at_min`."""
    M1, M, V, xi = mp.m1, mp.m, mp.v, mp.xi
    K = M - M1 - 1
    s = beta + xi
    lb = xi / s
    hs = _pair_sums(c_of(mp, h), d_of(mp, h), K)
    total = 0.0
    for n in range(K + 1):
        w = lb * alpha**n * hs[n]
        if n:
            w = w - alpha ** (n - 1) * hs[n - 1]
        total = total + w * lb ** (M1 + n) * gamma_p(M1 + n, s * V)
    return _finite(_pref_min(mp, alpha, beta, h) * total)


def joint_at_min(mp, alpha=1.0, beta=0.0, h=0.0, sum_convention="standard"):
    """``E[alpha^N e^{-beta W} e^{-h tau}; mu1 < min(mu, nu)]`` at the first
    observed passage."""
    _check_args(alpha=alpha, beta=beta, h=h)
    M1, M, V, xi = mp.m1, mp.m, mp.v, mp.xi
    s = beta + xi
    lb = xi / s
    C = _pref_min(mp, alpha, beta, h)
    if M == M1 + 1:
        return _finite(C * lb * lb**M1 * gamma_p(M1, s * V))
    c, d = c_of(mp, h), d_of(mp, h)
    q = beta + xi * (1.0 - d * alpha)
    if abs(alpha) < SINGULAR_RADIUS or abs(q) < SINGULAR_RADIUS * abs(s):
        return joint_at_min_sum(mp, alpha, beta, h)
    conv = sum_convention
    term = lambda k: _lc_term(k, xi, s, q, d * alpha * xi, V, conv)
    mix = lb - 1.0 / (alpha * c)
    body = lb * term(M1)
    body = body + mix * sum((c * alpha) ** j * term(M1 + j) for j in range(1, M - M1))
    body = body - (d * alpha) ** (M - M1) * (lb + mix * s_of(mp, h, h)) * term(M)
    return _finite(C * body)


def marginal_at_min(mp, which, arg, sum_convention="standard"):
    """One-component transform at the first observed passage.

    ``which`` is ``"N"`` (``arg = alpha``), ``"W"`` (``arg = beta``) or
    ``"T"`` (``arg = h``).
    """
    M1, M, V, xi, lam, mu = mp.m1, mp.m, mp.v, mp.xi, mp.lam, mp.mu_obs
    conv = sum_convention
    d0 = d_of(mp, 0.0)
    K = M - M1

    def tail(k, base, rate_gap):
        # P(k-1, xi V) - exp(-xi rate_gap V) P(k-1, xi base V) / base^(k-1)
        t = np.exp(-xi * rate_gap * V) * gamma_p(k - 1, xi * base * V, conv)
        return gamma_p(k - 1, xi * V, conv) - (t / base ** (k - 1) if k > 1 else t)

    if which == "N":
        al = arg
        _check_args(alpha=al)
        if al == 0:
            return 0.0
        pre = (mp.a * mu) ** 2 * al ** (M1 + 1) / ((1.0 - d0 * al) * (mu + lam) ** 2)
        if M == M1 + 1:
            return _finite(pre * gamma_p(M1, xi * V))
        x = d0 * al
        if abs(1.0 - x) < SINGULAR_RADIUS:
            return joint_at_min_sum(mp, al, 0.0, 0.0)
        T = lambda k: tail(k, x, 1.0 - x)
        mix = 1.0 - 1.0 / al
        body = T(M1) + mix * sum(al**j * T(M1 + j) for j in range(1, K))
        body = body - x**K * (1.0 + mix * s_of(mp, 0.0, 0.0)) * T(M)
        return _finite(pre / (1.0 - x) * body)
    if which == "W":
        be = arg
        _check_args(beta=be)
        s = be + xi
        lb = xi / s
        pre = (mp.a * mu) ** 2 / ((1.0 - d0 * lb) * (mu + lam) ** 2)
        if M == M1 + 1:
            return _finite(pre * lb ** (M1 + 1) * gamma_p(M1, s * V))
        q = be + xi * (1.0 - d0)

        def U(k):
            t = np.exp(-q * V) * gamma_p(k - 1, xi * d0 * V, conv)
            if k > 1:
                t = t / (d0 * xi) ** (k - 1)
            return gamma_p(k - 1, s * V, conv) / s ** (k - 1) - t

        body = lb * U(M1) + (lb - 1.0) * sum(xi**j * U(M1 + j) for j in range(1, K))
        body = body - (d0 * xi) ** K * (lb + (lb - 1.0) * s_of(mp, 0.0, 0.0)) * U(M)
        return _finite(pre * xi**M1 / q * body)
    if which == "T":
        h = arg
        _check_args(h=h)
        c, d = c_of(mp, h), d_of(mp, h)
        pre = ((mp.a * mu * lam) ** 2 * c ** (M1 - 1)
               / ((1.0 - d) * (h + lam) ** 2 * (mu + h + lam) ** 2))
        if M == M1 + 1:
            return _finite(pre * gamma_p(M1, xi * V))
        T = lambda k: tail(k, d, 1.0 - d)
        mix = (c - 1.0) / c
        body = T(M1) + mix * sum(c**j * T(M1 + j) for j in range(1, K))
        body = body - d**K * (1.0 + mix * s_of(mp, h, h)) * T(M)
        return _finite(pre / (1.0 - d) * body)
    raise ValueError(f"which must be one of {MARGINALS}")


def interval_transform_sum(mp, h):
    """Finite-sum form of :func:`interval_transform`."""
    M1, M, xi, lam, mu = mp.m1, mp.m, mp.xi, mp.lam, mp.mu_obs
    K = M - M1 - 1
    hs = _pair_sums(c_of(mp, h), d_of(mp, 0.0), K)
    total = sum((hs[n] - (hs[n - 1] if n else 0.0)) * gamma_p(M1 + n, xi * mp.v)
                for n in range(K + 1))
    pre = mp.a * mu**2 * lam / ((mu + lam) * (mu + h) * (h + lam))
    return _finite(pre * total)


def interval_transform(mp, h, sum_convention="standard"):
    """``E[exp(-h (tau_rho - tau_mu1)); mu1 < min(mu, nu)]``."""
    _check_args(h=h)
    M1, M, V, xi, lam, mu = mp.m1, mp.m, mp.v, mp.xi, mp.lam, mp.mu_obs
    pre = mp.a * mu**2 * lam / ((mu + lam) * (mu + h) * (h + lam))
    if M == M1 + 1:
        return _finite(pre * gamma_p(M1, xi * V))
    conv = sum_convention
    c, d0 = c_of(mp, h), d_of(mp, 0.0)
    K = M - M1

    def T(k):
        t = np.exp(-xi * (1.0 - d0) * V) * gamma_p(k - 1, xi * d0 * V, conv)
        if k > 1:
            t = t / d0 ** (k - 1)
        return gamma_p(k - 1, xi * V, conv) - t

    mix = (c - 1.0) / c
    body = T(M1) + mix * sum(c**j * T(M1 + j) for j in range(1, K))
    body = body - d0**K * (1.0 + mix * s_of(mp, h, 0.0)) * T(M)
    return _finite(pre / (1.0 - d0) * body)
