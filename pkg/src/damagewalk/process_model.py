"""Process parameters and the per-window increment functionals.

The attack stream is a marked Poisson process observed at the epochs of a
delayed renewal process.  Over one observation window the joint transform of
(nodes lost, weight lost, window length) is

    gamma(z, v, theta) = L[theta + lam - lam * g(z * l(v))]

and the same with the delay LST ``L0`` for the initial window.
"""

from dataclasses import dataclass, fields, replace
from typing import NamedTuple

import numpy as np

from .distributions import (
    FiniteDiscrete,
    GammaWeight,
    Geometric,
    ObservationLaw,
    ZeroDelay,
)
from .errors import DomainError

_BOUNDARY_TOL = 1e-14


@dataclass(frozen=True)
class Thresholds:
    """Auxiliary node level ``m1``, critical node level ``m``, weight level ``v``."""

    m1: int
    m: int
    v: float

    def __post_init__(self):
        if int(self.m1) != self.m1 or int(self.m) != self.m:
            raise ValueError("node thresholds must be integers")
        if self.m1 < 0:
            raise ValueError(f"m1 must be >= 0, got {self.m1}")
        if self.m < 1:
            raise ValueError(f"m must be >= 1, got {self.m}")
        if self.m1 >= self.m:
            raise ValueError(f"m1 must be < m, got m1={self.m1}, m={self.m}")
        if not self.v > 0:
            raise ValueError(f"weight threshold must be positive, got {self.v}")


@dataclass(frozen=True)
class ProcessParams:
    lam: float
    node_law: object
    weight_law: object
    obs_law: ObservationLaw
    thresholds: Thresholds

    def __post_init__(self):
        if not self.lam > 0:
            raise ValueError(f"attack rate must be positive, got {self.lam}")
        if not isinstance(self.node_law, (FiniteDiscrete, Geometric)):
            raise TypeError("node_law must be FiniteDiscrete or Geometric")
        if not isinstance(self.weight_law, GammaWeight):
            raise TypeError("weight_law must be a GammaWeight")
        if not isinstance(self.obs_law, ObservationLaw):
            raise TypeError("obs_law must be an ObservationLaw")

    def with_thresholds(self, **kw):
        return replace(self, thresholds=replace(self.thresholds, **kw))


@dataclass(frozen=True)
class TransformArgs:
    """Arguments of the joint functional.

    ``u0, u`` act on nodes at the auxiliary crossing (one step before / at),
    ``alpha0, alpha`` on nodes at the critical crossing; ``v0, v, beta0, beta``
    are the matching weight arguments and ``theta0, theta, h0, h`` the time
    arguments.  Defaults are neutral, so ``TransformArgs()`` gives a
    probability.
    """

    u0: complex = 1.0
    u: complex = 1.0
    alpha0: complex = 1.0
    alpha: complex = 1.0
    v0: complex = 0.0
    v: complex = 0.0
    beta0: complex = 0.0
    beta: complex = 0.0
    theta0: complex = 0.0
    theta: complex = 0.0
    h0: complex = 0.0
    h: complex = 0.0

    PGF_FIELDS = ("u0", "u", "alpha0", "alpha")
    LST_FIELDS = ("v0", "v", "beta0", "beta", "theta0", "theta", "h0", "h")

    @classmethod
    def at_mu1(cls, u=1.0, v=0.0, theta=0.0):
        return cls(u=u, v=v, theta=theta)

    @classmethod
    def at_min(cls, alpha=1.0, beta=0.0, h=0.0):
        return cls(alpha=alpha, beta=beta, h=h)

    @classmethod
    def between_crossings(cls, h):
        return cls(theta=-h, h=h)

    def as_tuple(self):
        return tuple(getattr(self, f.name) for f in fields(self))

    def is_real(self):
        return all(np.imag(x) == 0 for x in self.as_tuple())


class DomainReport(NamedTuple):
    guaranteed: bool
    pattern: str
    boundary: tuple
    violated: tuple


def validate_domain(z, v, theta, pattern="auto"):
    """Check whether ``|gamma(z, v, theta)| < 1`` is guaranteed.

    The three sufficient conditions are ``Re(theta) > 0``, ``|z| < 1`` and
    ``Re(v) > 0``; any two may be relaxed to non-strict, so the bound holds
    when all three hold weakly and at least one holds strictly.

    Parameters
    ----------
    pattern : {"auto", "strict"} or str
        ``"strict"`` demands all three strict.  ``"weak:<a>,<b>"`` names the
        (at most two) conditions allowed to sit on the boundary, from
        ``theta``, ``z``, ``v``.  ``"auto"`` accepts any admissible pattern.
    """
    z, v, theta = complex(z), complex(v), complex(theta)
    margins = {
        "theta": theta.real,
        "z": 1.0 - abs(z),
        "v": v.real,
    }
    violated = tuple(k for k, m in margins.items() if m < -_BOUNDARY_TOL)
    boundary = tuple(k for k, m in margins.items() if abs(m) <= _BOUNDARY_TOL)
    strict = tuple(k for k, m in margins.items() if m > _BOUNDARY_TOL)
    if pattern == "strict":
        allowed = ()
    elif pattern == "auto":
        allowed = ("theta", "z", "v")
    elif pattern.startswith("weak:"):
        allowed = tuple(s.strip() for s in pattern[5:].split(",") if s.strip())
        if len(allowed) > 2 or not set(allowed) <= set(margins):
            raise ValueError(f"bad pattern {pattern!r}")
    else:
        raise ValueError(f"bad pattern {pattern!r}")
    ok = not violated and bool(strict) and set(boundary) <= set(allowed)
    if not ok:
        label = "none"
    elif not boundary:
        label = "strict"
    else:
        label = "weak:" + ",".join(boundary)
    return DomainReport(ok, label, boundary, violated)


def _check_weak(z, v, theta):
    rep = validate_domain(z, v, theta)
    if rep.violated:
        raise DomainError(
            f"arguments (z={z}, v={v}, theta={theta}) violate {', '.join(rep.violated)}"
        )


def gamma_raw(p, z, v, theta, initial=False):
    """Increment functional without domain checks (analytic continuation)."""
    arg = theta + p.lam - p.lam * p.node_law.pgf_raw(np.asarray(z) * p.weight_law.lst_raw(v))
    law = p.obs_law.delay if initial else p.obs_law.spacing
    return law.lst_raw(arg)


def gamma_increment(p, z, v, theta):
    """Joint transform of (nodes, weight, duration) over one observation window."""
    _check_weak(z, v, theta)
    return complex(gamma_raw(p, z, v, theta))


def gamma_initial(p, z, v, theta):
    """As :func:`gamma_increment` for the initial window ``[0, tau_0]``."""
    _check_weak(z, v, theta)
    if isinstance(p.obs_law.delay, ZeroDelay):
        return 1.0 + 0.0j
    return complex(gamma_raw(p, z, v, theta, initial=True))


def marked_poisson_transform(p, z, v, t_len):
    """``E[z^N(T) exp(-v W(T))]`` for a window of length ``t_len``."""
    if t_len < 0:
        raise DomainError("window length must be nonnegative")
    if abs(z) > 1 + 1e-12 or np.real(v) < 0:
        raise DomainError("need |z| <= 1 and Re(v) >= 0")
    inner = p.node_law.pgf_raw(z * p.weight_law.lst_raw(v))
    return complex(np.exp(p.lam * t_len * (inner - 1.0)))
