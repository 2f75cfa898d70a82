"""Distribution families for strikes, node weights and observation epochs.

Each law evaluates its transform (PGF for integer laws, LST otherwise) at
complex arguments, composes it with truncated power series for the operator
pipeline, and draws exact samples, including exact sums of iid copies so the
simulator can aggregate a whole observation window in one call.
"""

from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError, SingularityError

_PGF_TOL = 1e-12


def _as_complex(x):
    return np.asarray(x, dtype=complex)


def _check_unit_disk(z):
    if np.any(np.abs(z) > 1 + _PGF_TOL):
        raise DomainError("PGF argument must satisfy |z| <= 1")


def _check_right_half(s):
    if np.any(np.real(s) < 0):
        raise DomainError("LST argument must satisfy Re(s) >= 0")


def _scalar(x):
    x = np.asarray(x)
    return x.item() if x.ndim == 0 else x


# node counts per strike ---------------------------------------------------


@dataclass(frozen=True)
class FiniteDiscrete:
    """Nodes per strike on ``{1, ..., R}`` with ``P{n = s} = p[s-1]``."""

    p: tuple

    def __post_init__(self):
        p = tuple(float(v) for v in self.p)
        object.__setattr__(self, "p", p)
        if len(p) < 1:
            raise ValueError("p must have at least one entry")
        if min(p) < 0 or abs(sum(p) - 1.0) > 1e-12:
            raise ValueError(f"p must be a probability vector, got {p}")

    @property
    def R(self):
        return len(self.p)

    @property
    def mean(self):
        return sum((i + 1) * q for i, q in enumerate(self.p))

    @property
    def var(self):
        m2 = sum((i + 1) ** 2 * q for i, q in enumerate(self.p))
        return m2 - self.mean**2

    def pgf_raw(self, z):
        z = _as_complex(z)
        out = np.zeros_like(z)
        for q in reversed(self.p):
            out = (out + q) * z
        return out

    def pgf(self, z):
        z = _as_complex(z)
        _check_unit_disk(z)
        return _scalar(self.pgf_raw(z))

    def pgf_series(self, s):
        out = s * 0.0
        for q in reversed(self.p):
            out = (out + q) * s
        return out

    def sample(self, rng, size=None):
        return rng.choice(np.arange(1, self.R + 1), size=size, p=self.p)

    def sample_sum(self, rng, counts):
        counts = np.asarray(counts, dtype=np.int64)
        if counts.size == 0:
            return counts.copy()
        draws = rng.multinomial(counts, self.p)
        return draws @ np.arange(1, self.R + 1)


@dataclass(frozen=True)
class Geometric:
    """Nodes per strike on ``{1, 2, ...}`` with ``P{n = k} = a b^(k-1)``."""

    a: float

    def __post_init__(self):
        if not 0 < self.a <= 1:
            raise ValueError(f"geometric parameter must lie in (0, 1], got {self.a}")

    @property
    def b(self):
        return 1.0 - self.a

    @property
    def mean(self):
        return 1.0 / self.a

    @property
    def var(self):
        return self.b / self.a**2

    def pgf_raw(self, z):
        z = _as_complex(z)
        # a + b (1 - z) equals 1 - b z but is exact at z = 1
        den = self.a + self.b * (1 - z)
        if np.any(np.abs(den) < 1e-300):
            raise SingularityError("1 - b z vanishes")
        return self.a * z / den

    def pgf(self, z):
        z = _as_complex(z)
        _check_unit_disk(z)
        return _scalar(self.pgf_raw(z))

    def pgf_series(self, s):
        return self.a * s * (1.0 - self.b * s).reciprocal()

    def sample(self, rng, size=None):
        return rng.geometric(self.a, size=size)

    def sample_sum(self, rng, counts):
        counts = np.asarray(counts, dtype=np.int64)
        out = counts.copy()
        pos = counts > 0
        if self.a < 1 and np.any(pos):
            # failures before the k-th success, plus the k successes
            out[pos] += rng.negative_binomial(counts[pos], self.a)
        return out


# weights per node ---------------------------------------------------------


@dataclass(frozen=True)
class GammaWeight:
    """Gamma(shape, rate) weight per lost node."""

    shape: float
    rate: float

    def __post_init__(self):
        if self.shape <= 0 or self.rate <= 0:
            raise ValueError("gamma weight needs shape > 0 and rate > 0")

    @property
    def mean(self):
        return self.shape / self.rate

    @property
    def var(self):
        return self.shape / self.rate**2

    def lst_raw(self, s):
        # principal branch, cut where s + rate is a nonpositive real
        s = _as_complex(s)
        return np.exp(self.shape * (np.log(self.rate) - np.log(s + self.rate)))

    def lst(self, s):
        s = _as_complex(s)
        _check_right_half(s)
        return _scalar(self.lst_raw(s))

    def sample(self, rng, size=None):
        return rng.gamma(self.shape, 1.0 / self.rate, size=size)

    def sample_sum(self, rng, counts):
        counts = np.asarray(counts)
        out = np.zeros(counts.shape)
        pos = counts > 0
        if np.any(pos):
            out[pos] = rng.gamma(self.shape * counts[pos], 1.0 / self.rate)
        return out


@dataclass(frozen=True)
class ExponentialWeight(GammaWeight):
    """Exponential(rate) weight per node; Gamma with shape 1."""

    shape: float = field(default=1.0, init=False)
    rate: float = 1.0

    def lst_raw(self, s):
        s = _as_complex(s)
        return self.rate / (self.rate + s)


# observation epochs -------------------------------------------------------


@dataclass(frozen=True)
class ConstantTime:
    """Deterministic spacing ``c`` between observations."""

    c: float

    def __post_init__(self):
        if self.c <= 0:
            raise ValueError("constant spacing must be positive")

    @property
    def mean(self):
        return self.c

    @property
    def var(self):
        return 0.0

    def lst_raw(self, s):
        return np.exp(-self.c * _as_complex(s))

    def lst(self, s):
        s = _as_complex(s)
        _check_right_half(s)
        return _scalar(self.lst_raw(s))

    def lst_series(self, s):
        return (-self.c * s).exp()

    def sample(self, rng, size=None):
        return self.c if size is None else np.full(size, self.c)


@dataclass(frozen=True)
class ExponentialTime:
    """Exponential(rate) spacing between observations."""

    rate: float

    def __post_init__(self):
        if self.rate <= 0:
            raise ValueError("observation rate must be positive")

    @property
    def mean(self):
        return 1.0 / self.rate

    @property
    def var(self):
        return 1.0 / self.rate**2

    def lst_raw(self, s):
        return self.rate / (self.rate + _as_complex(s))

    def lst(self, s):
        s = _as_complex(s)
        _check_right_half(s)
        return _scalar(self.lst_raw(s))

    def lst_series(self, s):
        return self.rate * (s + self.rate).reciprocal()

    def sample(self, rng, size=None):
        return rng.exponential(1.0 / self.rate, size=size)


@dataclass(frozen=True)
class ZeroDelay:
    """No initial delay: the first observation happens at time 0."""

    @property
    def mean(self):
        return 0.0

    @property
    def var(self):
        return 0.0

    def lst_raw(self, s):
        return np.ones_like(_as_complex(s))

    def lst(self, s):
        s = _as_complex(s)
        _check_right_half(s)
        return _scalar(self.lst_raw(s))

    def lst_series(self, s):
        return s * 0.0 + 1.0

    def sample(self, rng, size=None):
        return 0.0 if size is None else np.zeros(size)


@dataclass(frozen=True)
class ObservationLaw:
    """Renewal observation scheme: first epoch after ``delay``, then iid ``spacing``."""

    spacing: object
    delay: object = ZeroDelay()

    def __post_init__(self):
        if not isinstance(self.spacing, (ConstantTime, ExponentialTime)):
            raise TypeError("spacing must be ConstantTime or ExponentialTime")
        if not isinstance(self.delay, (ConstantTime, ExponentialTime, ZeroDelay)):
            raise TypeError("delay must be ConstantTime, ExponentialTime or ZeroDelay")


NodeCountLaw = (FiniteDiscrete, Geometric)
WeightLaw = (GammaWeight,)
TimeLaw = (ConstantTime, ExponentialTime, ZeroDelay)


def pgf_eval(law, z):
    """PGF ``g(z)`` of a node-count law."""
    return law.pgf(z)


def lst_eval(law, s):
    """LST of a weight or time law at ``s`` with ``Re(s) >= 0``."""
    if isinstance(law, ObservationLaw):
        law = law.spacing
    return law.lst(s)


def sample(law, rng, size=None):
    """One draw (or ``size`` draws) from ``law`` using generator ``rng``."""
    if isinstance(law, ObservationLaw):
        law = law.spacing
    return law.sample(rng, size=size)
