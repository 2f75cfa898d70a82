"""Monte Carlo simulation of the observed damage process.

Each observation window draws its length, a Poisson number of strikes, the
total nodes lost over those strikes and their total weight.  The aggregated
draws are exact: a sum of ``k`` geometric node counts is negative binomial,
a sum of finite-discrete counts is a multinomial dot product, and the weight of
``n`` gamma(shape, rate) nodes is gamma(n * shape, rate).

Paths are generated in fixed-size blocks.  Block ``b`` of grid point ``g``
draws from ``SeedSequence(seed, spawn_key=(g, b))``, so results depend only on
``(seed, params, n_paths)`` and never on how blocks are spread over workers.
Means are reduced with :func:`math.fsum`, which is exact and order free.
"""

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np

from .errors import NotReachedError
from .operator.functionals import AUX_EVENTS, EVENTS, validate_args
from .process_model import ProcessParams, Thresholds, TransformArgs

BLOCK_SIZE = 4096
DEFAULT_HORIZON = 10**6
MAX_UNREACHED = 1e-3

ORDER_CLASSES = ("mu<nu", "mu=nu", "mu>nu")


@dataclass
class PathRealization:
    """Observation epochs with cumulative node and weight losses.

    Entry ``n`` holds the state at the ``n``-th observation; entry 0 covers the
    initial window ``[0, tau_0]``.
    """

    obs_times: np.ndarray
    node_cum: np.ndarray
    weight_cum: np.ndarray
    stopped_at: int
    exhausted: bool = False

    def __len__(self):
        return len(self.obs_times)


@dataclass(frozen=True)
class CrossingSummary:
    mu1: int | None
    mu: int | None
    nu: int | None
    rho: int
    states: dict
    ordering: str
    aux_first: bool


@dataclass(frozen=True)
class EstimatorResult:
    value: complex
    std_error: float
    n_paths: int
    seed: int
    n_unreached: int = 0

    @property
    def real(self):
        return float(np.real(self.value))


def _window(p, rng, size, initial):
    law = p.obs_law.delay if initial else p.obs_law.spacing
    dt = np.asarray(law.sample(rng, size=size), dtype=float)
    strikes = rng.poisson(p.lam * dt)
    nodes = p.node_law.sample_sum(rng, strikes)
    weight = p.weight_law.sample_sum(rng, nodes)
    return dt, np.asarray(nodes, dtype=np.int64), np.asarray(weight, dtype=float)


def simulate_path(p, rng, horizon=DEFAULT_HORIZON, stop=True, thresholds=None):
    """One trajectory of the observed process.

    Generation halts at the first observation with ``N > M`` or ``W > V``
    (when ``stop`` is set) or after ``horizon`` observations, whichever comes
    first.  ``exhausted`` flags a path that hit the horizon without crossing.
    """
    if horizon < 1:
        raise ValueError("horizon must be >= 1")
    t = thresholds or p.thresholds
    times, nodes, weights = [], [], []
    tau, n_cum, w_cum = 0.0, 0, 0.0
    for n in range(horizon):
        dt, x, y = _window(p, rng, 1, initial=(n == 0))
        tau += float(dt[0])
        n_cum += int(x[0])
        w_cum += float(y[0])
        times.append(tau)
        nodes.append(n_cum)
        weights.append(w_cum)
        if stop and (n_cum > t.m or w_cum > t.v):
            return PathRealization(np.array(times), np.array(nodes), np.array(weights), n)
    return PathRealization(
        np.array(times), np.array(nodes), np.array(weights), horizon - 1, exhausted=stop
    )


def _first_above(values, level):
    idx = np.flatnonzero(np.asarray(values) > level)
    return int(idx[0]) if idx.size else None


def summarize_crossings(path, t):
    """Exit indices and the process values at and one step before each.

    Raises
    ------
    NotReachedError
        If neither the node nor the weight threshold is crossed on the path.
    """
    mu1 = _first_above(path.node_cum, t.m1)
    mu = _first_above(path.node_cum, t.m)
    nu = _first_above(path.weight_cum, t.v)
    reached = [i for i in (mu, nu) if i is not None]
    if not reached:
        raise NotReachedError("neither threshold crossed within the simulated path")
    rho = min(reached)

    def state(i):
        if i is None:
            return None
        if i < 0:
            return (0, 0.0, 0.0)
        return (int(path.node_cum[i]), float(path.weight_cum[i]), float(path.obs_times[i]))

    states = {}
    for name, idx in (("mu1", mu1), ("mu", mu), ("nu", nu), ("rho", rho)):
        states[name] = state(idx)
        states[name + "-1"] = state(None if idx is None else idx - 1)
    if mu is not None and (nu is None or mu < nu):
        ordering = "mu<nu"
    elif mu is not None and mu == nu:
        ordering = "mu=nu"
    else:
        ordering = "mu>nu"
    aux_first = mu1 is not None and mu1 < rho
    return CrossingSummary(mu1, mu, nu, rho, states, ordering, aux_first)


# vectorized block simulation ---------------------------------------------


@dataclass
class CrossingSample:
    """Recorded crossing states of a batch of paths.

    ``pre`` and ``at`` arrays have shape ``(n, 3)`` holding ``(N, W, tau)``.
    ``aux`` maps each auxiliary level to ``(found, pre, at, index)`` and
    ``rho_index`` is the first observed passage index.
    """

    thresholds: Thresholds
    ordering: np.ndarray
    reached: np.ndarray
    rho_index: np.ndarray
    rho_pre: np.ndarray
    rho_at: np.ndarray
    aux: dict = field(default_factory=dict)
    seed: int = 0

    @property
    def n_paths(self):
        return len(self.reached)

    def event_mask(self, event, m1=None):
        if event not in EVENTS:
            raise ValueError(f"unknown event {event!r}")
        mask = self.reached.copy()
        if event in ("mu<nu", "mu1<mu<nu"):
            mask &= self.ordering == 0
        elif event in ("mu=nu", "mu1<mu=nu"):
            mask &= self.ordering == 1
        elif event in ("mu>nu", "mu1<nu<mu"):
            mask &= self.ordering == 2
        if event in AUX_EVENTS:
            found, _, _, idx = self.aux[self._level(m1)]
            mask &= found & (idx < self.rho_index)
        return mask

    def _level(self, m1):
        m1 = self.thresholds.m1 if m1 is None else m1
        if m1 not in self.aux:
            raise KeyError(f"auxiliary level {m1} was not recorded")
        return m1

    def integrand(self, args, event, m1=None):
        """Per-path value of the functional, zero off the event."""
        validate_args(args, event)
        a = args
        mask = self.event_mask(event, m1)
        expo = (
            a.beta0 * self.rho_pre[:, 1] + a.beta * self.rho_at[:, 1]
            + a.h0 * self.rho_pre[:, 2] + a.h * self.rho_at[:, 2]
        )
        node = _power(a.alpha0, self.rho_pre[:, 0]) * _power(a.alpha, self.rho_at[:, 0])
        if event in AUX_EVENTS:
            _, pre, at, _ = self.aux[self._level(m1)]
            expo = expo + (
                a.v0 * pre[:, 1] + a.v * at[:, 1] + a.theta0 * pre[:, 2] + a.theta * at[:, 2]
            )
            node = node * _power(a.u0, pre[:, 0]) * _power(a.u, at[:, 0])
        vals = node * np.exp(-expo)
        if not a.is_real():
            vals = vals.astype(complex)
        else:
            vals = np.real(vals).astype(float)
        return np.where(mask, vals, 0.0)

    def estimate(self, args=TransformArgs(), event="all", m1=None,
                 max_unreached=MAX_UNREACHED):
        n_bad = int(np.count_nonzero(~self.reached))
        if n_bad > max_unreached * self.n_paths:
            raise NotReachedError(
                f"{n_bad} of {self.n_paths} paths never crossed within the horizon"
            )
        vals = self.integrand(args, event, m1)[self.reached]
        mean, se = _mean_and_error(vals)
        return EstimatorResult(mean, se, self.n_paths, self.seed, n_bad)


def _power(base, expo):
    if base == 1:
        return np.ones(expo.shape)
    return np.power(complex(base) if np.iscomplexobj(base) else float(base), expo)


def _fsum_c(x):
    if np.iscomplexobj(x):
        return complex(math.fsum(np.real(x)), math.fsum(np.imag(x)))
    return math.fsum(x)


def _mean_and_error(vals):
    n = len(vals)
    if n == 0:
        return 0.0, 0.0
    mean = _fsum_c(vals) / n
    if n < 2:
        return mean, 0.0
    dev = np.abs(vals - mean) ** 2
    var = math.fsum(dev) / (n - 1)
    return mean, math.sqrt(var / n)


def _block_rng(seed, point, block):
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(point, block)))


def _simulate_block(p, t, size, rng, m1_levels, horizon):
    N = np.zeros(size, dtype=np.int64)
    W = np.zeros(size)
    T = np.zeros(size)
    prev = np.zeros((size, 3))
    rho_pre = np.zeros((size, 3))
    rho_at = np.zeros((size, 3))
    rho_idx = np.full(size, -1, dtype=np.int64)
    ordering = np.full(size, -1, dtype=np.int8)
    aux = {
        m: [np.zeros(size, dtype=bool), np.zeros((size, 3)), np.zeros((size, 3)),
            np.full(size, np.iinfo(np.int64).max, dtype=np.int64)]
        for m in m1_levels
    }
    active = np.arange(size)
    for n in range(horizon):
        if active.size == 0:
            break
        dt, x, y = _window(p, rng, active.size, initial=(n == 0))
        T[active] += dt
        N[active] += x
        W[active] += y
        cur = np.column_stack([N[active], W[active], T[active]])
        for m, rec in aux.items():
            hit = ~rec[0][active] & (N[active] > m)
            if np.any(hit):
                ids = active[hit]
                rec[0][ids] = True
                rec[1][ids] = prev[ids]
                rec[2][ids] = cur[hit]
                rec[3][ids] = n
        over_n = N[active] > t.m
        over_w = W[active] > t.v
        done = over_n | over_w
        if np.any(done):
            ids = active[done]
            rho_pre[ids] = prev[ids]
            rho_at[ids] = cur[done]
            rho_idx[ids] = n
            ordering[ids] = np.where(over_n[done] & ~over_w[done], 0,
                                     np.where(over_n[done], 1, 2))
        prev[active] = cur
        active = active[~done]
    reached = rho_idx >= 0
    return ordering, reached, rho_idx, rho_pre, rho_at, aux


def simulate_crossings(p, n_paths, seed, m1_levels=None, workers=1,
                       horizon=DEFAULT_HORIZON, point=0, block_size=BLOCK_SIZE):
    """Simulate ``n_paths`` paths up to their first observed passage.

    Parameters
    ----------
    m1_levels : iterable of int, optional
        Auxiliary node levels to record (default: the params' own ``m1``).
        Several levels share the same paths.
    workers : int
        Threads used over blocks.  The output does not depend on it.
    point : int
        Substream label; distinct labels give independent path sets.
    """
    if n_paths < 1:
        raise ValueError("n_paths must be >= 1")
    t = p.thresholds
    levels = tuple(sorted(set(m1_levels if m1_levels is not None else (t.m1,))))
    sizes = [block_size] * (n_paths // block_size)
    if n_paths % block_size:
        sizes.append(n_paths % block_size)

    def run(b):
        return _simulate_block(p, t, sizes[b], _block_rng(seed, point, b), levels, horizon)

    if workers > 1 and len(sizes) > 1:
        with ThreadPoolExecutor(max_workers=workers) as ex:
            parts = list(ex.map(run, range(len(sizes))))
    else:
        parts = [run(b) for b in range(len(sizes))]

    cat = lambda i: np.concatenate([q[i] for q in parts])
    aux = {
        m: tuple(np.concatenate([q[5][m][j] for q in parts]) for j in range(4))
        for m in levels
    }
    return CrossingSample(t, cat(0), cat(1), cat(2), cat(3), cat(4), aux, seed)


def estimate_phi(p, args=TransformArgs(), event="all", n_paths=10**4, seed=0,
                 workers=1, horizon=DEFAULT_HORIZON, max_unreached=MAX_UNREACHED, point=0):
    """Monte Carlo estimate of ``E[integrand; event]`` with its standard error."""
    sample = simulate_crossings(p, n_paths, seed, workers=workers, horizon=horizon,
                                point=point)
    return sample.estimate(args, event, max_unreached=max_unreached)


SWEEP_AXES = ("m1", "m", "v", "lam")


def params_at(p, axis, value):
    """Copy of ``p`` with one sweep axis set to ``value``."""
    if axis in ("m1", "m"):
        return p.with_thresholds(**{axis: int(value)})
    if axis == "v":
        return p.with_thresholds(v=float(value))
    if axis == "lam":
        return replace(p, lam=float(value))
    raise ValueError(f"unknown sweep axis {axis!r}; expected one of {SWEEP_AXES}")


@dataclass(frozen=True)
class SweepRow:
    value: float
    params: ProcessParams
    estimate: EstimatorResult
    analytic: complex | None = None


def sweep(p, args, event, axis, grid, n_paths=10**4, seed=0, workers=1,
          analytic=None, sim_params=None, horizon=DEFAULT_HORIZON):
    """One estimate per grid point, each on its own substream.

    ``analytic(params)`` supplies an optional closed-form column.
    ``sim_params(params)`` maps the evaluated params to the ones simulated
    (used to shift threshold levels between index conventions).
    """
    grid = list(grid)
    if not grid:
        raise ValueError("grid must be nonempty")
    diffs = np.diff(np.asarray(grid, dtype=float))
    if len(grid) > 1 and not (np.all(diffs > 0) or np.all(diffs < 0)):
        raise ValueError("grid must be strictly monotone")
    points = [params_at(p, axis, g) for g in grid]
    rows = []
    for i, (g, q) in enumerate(zip(grid, points)):
        target = sim_params(q) if sim_params else q
        est = estimate_phi(target, args, event, n_paths, seed, workers, horizon, point=i)
        val = analytic(q) if analytic else None
        rows.append(SweepRow(g, q, est, val))
    return rows
