"""Experiment configuration: YAML schema, validation and parameter building.

Schema (all sections except ``process`` are optional)::

    process:
      lam: 1.0
      node_law:   {type: geometric, a: 0.5}          # or {type: finite, p: [..]}
      weight_law: {type: exponential, rate: 1.0}     # or {type: gamma, shape: 2, rate: 1}
      obs_law:
        spacing: {type: exponential, rate: 1.0}      # or {type: constant, c: 0.5}
        delay:   {type: zero}                        # optional, same types as spacing
      thresholds: {m1: 3, m: 8, v: 10}
    query:
      event: mu1<min                                 # see damagewalk.operator.functionals
      args: {u: 1.0, v: 0.0, theta: 0.0}             # any TransformArgs fields
      evaluator: auto                                # auto | closed | generic
    sweep:
      axis: m1                                       # m1 | m | v | lam
      grid: [1, 2, 3, 4, 5, 6]
    run:
      n_paths: 10000
      seed: 0
      workers: 1
      horizon: 1000000
      convention: proof                              # proof | statement
      sum_convention: standard                       # standard | paper
      tolerance: 3.0                                 # max |z| for a passing comparison
    output:
      path: results.csv
"""

from dataclasses import dataclass, field, fields, replace

import yaml

from . import distributions as dist
from .errors import DomainError
from .operator.functionals import AUX_EVENTS, CONVENTIONS, EVENTS, crossing_levels, validate_args
from .model2 import SUM_CONVENTIONS
from .process_model import ProcessParams, Thresholds, TransformArgs
from .simulator import DEFAULT_HORIZON, SWEEP_AXES, params_at

EVALUATORS = ("auto", "closed", "generic")
MODES = ("simulate", "eval", "compare", "sweep")


class ConfigError(ValueError):
    """Invalid configuration; the message starts with the offending field path."""


@dataclass(frozen=True)
class RunSettings:
    n_paths: int = 10**4
    seed: int = 0
    workers: int = 1
    horizon: int = DEFAULT_HORIZON
    convention: str = "proof"
    sum_convention: str = "standard"
    tolerance: float = 3.0


@dataclass(frozen=True)
class ExperimentConfig:
    process: ProcessParams
    event: str = "mu1<min"
    args: TransformArgs = TransformArgs()
    evaluator: str = "auto"
    sweep_axis: str | None = None
    sweep_grid: tuple = ()
    run: RunSettings = RunSettings()
    output: str | None = None
    source: dict = field(default_factory=dict, compare=False, repr=False)

    def points(self):
        """``(axis, value, params)`` for every grid point (one point if no sweep)."""
        if self.sweep_axis is None:
            return [("none", None, self.process)]
        return [(self.sweep_axis, g, params_at(self.process, self.sweep_axis, g))
                for g in self.sweep_grid]


def _need(d, key, path):
    if not isinstance(d, dict) or key not in d:
        raise ConfigError(f"{path}.{key}: required field missing")
    return d[key]


def _num(x, path, positive=False, integer=False):
    if isinstance(x, bool) or not isinstance(x, (int, float)):
        raise ConfigError(f"{path}: expected a number, got {x!r}")
    if integer and int(x) != x:
        raise ConfigError(f"{path}: expected an integer, got {x!r}")
    if positive and not x > 0:
        raise ConfigError(f"{path}: must be positive, got {x!r}")
    return int(x) if integer else float(x)


def _check_keys(d, allowed, path):
    if not isinstance(d, dict):
        raise ConfigError(f"{path}: expected a mapping")
    extra = sorted(set(d) - set(allowed))
    if extra:
        raise ConfigError(f"{path}: unknown field(s) {', '.join(map(str, extra))}")


def _law(entry, path, kinds):
    kind = _need(entry, "type", path)
    if kind not in kinds:
        raise ConfigError(f"{path}.type: expected one of {sorted(kinds)}, got {kind!r}")
    build, keys = kinds[kind]
    _check_keys(entry, ("type",) + keys, path)
    vals = {k: _need(entry, k, path) for k in keys}
    try:
        return build(**vals)
    except (ValueError, TypeError) as exc:
        raise ConfigError(f"{path}: {exc}") from None


_NODE = {
    "geometric": (lambda a: dist.Geometric(_num(a, "a")), ("a",)),
    "finite": (lambda p: dist.FiniteDiscrete(tuple(p)), ("p",)),
}
_WEIGHT = {
    "exponential": (lambda rate: dist.ExponentialWeight(rate=_num(rate, "rate")), ("rate",)),
    "gamma": (lambda shape, rate: dist.GammaWeight(_num(shape, "shape"), _num(rate, "rate")),
              ("shape", "rate")),
}
_TIME = {
    "exponential": (lambda rate: dist.ExponentialTime(_num(rate, "rate")), ("rate",)),
    "constant": (lambda c: dist.ConstantTime(_num(c, "c")), ("c",)),
}
_DELAY = dict(_TIME, zero=(lambda: dist.ZeroDelay(), ()))


def _process(d):
    path = "process"
    _check_keys(d, ("lam", "node_law", "weight_law", "obs_law", "thresholds"), path)
    lam = _num(_need(d, "lam", path), "process.lam", positive=True)
    node = _law(_need(d, "node_law", path), "process.node_law", _NODE)
    weight = _law(_need(d, "weight_law", path), "process.weight_law", _WEIGHT)
    obs = _need(d, "obs_law", path)
    _check_keys(obs, ("spacing", "delay"), "process.obs_law")
    spacing = _law(_need(obs, "spacing", "process.obs_law"), "process.obs_law.spacing", _TIME)
    delay = _law(obs.get("delay", {"type": "zero"}), "process.obs_law.delay", _DELAY)
    th = _need(d, "thresholds", path)
    _check_keys(th, ("m1", "m", "v"), "process.thresholds")
    tp = "process.thresholds"
    try:
        thresholds = Thresholds(
            _num(_need(th, "m1", tp), tp + ".m1", integer=True),
            _num(_need(th, "m", tp), tp + ".m", integer=True),
            _num(_need(th, "v", tp), tp + ".v"),
        )
    except ValueError as exc:
        raise ConfigError(f"{tp}: {exc}") from None
    return ProcessParams(lam, node, weight, dist.ObservationLaw(spacing, delay), thresholds)


def parse_config(raw):
    """Validate a parsed YAML mapping and build an :class:`ExperimentConfig`."""
    if not isinstance(raw, dict):
        raise ConfigError("<root>: expected a mapping")
    _check_keys(raw, ("process", "query", "sweep", "run", "output"), "<root>")
    process = _process(_need(raw, "process", "<root>"))

    q = raw.get("query") or {}
    _check_keys(q, ("event", "args", "evaluator"), "query")
    event = q.get("event", "mu1<min")
    if event not in EVENTS:
        raise ConfigError(f"query.event: expected one of {list(EVENTS)}, got {event!r}")
    evaluator = q.get("evaluator", "auto")
    if evaluator not in EVALUATORS:
        raise ConfigError(f"query.evaluator: expected one of {list(EVALUATORS)}")
    arg_names = [f.name for f in fields(TransformArgs)]
    a = q.get("args") or {}
    _check_keys(a, arg_names, "query.args")
    args = TransformArgs(**{k: _num(v, f"query.args.{k}") for k, v in a.items()})

    axis, grid = None, ()
    if raw.get("sweep") is not None:
        s = raw["sweep"]
        _check_keys(s, ("axis", "grid"), "sweep")
        axis = _need(s, "axis", "sweep")
        if axis not in SWEEP_AXES:
            raise ConfigError(f"sweep.axis: expected one of {list(SWEEP_AXES)}, got {axis!r}")
        grid = _need(s, "grid", "sweep")
        if not isinstance(grid, list) or not grid:
            raise ConfigError("sweep.grid: expected a nonempty list")
        grid = tuple(_num(g, f"sweep.grid[{i}]", integer=axis in ("m1", "m"))
                     for i, g in enumerate(grid))
        steps = [b - a for a, b in zip(grid, grid[1:])]
        if steps and not (all(x > 0 for x in steps) or all(x < 0 for x in steps)):
            raise ConfigError("sweep.grid: must be strictly monotone")
        for i, g in enumerate(grid):
            try:
                params_at(process, axis, g)
            except ValueError as exc:
                raise ConfigError(f"sweep.grid[{i}]: {exc}") from None

    r = raw.get("run") or {}
    _check_keys(r, [f.name for f in fields(RunSettings)], "run")
    run = RunSettings(
        n_paths=_num(r.get("n_paths", 10**4), "run.n_paths", positive=True, integer=True),
        seed=_num(r.get("seed", 0), "run.seed", integer=True),
        workers=_num(r.get("workers", 1), "run.workers", positive=True, integer=True),
        horizon=_num(r.get("horizon", DEFAULT_HORIZON), "run.horizon", positive=True, integer=True),
        convention=r.get("convention", "proof"),
        sum_convention=r.get("sum_convention", "standard"),
        tolerance=_num(r.get("tolerance", 3.0), "run.tolerance", positive=True),
    )
    if run.seed < 0:
        raise ConfigError("run.seed: must be nonnegative")
    if run.convention not in CONVENTIONS:
        raise ConfigError(f"run.convention: expected one of {list(CONVENTIONS)}")
    if run.sum_convention not in SUM_CONVENTIONS:
        raise ConfigError(f"run.sum_convention: expected one of {list(SUM_CONVENTIONS)}")

    o = raw.get("output") or {}
    _check_keys(o, ("path",), "output")
    cfg = ExperimentConfig(process, event, args, evaluator, axis, grid, run, o.get("path"), raw)
    validate_semantics(cfg)
    return cfg


def validate_semantics(cfg):
    """Cross-field checks that need the whole configuration."""
    try:
        validate_args(cfg.args, cfg.event)
    except DomainError as exc:
        raise ConfigError(f"query.args: {exc}") from None
    for i, (_, _, p) in enumerate(cfg.points()):
        where = "process.thresholds" if cfg.sweep_axis is None else f"sweep.grid[{i}]"
        if cfg.run.convention == "proof" and cfg.event in AUX_EVENTS:
            try:
                crossing_levels(p.thresholds, "proof")
            except ValueError as exc:
                raise ConfigError(f"{where}: {exc}") from None


def load_config(path, overrides=None):
    """Read a YAML file, apply command-line overrides to ``run``/``output``."""
    try:
        with open(path) as fh:
            raw = yaml.safe_load(fh)
    except OSError as exc:
        raise ConfigError(f"<file>: cannot read {path}: {exc.strerror}") from None
    except yaml.YAMLError as exc:
        raise ConfigError(f"<file>: invalid YAML: {exc}") from None
    if overrides:
        raw = dict(raw or {})
        run = dict(raw.get("run") or {})
        for k, v in overrides.items():
            if v is None:
                continue
            if k == "out":
                raw["output"] = dict(raw.get("output") or {}, path=v)
            else:
                run[k] = v
        raw["run"] = run
    return parse_config(raw)


def with_run(cfg, **kw):
    return replace(cfg, run=replace(cfg.run, **kw))
