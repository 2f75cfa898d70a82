"""Command-line runner.

Subcommands ``simulate``, ``eval``, ``compare``, ``sweep`` and
``validate-config`` all read one YAML experiment file (schema in
:mod:`damagewalk.config`) and write a CSV with a ``# key: value`` header.
Timestamps and host details go to a ``<out>.meta.json`` sidecar so the CSV
itself is byte-reproducible.

Exit codes: 0 success, 2 invalid configuration, 3 numerical failure,
4 comparison failure, 5 paths that never crossed within the horizon.
"""

import argparse
import csv
import io
import json
import os
import platform
import sys
import time
from dataclasses import replace

import numpy as np

from . import __version__
from .config import ConfigError, load_config
from .distributions import (
    ConstantTime,
    ExponentialTime,
    ExponentialWeight,
    FiniteDiscrete,
    GammaWeight,
    Geometric,
    ZeroDelay,
)
from .errors import (
    DomainError,
    NotReachedError,
    NumericalInstabilityError,
    SingularityError,
    TruncationError,
)
from .model1 import Model1Params, joint_transform_mu1
from .model2 import Model2Params, interval_transform, joint_at_min, joint_at_mu1
from .operator.functionals import PsiExpression, crossing_levels, invert_functional
from .process_model import TransformArgs
from .simulator import estimate_phi

EXIT_OK, EXIT_CONFIG, EXIT_NUMERIC, EXIT_COMPARE, EXIT_HORIZON = 0, 2, 3, 4, 5

COLUMNS = {
    "simulate": ("axis", "value", "empirical", "std_error", "n_paths", "n_unreached"),
    "eval": ("axis", "value", "analytic", "evaluator"),
    "sweep": ("axis", "value", "analytic", "empirical", "std_error", "n_paths", "n_unreached"),
    "compare": ("axis", "value", "analytic", "empirical", "std_error", "abs_z", "pass"),
}


# analytic side ------------------------------------------------------------


def _model2(p):
    if (isinstance(p.node_law, Geometric) and type(p.weight_law) is ExponentialWeight
            and isinstance(p.obs_law.spacing, ExponentialTime)
            and isinstance(p.obs_law.delay, ZeroDelay) and p.thresholds.m1 >= 1):
        t = p.thresholds
        return Model2Params(p.lam, p.node_law.a, p.weight_law.rate, p.obs_law.spacing.rate,
                            t.m1, t.m, t.v)
    return None


def _model1(p):
    if (isinstance(p.node_law, FiniteDiscrete) and isinstance(p.weight_law, GammaWeight)
            and isinstance(p.obs_law.spacing, ConstantTime)
            and isinstance(p.obs_law.delay, ZeroDelay) and p.thresholds.m1 >= 1):
        t = p.thresholds
        return Model1Params(p.lam, p.obs_law.spacing.c, p.node_law.p, p.weight_law.shape,
                            p.weight_law.rate, t.m1, t.m, t.v)
    return None


def _only(args, names):
    neutral = TransformArgs()
    return all(getattr(args, f) == getattr(neutral, f)
               for f in neutral.__dataclass_fields__ if f not in names)


def closed_form(p, event, args, sum_convention="standard"):
    """Closed-form value when one applies, else ``None``."""
    if event != "mu1<min":
        return None
    a = args
    m2 = _model2(p)
    if m2 is not None:
        if _only(a, ("u", "v", "theta")):
            return joint_at_mu1(m2, a.u, a.v, a.theta, sum_convention)
        if _only(a, ("alpha", "beta", "h")):
            return joint_at_min(m2, a.alpha, a.beta, a.h, sum_convention)
        if _only(a, ("theta", "h")) and a.theta == -a.h:
            return interval_transform(m2, a.h, sum_convention)
        return None
    m1 = _model1(p)
    if m1 is not None and _only(a, ("u", "v", "theta")):
        return joint_transform_mu1(m1, a.u, a.v, a.theta)
    return None


def analytic_value(cfg, p):
    """``(value, evaluator name)`` for one grid point."""
    run = cfg.run
    if cfg.evaluator != "generic" and run.convention == "proof":
        val = closed_form(p, cfg.event, cfg.args, run.sum_convention)
        if val is not None:
            return val, "closed"
    if cfg.evaluator == "closed":
        raise DomainError("no closed form applies to this query; use evaluator 'generic'")
    val = invert_functional(PsiExpression(cfg.event, p, cfg.args), convention=run.convention)
    return val, "generic"


def simulated_params(cfg, p):
    """Params whose strict crossing levels match the inverted functional."""
    return replace(p, thresholds=crossing_levels(p.thresholds, cfg.run.convention)) \
        if cfg.run.convention == "proof" and p.thresholds.m1 >= 1 and p.thresholds.m >= 2 \
        else p


# running ------------------------------------------------------------------


def _fmt(x):
    if x is None:
        return ""
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return repr(float(np.real(x)))


def run_config(cfg, mode):
    """Execute one experiment.

    Returns
    -------
    (exit_code, csv_text, sidecar_dict)
    """
    run = cfg.run
    rows, zs = [], []
    evaluators = set()
    for i, (axis, g, p) in enumerate(cfg.points()):
        row = {"axis": axis, "value": g}
        if mode in ("eval", "sweep", "compare"):
            val, how = analytic_value(cfg, p)
            evaluators.add(how)
            row.update(analytic=val, evaluator=how)
        if mode in ("simulate", "sweep", "compare"):
            est = estimate_phi(simulated_params(cfg, p), cfg.args, cfg.event, run.n_paths,
                               run.seed, run.workers, run.horizon, point=i)
            row.update(empirical=est.value, std_error=est.std_error, n_paths=est.n_paths,
                       n_unreached=est.n_unreached)
        if mode == "compare":
            diff = abs(np.real(row["empirical"]) - np.real(row["analytic"]))
            se = row["std_error"]
            z = diff / se if se > 0 else (0.0 if diff == 0 else float("inf"))
            zs.append(z)
            row.update(abs_z=z, **{"pass": z <= run.tolerance})
        rows.append(row)

    meta = {
        "tool": "damagewalk",
        "version": __version__,
        "mode": mode,
        "event": cfg.event,
        "args": ",".join(f"{k}={_fmt(v)}" for k, v in zip(
            TransformArgs.__dataclass_fields__, cfg.args.as_tuple())),
        "seed": run.seed,
        "n_paths": run.n_paths,
        "horizon": run.horizon,
        "convention": run.convention,
        "sum_convention": run.sum_convention,
    }
    if evaluators:
        meta["evaluator"] = ",".join(sorted(evaluators))
    code = EXIT_OK
    if mode == "compare":
        worst = max(zs)
        passed = worst <= run.tolerance
        meta["tolerance"] = _fmt(run.tolerance)
        meta["max_abs_z"] = _fmt(worst)
        meta["verdict"] = "pass" if passed else "fail"
        code = EXIT_OK if passed else EXIT_COMPARE

    buf = io.StringIO()
    for k, v in meta.items():
        buf.write(f"# {k}: {v}\n")
    writer = csv.writer(buf, lineterminator="\n")
    cols = COLUMNS[mode]
    writer.writerow(cols)
    for row in rows:
        writer.writerow([_fmt(row.get(c)) if c not in ("axis", "evaluator") else row.get(c)
                         for c in cols])
    return code, buf.getvalue(), meta


def _write(path, text, sidecar):
    tmp = path + ".tmp"
    with open(tmp, "w", newline="") as fh:
        fh.write(text)
    os.replace(tmp, path)
    with open(path + ".meta.json", "w") as fh:
        json.dump(sidecar, fh, indent=2, sort_keys=True)
        fh.write("\n")


def build_parser():
    ap = argparse.ArgumentParser(prog="damagewalk", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)
    for name in ("simulate", "eval", "compare", "sweep", "validate-config"):
        sp = sub.add_parser(name)
        sp.add_argument("--config", required=True, help="YAML experiment file")
        sp.add_argument("--seed", type=int)
        sp.add_argument("--paths", type=int, dest="n_paths")
        sp.add_argument("--workers", type=int)
        sp.add_argument("--out", help="CSV output path (default: stdout)")
        sp.add_argument("--convention", choices=("proof", "statement"))
        sp.add_argument("--sum-convention", choices=("paper", "standard"), dest="sum_convention")
        sp.add_argument("--tolerance", type=float, help="max |z| for compare to pass")
    return ap


def main(argv=None):
    ns = build_parser().parse_args(argv)
    overrides = {k: getattr(ns, k) for k in
                 ("seed", "n_paths", "workers", "out", "convention", "sum_convention", "tolerance")}
    try:
        cfg = load_config(ns.config, overrides)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    if ns.command == "validate-config":
        print("ok")
        return EXIT_OK
    if ns.command == "sweep" and cfg.sweep_axis is None:
        print("config error: sweep: section required for the sweep command", file=sys.stderr)
        return EXIT_CONFIG
    started = time.time()
    try:
        code, text, meta = run_config(cfg, ns.command)
    except NotReachedError as exc:
        print(f"horizon error: {exc}", file=sys.stderr)
        return EXIT_HORIZON
    except (DomainError, SingularityError, TruncationError, NumericalInstabilityError,
            ArithmeticError) as exc:
        print(f"numeric error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    if cfg.output:
        sidecar = {
            "started": time.strftime("%Y-%m-%dT%H:%M:%S%z", time.localtime(started)),
            "elapsed_s": round(time.time() - started, 3),
            "workers": cfg.run.workers,
            "config": os.path.abspath(ns.config),
            "python": platform.python_version(),
            "numpy": np.__version__,
            "header": meta,
        }
        _write(cfg.output, text, sidecar)
    else:
        sys.stdout.write(text)
    if meta.get("verdict"):
        print(f"verdict: {meta['verdict']} (max |z| = {meta['max_abs_z']})", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
