"""Generic evaluation of the threshold-crossing functionals.

A functional is indexed by an event string shared with the simulator:

* two-threshold events (nodes ``M``, weight ``V``): ``"mu<nu"``,
  ``"mu=nu"``, ``"mu>nu"`` and their union ``"all"``;
* auxiliary-threshold events (``M1 < M``): ``"mu1<mu<nu"``,
  ``"mu1<mu=nu"``, ``"mu1<nu<mu"`` and their union ``"mu1<min"``.

:func:`eval_psi` builds the D-transform of the functional as a truncated power
series in the node variables, batched over the weight variable ``w``.
:func:`invert_functional` takes partial sums on the node axes and inverts the
Laplace-Carson transform in ``w`` at the weight threshold.
"""

from dataclasses import dataclass

import numpy as np

from ..errors import DomainError
from ..process_model import ProcessParams, Thresholds, TransformArgs
from .inversion import InversionResult, lc_invert
from .series import TruncatedSeries, d_partial_sum

PAIR_EVENTS = ("mu<nu", "mu=nu", "mu>nu", "all")
AUX_EVENTS = ("mu1<mu<nu", "mu1<mu=nu", "mu1<nu<mu", "mu1<min")
EVENTS = PAIR_EVENTS + AUX_EVENTS
CONVENTIONS = ("proof", "statement")


@dataclass(frozen=True)
class PsiExpression:
    variant: str
    params: ProcessParams
    args: TransformArgs = TransformArgs()

    def __post_init__(self):
        if self.variant not in EVENTS:
            raise ValueError(f"unknown variant {self.variant!r}; expected one of {EVENTS}")

    @property
    def auxiliary(self):
        return self.variant in AUX_EVENTS


def crossing_exponents(variant, thresholds, convention="proof"):
    """Partial-sum orders applied on the node axes.

    ``"proof"`` uses ``(M1 - 1, M - 1)``, ``"statement"`` uses ``(M1, M)``.
    Two-threshold variants only use the ``M`` exponent.
    """
    if convention not in CONVENTIONS:
        raise ValueError(f"convention must be one of {CONVENTIONS}")
    shift = 1 if convention == "proof" else 0
    k_main = thresholds.m - shift
    if variant in PAIR_EVENTS:
        return (k_main,)
    return (thresholds.m1 - shift, k_main)


def crossing_levels(thresholds, convention="proof"):
    """Strict-exceedance levels whose crossing probabilities the inverted
    functional equals.

    Under ``"proof"`` the inversion at ``(M1, M, V)`` describes the first
    observations with ``N >= M1`` and ``N >= M`` (strictly above ``M1 - 1``
    and ``M - 1``).  Under ``"statement"`` it describes strict exceedance of
    ``M1`` and ``M`` themselves.
    """
    if convention not in CONVENTIONS:
        raise ValueError(f"convention must be one of {CONVENTIONS}")
    if convention == "statement":
        return thresholds
    if thresholds.m1 < 1 or thresholds.m < 2:
        raise ValueError("the proof convention needs m1 >= 1 and m >= 2")
    return Thresholds(thresholds.m1 - 1, thresholds.m - 1, thresholds.v)


def _prefix_ok(values):
    # sums of trailing slots must have nonnegative real part
    acc = 0.0
    for x in reversed(values):
        acc = acc + x
        if np.real(acc) < -1e-14:
            return False
    return True


def validate_args(args, variant):
    """Raise :class:`DomainError` unless every increment functional of the
    variant is evaluated inside the closed domain ``|z| <= 1``,
    ``Re(v) >= 0``, ``Re(theta) >= 0``.

    Time and weight arguments may individually be negative as long as every
    trailing sum that multiplies a later (larger) epoch value stays
    nonnegative, e.g. ``theta = -h`` for the time between crossings.
    """
    a = args
    if variant in AUX_EVENTS:
        pgf = (a.u0, a.u, a.alpha0, a.alpha)
        weights = (a.v0, a.v, a.beta0, a.beta)
        times = (a.theta0, a.theta, a.h0, a.h)
    else:
        pgf = (a.alpha0, a.alpha)
        weights = (a.beta0, a.beta)
        times = (a.h0, a.h)
    bad = []
    prod = 1.0
    for x in reversed(pgf):
        prod = prod * x
        if abs(prod) > 1 + 1e-12 or abs(x) > 1 + 1e-12:
            bad.append("node arguments must have modulus <= 1")
            break
    if not _prefix_ok(weights):
        bad.append("weight arguments have a trailing sum with negative real part")
    if not _prefix_ok(times):
        bad.append("time arguments have a trailing sum with negative real part")
    if bad:
        raise DomainError("; ".join(bad))


class _Builder:
    """Increment functionals as series in the node variables."""

    def __init__(self, params, orders):
        self.p = params
        self.orders = orders

    def gamma(self, coeff, powers, v, theta, initial=False):
        p = self.p
        law = p.obs_law.delay if initial else p.obs_law.spacing
        inner = np.asarray(coeff, dtype=complex) * p.weight_law.lst_raw(v)
        z = TruncatedSeries.monomial(inner, powers, self.orders)
        arg = theta + p.lam - p.lam * p.node_law.pgf_series(z)
        return law.lst_series(arg)


def _pair_psi(b, a, w):
    x = (1,)
    none = (0,)
    al0, al, be0, be, h0, h = a.alpha0, a.alpha, a.beta0, a.beta, a.h0, a.h
    g = b.gamma(al0 * al, x, be0 + be + w, h0 + h)
    g0 = b.gamma(al0 * al, x, be0 + be + w, h0 + h, initial=True)
    G = b.gamma(al, x, be + w, h)
    G0 = b.gamma(al, x, be + w, h, initial=True)
    G1 = b.gamma(al, none, be + w, h)
    G01 = b.gamma(al, none, be + w, h, initial=True)
    Z = b.gamma(al, x, be, h)
    Z0 = b.gamma(al, x, be, h, initial=True)
    Z1 = b.gamma(al, none, be, h)
    Z01 = b.gamma(al, none, be, h, initial=True)
    ratio = g0 / (1.0 - g)
    return {
        "mu<nu": G01 - G0 + ratio * (G1 - G),
        "mu=nu": Z01 - Z0 - G01 + G0 + ratio * (Z1 - Z - G1 + G),
        "mu>nu": Z0 - G0 + ratio * (Z - G),
        "all": Z01 - G0 + ratio * (Z1 - G),
    }


def _aux_psi(b, a, w):
    xy, y, none = (1, 1), (0, 1), (0, 0)
    full_z = a.u0 * a.u * a.alpha0 * a.alpha
    full_v = a.v0 + a.v + a.beta0 + a.beta + w
    full_t = a.theta0 + a.theta + a.h0 + a.h
    tail_z = a.u * a.alpha0 * a.alpha
    tail_v = a.v + a.beta0 + a.beta + w
    tail_t = a.theta + a.h0 + a.h
    before = b.gamma(full_z, xy, full_v, full_t)
    before0 = b.gamma(full_z, xy, full_v, full_t, initial=True)
    at = b.gamma(tail_z, xy, tail_v, tail_t)
    at0 = b.gamma(tail_z, xy, tail_v, tail_t, initial=True)
    at1 = b.gamma(tail_z, y, tail_v, tail_t)
    at01 = b.gamma(tail_z, y, tail_v, tail_t, initial=True)
    lead = at01 - at0 + before0 / (1.0 - before) * (at1 - at)

    al0, al, be0, be, h0, h = a.alpha0, a.alpha, a.beta0, a.beta, a.h0, a.h
    mid = b.gamma(al0 * al, y, be0 + be + w, h0 + h)
    chi = b.gamma(al, y, be + w, h)
    chi1 = b.gamma(al, none, be + w, h)
    xi = b.gamma(al, y, be, h)
    xi1 = b.gamma(al, none, be, h)
    scale = lead / (1.0 - mid)
    return {
        "mu1<mu<nu": scale * (chi1 - chi),
        "mu1<mu=nu": scale * (xi1 - xi + chi - chi1),
        "mu1<nu<mu": scale * (xi - chi),
        "mu1<min": scale * (xi1 - chi),
    }


def eval_psi(e, w, orders, all_variants=False):
    """D-transform of the functional ``e`` as a truncated series.

    Parameters
    ----------
    e : PsiExpression
    w : array_like
        Weight-axis Laplace variable(s); becomes the batch axis.  Values with
        negative real part are allowed (analytic continuation for contour
        inversion), so no domain check is made on ``w``.
    orders : tuple of int
        Truncation orders of the node variables: ``(K,)`` for two-threshold
        variants, ``(K1, K)`` for auxiliary ones.
    all_variants : bool
        Return a dict holding every variant of the same family.
    """
    validate_args(e.args, e.variant)
    w = np.asarray(w, dtype=complex)
    orders = tuple(max(int(k), 0) for k in orders)
    want = 2 if e.auxiliary else 1
    if len(orders) != want:
        raise ValueError(f"{e.variant} needs {want} truncation orders, got {orders}")
    b = _Builder(e.params, orders)
    out = (_aux_psi if e.auxiliary else _pair_psi)(b, e.args, w)
    return out if all_variants else out[e.variant]


def _collapse(series, exponents):
    for k in reversed(exponents):
        series = d_partial_sum(series, series.ndim - 1, k)
    return series.value


def invert_functional(e, thresholds=None, convention="proof", method="talbot",
                      full_result=False):
    """Invert the D-transform of ``e`` at ``(M1, M, V)``.

    Node axes are collapsed with partial sums at the exponents given by
    :func:`crossing_exponents`; the weight axis with numerical Laplace-Carson
    inversion at ``V``.

    Returns
    -------
    complex, or :class:`InversionResult` when ``full_result`` is set.
    """
    t = thresholds or e.params.thresholds
    exps = crossing_exponents(e.variant, t, convention)
    if any(k < 0 for k in exps):
        zero = 0.0 + 0.0j
        return InversionResult(zero, 0.0, "exact", zero) if full_result else zero
    orders = tuple(max(k, 0) for k in exps)

    def image(w):
        return _collapse(eval_psi(e, w, orders), exps)

    res = lc_invert(image, t.v, method=method)
    return res if full_result else res.value


def invert_all(params, args, thresholds=None, auxiliary=True, convention="proof",
               method="talbot"):
    """All variants of one family from a single series evaluation per node."""
    t = thresholds or params.thresholds
    family = AUX_EVENTS if auxiliary else PAIR_EVENTS
    e = PsiExpression(family[-1], params, args)
    exps = crossing_exponents(e.variant, t, convention)
    if any(k < 0 for k in exps):
        return {v: 0.0 + 0.0j for v in family}
    out = {}
    orders = tuple(max(k, 0) for k in exps)
    cache = {}

    def image_for(name):
        def image(w):
            key = w.tobytes()
            if key not in cache:
                psi = eval_psi(e, w, orders, all_variants=True)
                cache[key] = {k: _collapse(s, exps) for k, s in psi.items()}
            return cache[key][name]
        return image

    for name in family:
        out[name] = lc_invert(image_for(name), t.v, method=method).value
    return out
