"""Special functions used by the closed-form evaluators.

Regularized lower incomplete gamma, polylogarithms of nonpositive integer
order in rational form, and enumeration of bounded integer compositions with
their multinomial-free weights.
"""

from dataclasses import dataclass
from functools import lru_cache
from math import factorial, isclose

import numpy as np
from scipy import special as sp

from .errors import DomainError


def reg_gamma_p(shape, x):
    r"""Regularized lower incomplete gamma :math:`P(a, x) = \gamma(a, x)/\Gamma(a)`.

    Parameters
    ----------
    shape : float
        Positive shape parameter ``a``.
    x : float or complex
        Nonnegative real argument. Complex arguments are accepted only for
        integer shapes, where the finite Poisson-sum form applies.

    Returns
    -------
    float or complex
        ``P(shape, x)``, the distribution function of Gamma(shape, 1) at ``x``.
    """
    if shape <= 0:
        raise DomainError(f"reg_gamma_p needs shape > 0, got {shape}")
    if isinstance(x, complex) or np.iscomplexobj(x):
        x = complex(x)
        if x.imag == 0.0:
            x = x.real
        else:
            n = int(round(shape))
            if not isclose(n, shape, abs_tol=1e-12):
                raise DomainError("complex argument needs an integer shape")
            return poisson_tail(n, x)
    if x < 0:
        raise DomainError(f"reg_gamma_p needs x >= 0, got {x}")
    return float(sp.gammainc(shape, x))


def poisson_tail(n, x):
    r""":math:`e^{-x}\sum_{i \ge n} x^i/i!` for integer ``n >= 0`` and complex ``x``.

    Equals ``P(n, x)`` for ``n >= 1`` and 1 for ``n == 0``.
    """
    if n <= 0:
        return 1.0 + 0.0j
    x = complex(x)
    if abs(x) > n:
        term, head = 1.0 + 0.0j, 0.0j
        for i in range(n):
            head += term
            term *= x / (i + 1)
        return 1.0 - np.exp(-x) * head
    # summing the tail directly avoids cancellation for small |x|
    term = complex(np.exp(-x))
    for i in range(n):
        term *= x / (i + 1)
    total, i = 0.0j, n
    while True:
        total += term
        i += 1
        term *= x / i
        if abs(term) <= 1e-17 * abs(total) or i > n + 400:
            return total


@lru_cache(maxsize=None)
def eulerian_row(n):
    """Eulerian numbers ``A(n, 0..n-1)`` as exact integers."""
    row = [1]
    for m in range(2, n + 1):
        nxt = [0] * m
        for k in range(m):
            left = row[k] if k < m - 1 else 0
            right = row[k - 1] if k >= 1 else 0
            nxt[k] = (k + 1) * left + (m - k) * right
        row = nxt
    return tuple(row)


def polylog_nonpos(order, z):
    r"""Polylogarithm :math:`\mathrm{Li}_{s}(z)` for integer ``s <= 0``.

    Uses the rational form :math:`\mathrm{Li}_{-n}(z) = z\,A_n(z)/(1-z)^{n+1}`
    with Eulerian polynomial :math:`A_n`, so there is no series truncation.
    Accepts real ``z`` in ``(0, 1)`` (or ``[0, 1)``) and complex ``|z| < 1``.
    """
    order = int(order)
    if order > 0:
        raise DomainError(f"order must be <= 0, got {order}")
    z_arr = np.asarray(z)
    if np.iscomplexobj(z_arr):
        if np.any(np.abs(z_arr) >= 1):
            raise DomainError("polylog_nonpos needs |z| < 1")
    elif np.any(z_arr >= 1) or np.any(z_arr < 0):
        raise DomainError("polylog_nonpos needs 0 <= z < 1")
    n = -order
    if n == 0:
        out = z_arr / (1 - z_arr)
    else:
        coeffs = eulerian_row(n)
        poly = np.zeros_like(z_arr, dtype=np.result_type(z_arr, float))
        for c in reversed(coeffs):
            poly = poly * z_arr + c
        out = z_arr * poly / (1 - z_arr) ** (n + 1)
    return out.item() if out.ndim == 0 else out


@dataclass(frozen=True)
class CompositionConstraint:
    """Vectors ``beta`` in N0^R with ``sum(beta) == total`` and
    ``sum(i * beta_i) == weighted_total`` (parts indexed from 1)."""

    R: int
    total: int
    weighted_total: int

    def __post_init__(self):
        if self.R < 1:
            raise ValueError("R must be >= 1")
        if self.total < 0:
            raise ValueError("total must be >= 0")


@lru_cache(maxsize=4096)
def _compositions(R, total, weighted):
    if total < 0 or weighted < total or weighted > R * total:
        return ()
    out = []

    def dfs(i, left, wleft, prefix):
        # i is the part size handled at this depth (1-based)
        if i == R:
            if wleft == R * left:
                out.append(tuple(prefix) + (left,))
            return
        # remaining parts i+1..R must absorb (left - k) units and (wleft - i k) weight
        for k in range(left + 1):
            rest, wrest = left - k, wleft - i * k
            if wrest < (i + 1) * rest or wrest > R * rest:
                continue
            prefix.append(k)
            dfs(i + 1, rest, wrest, prefix)
            prefix.pop()

    dfs(1, total, weighted, [])
    return tuple(out)


def enumerate_compositions(c, p):
    r"""All ``beta`` satisfying ``c`` with weight :math:`\prod_i p_i^{\beta_i}/\beta_i!`.

    Parameters
    ----------
    c : CompositionConstraint
    p : sequence of float
        Probability vector of length ``c.R``.

    Returns
    -------
    list of (tuple, float)
    """
    if len(p) != c.R:
        raise ValueError(f"p has length {len(p)}, constraint expects R={c.R}")
    out = []
    for beta in _compositions(c.R, c.total, c.weighted_total):
        w = 1.0
        for pi, bi in zip(p, beta):
            if bi:
                w *= pi**bi / factorial(bi)
        out.append((beta, w))
    return out
