"""Truncated multivariate power series with batched complex coefficients.

Coefficients live in an array of shape ``batch + (K1+1, ..., Kd+1)``; the
batch axes carry the remaining Laplace variable (one entry per quadrature
node), so one series object evaluates a whole contour at once.  All
arithmetic is exact through the truncation orders.
"""

from itertools import product

import numpy as np

from ..errors import SingularityError, TruncationError

RECIPROCAL_MARGIN = 1e-10


class TruncatedSeries:
    __slots__ = ("coeffs", "orders")

    def __init__(self, coeffs, orders):
        orders = tuple(int(k) for k in orders)
        coeffs = np.asarray(coeffs, dtype=complex)
        if coeffs.ndim < len(orders) or (
            orders and coeffs.shape[-len(orders):] != tuple(k + 1 for k in orders)
        ):
            raise ValueError(f"coefficient shape {coeffs.shape} does not match orders {orders}")
        self.coeffs = coeffs
        self.orders = orders

    # construction ---------------------------------------------------------

    @classmethod
    def constant(cls, value, orders):
        value = np.asarray(value, dtype=complex)
        c = np.zeros(value.shape + tuple(k + 1 for k in orders), dtype=complex)
        c[(...,) + (0,) * len(orders)] = value
        return cls(c, orders)

    @classmethod
    def monomial(cls, coeff, powers, orders):
        """``coeff * prod(x_i ** powers[i])``; zero if any power exceeds its order."""
        coeff = np.asarray(coeff, dtype=complex)
        c = np.zeros(coeff.shape + tuple(k + 1 for k in orders), dtype=complex)
        if all(p <= k for p, k in zip(powers, orders)):
            c[(...,) + tuple(powers)] = coeff
        return cls(c, orders)

    @classmethod
    def from_coefficients(cls, coeffs):
        coeffs = np.asarray(coeffs, dtype=complex)
        return cls(coeffs, tuple(s - 1 for s in coeffs.shape))

    @property
    def ndim(self):
        return len(self.orders)

    @property
    def batch_shape(self):
        return self.coeffs.shape[: self.coeffs.ndim - self.ndim]

    @property
    def const(self):
        return self.coeffs[(...,) + (0,) * self.ndim]

    @property
    def value(self):
        """The batch of scalars held by a series with no variables left."""
        if self.ndim:
            raise ValueError("series still has free variables")
        return self.coeffs

    def _lift(self, scalar):
        # batch scalar -> broadcastable against coefficient array
        s = np.asarray(scalar, dtype=complex)
        return s.reshape(s.shape + (1,) * self.ndim)

    def _coerce(self, other):
        if isinstance(other, TruncatedSeries):
            if other.orders != self.orders:
                raise ValueError(f"order mismatch {self.orders} vs {other.orders}")
            return other
        return None

    # arithmetic -----------------------------------------------------------

    def __add__(self, other):
        o = self._coerce(other)
        if o is not None:
            return TruncatedSeries(self.coeffs + o.coeffs, self.orders)
        c = self.coeffs + 0.0
        c = np.broadcast_to(c, np.broadcast_shapes(c.shape, self._lift(other).shape)).copy()
        c[(...,) + (0,) * self.ndim] += np.asarray(other, dtype=complex)
        return TruncatedSeries(c, self.orders)

    __radd__ = __add__

    def __neg__(self):
        return TruncatedSeries(-self.coeffs, self.orders)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return TruncatedSeries(self.coeffs * self._lift(other), self.orders)
        a, b = self.coeffs, o.coeffs
        shape = np.broadcast_shapes(a.shape, b.shape)
        out = np.zeros(shape, dtype=complex)
        nz = np.any(a != 0, axis=tuple(range(a.ndim - self.ndim)))
        for idx in zip(*np.nonzero(nz)) if self.ndim else [()]:
            dst = (...,) + tuple(slice(i, None) for i in idx)
            src = (...,) + tuple(slice(0, k + 1 - i) for i, k in zip(idx, self.orders))
            out[dst] += a[(...,) + idx][(...,) + (None,) * self.ndim] * b[src]
        return TruncatedSeries(out, self.orders)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, TruncatedSeries):
            return self * other.reciprocal()
        return self * (1.0 / np.asarray(other, dtype=complex))

    def __rtruediv__(self, other):
        return self.reciprocal() * other

    def _nilpotent_part(self):
        c = self.coeffs.copy()
        c[(...,) + (0,) * self.ndim] = 0.0
        return TruncatedSeries(c, self.orders)

    def reciprocal(self, margin=RECIPROCAL_MARGIN):
        f0 = self.const
        if np.any(np.abs(f0) < margin):
            raise SingularityError("constant term too close to zero for reciprocal")
        g = self._nilpotent_part() * (-1.0 / f0)
        term = TruncatedSeries.constant(np.ones_like(f0), self.orders)
        acc = term
        for _ in range(sum(self.orders)):
            term = term * g
            acc = acc + term
        return acc * (1.0 / f0)

    def exp(self):
        f0 = self.const
        g = self._nilpotent_part()
        term = TruncatedSeries.constant(np.ones_like(f0), self.orders)
        acc = term
        for k in range(1, sum(self.orders) + 1):
            term = term * g * (1.0 / k)
            acc = acc + term
        return acc * np.exp(f0)

    def __pow__(self, n):
        n = int(n)
        if n < 0:
            return self.reciprocal() ** (-n)
        out = TruncatedSeries.constant(np.ones(self.batch_shape), self.orders)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    # inspection -----------------------------------------------------------

    def coefficient(self, *powers):
        return self.coeffs[(...,) + tuple(powers)]

    def evaluate(self, *point):
        """Evaluate the truncated polynomial at a point (one value per variable)."""
        out = np.zeros(self.batch_shape, dtype=complex)
        for idx in product(*(range(k + 1) for k in self.orders)):
            mon = 1.0
            for x, i in zip(point, idx):
                mon = mon * x**i
            out = out + self.coeffs[(...,) + idx] * mon
        return out

    def __repr__(self):
        return f"TruncatedSeries(orders={self.orders}, batch={self.batch_shape})"


def d_partial_sum(series, axis, k):
    """Inverse D-operator along one axis: sum of the coefficients of powers ``0..k``.

    ``k < 0`` gives the zero series.  The result has ``axis`` removed.
    """
    axis = int(axis)
    if not 0 <= axis < series.ndim:
        raise ValueError(f"axis {axis} out of range for {series.ndim} variables")
    if k > series.orders[axis]:
        raise TruncationError(
            f"need order {k} on axis {axis}, series only has {series.orders[axis]}"
        )
    orders = series.orders[:axis] + series.orders[axis + 1:]
    ax = series.coeffs.ndim - series.ndim + axis
    if k < 0:
        shape = series.coeffs.shape[:ax] + series.coeffs.shape[ax + 1:]
        return TruncatedSeries(np.zeros(shape, dtype=complex), orders)
    idx = [slice(None)] * series.coeffs.ndim
    idx[ax] = slice(0, k + 1)
    return TruncatedSeries(series.coeffs[tuple(idx)].sum(axis=ax), orders)
