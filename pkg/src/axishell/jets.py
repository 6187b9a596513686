"""Truncated Taylor-series arithmetic.

Profile descriptors (polynomials, circular arcs) are closed-form, so every
derivative a downstream formula needs can be computed exactly by evaluating
the descriptor in truncated Taylor arithmetic.  This keeps the tight identity
tolerances (1e-12 and below) free of finite-difference noise.
"""

from __future__ import annotations

import math

import numpy as np

__all__ = ["Jet"]


class Jet:
    """Truncated Taylor expansion of a smooth function at a point.

    Stores coefficients ``c[j] = f^(j)(z0) / j!``.  Supports ``+ - * /``,
    integer powers and square roots, mixing freely with plain floats.
    """

    __slots__ = ("c",)

    def __init__(self, coeffs):
        self.c = np.asarray(coeffs, dtype=float)

    @classmethod
    def constant(cls, value: float, order: int) -> "Jet":
        c = np.zeros(order + 1)
        c[0] = value
        return cls(c)

    @classmethod
    def variable(cls, value: float, order: int) -> "Jet":
        """The identity function z -> z expanded at ``value``."""
        c = np.zeros(order + 1)
        c[0] = value
        if order >= 1:
            c[1] = 1.0
        return cls(c)

    @classmethod
    def from_derivatives(cls, derivs) -> "Jet":
        d = np.asarray(derivs, dtype=float)
        fact = np.array([math.factorial(j) for j in range(len(d))])
        return cls(d / fact)

    @property
    def order(self) -> int:
        return len(self.c) - 1

    @property
    def value(self) -> float:
        return float(self.c[0])

    def derivative(self, j: int = 1) -> float:
        if j > self.order:
            raise ValueError(f"jet of order {self.order} has no derivative {j}")
        return float(self.c[j]) * math.factorial(j)

    def derivatives(self) -> np.ndarray:
        """Array ``[f, f', ..., f^(order)]`` at the expansion point."""
        fact = np.array([math.factorial(j) for j in range(self.order + 1)])
        return self.c * fact

    def diff(self) -> "Jet":
        """Jet of the derivative function (one order lower)."""
        if self.order == 0:
            return Jet(np.zeros(1))
        return Jet(self.c[1:] * np.arange(1, self.order + 1))

    # arithmetic ------------------------------------------------------

    def _wrap(self, other) -> "Jet":
        if isinstance(other, Jet):
            return other
        return Jet.constant(float(other), self.order)

    @staticmethod
    def _align(a: "Jet", b: "Jet"):
        n = min(a.order, b.order)
        return a.c[: n + 1], b.c[: n + 1], n

    def __add__(self, other):
        a, b, _ = self._align(self, self._wrap(other))
        return Jet(a + b)

    __radd__ = __add__

    def __sub__(self, other):
        a, b, _ = self._align(self, self._wrap(other))
        return Jet(a - b)

    def __rsub__(self, other):
        a, b, _ = self._align(self, self._wrap(other))
        return Jet(b - a)

    def __neg__(self):
        return Jet(-self.c)

    def __mul__(self, other):
        if not isinstance(other, Jet):
            return Jet(self.c * float(other))
        a, b, n = self._align(self, other)
        return Jet(np.convolve(a, b)[: n + 1])

    __rmul__ = __mul__

    def __truediv__(self, other):
        if not isinstance(other, Jet):
            return Jet(self.c / float(other))
        a, b, n = self._align(self, other)
        if b[0] == 0.0:
            raise ZeroDivisionError("jet division by a jet with zero value")
        q = np.zeros(n + 1)
        q[0] = a[0] / b[0]
        for j in range(1, n + 1):
            q[j] = (a[j] - np.dot(b[1 : j + 1], q[j - 1 :: -1])) / b[0]
        return Jet(q)

    def __rtruediv__(self, other):
        return self._wrap(other).__truediv__(self)

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            raise ValueError("only nonnegative integer powers")
        out = Jet.constant(1.0, self.order)
        for _ in range(n):
            out = out * self
        return out

    def sqrt(self) -> "Jet":
        a = self.c
        if a[0] <= 0.0:
            raise ValueError("jet sqrt needs a positive value part")
        n = self.order
        r = np.zeros(n + 1)
        r[0] = math.sqrt(a[0])
        for j in range(1, n + 1):
            acc = np.dot(r[1:j], r[j - 1 : 0 : -1]) if j >= 2 else 0.0
            r[j] = (a[j] - acc) / (2.0 * r[0])
        return Jet(r)

    def __repr__(self):
        return f"Jet({self.c!r})"

