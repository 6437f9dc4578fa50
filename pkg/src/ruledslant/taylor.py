"""Truncated Taylor arithmetic (forward-mode jets) on numpy arrays.

A :class:`Jet` holds the normalized Taylor coefficients ``c[k] = f^(k)(x)/k!``
of a function at every point of a sample array.  Arithmetic propagates the
coefficients exactly up to the truncation order, so derivatives of analytic
inputs come out at rounding-level accuracy instead of finite-difference noise.
"""
from __future__ import annotations

from math import factorial

import numpy as np


class Jet:
    __slots__ = ("c",)

    def __init__(self, coeffs):
        self.c = np.asarray(coeffs, dtype=float)

    # construction -------------------------------------------------------
    @classmethod
    def variable(cls, x, order: int) -> "Jet":
        x = np.asarray(x, dtype=float)
        c = np.zeros((order + 1,) + x.shape)
        c[0] = x
        if order >= 1:
            c[1] = 1.0
        return cls(c)

    @classmethod
    def constant(cls, value, like: "Jet") -> "Jet":
        c = np.zeros_like(like.c)
        c[0] = value
        return cls(c)

    @classmethod
    def from_derivatives(cls, derivs) -> "Jet":
        """Build from a sequence ``[f, f', f'', ...]`` of equally shaped arrays."""
        derivs = [np.asarray(d, dtype=float) for d in derivs]
        return cls(np.stack([d / factorial(k) for k, d in enumerate(derivs)]))

    # accessors ----------------------------------------------------------
    @property
    def order(self) -> int:
        return self.c.shape[0] - 1

    @property
    def value(self) -> np.ndarray:
        return self.c[0]

    def derivative(self, k: int) -> np.ndarray:
        """k-th derivative values (``k <= order``)."""
        return self.c[k] * factorial(k)

    def derivatives(self) -> list[np.ndarray]:
        return [self.derivative(k) for k in range(self.order + 1)]

    def d(self) -> "Jet":
        """Jet of the derivative; loses one order."""
        k = np.arange(1, self.order + 1).reshape((-1,) + (1,) * (self.c.ndim - 1))
        return Jet(self.c[1:] * k)

    def truncate(self, order: int) -> "Jet":
        return Jet(self.c[: order + 1])

    def __getitem__(self, idx) -> "Jet":
        # indexes the sample axes, never the coefficient axis
        if not isinstance(idx, tuple):
            idx = (idx,)
        return Jet(self.c[(slice(None),) + idx])

    def __repr__(self):
        return f"Jet(order={self.order}, shape={self.c.shape[1:]})"

    # arithmetic ---------------------------------------------------------
    def _coerce(self, other):
        if isinstance(other, Jet):
            n = min(self.order, other.order)
            return self.truncate(n), other.truncate(n)
        return self, Jet.constant(other, self)

    def __add__(self, other):
        a, b = self._coerce(other)
        return Jet(a.c + b.c)

    __radd__ = __add__

    def __sub__(self, other):
        a, b = self._coerce(other)
        return Jet(a.c - b.c)

    def __rsub__(self, other):
        a, b = self._coerce(other)
        return Jet(b.c - a.c)

    def __neg__(self):
        return Jet(-self.c)

    def __mul__(self, other):
        if not isinstance(other, Jet):
            return Jet(self.c * other)
        a, b = self._coerce(other)
        n = a.order
        out = np.zeros(np.broadcast_shapes(a.c.shape, b.c.shape))
        for k in range(n + 1):
            acc = a.c[0] * b.c[k]
            for j in range(1, k + 1):
                acc = acc + a.c[j] * b.c[k - j]
            out[k] = acc
        return Jet(out)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if not isinstance(other, Jet):
            return Jet(self.c / other)
        a, b = self._coerce(other)
        return a * b.reciprocal()

    def __rtruediv__(self, other):
        return self.reciprocal() * other

    def reciprocal(self) -> "Jet":
        a = self.c
        out = np.zeros_like(a)
        out[0] = 1.0 / a[0]
        for k in range(1, self.order + 1):
            acc = np.zeros_like(a[0])
            for j in range(1, k + 1):
                acc = acc + a[j] * out[k - j]
            out[k] = -acc / a[0]
        return Jet(out)

    def ipow(self, n: int) -> "Jet":
        """Integer power by repeated squaring (valid for negative bases)."""
        if n < 0:
            return self.ipow(-n).reciprocal()
        result = Jet.constant(1.0, self)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def rpow(self, p: float) -> "Jet":
        """Real power ``self**p`` for a positive base."""
        a = self.c
        out = np.zeros_like(a)
        out[0] = a[0] ** p
        for k in range(1, self.order + 1):
            acc = np.zeros_like(a[0])
            for j in range(1, k + 1):
                acc = acc + (p * j - (k - j)) * a[j] * out[k - j]
            out[k] = acc / (k * a[0])
        return Jet(out)

    def dot(self, other: "Jet") -> "Jet":
        """Inner product over the trailing axis (vector jets)."""
        a, b = self._coerce(other)
        return Jet((a * b).c.sum(axis=-1))

    def cross(self, other: "Jet") -> "Jet":
        a, b = self._coerce(other)
        n = a.order
        out = np.zeros(np.broadcast_shapes(a.c.shape, b.c.shape))
        for k in range(n + 1):
            acc = np.cross(a.c[0], b.c[k])
            for j in range(1, k + 1):
                acc = acc + np.cross(a.c[j], b.c[k - j])
            out[k] = acc
        return Jet(out)

    def scale_rows(self, s: "Jet") -> "Jet":
        """Multiply a vector jet by a scalar jet of matching sample shape."""
        return Jet(s.c[..., None]) * self


# Elementary functions.  Each uses the recurrence y_k = (1/k) sum j a_j g_{k-j}
# for y = F(a) with F'(a) = g, or a dedicated two-term recurrence.

def _chain(a: Jet, y0, g: Jet) -> Jet:
    out = np.zeros_like(a.c)
    out[0] = y0
    for k in range(1, a.order + 1):
        acc = np.zeros_like(a.c[0])
        for j in range(1, k + 1):
            acc = acc + j * a.c[j] * g.c[k - j]
        out[k] = acc / k
    return Jet(out)


def sincos(a: Jet) -> tuple[Jet, Jet]:
    s = np.zeros_like(a.c)
    c = np.zeros_like(a.c)
    s[0] = np.sin(a.c[0])
    c[0] = np.cos(a.c[0])
    for k in range(1, a.order + 1):
        acc_s = np.zeros_like(a.c[0])
        acc_c = np.zeros_like(a.c[0])
        for j in range(1, k + 1):
            acc_s = acc_s + j * a.c[j] * c[k - j]
            acc_c = acc_c + j * a.c[j] * s[k - j]
        s[k] = acc_s / k
        c[k] = -acc_c / k
    return Jet(s), Jet(c)


def sin(a: Jet) -> Jet:
    return sincos(a)[0]


def cos(a: Jet) -> Jet:
    return sincos(a)[1]


def tan(a: Jet) -> Jet:
    s, c = sincos(a)
    return s / c


def exp(a: Jet) -> Jet:
    out = np.zeros_like(a.c)
    out[0] = np.exp(a.c[0])
    for k in range(1, a.order + 1):
        acc = np.zeros_like(a.c[0])
        for j in range(1, k + 1):
            acc = acc + j * a.c[j] * out[k - j]
        out[k] = acc / k
    return Jet(out)


def log(a: Jet) -> Jet:
    out = np.zeros_like(a.c)
    out[0] = np.log(a.c[0])
    for k in range(1, a.order + 1):
        acc = np.zeros_like(a.c[0])
        for j in range(1, k):
            acc = acc + j * out[j] * a.c[k - j]
        out[k] = (a.c[k] - acc / k) / a.c[0]
    return Jet(out)


def sqrt(a: Jet) -> Jet:
    return a.rpow(0.5)


def atan(a: Jet) -> Jet:
    g = (1.0 + a * a).reciprocal()
    return _chain(a, np.arctan(a.c[0]), g)


def absolute(a: Jet) -> Jet:
    return Jet(a.c * np.sign(a.c[0]))


def norm(v: Jet) -> Jet:
    return sqrt(v.dot(v))


def normalize(v: Jet) -> Jet:
    return v.scale_rows(norm(v).reciprocal())
