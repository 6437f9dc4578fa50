"""Hot inner loops: stencil application and the RK4 frame integrator.

Every kernel exists twice, a numba ``@njit`` version and a pure-numpy one.
``RULEDSLANT_PURE_NUMPY=1`` in the environment (or numba missing) selects the
numpy path.  Both paths use the same summation order, so they agree to the
last bit on IEEE hardware; the test-suite checks that they agree to 1e-14.
"""
from __future__ import annotations

import os

import numpy as np

try:
    import numba
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba = None

USE_NUMBA = numba is not None and os.environ.get("RULEDSLANT_PURE_NUMPY", "") in ("", "0")


def _jit(fn):
    if numba is None:
        return fn
    return numba.njit(cache=True, nogil=True)(fn)


# -- stencils ----------------------------------------------------------------

def _stencil_py(f, central, left, right, denom):
    n, ncol = f.shape
    wc = central.shape[0]
    half = wc // 2
    m, wb = left.shape
    out = np.zeros((n, ncol))
    acc = np.zeros(ncol)
    # interior: accumulate shifted slices in stencil order
    for j in range(wc):
        if central[j] != 0.0:
            out[m:n - m] += central[j] * f[m - half + j:n - m - half + j]
    for i in range(m):
        acc[:] = 0.0
        for j in range(wb):
            acc += left[i, j] * f[j]
        out[i] = acc
        acc[:] = 0.0
        for j in range(wb):
            acc += right[i, j] * f[n - wb + j]
        out[n - m + i] = acc
    return out / denom


def _stencil_nb(f, central, left, right, denom):
    n, ncol = f.shape
    wc = central.shape[0]
    half = wc // 2
    m, wb = left.shape
    out = np.zeros((n, ncol))
    for k in range(ncol):
        for i in range(m, n - m):
            acc = 0.0
            for j in range(wc):
                if central[j] != 0.0:
                    acc += central[j] * f[i - half + j, k]
            out[i, k] = acc / denom
        for i in range(m):
            acc = 0.0
            for j in range(wb):
                acc += left[i, j] * f[j, k]
            out[i, k] = acc / denom
            acc = 0.0
            for j in range(wb):
                acc += right[i, j] * f[n - wb + j, k]
            out[n - m + i, k] = acc / denom
    return out


stencil_numpy = _stencil_py
stencil_numba = _jit(_stencil_nb)


def apply_stencil(f, central, left, right, denom):
    """Apply integer-numerator stencils to the columns of ``f`` (shape (N, K))."""
    f = np.ascontiguousarray(f, dtype=float)
    if USE_NUMBA:
        return stencil_numba(f, central, left, right, float(denom))
    return stencil_numpy(f, central, left, right, float(denom))


# -- RK4 on the ruled-surface Frenet system -------------------------------------
# state layout: c[0:3], q[3:6], h[6:9], a[9:12]

def _rhs(y, k1, k2, cphi, sphi, out):
    for i in range(3):
        q = y[3 + i]
        h = y[6 + i]
        a = y[9 + i]
        out[i] = cphi * q + sphi * a
        out[3 + i] = k1 * h
        out[6 + i] = -k1 * q + k2 * a
        out[9 + i] = -k2 * h


def _reorthonormalize(y):
    nq = np.sqrt(y[3] * y[3] + y[4] * y[4] + y[5] * y[5])
    for i in range(3):
        y[3 + i] /= nq
    d = y[3] * y[6] + y[4] * y[7] + y[5] * y[8]
    for i in range(3):
        y[6 + i] -= d * y[3 + i]
    nh = np.sqrt(y[6] * y[6] + y[7] * y[7] + y[8] * y[8])
    for i in range(3):
        y[6 + i] /= nh
    y[9] = y[4] * y[8] - y[5] * y[7]
    y[10] = y[5] * y[6] - y[3] * y[8]
    y[11] = y[3] * y[7] - y[4] * y[6]


def _rk4_body(k1s, k2s, cphis, sphis, y0, step, rhs, reortho):
    n = (k1s.shape[0] + 1) // 2
    out = np.zeros((n, 12))
    y = y0.copy()
    out[0] = y
    d1 = np.zeros(12)
    d2 = np.zeros(12)
    d3 = np.zeros(12)
    d4 = np.zeros(12)
    tmp = np.zeros(12)
    for i in range(n - 1):
        j = 2 * i
        rhs(y, k1s[j], k2s[j], cphis[j], sphis[j], d1)
        for k in range(12):
            tmp[k] = y[k] + 0.5 * step * d1[k]
        rhs(tmp, k1s[j + 1], k2s[j + 1], cphis[j + 1], sphis[j + 1], d2)
        for k in range(12):
            tmp[k] = y[k] + 0.5 * step * d2[k]
        rhs(tmp, k1s[j + 1], k2s[j + 1], cphis[j + 1], sphis[j + 1], d3)
        for k in range(12):
            tmp[k] = y[k] + step * d3[k]
        rhs(tmp, k1s[j + 2], k2s[j + 2], cphis[j + 2], sphis[j + 2], d4)
        for k in range(12):
            y[k] += step / 6.0 * (d1[k] + 2.0 * d2[k] + 2.0 * d3[k] + d4[k])
        reortho(y)
        out[i + 1] = y
    return out


def rk4_numpy(k1s, k2s, cphis, sphis, y0, step):
    return _rk4_body(k1s, k2s, cphis, sphis, y0, step, _rhs, _reorthonormalize)


if numba is not None:
    _rhs_nb = _jit(_rhs)
    _reortho_nb = _jit(_reorthonormalize)

    @_jit
    def rk4_numba(k1s, k2s, cphis, sphis, y0, step):
        n = (k1s.shape[0] + 1) // 2
        out = np.zeros((n, 12))
        y = y0.copy()
        out[0] = y
        d1 = np.zeros(12)
        d2 = np.zeros(12)
        d3 = np.zeros(12)
        d4 = np.zeros(12)
        tmp = np.zeros(12)
        for i in range(n - 1):
            j = 2 * i
            _rhs_nb(y, k1s[j], k2s[j], cphis[j], sphis[j], d1)
            for k in range(12):
                tmp[k] = y[k] + 0.5 * step * d1[k]
            _rhs_nb(tmp, k1s[j + 1], k2s[j + 1], cphis[j + 1], sphis[j + 1], d2)
            for k in range(12):
                tmp[k] = y[k] + 0.5 * step * d2[k]
            _rhs_nb(tmp, k1s[j + 1], k2s[j + 1], cphis[j + 1], sphis[j + 1], d3)
            for k in range(12):
                tmp[k] = y[k] + step * d3[k]
            _rhs_nb(tmp, k1s[j + 2], k2s[j + 2], cphis[j + 2], sphis[j + 2], d4)
            for k in range(12):
                y[k] += step / 6.0 * (d1[k] + 2.0 * d2[k] + 2.0 * d3[k] + d4[k])
            _reortho_nb(y)
            out[i + 1] = y
        return out
else:  # pragma: no cover
    rk4_numba = rk4_numpy


def frenet_rk4(k1s, k2s, cphis, sphis, y0, step):
    """Integrate the 12-dim frame state; curvature arrays hold 2n-1 half-step samples."""
    args = [np.ascontiguousarray(a, dtype=float) for a in (k1s, k2s, cphis, sphis, y0)]
    if USE_NUMBA:
        return rk4_numba(*args, float(step))
    return rk4_numpy(*args, float(step))
