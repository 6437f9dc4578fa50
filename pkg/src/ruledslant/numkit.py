"""Numerical kernels: uniform-grid derivatives, constancy detection, arc-length
reparametrization and integration of the ruled-surface Frenet system."""
from __future__ import annotations

from dataclasses import dataclass, field, replace
from fractions import Fraction
from functools import lru_cache
from math import factorial, lcm

import numpy as np
from scipy.interpolate import PchipInterpolator

from . import _kernels
from .errors import FrameError, GridError, NonRegularCurveError

TRIM = 4  # samples excluded at each grid end from every statistic
MIN_SAMPLES = 9
EPS_REG = 1e-9

TOL_FD = 1e-3
TOL_ANALYTIC = 1e-6


@dataclass(frozen=True)
class UniformGrid:
    start: float
    step: float
    count: int

    def __post_init__(self):
        if not self.step > 0:
            raise GridError(f"grid step must be positive, got {self.step}")
        if self.count < MIN_SAMPLES:
            raise GridError(f"grid needs at least {MIN_SAMPLES} samples, got {self.count}")

    @classmethod
    def over(cls, a: float, b: float, count: int) -> "UniformGrid":
        if not b > a:
            raise GridError(f"degenerate range [{a}, {b}]")
        return cls(float(a), (b - a) / (count - 1), int(count))

    @property
    def stop(self) -> float:
        return self.start + self.step * (self.count - 1)

    @property
    def points(self) -> np.ndarray:
        return self.start + self.step * np.arange(self.count)

    def interior(self, margin: int = TRIM) -> slice:
        return slice(margin, self.count - margin)

    def same_as(self, other: "UniformGrid", rtol: float = 1e-12) -> bool:
        scale = max(1.0, abs(self.start), abs(self.stop))
        return (
            self.count == other.count
            and abs(self.start - other.start) <= rtol * scale
            and abs(self.step - other.step) <= rtol * scale
        )


@dataclass(frozen=True)
class ConstancyVerdict:
    is_constant: bool
    mean: float
    residual: float
    tol: float

    def __bool__(self):
        return self.is_constant


@dataclass
class StrictionFrameField:
    """Frame {q, h, a} and invariants k1, k2 sampled along the striction line.

    ``grid`` is uniform in arc length when ``arclength`` is true.  Otherwise it
    is uniform in the surface parameter ``u`` and ``speed`` holds ds/du; k1
    and k2 are always taken with respect to arc length.
    """

    grid: UniformGrid
    c: np.ndarray
    q: np.ndarray
    h: np.ndarray
    a: np.ndarray
    k1: np.ndarray
    k2: np.ndarray
    trim: int = TRIM
    u: np.ndarray | None = None
    speed: np.ndarray | None = None
    arclength: bool = True
    flips: list = field(default_factory=list)
    warnings: list = field(default_factory=list)

    @property
    def s(self) -> np.ndarray:
        return self.grid.points

    @property
    def interior(self) -> slice:
        return self.grid.interior(self.trim)

    def transformed(self, **changes) -> "StrictionFrameField":
        return replace(self, **changes)


# -- derivatives ---------------------------------------------------------------

def _solve_exact(offsets, order):
    """Exact rational weights w with sum_j w_j o_j^k = k! delta_{k,order}."""
    n = len(offsets)
    rows = [[Fraction(o) ** k for o in offsets] + [Fraction(factorial(order) if k == order else 0)]
            for k in range(n)]
    for col in range(n):
        piv = next(r for r in range(col, n) if rows[r][col] != 0)
        rows[col], rows[piv] = rows[piv], rows[col]
        p = rows[col][col]
        rows[col] = [x / p for x in rows[col]]
        for r in range(n):
            if r != col and rows[r][col] != 0:
                f = rows[r][col]
                rows[r] = [x - f * y for x, y in zip(rows[r], rows[col])]
    return [rows[k][n] for k in range(n)]


@lru_cache(maxsize=None)
def stencils(order: int):
    """Integer numerators and common denominator of the stencils for ``order``.

    Interior points use centred stencils of fourth-order accuracy (5 points
    for orders 1-2, 7 for order 3); the ``m`` points nearest each end use
    one-sided windows of ``order + 4`` points, also fourth-order.
    """
    if order not in (1, 2, 3):
        raise ValueError("derivative order must be 1, 2 or 3")
    wc = 5 if order < 3 else 7
    half = wc // 2
    wb = order + 4
    central = _solve_exact(list(range(-half, half + 1)), order)
    left = [_solve_exact([j - i for j in range(wb)], order) for i in range(half)]
    right = [_solve_exact([j - (wb - half + i) for j in range(wb)], order) for i in range(half)]
    every = central + [w for row in left + right for w in row]
    den = lcm(*(w.denominator for w in every))
    as_int = lambda ws: [float(w * den) for w in ws]
    return (np.array(as_int(central)), np.array([as_int(r) for r in left]),
            np.array([as_int(r) for r in right]), den)


def derive(values, step, order: int = 1) -> np.ndarray:
    """Derivative of order 1-3 of samples on a uniform grid.

    ``values`` is (N,) or (N, K); ``step`` is the grid spacing or a
    :class:`UniformGrid`.  The first and last :data:`TRIM` outputs come from
    one-sided stencils and should be excluded from statistics.
    """
    if isinstance(step, UniformGrid):
        step = step.step
    values = np.asarray(values, dtype=float)
    if values.shape[0] < MIN_SAMPLES:
        raise GridError(f"grid too short for derivatives: {values.shape[0]} < {MIN_SAMPLES}")
    central, left, right, den = stencils(order)
    flat = values.reshape(values.shape[0], -1)
    out = _kernels.apply_stencil(flat, central, left, right, den * step**order)
    return out.reshape(values.shape)


# -- constancy -------------------------------------------------------------------

def is_constant(samples, tol: float = TOL_FD) -> ConstancyVerdict:
    """Scale-aware constancy: residual = std / (1 + |mean|) compared to ``tol``."""
    x = np.asarray(samples, dtype=float).ravel()
    if x.size < MIN_SAMPLES:
        raise GridError(f"constancy test needs at least {MIN_SAMPLES} samples, got {x.size}")
    if not np.isfinite(x).all():
        raise ValueError("constancy test received NaN or infinite samples")
    mean = float(np.mean(x))
    residual = float(np.std(x) / (1.0 + abs(mean)))
    return ConstancyVerdict(residual < tol, mean, residual, tol)


# -- arc length ------------------------------------------------------------------

_GL_X, _GL_W = np.polynomial.legendre.leggauss(5)


@dataclass
class ArcLengthSamples:
    grid: UniformGrid   # uniform in arc length
    u: np.ndarray       # parameter value at each arc-length sample
    points: np.ndarray  # curve points, (N, 3)
    length: float


def _speed(curve, u):
    return np.linalg.norm(curve.jet(u, 1).derivative(1), axis=-1)


def _gl_partial(curve, lo, hi):
    mid = 0.5 * (lo + hi)
    rad = 0.5 * (hi - lo)
    nodes = mid[:, None] + rad[:, None] * _GL_X[None, :]
    sp = _speed(curve, nodes.ravel()).reshape(nodes.shape)
    return rad * (sp @ _GL_W)


def arc_length_reparam(curve, count: int, s0: float = 0.0, tol: float = 1e-12) -> ArcLengthSamples:
    """Resample ``curve`` at ``count`` points uniformly spaced in arc length.

    ``curve`` provides ``domain`` (u_a, u_b) and ``jet(u, order)``.  The
    length table uses 5-point Gauss-Legendre on 4*count panels; inversion
    starts from a monotone cubic fit of the table and is polished by Newton.
    """
    ua, ub = curve.domain
    edges = np.linspace(ua, ub, 4 * count + 1)
    lo, hi = edges[:-1], edges[1:]
    mid = 0.5 * (lo + hi)
    nodes = mid[:, None] + 0.5 * (hi - lo)[:, None] * _GL_X[None, :]
    sp = _speed(curve, nodes.ravel()).reshape(nodes.shape)
    probe = np.concatenate([nodes.ravel(), edges])
    sp_all = np.concatenate([sp.ravel(), _speed(curve, edges)])
    if not np.all(sp_all > EPS_REG):
        bad = probe[np.argmin(sp_all)]
        raise NonRegularCurveError(f"curve is not regular: speed {sp_all.min():.3e} near u = {bad:.6g}")
    panel = 0.5 * (hi - lo) * (sp @ _GL_W)
    table = np.concatenate([[0.0], np.cumsum(panel)])
    if not np.all(np.diff(table) > 0):
        raise NonRegularCurveError("arc-length table is not strictly increasing")
    length = float(table[-1])

    targets = np.linspace(0.0, length, count)
    u = PchipInterpolator(table, edges)(targets)
    inner = slice(1, count - 1)
    ui = u[inner]
    ti = targets[inner]
    thresh = tol * max(1.0, length)
    for _ in range(50):
        k = np.clip(np.searchsorted(edges, ui, side="right") - 1, 0, 4 * count - 1)
        res = table[k] + _gl_partial(curve, edges[k], ui) - ti
        ui = np.clip(ui - res / _speed(curve, ui), ua, ub)
        if np.max(np.abs(res)) < thresh:
            break
    else:
        raise NonRegularCurveError("arc-length inversion did not converge")
    u[inner] = ui
    u[0], u[-1] = ua, ub
    points = curve.jet(u, 0).value
    return ArcLengthSamples(UniformGrid.over(s0, s0 + length, count), u, points, length)


# -- Frenet system integration ----------------------------------------------------

def _sample(fn, x):
    if callable(fn):
        y = fn(x)
        return np.broadcast_to(np.asarray(y, dtype=float), x.shape).copy()
    return np.full_like(x, float(fn))


def integrate_frenet(k1, k2, phi, frame0, c0, grid: UniformGrid) -> StrictionFrameField:
    """Synthesize a ruled surface from prescribed invariants.

    Integrates q' = k1 h, h' = -k1 q + k2 a, a' = -k2 h together with the
    striction-line tangent c' = cos(phi) q + sin(phi) a by classical RK4,
    re-orthonormalizing the frame after every step.  ``k1``, ``k2``, ``phi``
    are callables of s (or constants).
    """
    frame0 = np.asarray(frame0, dtype=float).reshape(3, 3)
    gram = frame0 @ frame0.T
    if np.max(np.abs(gram - np.eye(3))) > 1e-10 or np.linalg.det(frame0) < 0:
        raise FrameError("initial frame must be orthonormal and right-handed")
    half = grid.start + 0.5 * grid.step * np.arange(2 * grid.count - 1)
    k1h = _sample(k1, half)
    k2h = _sample(k2, half)
    ph = _sample(phi, half)
    y0 = np.concatenate([np.asarray(c0, dtype=float), frame0.ravel()])
    y = _kernels.frenet_rk4(k1h, k2h, np.cos(ph), np.sin(ph), y0, grid.step)
    return StrictionFrameField(
        grid=grid, c=y[:, 0:3], q=y[:, 3:6], h=y[:, 6:9], a=y[:, 9:12],
        k1=k1h[::2].copy(), k2=k2h[::2].copy(), u=grid.points,
    )
