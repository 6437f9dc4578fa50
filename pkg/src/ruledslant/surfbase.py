"""Ruled-surface input model r(u, v) = f(u) + v q(u) and its striction apparatus.

Curves are anything with a ``domain`` pair and a ``jet(u, order)`` method that
returns a vector :class:`~ruledslant.taylor.Jet` of shape (order+1, n, 3).
Analytic curves differentiate their expressions with Taylor arithmetic;
sampled curves go through a quintic interpolating spline.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.interpolate import make_interp_spline

from . import taylor
from .errors import CylindricalError, GeometryError, SingularPointError
from .exprparse import ExprAST, evaluate_jet, parse
from .numkit import UniformGrid, integrate_frenet
from .taylor import Jet

EPS_CYL = 1e-7
EPS_DIRECTOR = 1e-9
DEV_REL = 1e-6
PROBE = 1025


# -- curves --------------------------------------------------------------------

class AnalyticCurve:
    """Three scalar expressions in one parameter."""

    def __init__(self, exprs, domain, var: str = "s"):
        exprs = [e if isinstance(e, ExprAST) else parse(str(e), var) for e in exprs]
        if len(exprs) != 3:
            raise ValueError("a space curve needs three component expressions")
        self.exprs = tuple(exprs)
        self.domain = (float(domain[0]), float(domain[1]))
        self.var = var

    def jet(self, u, order: int) -> Jet:
        u = np.asarray(u, dtype=float)
        comps = [evaluate_jet(e, u, order).c for e in self.exprs]
        return Jet(np.stack(comps, axis=-1))

    def texts(self):
        return [e.source or str(e) for e in self.exprs]


class SampledCurve:
    """Quintic interpolating spline through a table of points."""

    def __init__(self, u, values):
        u = np.asarray(u, dtype=float)
        values = np.asarray(values, dtype=float)
        if values.shape != (u.size, 3):
            raise ValueError("sampled curve needs an (N, 3) table matching its parameter column")
        if u.size < 6 or not np.all(np.diff(u) > 0):
            raise ValueError("sampled parameter column must be strictly increasing with >= 6 rows")
        self.u = u
        self.values = values
        self.domain = (float(u[0]), float(u[-1]))
        self._spline = make_interp_spline(u, values, k=5)

    def jet(self, u, order: int) -> Jet:
        u = np.asarray(u, dtype=float)
        derivs = [self._spline(u, nu=k) if k <= 5 else np.zeros(u.shape + (3,))
                  for k in range(order + 1)]
        return Jet.from_derivatives(derivs)


class AffineCurve:
    """``scale * R @ base(u) + offset`` for a fixed rotation (or identity) R."""

    def __init__(self, base, matrix=None, offset=None, scale: float = 1.0):
        self.base = base
        self.matrix = np.eye(3) if matrix is None else np.asarray(matrix, dtype=float)
        self.offset = np.zeros(3) if offset is None else np.asarray(offset, dtype=float)
        self.scale = float(scale)
        self.domain = base.domain

    def jet(self, u, order: int) -> Jet:
        c = self.scale * (self.base.jet(u, order).c @ self.matrix.T)
        c[0] = c[0] + self.offset
        return Jet(c)


class ReparametrizedCurve:
    """``base(alpha * w + beta)`` over the corresponding w-domain (alpha > 0)."""

    def __init__(self, base, alpha: float, beta: float):
        if not alpha > 0:
            raise ValueError("reparametrization must be orientation preserving")
        self.base = base
        self.alpha = float(alpha)
        self.beta = float(beta)
        ua, ub = base.domain
        self.domain = ((ua - beta) / alpha, (ub - beta) / alpha)

    def jet(self, w, order: int) -> Jet:
        w = np.asarray(w, dtype=float)
        c = self.base.jet(self.alpha * w + self.beta, order).c.copy()
        for k in range(order + 1):
            c[k] *= self.alpha**k
        return Jet(c)


# -- surface spec ----------------------------------------------------------------

@dataclass
class RuledSurfaceSpec:
    """r(u, v) = f(u) + v q(u) over ``domain``; the director is normalized on use."""

    base: object
    director: object
    domain: tuple
    samples: int = 1024
    name: str = ""
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        ua, ub = float(self.domain[0]), float(self.domain[1])
        if not ub > ua:
            raise GeometryError(f"degenerate parameter range [{ua}, {ub}]")
        self.domain = (ua, ub)
        self.samples = int(self.samples)
        probe = np.linspace(ua, ub, PROBE)
        nq = np.linalg.norm(self.director.jet(probe, 0).value, axis=-1)
        if nq.min() <= EPS_DIRECTOR:
            bad = probe[np.argmin(nq)]
            raise GeometryError(f"director vanishes near u = {bad:.6g} (|q| = {nq.min():.3e})")

    def grid(self, count: int | None = None) -> UniformGrid:
        return UniformGrid.over(*self.domain, count or self.samples)

    def base_jet(self, u, order: int) -> Jet:
        return self.base.jet(u, order)

    def director_jet(self, u, order: int) -> Jet:
        return taylor.normalize(self.director.jet(u, order))

    def point(self, u, v):
        u = np.asarray(u, dtype=float)
        return self.base_jet(u, 0).value + np.asarray(v, dtype=float)[..., None] * self.director_jet(u, 0).value


def from_frame_field(ff, name: str = "", meta: dict | None = None) -> RuledSurfaceSpec:
    """Sampled spec with base curve c and director q of a frame field."""
    u = ff.u if ff.u is not None and not ff.arclength else ff.s
    return RuledSurfaceSpec(SampledCurve(u, ff.c), SampledCurve(u, ff.q),
                            (u[0], u[-1]), ff.grid.count, name, dict(meta or {}))


def from_curvatures(k1, k2, phi="0", domain=(0.0, 1.0), samples: int = 1024,
                    frame0=None, c0=None, var: str = "s", name: str = "") -> RuledSurfaceSpec:
    """Integrate prescribed invariants and wrap the result as a sampled spec."""
    fns = [f if callable(f) else parse(str(f), var) for f in (k1, k2, phi)]
    grid = UniformGrid.over(domain[0], domain[1], samples)
    ff = integrate_frenet(*fns, np.eye(3) if frame0 is None else frame0,
                          np.zeros(3) if c0 is None else c0, grid)
    texts = [getattr(f, "source", None) or str(f) for f in (k1, k2, phi)]
    return from_frame_field(ff, name, {"kind": "curvatures", "k1": texts[0], "k2": texts[1],
                                       "phi": texts[2], "frame_field": ff})


def sample_spec(spec: RuledSurfaceSpec, count: int | None = None) -> RuledSurfaceSpec:
    """Tabulate a spec on its uniform parameter grid (director kept unnormalized)."""
    u = spec.grid(count).points
    return RuledSurfaceSpec(SampledCurve(u, spec.base.jet(u, 0).value),
                            SampledCurve(u, spec.director.jet(u, 0).value),
                            spec.domain, spec.samples, spec.name)


def rigid_motion(spec: RuledSurfaceSpec, rotation, translation) -> RuledSurfaceSpec:
    return RuledSurfaceSpec(AffineCurve(spec.base, rotation, translation),
                            AffineCurve(spec.director, rotation), spec.domain, spec.samples, spec.name)


def scaled(spec: RuledSurfaceSpec, factor: float) -> RuledSurfaceSpec:
    """Scale the base curve by ``factor``; directors are unchanged."""
    return RuledSurfaceSpec(AffineCurve(spec.base, scale=factor), spec.director,
                            spec.domain, spec.samples, spec.name)


def reparametrized(spec: RuledSurfaceSpec, alpha: float, beta: float) -> RuledSurfaceSpec:
    """Substitute u = alpha * w + beta; the w-range maps onto the old u-range."""
    base = ReparametrizedCurve(spec.base, alpha, beta)
    return RuledSurfaceSpec(base, ReparametrizedCurve(spec.director, alpha, beta),
                            base.domain, spec.samples, spec.name)


# -- distribution parameter, normals, striction ------------------------------------

def _first_order(spec, u):
    f = spec.base_jet(u, 1)
    q = spec.director_jet(u, 1)
    return f.derivative(1), q.value, q.derivative(1)


def _check_cylindrical(dq, u):
    nq = np.linalg.norm(dq, axis=-1)
    if nq.min() <= EPS_CYL:
        bad = u[np.argmin(nq)]
        raise CylindricalError(
            f"cylindrical: striction curve undefined (Eq. 4); |q'| = {nq.min():.3e} near u = {bad:.6g}")
    return nq


def distribution_parameter(spec: RuledSurfaceSpec, count: int | None = None) -> np.ndarray:
    """d = det(f', q, q') / <q', q'> on the uniform parameter grid."""
    u = spec.grid(count).points
    df, q, dq = _first_order(spec, u)
    nq = _check_cylindrical(dq, u)
    return np.einsum("ij,ij->i", df, np.cross(q, dq)) / nq**2


def surface_normal(spec: RuledSurfaceSpec, u: float, v: float) -> np.ndarray:
    """Unit normal r_u x r_v / |r_u x r_v| at (u, v)."""
    df, q, dq = (x[0] for x in _first_order(spec, np.array([float(u)])))
    n = np.cross(df + v * dq, q)
    norm = np.linalg.norm(n)
    if norm <= 1e-12:
        raise SingularPointError(f"singular point of the surface at (u, v) = ({u}, {v})")
    return n / norm


def asymptotic_normal(spec: RuledSurfaceSpec, u) -> np.ndarray:
    """Central tangent a = (q x q') / |q'|."""
    uu = np.atleast_1d(np.asarray(u, dtype=float))
    _, q, dq = _first_order(spec, uu)
    nq = _check_cylindrical(dq, uu)
    a = np.cross(q, dq) / nq[:, None]
    return a[0] if np.ndim(u) == 0 else a


class StrictionCurve:
    """c(u) = f - (<q', f'> / <q', q'>) q as a differentiable curve."""

    def __init__(self, spec: RuledSurfaceSpec):
        self.spec = spec
        self.domain = spec.domain

    def strictional_distance(self, u, order: int) -> Jet:
        f = self.spec.base_jet(u, order + 1)
        q = self.spec.director_jet(u, order + 1)
        df, dq = f.d(), q.d()
        return -(dq.dot(df) / dq.dot(dq))

    def jet(self, u, order: int) -> Jet:
        u = np.asarray(u, dtype=float)
        v0 = self.strictional_distance(u, order)
        f = self.spec.base_jet(u, order)
        q = self.spec.director_jet(u, order)
        return f + q.scale_rows(v0)


@dataclass
class StrictionData:
    u: np.ndarray
    c: np.ndarray
    v0: np.ndarray
    d: np.ndarray
    developable: bool
    cylindrical: bool
    tol_dev: float
    scale: float
    torsal_windows: list


def _windows(mask, x):
    """Contiguous runs of True in ``mask`` as (x_start, x_end) pairs."""
    out = []
    idx = np.flatnonzero(np.diff(np.concatenate([[0], mask.astype(int), [0]])))
    for lo, hi in zip(idx[::2], idx[1::2]):
        out.append((float(x[lo]), float(x[hi - 1])))
    return out


def striction_curve(spec: RuledSurfaceSpec, count: int | None = None) -> StrictionData:
    u = spec.grid(count).points
    df, q, dq = _first_order(spec, u)
    nq = _check_cylindrical(dq, u)
    d = np.einsum("ij,ij->i", df, np.cross(q, dq)) / nq**2
    v0 = -np.einsum("ij,ij->i", dq, df) / nq**2
    c = spec.base_jet(u, 0).value + v0[:, None] * q
    scale = float(np.max(np.linalg.norm(df, axis=-1)))
    tol_dev = DEV_REL * scale
    small = np.abs(d) < tol_dev
    developable = bool(small.all())
    torsal = [] if developable else _windows(small, u)
    return StrictionData(u, c, v0, d, developable, False, tol_dev, scale, torsal)
