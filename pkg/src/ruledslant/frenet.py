"""Frenet apparatus of a ruled surface along its striction line, and the
classical Frenet apparatus of a space curve."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import taylor
from .errors import CurvatureVanishingError, GeometryError
from .numkit import (TOL_FD, TRIM, ConstancyVerdict, StrictionFrameField, UniformGrid,
                     arc_length_reparam, derive, is_constant)
from .surfbase import RuledSurfaceSpec, StrictionCurve, _windows, striction_curve

EPS_CURV = 1e-8
FRAME_CHECK = 1e-4
APPLICABLE_FRACTION = 0.75

__all__ = ["StrictionFrameField", "CurveFrenetField", "ruled_apparatus", "curve_apparatus",
           "helix_tests", "HelixVerdicts", "nonvanishing"]


def _dot(x, y):
    return np.einsum("ij,ij->i", x, y)


def _orient(vecs):
    """Signs that make consecutive unit vectors point the same way.

    The global sign is chosen so that most samples keep their orientation.
    """
    dots = _dot(vecs[1:], vecs[:-1])
    signs = np.concatenate([[1.0], np.cumprod(np.where(dots < 0, -1.0, 1.0))])
    if signs.sum() < 0:
        signs = -signs
    return signs


def _frame_at(spec, curve, u, length):
    """Frame and invariants at parameter values ``u`` from exact derivatives.

    The direction of q' does not depend on the parametrization, so h and a are
    evaluated at the given u; k1 and k2 are converted to arc length through
    the striction-line speed.
    """
    cj = curve.jet(u, 1)
    speed = np.linalg.norm(cj.derivative(1), axis=-1)
    if speed.min() <= 1e-9:
        raise GeometryError("striction line is not regular (zero speed)")
    qj = spec.director_jet(u, 2)
    dqj = qj.d()
    k1raw = np.linalg.norm(dqj.value, axis=-1) / speed
    small = k1raw * length < EPS_CURV
    if small.any():
        win = _windows(small, u)
        raise CurvatureVanishingError(
            f"k1 vanishes (torsal band) for u in {win}; the central normal is undefined there", win)
    hj = taylor.normalize(dqj)
    signs = _orient(hj.value)
    flips = [float(0.5 * (u[i] + u[i + 1])) for i in np.flatnonzero(np.diff(signs))]
    q = qj.value
    h = hj.value * signs[:, None]
    a = np.cross(q, h)
    k2 = _dot(hj.derivative(1) * signs[:, None], a) / speed
    return cj.value, q, h, a, signs * k1raw, k2, speed, flips


def ruled_apparatus(spec: RuledSurfaceSpec, samples: int | None = None,
                    reparametrize: bool = True) -> StrictionFrameField:
    """Frame {q, h, a} and invariants k1, k2 along the striction line.

    With ``reparametrize`` (the default) the samples are uniform in the arc
    length of the striction line, starting at s = u_a; otherwise they sit on
    the uniform parameter grid of ``spec`` (handy for comparing two surfaces
    at corresponding rulings).  Frame values come from exact derivatives of
    the inputs; the frame equations are then cross-checked with finite
    differences and mismatches are recorded in ``warnings``.

    k1 is non-negative except past isolated zeros of the ruling's velocity,
    where the frame orientation is continued smoothly and k1 changes sign.
    """
    n = samples or spec.samples
    striction_curve(spec, n)  # raises on cylindrical input
    curve = StrictionCurve(spec)
    if reparametrize:
        als = arc_length_reparam(curve, n, s0=spec.domain[0])
        grid, u, length = als.grid, als.u, als.length
    else:
        grid = spec.grid(n)
        u = grid.points
        sp = np.linalg.norm(curve.jet(u, 1).derivative(1), axis=-1)
        length = float(np.sum(0.5 * (sp[1:] + sp[:-1])) * grid.step)
    c, q, h, a, k1, k2, speed, flips = _frame_at(spec, curve, u, length)
    ff = StrictionFrameField(grid, c, q, h, a, k1, k2, u=u, flips=flips)
    if not reparametrize:
        ff.arclength = False
        ff.speed = speed
    if flips:
        ff.warnings.append(f"central normal reverses through torsal rulings near u = {flips}")
    if reparametrize:
        inner = ff.interior
        scale = max(1.0, np.max(np.abs(k1[inner])), np.max(np.abs(k2[inner])))
        checks = {
            "<q', h> - k1": _dot(derive(q, grid, 1), h) - k1,
            "<h', a> - k2": _dot(derive(h, grid, 1), a) - k2,
            "<a', h> + k2": _dot(derive(a, grid, 1), h) + k2,
        }
        for label, r in checks.items():
            worst = float(np.max(np.abs(r[inner])))
            if worst > FRAME_CHECK * scale:
                ff.warnings.append(f"frame equation check {label} = {worst:.3e}")
    return ff


# -- curves ------------------------------------------------------------------------

@dataclass
class CurveFrenetField:
    grid: UniformGrid
    t: np.ndarray
    n: np.ndarray
    b: np.ndarray
    kappa: np.ndarray
    tau: np.ndarray
    trim: int = TRIM

    @property
    def interior(self) -> slice:
        return self.grid.interior(self.trim)


def curve_apparatus(points, grid: UniformGrid, speed_tol: float = 1e-5) -> CurveFrenetField:
    """t = c', n = c''/|c''|, b = t x n, kappa = |c''|, tau = <n', b>.

    ``points`` must be sampled uniformly in arc length.
    """
    points = np.asarray(points, dtype=float)
    t = derive(points, grid, 1)
    inner = grid.interior(TRIM)
    drift = np.max(np.abs(np.linalg.norm(t, axis=-1) - 1.0)[inner])
    if drift > speed_tol:
        raise GeometryError(f"curve samples are not unit speed (max | |c'| - 1 | = {drift:.2e})")
    cpp = derive(points, grid, 2)
    kappa = np.linalg.norm(cpp, axis=-1)
    length = grid.step * (grid.count - 1)
    if np.any(kappa[inner] * length < EPS_CURV):
        raise CurvatureVanishingError("curvature vanishes: straight segment, Frenet frame undefined",
                                      _windows(kappa * length < EPS_CURV, grid.points))
    n = cpp / kappa[:, None]
    b = np.cross(t, n)
    tau = _dot(derive(n, grid, 1), b)
    return CurveFrenetField(grid, t, n, b, kappa, tau)


def nonvanishing(values, floor: float, fraction: float = APPLICABLE_FRACTION):
    """Mask of samples with |value| above ``floor`` and whether enough survive."""
    mask = np.abs(values) > floor
    return mask, bool(mask.mean() >= fraction) if mask.size else False


@dataclass
class HelixVerdicts:
    general_helix: ConstancyVerdict | None
    slant_helix: ConstancyVerdict | None
    notes: list = field(default_factory=list)


def helix_tests(cf: CurveFrenetField, tol: float = TOL_FD) -> HelixVerdicts:
    """Lancret ratio kappa/tau and the slant-helix function
    kappa^2 / (kappa^2 + tau^2)^(3/2) * (tau/kappa)'."""
    inner = cf.interior
    kap, tau = cf.kappa, cf.tau
    length = cf.grid.step * (cf.grid.count - 1)
    floor = 1e-6 * max(np.max(kap[inner]), 1.0 / length)
    notes = []
    mask, ok = nonvanishing(tau[inner], floor)
    general = None
    if ok:
        general = is_constant((kap[inner] / tau[inner])[mask], tol)
    else:
        notes.append("general helix: not applicable (tau ~ 0), planar")
    # product-rule form stays finite where kappa is small
    dk = derive(kap, cf.grid, 1)
    dt = derive(tau, cf.grid, 1)
    sigma = (kap * dt - dk * tau) / (kap**2 + tau**2) ** 1.5
    slant = is_constant(sigma[inner], tol)
    return HelixVerdicts(general, slant, notes)
