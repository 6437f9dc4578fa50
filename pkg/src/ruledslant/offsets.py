"""Bertrand and Mannheim offsets of a ruled surface.

Both constructions work pointwise on a frame field and return a sampled
:class:`~ruledslant.surfbase.RuledSurfaceSpec` over the same parameter grid,
so rulings correspond by equal parameter value.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import cumulative_trapezoid

from .errors import GridError, HypothesisError
from .frenet import EPS_CURV
from .numkit import StrictionFrameField
from .surfbase import RuledSurfaceSpec, SampledCurve, _windows


@dataclass(frozen=True)
class OffsetSpec:
    kind: str
    alpha: float = 0.0
    R: float = 0.0
    beta0: float = 0.0

    def __post_init__(self):
        if self.kind not in ("bertrand", "mannheim"):
            raise ValueError(f"unknown offset kind {self.kind!r}")
        if not math.isfinite(self.R):
            raise ValueError("offset distance must be finite")

    def build(self, ff: StrictionFrameField) -> RuledSurfaceSpec:
        if self.kind == "bertrand":
            return bertrand_offset(ff, self.alpha, self.R)
        return mannheim_construct(ff, self.beta0, self.R)


def _spec(ff, c2, q2, name, meta):
    u = ff.grid.points
    return RuledSurfaceSpec(SampledCurve(u, c2), SampledCurve(u, q2), (u[0], u[-1]),
                            ff.grid.count, name, meta)


def _torsal_note(weight, ff, label):
    length = ff.grid.step * (ff.grid.count - 1)
    notes = []
    small = np.abs(weight) * length < EPS_CURV * 1e3
    if small.any():
        notes.append(f"{label} nearly vanishes for s in {_windows(small, ff.grid.points)}: "
                     "the offset has torsal rulings there")
    x = ff.grid.points
    crossings = [float(0.5 * (x[i] + x[i + 1])) for i in np.flatnonzero(np.diff(np.sign(weight)) != 0)]
    if crossings:
        notes.append(f"{label} changes sign near s = {crossings}: isolated torsal rulings")
    return notes


def bertrand_offset(ff: StrictionFrameField, alpha: float, R: float) -> RuledSurfaceSpec:
    """c2 = c1 + R h1, q2 = cos(alpha) q1 + sin(alpha) a1.

    Then q2' = (cos(alpha) k1 - sin(alpha) k2) h1, so the offset shares its
    central normals with the input wherever that factor is non-zero.
    """
    if abs(abs(alpha) - math.pi / 2) < 1e-12:
        raise HypothesisError("alpha = +/- pi/2 makes the offset ruling parallel to a1")
    ca, sa = math.cos(alpha), math.sin(alpha)
    c2 = ff.c + R * ff.h
    q2 = ca * ff.q + sa * ff.a
    weight = (ca * ff.k1 - sa * ff.k2) * (1.0 if ff.arclength else ff.speed)
    meta = {"kind": "bertrand", "alpha": alpha, "R": R,
            "warnings": _torsal_note(weight, ff, "cos(alpha) k1 - sin(alpha) k2")}
    return _spec(ff, c2, q2, f"bertrand(alpha={alpha:g}, R={R:g})", meta)


def mannheim_phase(ff: StrictionFrameField, beta0: float) -> np.ndarray:
    """beta(s) = beta0 - integral of k1 from the grid start (trapezoid rule)."""
    rate = ff.k1 if ff.arclength else ff.k1 * ff.speed
    return beta0 - cumulative_trapezoid(rate, dx=ff.grid.step, initial=0.0)


def mannheim_construct(ff: StrictionFrameField, beta0: float, R: float) -> RuledSurfaceSpec:
    """q2 = cos(beta) q1 + sin(beta) h1 with beta' = -k1, and c2 = c1 + R a1.

    This makes q2' = sin(beta) k2 a1, so the offset's central normal is +/- a1.
    c2 is not claimed to be the offset's striction line.
    """
    beta = mannheim_phase(ff, beta0)
    q2 = np.cos(beta)[:, None] * ff.q + np.sin(beta)[:, None] * ff.h
    c2 = ff.c + R * ff.a
    meta = {"kind": "mannheim", "beta0": beta0, "R": R,
            "warnings": _torsal_note(np.sin(beta) * ff.k2, ff, "sin(beta) k2")}
    return _spec(ff, c2, q2, f"mannheim(beta0={beta0:g}, R={R:g})", meta)


def _alignment(ff1, v1, ff2, v2):
    if not ff1.grid.same_as(ff2.grid):
        raise GridError("frame fields are not sampled on the same parameter grid")
    inner = ff1.interior
    return float(np.min(np.abs(np.einsum("ij,ij->i", v1[inner], v2[inner]))))


def mannheim_alignment(ff1: StrictionFrameField, ff2: StrictionFrameField) -> float:
    """min over the interior of |<a1, h2>|."""
    return _alignment(ff1, ff1.a, ff2, ff2.h)


def bertrand_alignment(ff1: StrictionFrameField, ff2: StrictionFrameField) -> float:
    """min over the interior of |<h1, h2>|."""
    return _alignment(ff1, ff1.h, ff2, ff2.h)


def mannheim_verify(ff1: StrictionFrameField, ff2: StrictionFrameField, tol: float = 1e-5) -> bool:
    return mannheim_alignment(ff1, ff2) > 1.0 - tol


def bertrand_verify(ff1: StrictionFrameField, ff2: StrictionFrameField, tol: float = 1e-5) -> bool:
    return bertrand_alignment(ff1, ff2) > 1.0 - tol
