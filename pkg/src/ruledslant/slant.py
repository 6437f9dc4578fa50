"""Slant classifiers for ruled surfaces.

A surface is q-, h- or a-slant when its ruling q, central normal h or central
tangent a makes a constant angle with a fixed direction.  Every test works on
a :class:`~ruledslant.numkit.StrictionFrameField` and returns an
:class:`Outcome` whose ``status`` is ``"yes"``, ``"no"`` or
``"not_applicable"`` (a hypothesis such as non-vanishing curvature fails).
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field

import numpy as np

from .errors import DomainError, GeometryError, HypothesisError
from .frenet import (APPLICABLE_FRACTION, EPS_CURV, curve_apparatus, helix_tests,
                     ruled_apparatus)
from .numkit import StrictionFrameField, derive, is_constant
from .surfbase import RuledSurfaceSpec, striction_curve

YES, NO, NA = "yes", "no", "not_applicable"
CONOID_REL = 1e-6


@dataclass(frozen=True)
class Tolerances:
    ratio: float = 1e-3
    sigma: float = 1e-3
    det: float = 1e-6
    eq15: float = 1e-3
    axis: float = 1e-3
    helix: float = 1e-3
    developable: float = 1e-5


@dataclass
class Outcome:
    status: str
    statistic: float | None = None
    residual: float | None = None
    tol: float | None = None
    reason: str = ""
    theta: float | None = None
    axis: np.ndarray | None = None
    details: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.status == YES

    def to_dict(self) -> dict:
        d = asdict(self)
        if self.axis is not None:
            d["axis"] = [float(x) for x in self.axis]
        return d


def _yn(flag: bool) -> str:
    return YES if flag else NO


def _dot(x, y):
    return np.einsum("ij,ij->i", x, y)


def _unit(v):
    return v / np.linalg.norm(v)


def _length(ff: StrictionFrameField) -> float:
    return ff.grid.step * (ff.grid.count - 1)


def _require_arclength(ff):
    if not ff.arclength:
        raise GeometryError("classification needs a frame field sampled uniformly in arc length")


def _support(ff: StrictionFrameField, *, k1=True, k2=True):
    """Interior samples where the required curvatures are non-zero."""
    eps = EPS_CURV / _length(ff)
    inner = ff.interior
    mask = np.ones(ff.grid.count, dtype=bool)
    if k1:
        mask &= np.abs(ff.k1) > eps
    if k2:
        mask &= np.abs(ff.k2) > eps
    sel = np.zeros_like(mask)
    sel[inner] = mask[inner]
    ok = sel[inner].mean() >= APPLICABLE_FRACTION
    return sel, ok


def is_conoid(ff: StrictionFrameField) -> bool:
    inner = ff.interior
    scale = max(float(np.max(np.abs(ff.k1[inner]))), 1.0 / _length(ff))
    return bool(np.max(np.abs(ff.k2[inner])) < CONOID_REL * scale)


_CONOID_REASON = "k2 vanishes identically (conoid): the non-zero curvature hypothesis fails"


# -- q-slant ------------------------------------------------------------------------

def q_slant_test(ff: StrictionFrameField, tol: float = 1e-3, axis_tol: float = 1e-3) -> Outcome:
    """Constancy of k1/k2; when constant, theta = atan(mean ratio) and the
    fixed direction is cos(theta) q + sin(theta) a."""
    _require_arclength(ff)
    if is_conoid(ff):
        return Outcome(NA, tol=tol, reason=_CONOID_REASON)
    sel, ok = _support(ff)
    if not ok:
        return Outcome(NA, tol=tol, reason="k1 or k2 vanishes on more than a quarter of the samples")
    verdict = is_constant(ff.k1[sel] / ff.k2[sel], tol)
    out = Outcome(_yn(verdict.is_constant), verdict.mean, verdict.residual, tol)
    if verdict.is_constant:
        theta = math.atan(verdict.mean)
        field_u = math.cos(theta) * ff.q + math.sin(theta) * ff.a
        inner = ff.interior
        axis = _unit(field_u[inner].mean(axis=0))
        drift = float(np.max(np.linalg.norm(field_u[inner] - axis, axis=1)))
        angle = is_constant(ff.q[inner] @ axis, axis_tol)
        out.theta, out.axis = theta, axis
        out.details = {"axis_drift": drift, "angle_residual": angle.residual,
                       "cos_theta": angle.mean}
        if drift >= axis_tol or not angle.is_constant:
            out.details["warning"] = "reconstructed axis drifts beyond tolerance"
    return out


def _det_rows(x, grid):
    d1, d2, d3 = (derive(x, grid, k) for k in (1, 2, 3))
    return _dot(d1, np.cross(d2, d3))


def _ratio_derivative_terms(ff):
    dk1 = derive(ff.k1, ff.grid, 1)
    dk2 = derive(ff.k2, ff.grid, 1)
    # k1' k2 - k1 k2' equals k2^2 (k1/k2)'
    return dk1 * ff.k2 - ff.k1 * dk2


def _det_outcome(det, identity, scale, sel, ok, tol, reason):
    inner_det = np.abs(det[sel]) if sel.any() else np.abs(det)
    worst = float(np.max(inner_det))
    ident = np.abs(np.abs(det[sel]) - np.abs(identity[sel])) / np.maximum(1.0, np.abs(identity[sel]))
    details = {"scale": scale, "identity_residual": float(np.max(ident)) if sel.any() else None}
    if not ok:
        return Outcome(NA, worst, worst / scale, tol, reason, details=details)
    return Outcome(_yn(worst < tol * scale), worst, worst / scale, tol, details=details)


def det_q_test(ff: StrictionFrameField, tol: float = 1e-6) -> Outcome:
    """max |det(q', q'', q''')| against tol * (max k1)^3 * max(1, max k2^2)."""
    _require_arclength(ff)
    inner = ff.interior
    det = _det_rows(ff.q, ff.grid)
    identity = ff.k1**3 * _ratio_derivative_terms(ff)
    scale = float(np.max(np.abs(ff.k1[inner])) ** 3 * max(1.0, np.max(ff.k2[inner] ** 2)))
    sel, ok = _support(ff)
    reason = ""
    if is_conoid(ff):
        ok, reason = False, _CONOID_REASON
    elif not ok:
        reason = "k1 or k2 vanishes on more than a quarter of the samples"
    return _det_outcome(det, identity, scale, sel, ok, tol, reason)


def det_a_test(ff: StrictionFrameField, tol: float = 1e-6) -> Outcome:
    """max |det(a', a'', a''')| against tol * max(1, max |k2|^5)."""
    _require_arclength(ff)
    inner = ff.interior
    det = _det_rows(ff.a, ff.grid)
    identity = ff.k2**3 * _ratio_derivative_terms(ff)
    scale = float(max(1.0, np.max(np.abs(ff.k2[inner])) ** 5))
    sel, ok = _support(ff)
    reason = ""
    if is_conoid(ff):
        ok, reason = False, "degenerate: " + _CONOID_REASON + " (a' = 0, so the determinant is trivially 0)"
    elif not ok:
        reason = "k1 or k2 vanishes on more than a quarter of the samples"
    return _det_outcome(det, identity, scale, sel, ok, tol, reason)


def eq15_residual(ff: StrictionFrameField, tol: float = 1e-3) -> Outcome:
    """Residual of q''' = m q' + 3 k1' h' with m = k1''/k1 - (k1^2 + k2^2)."""
    _require_arclength(ff)
    g = ff.grid
    sel, ok = _support(ff, k2=False)
    if not sel.any():
        return Outcome(NA, tol=tol, reason="k1 vanishes on the interior")
    d1, d3 = derive(ff.q, g, 1), derive(ff.q, g, 3)
    dh = derive(ff.h, g, 1)
    dk1, ddk1 = derive(ff.k1, g, 1), derive(ff.k1, g, 2)
    m = ddk1[sel] / ff.k1[sel] - (ff.k1[sel] ** 2 + ff.k2[sel] ** 2)
    r = d3[sel] - m[:, None] * d1[sel] - 3.0 * dk1[sel, None] * dh[sel]
    res = np.linalg.norm(r, axis=1) / np.maximum(1.0, np.linalg.norm(d3[sel], axis=1))
    worst = float(np.max(res))
    if is_conoid(ff):
        return Outcome(NA, worst, worst, tol, _CONOID_REASON)
    if not ok:
        return Outcome(NA, worst, worst, tol, "k1 vanishes on more than a quarter of the samples")
    return Outcome(_yn(worst < tol), worst, worst, tol)


def a_slant_test(ff: StrictionFrameField, tol: float = 1e-3, axis_tol: float = 1e-3) -> Outcome:
    """a-slant and q-slant coincide; the q-slant outcome is reused."""
    out = q_slant_test(ff, tol, axis_tol)
    out.details = dict(out.details, delegated_to="q_slant")
    return out


# -- h-slant ------------------------------------------------------------------------

def sigma_function(ff: StrictionFrameField) -> np.ndarray:
    """k1^2 / (k1^2 + k2^2)^(3/2) * (k2/k1)', in the product-rule form."""
    dk1 = derive(ff.k1, ff.grid, 1)
    dk2 = derive(ff.k2, ff.grid, 1)
    return (ff.k1 * dk2 - dk1 * ff.k2) / (ff.k1**2 + ff.k2**2) ** 1.5


def h_slant_test(ff: StrictionFrameField, tol: float = 1e-3, axis_tol: float = 1e-3) -> Outcome:
    """Constancy of the sigma function; when constant with mean d the fixed
    direction is k2/K q + d h + k1/K a (K = sqrt(k1^2 + k2^2)), normalized."""
    _require_arclength(ff)
    sel, ok = _support(ff, k2=False)
    if not ok:
        return Outcome(NA, tol=tol, reason="k1 vanishes on more than a quarter of the samples")
    sigma = sigma_function(ff)
    verdict = is_constant(sigma[sel], tol)
    out = Outcome(_yn(verdict.is_constant), verdict.mean, verdict.residual, tol)
    if verdict.is_constant:
        d = verdict.mean
        big_k = np.hypot(ff.k1, ff.k2)[:, None]
        field_u = ff.k2[:, None] / big_k * ff.q + d * ff.h + ff.k1[:, None] / big_k * ff.a
        field_u /= math.sqrt(1.0 + d * d)
        inner = ff.interior
        axis = _unit(field_u[inner].mean(axis=0))
        drift = float(np.max(np.linalg.norm(field_u[inner] - axis, axis=1)))
        angle = is_constant(ff.h[inner] @ axis, axis_tol)
        out.axis = axis
        out.theta = math.acos(max(-1.0, min(1.0, d / math.sqrt(1.0 + d * d))))
        out.details = {"axis_drift": drift, "angle_residual": angle.residual,
                       "cos_theta": d / math.sqrt(1.0 + d * d)}
        if abs(d) < tol:
            out.details["warning"] = ("sigma vanishes: the fixed direction is orthogonal to h "
                                      "(angle pi/2)")
    return out


def k2_closed_form(theta: float, s, sign: int = 1):
    """Second curvature k2(s) = s / sqrt(tan^2 theta - s^2) of an h-slant surface
    with k1 = 1 (positive branch unless ``sign`` is -1)."""
    if not 0.0 < theta < math.pi / 2 or abs(theta - math.pi / 2) < 1e-12:
        raise HypothesisError(f"theta must lie in (0, pi/2) and differ from pi/2, got {theta!r}")
    t = math.tan(theta)
    s_arr = np.asarray(s, dtype=float)
    if np.any(np.abs(s_arr) >= t):
        raise DomainError(f"|s| must be below tan(theta) = {t:.6g}")
    val = sign * s_arr / np.sqrt(t * t - s_arr * s_arr)
    return float(val) if np.ndim(s) == 0 else val


def thm42_axis_check(ff: StrictionFrameField, theta: float, pairing: int | None = None) -> Outcome:
    """Drift of u(s) = cos(theta) (s q + h +/- sqrt(tan^2 theta - s^2) a) for k1 = 1.

    The sign of the a-term follows the branch of k2 (read from the data);
    ``pairing`` overrides it.  Returns max |du/ds| over the interior.
    """
    _require_arclength(ff)
    inner = ff.interior
    if np.max(np.abs(ff.k1[inner] - 1.0)) >= 1e-6:
        raise HypothesisError("axis formula needs first curvature k1 = 1 (max |k1 - 1| >= 1e-6)")
    if not 0.0 < theta < math.pi / 2 or abs(theta - math.pi / 2) < 1e-12:
        raise HypothesisError(f"theta must lie in (0, pi/2) and differ from pi/2, got {theta!r}")
    s = ff.s
    t = math.tan(theta)
    if np.any(np.abs(s) >= t):
        raise DomainError(f"|s| must stay below tan(theta) = {t:.6g}")
    branch = 1 if float(np.sum(ff.k2 * s)) >= 0 else -1
    sign = branch if pairing is None else pairing
    w = np.sqrt(t * t - s * s)
    u = math.cos(theta) * (s[:, None] * ff.q + ff.h + sign * w[:, None] * ff.a)
    drift = np.linalg.norm(derive(u, ff.grid, 1), axis=1)
    worst = float(np.max(drift[inner]))
    axis = _unit(u[inner].mean(axis=0))
    return Outcome(_yn(worst < 1e-3), worst, worst, 1e-3, theta=theta, axis=axis,
                   details={"branch": branch, "pairing": sign})


# -- aggregate report ------------------------------------------------------------

@dataclass
class ClassificationReport:
    name: str
    grid: dict
    developable: bool
    cylindrical: bool
    conoid: bool
    q_slant: bool
    h_slant: bool
    a_slant: bool
    status: dict
    theta_q: float | None
    axis_q: list | None
    axis_h: list | None
    sigma: float | None
    cos_theta_h: float | None
    tests: dict
    tolerances: dict
    max_abs_v0: float | None = None
    max_abs_d: float | None = None
    torsal_windows: list = field(default_factory=list)
    orientation_flips: list = field(default_factory=list)
    warnings: list = field(default_factory=list)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["tests"] = {k: (v.to_dict() if isinstance(v, Outcome) else v) for k, v in self.tests.items()}
        return d


def _developable_from_frame(ff, tol):
    t = derive(ff.c, ff.grid, 1)
    t /= np.linalg.norm(t, axis=1)[:, None]
    inner = ff.interior
    dev = np.minimum(np.linalg.norm(t - ff.q, axis=1), np.linalg.norm(t + ff.q, axis=1))
    return bool(np.max(dev[inner]) < tol), float(np.max(dev[inner]))


def classify(obj, tolerances: Tolerances | None = None, samples: int | None = None,
             theta: float | None = None) -> ClassificationReport:
    """Run every classifier on a spec (or a ready frame field) and aggregate."""
    tol = tolerances or Tolerances()
    warnings = []
    max_v0 = max_d = None
    torsal = []
    name = ""
    if isinstance(obj, RuledSurfaceSpec):
        name = obj.name
        sd = striction_curve(obj, samples)
        ff = ruled_apparatus(obj, samples)
        developable = sd.developable
        torsal = sd.torsal_windows
        max_v0 = float(np.max(np.abs(sd.v0)))
        max_d = float(np.max(np.abs(sd.d)))
        frame_dev, _ = _developable_from_frame(ff, tol.developable)
        if frame_dev != developable:
            warnings.append("distribution parameter and striction tangent disagree on developability")
    else:
        ff = obj
        developable, _ = _developable_from_frame(ff, tol.developable)
    warnings.extend(ff.warnings)

    conoid = is_conoid(ff)
    tests = {
        "ratio": q_slant_test(ff, tol.ratio, tol.axis),
        "det_q": det_q_test(ff, tol.det),
        "det_a": det_a_test(ff, tol.det),
        "eq15": eq15_residual(ff, tol.eq15),
        "sigma": h_slant_test(ff, tol.sigma, tol.axis),
    }
    q_out, h_out = tests["ratio"], tests["sigma"]
    statuses = {k: tests[k].status for k in ("ratio", "det_q", "det_a", "eq15")}
    applicable = {k: v for k, v in statuses.items() if v != NA}
    if len(set(applicable.values())) > 1:
        warnings.append(f"q-slant characterizations disagree: {applicable}")
    for key in ("ratio", "sigma"):
        if "warning" in tests[key].details:
            warnings.append(f"{key}: {tests[key].details['warning']}")

    if developable:
        try:
            cf = curve_apparatus(ff.c, ff.grid)
            hv = helix_tests(cf, tol.helix)
            gh = NA if hv.general_helix is None else _yn(hv.general_helix.is_constant)
            tests["striction_general_helix"] = Outcome(
                gh, None if hv.general_helix is None else hv.general_helix.mean,
                None if hv.general_helix is None else hv.general_helix.residual, tol.helix,
                "; ".join(hv.notes))
            tests["striction_slant_helix"] = Outcome(
                _yn(hv.slant_helix.is_constant), hv.slant_helix.mean, hv.slant_helix.residual, tol.helix)
            if NA not in (gh, q_out.status) and gh != q_out.status:
                warnings.append("developable surface: q-slant verdict and striction-line "
                                "general-helix verdict disagree")
            sh = tests["striction_slant_helix"].status
            if h_out.status != NA and sh != h_out.status:
                warnings.append("developable surface: h-slant verdict and striction-line "
                                "slant-helix verdict disagree")
        except GeometryError as exc:
            tests["striction_general_helix"] = Outcome(NA, reason=str(exc))
            tests["striction_slant_helix"] = Outcome(NA, reason=str(exc))

    if theta is not None:
        try:
            tests["k1_unit_axis"] = thm42_axis_check(ff, theta)
        except GeometryError as exc:
            tests["k1_unit_axis"] = Outcome(NA, reason=str(exc))

    grid = {"start": ff.grid.start, "step": ff.grid.step, "count": ff.grid.count, "trim": ff.trim}
    return ClassificationReport(
        name=name, grid=grid, developable=developable, cylindrical=False, conoid=conoid,
        q_slant=q_out.passed, h_slant=h_out.passed, a_slant=q_out.passed,
        status={"q_slant": q_out.status, "h_slant": h_out.status, "a_slant": q_out.status},
        theta_q=q_out.theta,
        axis_q=None if q_out.axis is None else [float(x) for x in q_out.axis],
        axis_h=None if h_out.axis is None else [float(x) for x in h_out.axis],
        sigma=h_out.statistic if h_out.status == YES else None,
        cos_theta_h=h_out.details.get("cos_theta"),
        tests=tests, tolerances=asdict(tol), max_abs_v0=max_v0, max_abs_d=max_d,
        torsal_windows=torsal, orientation_flips=list(ff.flips), warnings=warnings,
    )
