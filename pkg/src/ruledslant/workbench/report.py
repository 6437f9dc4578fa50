"""Report JSON (with provenance and a JSON Schema) and the plain-text summary."""
from __future__ import annotations

import math
from importlib import metadata

import numpy as np

from ..slant import NA, ClassificationReport

try:
    VERSION = metadata.version("artifact")
except metadata.PackageNotFoundError:  # running from a source checkout
    VERSION = "0.1.0"


def jsonable(obj):
    """Plain JSON types; non-finite floats become None."""
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return jsonable(obj.tolist())
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        return x if math.isfinite(x) else None
    if obj is None or isinstance(obj, str):
        return obj
    return str(obj)


def report_document(report: ClassificationReport, source: str, digest: str,
                    samples: int) -> dict:
    doc = jsonable(report.to_dict())
    doc["provenance"] = {
        "tool": "ruledslant",
        "version": VERSION,
        "input": source,
        "input_sha256": digest,
        "samples": samples,
        "grid": doc["grid"],
        "tolerances": doc["tolerances"],
    }
    return doc


_NUM = {"type": ["number", "null"]}
_VEC = {"type": ["array", "null"], "items": {"type": "number"}, "minItems": 3, "maxItems": 3}
_STATUS = {"enum": ["yes", "no", "not_applicable"]}

REPORT_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "title": "ruled surface classification report",
    "type": "object",
    "required": ["name", "grid", "developable", "cylindrical", "conoid", "q_slant", "h_slant",
                 "a_slant", "status", "theta_q", "axis_q", "axis_h", "sigma", "tests",
                 "tolerances", "torsal_windows", "orientation_flips", "warnings", "provenance"],
    "properties": {
        "name": {"type": "string"},
        "grid": {
            "type": "object",
            "required": ["start", "step", "count", "trim"],
            "properties": {"start": {"type": "number"}, "step": {"type": "number"},
                           "count": {"type": "integer"}, "trim": {"type": "integer"}},
        },
        "developable": {"type": "boolean"},
        "cylindrical": {"type": "boolean"},
        "conoid": {"type": "boolean"},
        "q_slant": {"type": "boolean"},
        "h_slant": {"type": "boolean"},
        "a_slant": {"type": "boolean"},
        "status": {
            "type": "object",
            "required": ["q_slant", "h_slant", "a_slant"],
            "additionalProperties": _STATUS,
        },
        "theta_q": _NUM,
        "axis_q": _VEC,
        "axis_h": _VEC,
        "sigma": _NUM,
        "cos_theta_h": _NUM,
        "max_abs_v0": _NUM,
        "max_abs_d": _NUM,
        "tests": {
            "type": "object",
            "required": ["ratio", "det_q", "det_a", "eq15", "sigma"],
            "additionalProperties": {
                "type": "object",
                "required": ["status", "statistic", "residual", "tol", "reason"],
                "properties": {"status": _STATUS, "statistic": _NUM, "residual": _NUM,
                               "tol": _NUM, "reason": {"type": "string"}},
            },
        },
        "tolerances": {
            "type": "object",
            "required": ["ratio", "sigma", "det", "eq15", "axis", "helix", "developable"],
            "additionalProperties": {"type": "number"},
        },
        "torsal_windows": {"type": "array", "items": {"type": "array", "items": {"type": "number"},
                                                      "minItems": 2, "maxItems": 2}},
        "orientation_flips": {"type": "array", "items": {"type": "number"}},
        "warnings": {"type": "array", "items": {"type": "string"}},
        "provenance": {
            "type": "object",
            "required": ["tool", "version", "input", "input_sha256", "samples", "grid", "tolerances"],
            "properties": {"input_sha256": {"type": "string", "pattern": "^[0-9a-f]{64}$"}},
        },
    },
}


def _yes(flag: bool) -> str:
    return "yes" if flag else "no"


def _status_word(status: str) -> str:
    return "not applicable" if status == NA else status


def _vec(v) -> str:
    return "(" + ", ".join(f"{x:.6f}" for x in v) + ")"


def report_text(report: ClassificationReport) -> str:
    t = report.tests
    g = report.grid
    lines = [f"surface: {report.name or '(unnamed)'}",
             f"samples: {g['count']} (arc-length step {g['step']:.6g})",
             f"developable: {_yes(report.developable)}",
             f"conoid: {_yes(report.conoid)}"]

    q = t["ratio"]
    if q.status == "yes":
        lines.append(f"q-slant: yes (theta = {report.theta_q:.6f} rad, axis = {_vec(report.axis_q)})")
    elif q.status == "no":
        lines.append(f"q-slant: no (k1/k2 residual = {q.residual:.3e})")
    else:
        lines.append(f"q-slant: not applicable ({q.reason})")

    h = t["sigma"]
    if h.status == "yes":
        lines.append(f"h-slant: yes (sigma = {h.statistic:.6f}, axis = {_vec(report.axis_h)})")
    elif h.status == "no":
        lines.append(f"h-slant: no (sigma residual = {h.residual:.3e})")
    else:
        lines.append(f"h-slant: not applicable ({h.reason})")
    lines.append(f"a-slant: {_status_word(report.status['a_slant'])} (same as q-slant)")

    lines.append("tests:")
    for key, out in t.items():
        stat = "" if out.statistic is None else f" statistic = {out.statistic:.6g}"
        res = "" if out.residual is None else f" residual = {out.residual:.3e}"
        lines.append(f"  {key}: {_status_word(out.status)}{stat}{res}")
    if report.torsal_windows:
        lines.append(f"torsal windows: {report.torsal_windows}")
    for w in report.warnings:
        lines.append(f"warning: {w}")
    return "\n".join(lines) + "\n"
