"""Builtin fixtures, SurfaceFile JSON documents, sample CSV tables and OBJ meshes."""
from __future__ import annotations

import copy
import hashlib
import io
import json
from pathlib import Path

import numpy as np

from ..errors import InputError, SurfaceFileError
from ..exprparse import evaluate, parse
from ..surfbase import AnalyticCurve, RuledSurfaceSpec, SampledCurve, from_curvatures

MIN_FILE_SAMPLES = 64
CSV_HEADER = "u,fx,fy,fz,qx,qy,qz"

# Ranges are chosen so that both invariants stay away from zero (the
# classifiers assume non-vanishing curvatures); they are not meant to
# reproduce the extents of any published figure.
_BUILTINS = {
    "example-6-1": {
        "kind": "analytic", "param": "s",
        "base": ["1/3*(1+s)^(3/2)", "1/3*(1-s)^(3/2)", "s/sqrt(2)"],
        "director": ["1/2*(1+s)^(1/2)", "-1/2*(1-s)^(1/2)", "1/sqrt(2)"],
        "range": [-0.5, 0.5], "samples": 1024,
    },
    "example-6-2": {
        "kind": "analytic", "param": "s",
        "base": ["25/612*sin(18*s) - 9/1700*sin(50*s)",
                 "-25/612*cos(18*s) + 9/1700*cos(50*s)",
                 "15/272*sin(16*s)"],
        "director": ["50/68*cos(18*s) - 18/68*cos(50*s)",
                     "50/68*sin(18*s) - 18/68*sin(50*s)",
                     "15/17*cos(16*s)"],
        "range": [0.02, 0.18], "samples": 1024,
    },
    "helicoid": {
        "kind": "analytic", "param": "u",
        "base": ["0", "0", "u"],
        "director": ["cos(u)", "sin(u)", "0"],
        "range": [0.0, 4.0], "samples": 1024,
    },
    "helix-tangent-developable": {
        "kind": "analytic", "param": "u",
        "base": ["cos(u)/sqrt(2)", "sin(u)/sqrt(2)", "u/sqrt(2)"],
        "director": ["-sin(u)/sqrt(2)", "cos(u)/sqrt(2)", "1/sqrt(2)"],
        "range": [0.0, 4.0], "samples": 1024,
    },
    "const-k1-k2": {
        "kind": "curvatures", "k1": "2", "k2": "1", "phi": "0",
        "range": [0.0, 3.0], "samples": 1024,
    },
    "thm-4-2": {
        "kind": "curvatures", "k1": "1", "k2": "s/sqrt(tan(pi/4)^2 - s^2)", "phi": "0",
        "range": [-0.6, 0.6], "samples": 1024,
    },
}


def builtin_names() -> list[str]:
    return sorted(_BUILTINS)


def builtin_document(name: str) -> dict:
    try:
        return copy.deepcopy(_BUILTINS[name])
    except KeyError:
        raise SurfaceFileError(f"unknown builtin {name!r}; choose from {', '.join(builtin_names())}") from None


def builtin(name: str, samples: int | None = None) -> RuledSurfaceSpec:
    doc = builtin_document(name)
    if samples is not None:
        doc["samples"] = samples
    spec = surface_from_document(doc)
    spec.name = name
    return spec


def document_hash(doc: dict) -> str:
    blob = json.dumps(doc, sort_keys=True, separators=(",", ":")).encode()
    return hashlib.sha256(blob).hexdigest()


# -- numbers and ranges --------------------------------------------------------

def parse_number(text) -> float:
    """A constant expression such as ``0.3``, ``-pi/4`` or ``atan(2)``."""
    if isinstance(text, (int, float)) and not isinstance(text, bool):
        return float(text)
    ast = parse(str(text), var="_")
    if not ast.is_constant:
        raise InputError(f"expected a constant, got {text!r}")
    return evaluate(ast, 0.0)


def parse_range(text) -> tuple[float, float]:
    if isinstance(text, (list, tuple)):
        parts = list(text)
    else:
        parts = str(text).split(":")
    if len(parts) != 2:
        raise InputError(f"range must have the form A:B, got {text!r}")
    a, b = (parse_number(p) for p in parts)
    if not b > a:
        raise InputError(f"range end must exceed its start, got [{a}, {b}]")
    return a, b


# -- SurfaceFile -----------------------------------------------------------------

_KINDS = {"analytic", "sampled", "builtin", "curvatures"}


def _samples(doc) -> int:
    n = doc.get("samples", 1024)
    if not isinstance(n, int) or isinstance(n, bool) or n < MIN_FILE_SAMPLES:
        raise SurfaceFileError(f"samples must be an integer >= {MIN_FILE_SAMPLES}, got {n!r}")
    return n


def _triple(doc, key):
    val = doc.get(key)
    if not isinstance(val, list) or len(val) != 3:
        raise SurfaceFileError(f"{key!r} must be a list of three expressions")
    return [str(x) for x in val]


def surface_from_document(doc: dict, base_dir: Path | None = None) -> RuledSurfaceSpec:
    if not isinstance(doc, dict) or doc.get("kind") not in _KINDS:
        raise SurfaceFileError(f"surface document needs 'kind' in {sorted(_KINDS)}")
    kind = doc["kind"]
    if kind == "builtin":
        return builtin(str(doc.get("name")))
    if kind == "sampled":
        if "path" not in doc:
            raise SurfaceFileError("sampled surface needs a 'path'")
        path = Path(doc["path"])
        if base_dir is not None and not path.is_absolute():
            path = base_dir / path
        return read_csv(path)
    if "range" not in doc:
        raise SurfaceFileError(f"{kind} surface needs a 'range'")
    domain = parse_range(doc["range"])
    n = _samples(doc)
    if kind == "analytic":
        var = str(doc.get("param", "u"))
        base = AnalyticCurve(_triple(doc, "base"), domain, var)
        director = AnalyticCurve(_triple(doc, "director"), domain, var)
        return RuledSurfaceSpec(base, director, domain, n, meta={"kind": "analytic"})
    for key in ("k1", "k2"):
        if key not in doc:
            raise SurfaceFileError(f"curvatures surface needs {key!r}")
    return from_curvatures(str(doc["k1"]), str(doc["k2"]), str(doc.get("phi", "0")),
                           domain, n, var=str(doc.get("param", "s")))


def load_input(ref: str) -> tuple[RuledSurfaceSpec, str]:
    """Resolve ``builtin:NAME``, a SurfaceFile JSON path or a sample CSV path.

    Returns the spec and the SHA-256 of the input (file bytes, or the
    canonical JSON of a builtin).
    """
    if ref.startswith("builtin:"):
        name = ref.split(":", 1)[1]
        return builtin(name), document_hash(builtin_document(name))
    path = Path(ref)
    try:
        raw = path.read_bytes()
    except OSError as exc:
        raise SurfaceFileError(f"cannot read {ref}: {exc.strerror or exc}") from None
    digest = hashlib.sha256(raw).hexdigest()
    if path.suffix.lower() == ".csv":
        spec = read_csv(path)
    else:
        try:
            doc = json.loads(raw)
        except (json.JSONDecodeError, UnicodeDecodeError) as exc:
            raise SurfaceFileError(f"{ref} is not valid JSON: {exc}") from None
        spec = surface_from_document(doc, path.parent)
    if not spec.name:
        spec.name = path.stem
    return spec, digest


# -- CSV -------------------------------------------------------------------------

def write_csv(spec: RuledSurfaceSpec, path, count: int | None = None) -> None:
    """Tabulate base curve and director on the uniform parameter grid."""
    u = spec.grid(count).points
    table = np.column_stack([u, spec.base.jet(u, 0).value, spec.director.jet(u, 0).value])
    buf = io.StringIO()
    np.savetxt(buf, table, fmt="%.17g", delimiter=",", header=CSV_HEADER, comments="")
    Path(path).write_text(buf.getvalue())


def read_csv(path) -> RuledSurfaceSpec:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise SurfaceFileError(f"cannot read {path}: {exc.strerror or exc}") from None
    lines = text.splitlines()
    if not lines or lines[0].replace(" ", "") != CSV_HEADER:
        raise SurfaceFileError(f"{path}: expected header {CSV_HEADER!r}")
    try:
        table = np.loadtxt(io.StringIO(text), delimiter=",", skiprows=1, ndmin=2)
    except ValueError as exc:
        raise SurfaceFileError(f"{path}: {exc}") from None
    if table.shape[1] != 7:
        raise SurfaceFileError(f"{path}: expected 7 columns, got {table.shape[1]}")
    if table.shape[0] < MIN_FILE_SAMPLES:
        raise SurfaceFileError(f"{path}: need at least {MIN_FILE_SAMPLES} rows, got {table.shape[0]}")
    u = table[:, 0]
    try:
        base, director = SampledCurve(u, table[:, 1:4]), SampledCurve(u, table[:, 4:7])
    except ValueError as exc:
        raise SurfaceFileError(f"{path}: {exc}") from None
    return RuledSurfaceSpec(base, director, (u[0], u[-1]), u.size, path.stem, {"kind": "sampled"})


# -- OBJ -------------------------------------------------------------------------

def obj_text(spec: RuledSurfaceSpec, v_range, nu: int = 64, nv: int = 16) -> str:
    """Wavefront OBJ of the surface patch, vertices in u-major order."""
    if nu < 2 or nv < 2:
        raise InputError("mesh needs nu >= 2 and nv >= 2")
    u = np.linspace(*spec.domain, nu)
    v = np.linspace(float(v_range[0]), float(v_range[1]), nv)
    f = spec.base_jet(u, 0).value
    q = spec.director_jet(u, 0).value
    pts = f[:, None, :] + v[None, :, None] * q[:, None, :]
    out = [f"# ruled surface {spec.name or ''}".rstrip(), f"# {nu} x {nv} vertices"]
    out += ["v %.9g %.9g %.9g" % tuple(p) for p in pts.reshape(-1, 3)]
    for i in range(nu - 1):
        for j in range(nv - 1):
            a = i * nv + j + 1
            b = a + nv
            out.append(f"f {a} {b} {b + 1} {a + 1}")
    return "\n".join(out) + "\n"


def export_obj(spec: RuledSurfaceSpec, v_range, nu: int, nv: int, path) -> None:
    try:
        Path(path).write_text(obj_text(spec, v_range, nu, nv))
    except OSError as exc:
        raise InputError(f"cannot write {path}: {exc.strerror or exc}") from None
