import math
from fractions import Fraction

import numpy as np
import pytest

from ruledslant import _kernels
from ruledslant.errors import FrameError, GridError, NonRegularCurveError
from ruledslant.numkit import (TRIM, UniformGrid, arc_length_reparam, derive, integrate_frenet,
                               is_constant, stencils)
from ruledslant.surfbase import AnalyticCurve


def test_grid_basics():
    g = UniformGrid.over(0.0, 1.0, 11)
    assert g.step == pytest.approx(0.1)
    assert g.stop == pytest.approx(1.0)
    assert g.points.shape == (11,)
    assert g.interior() == slice(TRIM, 11 - TRIM)
    with pytest.raises(GridError):
        UniformGrid.over(1.0, 1.0, 11)
    with pytest.raises(GridError):
        UniformGrid.over(0.0, 1.0, 5)


@pytest.mark.parametrize("order", [1, 2, 3])
def test_stencils_are_exact_and_sum_to_zero(order):
    central, left, right, den = stencils(order)
    # numerators are integers and every row annihilates constants
    for row in [central, *left, *right]:
        assert np.all(row == np.round(row))
        assert row.sum() == 0.0
    # moment conditions of the centred stencil, checked in exact arithmetic
    half = central.size // 2
    for k in range(central.size):
        m = sum(Fraction(int(w)) * Fraction(j - half) ** k for j, w in enumerate(central))
        want = math.factorial(order) * den if k == order else 0
        assert m == want or k > order + 4


def test_derive_polynomials_exactly():
    g = UniformGrid.over(-1.0, 2.0, 61)
    x = g.points
    assert np.max(np.abs(derive(x**2, g, 1) - 2 * x)) < 1e-12
    assert np.max(np.abs(derive(x**3, g, 2) - 6 * x)) < 1e-9
    assert np.max(np.abs(derive(x**4, g, 3) - 24 * x)) < 1e-6


@pytest.mark.parametrize("order, rate_min", [(1, 3.6), (2, 3.6), (3, 3.6)])
def test_fourth_order_convergence(order, rate_min):
    errs = []
    for n in (101, 201):
        g = UniformGrid.over(0.0, 2.0, n)
        d = derive(np.sin(3 * g.points), g, order)
        exact = 3**order * np.sin(3 * g.points + order * math.pi / 2)
        errs.append(np.max(np.abs(d - exact)))
    assert math.log2(errs[0] / errs[1]) > rate_min


def test_derive_vector_columns():
    g = UniformGrid.over(0.0, 1.0, 50)
    v = np.column_stack([np.sin(g.points), np.cos(g.points), g.points])
    d = derive(v, g, 1)
    assert d.shape == v.shape
    assert np.allclose(d[TRIM:-TRIM, 2], 1.0, atol=1e-12)


def test_derive_too_short():
    with pytest.raises(GridError):
        derive(np.arange(5.0), 0.1, 1)


def test_kernels_agree():
    rng = np.random.default_rng(7)
    f = rng.standard_normal((300, 4))
    for order in (1, 2, 3):
        c, lft, rgt, den = stencils(order)
        a = _kernels.stencil_numpy(f, c, lft, rgt, float(den))
        b = _kernels.stencil_numba(f, c, lft, rgt, float(den))
        assert np.max(np.abs(a - b)) <= 1e-14 * np.max(np.abs(a))
    k1 = 1 + 0.5 * np.sin(np.linspace(0, 3, 401))
    k2 = np.cos(np.linspace(0, 3, 401))
    ph = np.zeros(401)
    y0 = np.concatenate([np.zeros(3), np.eye(3).ravel()])
    a = _kernels.rk4_numpy(k1, k2, np.cos(ph), np.sin(ph), y0, 0.015)
    b = _kernels.rk4_numba(k1, k2, np.cos(ph), np.sin(ph), y0, 0.015)
    assert np.max(np.abs(a - b)) < 1e-14


def test_is_constant():
    assert is_constant(np.full(20, 3.0)).is_constant
    v = is_constant(np.linspace(0.0, 1.0, 20), 1e-3)
    assert not v and v.mean == pytest.approx(0.5)
    with pytest.raises(ValueError):
        is_constant(np.array([1.0] * 10 + [np.nan]))
    with pytest.raises(GridError):
        is_constant(np.ones(3))


def test_arc_length_helix():
    # (cos t, sin t, t) has speed sqrt(2): length over [0, 2] is 2 sqrt(2)
    curve = AnalyticCurve(["cos(t)", "sin(t)", "t"], (0.0, 2.0), "t")
    als = arc_length_reparam(curve, 257)
    assert als.length == pytest.approx(2 * math.sqrt(2), rel=1e-13)
    assert np.allclose(als.u, als.grid.points / math.sqrt(2), atol=1e-12)
    step = np.linalg.norm(np.diff(als.points, axis=0), axis=1)
    assert np.ptp(step) < 1e-8


def test_arc_length_offset_start():
    curve = AnalyticCurve(["t", "0", "0"], (1.0, 3.0), "t")
    als = arc_length_reparam(curve, 33, s0=1.0)
    assert np.allclose(als.u, als.grid.points, atol=1e-14)


def test_arc_length_rejects_singular_curve():
    curve = AnalyticCurve(["t^3", "t^2", "0"], (-1.0, 1.0), "t")
    with pytest.raises(NonRegularCurveError):
        arc_length_reparam(curve, 64)


def test_integrate_constant_curvatures():
    g = UniformGrid.over(0.0, 3.0, 601)
    ff = integrate_frenet(2.0, 1.0, 0.0, np.eye(3), np.zeros(3), g)
    frame = np.stack([ff.q, ff.h, ff.a], axis=1)
    gram = np.einsum("nij,nkj->nik", frame, frame)
    assert np.max(np.abs(gram - np.eye(3))) < 1e-13
    assert np.allclose(np.linalg.det(frame), 1.0, atol=1e-13)
    # the frame rotates about the fixed axis (k2 q + k1 a)/|k| with speed sqrt(5)
    axis = (1 * ff.q + 2 * ff.a) / math.sqrt(5)
    assert np.max(np.abs(axis - axis[0])) < 1e-9
    # q(s) against the closed form
    w = math.sqrt(5) * g.points
    u = np.array([1.0, 0.0, 2.0]) / math.sqrt(5)
    q0 = np.array([1.0, 0.0, 0.0])
    exact = (np.outer(np.cos(w), q0 - u @ q0 * u) + np.outer(np.sin(w), np.cross(u, q0))
             + u @ q0 * u)
    assert np.max(np.abs(ff.q - exact)) < 1e-9


def test_integrate_rejects_bad_frame():
    g = UniformGrid.over(0.0, 1.0, 20)
    with pytest.raises(FrameError):
        integrate_frenet(1.0, 1.0, 0.0, np.diag([1.0, 1.0, -1.0]), np.zeros(3), g)
    with pytest.raises(FrameError):
        integrate_frenet(1.0, 1.0, 0.0, 2 * np.eye(3), np.zeros(3), g)


def test_pure_numpy_flag_end_to_end():
    import json
    import os
    import subprocess
    import sys

    code = ("import json; from ruledslant import _kernels; from ruledslant.slant import classify; "
            "from ruledslant.workbench import builtin; r = classify(builtin('example-6-2', samples=256)); "
            "print(json.dumps([_kernels.USE_NUMBA, r.sigma, r.h_slant]))")
    runs = {}
    for flag in ("0", "1"):
        env = dict(os.environ, RULEDSLANT_PURE_NUMPY=flag)
        res = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
        runs[flag] = json.loads(res.stdout)
    assert runs["0"][0] is True and runs["1"][0] is False
    assert runs["1"][2] is True
    assert runs["1"][1] == pytest.approx(runs["0"][1], abs=1e-12)
