import math

import numpy as np
import pytest

from ruledslant.errors import DomainError, HypothesisError
from ruledslant.frenet import ruled_apparatus
from ruledslant.numkit import is_constant
from ruledslant.slant import (NA, Tolerances, a_slant_test, classify, det_a_test, det_q_test,
                              eq15_residual, h_slant_test, is_conoid, k2_closed_form,
                              q_slant_test, sigma_function, thm42_axis_check)
from ruledslant.surfbase import from_curvatures
from ruledslant.workbench import builtin

ATAN2 = 1.1071487177940904  # atan(2)


def test_q_slant_example_6_1(ff61):
    out = q_slant_test(ff61)
    assert out.status == "yes"
    assert out.statistic == pytest.approx(1.0, abs=1e-12)  # k1 = k2
    assert out.theta == pytest.approx(math.pi / 4, abs=1e-12)
    assert out.details["axis_drift"] < 1e-3
    assert out.details["angle_residual"] < 1e-3
    assert a_slant_test(ff61).status == "yes"


def test_q_slant_example_6_2(ff62):
    out = q_slant_test(ff62)
    assert out.status == "no"
    # the ratio is tan(16 s)
    i = ff62.interior
    assert np.allclose((ff62.k1 / ff62.k2)[i], np.tan(16 * ff62.s[i]), rtol=1e-9)
    assert out.theta is None and out.axis is None
    assert a_slant_test(ff62).status == "no"


def test_q_slant_constant_curvatures(ff_const):
    out = q_slant_test(ff_const)
    assert out.status == "yes"
    assert out.theta == pytest.approx(ATAN2, abs=1e-4)
    # the fixed direction is (k2 q0 + k1 a0)/sqrt(5) for the identity initial frame
    assert np.allclose(out.axis, [1 / math.sqrt(5), 0, 2 / math.sqrt(5)], atol=1e-9)


def test_det_tests(ff61, ff62, ff_const):
    assert det_q_test(ff61).status == "yes"
    assert det_a_test(ff61).status == "yes"
    assert det_q_test(ff62).status == "no"
    assert det_a_test(ff62).status == "no"
    assert det_q_test(ff_const).status == "yes"
    # identity magnitudes on the non-slant example
    for out in (det_q_test(ff62), det_a_test(ff62)):
        assert out.details["identity_residual"] < 1e-2


def test_eq15(ff61, ff62, ff_const):
    assert eq15_residual(ff61).status == "yes"
    out = eq15_residual(ff62)
    assert out.status == "no" and out.statistic > 0.1
    assert eq15_residual(ff_const).statistic < 1e-3


def test_sigma_example_6_2(ff62):
    out = h_slant_test(ff62)
    assert out.status == "yes"
    assert out.statistic == pytest.approx(-8 / 15, abs=1e-9)
    assert out.residual < 1e-6
    d = -8 / 15
    assert out.details["cos_theta"] == pytest.approx(d / math.sqrt(1 + d * d))
    # the reconstructed axis makes a constant angle with h
    i = ff62.interior
    dots = ff62.h[i] @ out.axis
    assert is_constant(dots, 1e-3)
    assert np.mean(dots) == pytest.approx(d / math.sqrt(1 + d * d), abs=1e-6)


def test_sigma_constant_curvatures(ff_const):
    out = h_slant_test(ff_const)
    assert out.status == "yes"
    assert abs(out.statistic) < 1e-6
    assert "warning" in out.details


def test_sigma_sign_flip_invariance(ff62):
    flipped = ff62.transformed(k2=-ff62.k2, a=-ff62.a)
    a, b = h_slant_test(ff62), h_slant_test(flipped)
    assert a.status == b.status
    assert b.statistic == pytest.approx(-a.statistic)


def test_thm42(ff_thm42):
    out = h_slant_test(ff_thm42)
    assert out.status == "yes"
    assert out.statistic == pytest.approx(1.0, abs=1e-3)
    chk = thm42_axis_check(ff_thm42, math.pi / 4)
    assert chk.status == "yes" and chk.statistic < 1e-3
    wrong = thm42_axis_check(ff_thm42, math.pi / 4, pairing=-chk.details["pairing"])
    assert wrong.statistic > 0.1
    with pytest.raises(HypothesisError):
        thm42_axis_check(ff_thm42.transformed(k1=2 * ff_thm42.k1), math.pi / 4)


def test_k2_closed_form():
    assert k2_closed_form(math.pi / 4, 0.5) == pytest.approx(0.5773502691896258, rel=1e-14)
    assert k2_closed_form(math.pi / 4, 0.0) == 0.0
    assert k2_closed_form(math.pi / 4, 0.5, sign=-1) == pytest.approx(-0.5773502691896258)
    with pytest.raises(DomainError):
        k2_closed_form(math.pi / 4, 1.0)
    with pytest.raises(HypothesisError):
        k2_closed_form(math.pi / 2, 0.1)
    with pytest.raises(HypothesisError):
        k2_closed_form(0.0, 0.1)


def test_conoid_not_applicable():
    ff = ruled_apparatus(builtin("helicoid"))
    assert is_conoid(ff)
    assert q_slant_test(ff).status == NA
    out = det_a_test(ff)
    assert out.status == NA and out.reason.startswith("degenerate")
    assert eq15_residual(ff).status == NA


def test_vanishing_k2_on_most_samples_not_applicable():
    # k2 = 0 on [0, 0.8] and then grows: not a conoid, but the hypothesis fails
    ff = ruled_apparatus(from_curvatures("1", "0*s", "0", (0.0, 1.0), 512))
    ff = ff.transformed(k2=np.where(ff.s > 0.8, ff.s - 0.8, 0.0))
    assert not is_conoid(ff)
    assert q_slant_test(ff).status == NA
    assert det_q_test(ff).status == NA


def test_classify_example_6_1(ex61):
    r = classify(ex61)
    assert r.developable and r.q_slant and r.a_slant
    assert r.tests["striction_general_helix"].status == "yes"
    assert r.theta_q == pytest.approx(math.pi / 4, abs=1e-9)
    assert r.max_abs_v0 < 1e-9


def test_classify_example_6_2(ex62):
    r = classify(ex62)
    assert not r.q_slant and r.h_slant and not r.a_slant
    assert r.sigma == pytest.approx(-8 / 15, abs=1e-3)
    assert r.status == {"q_slant": "no", "h_slant": "yes", "a_slant": "no"}
    assert not [w for w in r.warnings if "disagree" in w]


def test_classify_helicoid():
    r = classify(builtin("helicoid"))
    assert r.conoid and not r.developable
    assert r.status["q_slant"] == NA and not r.q_slant
    assert r.max_abs_d == pytest.approx(1.0)


def test_classify_report_dict(ex62):
    d = classify(ex62, Tolerances(sigma=1e-2)).to_dict()
    assert d["tolerances"]["sigma"] == 1e-2
    assert d["tests"]["sigma"]["status"] == "yes"
    assert isinstance(d["axis_h"], list) and len(d["axis_h"]) == 3


def test_classify_theta_option(thm42_spec):
    r = classify(thm42_spec, theta=math.pi / 4)
    assert r.tests["k1_unit_axis"].status == "yes"
    r2 = classify(builtin("example-6-2"), theta=math.pi / 4)
    assert r2.tests["k1_unit_axis"].status == NA
