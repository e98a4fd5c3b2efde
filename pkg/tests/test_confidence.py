import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from attune.confidence import (
    ATTENTION,
    INTENT,
    PERFORMANCE,
    Orientation,
    SigmoidParams,
    confidences,
    logistic,
)

# expected values evaluated with mpmath at 40 digits
LOGISTIC_18_ATTENTION = 0.07585818002124355119
LOGISTIC_08_INTENT = 0.98015969426592249172

finite = st.floats(-1e3, 1e3, allow_nan=False)


@pytest.mark.parametrize("params", [ATTENTION, INTENT, PERFORMANCE])
def test_midpoint_is_one_half(params):
    assert abs(logistic(params.x0, params) - 0.5) <= 1e-12


def test_printed_formula_values():
    assert logistic(18, ATTENTION) == pytest.approx(LOGISTIC_18_ATTENTION, abs=1e-12)
    assert logistic(0.8, INTENT) == pytest.approx(LOGISTIC_08_INTENT, abs=1e-12)


def test_matches_printed_expressions_bitwise():
    for ha in (0.0, 3.5, 17.0, 18.0, 45.0):
        assert logistic(ha, ATTENTION) == 1 / (1 + math.exp(2.5 * ha - 2.5 * 17))
    for i in (0.0, 0.3, 0.5, 0.8, 1.0):
        assert logistic(i, INTENT) == 1 / (1 + math.exp(-13 * i + 13 * 0.5))
    for p in (0.0, 0.2, 0.5, 1.0):
        assert logistic(p, PERFORMANCE) == 1 / (1 + math.exp(11 * p - 11 * 0.5))


@pytest.mark.parametrize("bad", [math.nan, math.inf, -math.inf])
def test_non_finite_input_rejected(bad):
    with pytest.raises(ValueError):
        logistic(bad, ATTENTION)


def test_invalid_slope_rejected():
    with pytest.raises(ValueError):
        SigmoidParams(0.0, 1.0)
    with pytest.raises(ValueError):
        SigmoidParams(-1.0, 1.0, Orientation.INCREASING)


def test_saturates_without_overflow():
    assert logistic(1e6, ATTENTION) == 0.0
    assert logistic(-1e6, ATTENTION) == 1.0
    assert logistic(400.0, ATTENTION) < 1e-300


@given(finite, finite)
def test_monotonicity(a, b):
    if a == b:
        return
    lo, hi = min(a, b), max(a, b)
    assert logistic(lo, ATTENTION) >= logistic(hi, ATTENTION)
    assert logistic(lo, PERFORMANCE) >= logistic(hi, PERFORMANCE)
    assert logistic(lo, INTENT) <= logistic(hi, INTENT)


@given(st.floats(0.0, 5.0))
def test_strict_monotonicity_near_midpoint(delta):
    # away from saturation the curves are strictly monotone in double precision
    if delta < 1e-6:
        return
    a = ATTENTION.x0
    assert logistic(a + delta, ATTENTION) < logistic(a, ATTENTION) < logistic(a - delta, ATTENTION)


@pytest.mark.parametrize("params", [ATTENTION, INTENT, PERFORMANCE])
@given(delta=st.floats(0.0, 50.0))
def test_symmetry_about_midpoint(params, delta):
    assert abs(logistic(params.x0 + delta, params) + logistic(params.x0 - delta, params) - 1) <= 1e-12


def test_confidences_at_midpoints():
    cv = confidences(17, 0.5, 0.5)
    assert cv.as_tuple() == (0.5, 0.5, 0.5)


def test_confidences_best_case():
    cv = confidences(0, 1, 0)
    assert min(cv.as_tuple()) > 0.99
    assert cv.conf_i == pytest.approx(0.99849881774326300847, abs=1e-12)
    assert cv.conf_e == pytest.approx(0.99592986228410387267, abs=1e-12)


def test_confidences_worst_case():
    cv = confidences(60, 0, 1)
    assert max(cv.as_tuple()) < 0.01
    assert cv.conf_i == pytest.approx(0.00150118225673699153, abs=1e-12)
    assert cv.conf_e == pytest.approx(0.00407013771589612733, abs=1e-12)


def test_out_of_range_head_yaw_evaluated_not_clamped():
    assert confidences(200.0, 0.5, 0.5).conf_h == 1 / (1 + math.exp(2.5 * 200 - 2.5 * 17))


def test_params_round_trip():
    for p in (ATTENTION, INTENT, PERFORMANCE):
        assert SigmoidParams.from_dict(p.to_dict()) == p
