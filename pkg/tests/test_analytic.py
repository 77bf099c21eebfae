import math

import pytest
from hypothesis import given, settings, strategies as st

from asymfield import analytic
from asymfield.errors import ResonanceDivergenceError

sig = st.floats(0, 0.99)
phase = st.floats(-10, 10)


@settings(max_examples=200)
@given(sig, phase)
def test_ring_rate_closed_form(sigma, delta0):
    fl, fr = analytic.ring_enhancements(analytic.RingParams(sigma, delta0))
    total = 0.5 * (abs(fl) ** 2 + abs(fr) ** 2)
    assert total == pytest.approx(analytic.ring_rate_ratio(analytic.RingParams(sigma, delta0)), rel=1e-12)
    lor = (1 - sigma**2) / (1 + sigma**2 - 2 * sigma * math.cos(delta0))
    assert total == pytest.approx(lor, rel=1e-12)


@settings(max_examples=200)
@given(sig, st.floats(1e-4, 0.5), st.floats(0, 2 * math.pi))
def test_backscatter_resonant_consistent(sigma, rho, mism):
    p = analytic.BackscatterParams.from_mismatch(sigma, rho, 0.0, 2 * math.pi, mism)
    total, left, right = analytic.backscatter_rates(p)
    t2, pl, pr = analytic.backscatter_resonant(sigma, rho, mism)
    assert total == pytest.approx(t2, rel=1e-9)
    assert left + right == pytest.approx(total, rel=1e-9)
    # closed-form roundoff grows like eps / (1 - sigma)^2
    assert pl + pr == pytest.approx(1.0, abs=1e-10)
    assert left / total == pytest.approx(pl, abs=1e-9)


@settings(max_examples=200)
@given(st.floats(0, 0.99), phase)
def test_aux_phase_factor_unimodular(s, d):
    assert abs(analytic.aux_phase_factor(s, d)) == pytest.approx(1.0, abs=1e-12)


@settings(max_examples=200)
@given(st.floats(0, 0.99), st.floats(0, 0.99), phase, phase, phase, phase)
def test_sagnac_total_independent_of_loop(sms, sma, ds, dm, da, routing):
    p = analytic.SagnacParams.from_phases(sms, sma, ds, dm, da, routing)
    f1, f2 = analytic.sagnac_enhancements(p)
    total = 0.5 * (abs(f1) ** 2 + abs(f2) ** 2)
    assert total == pytest.approx(analytic.sagnac_total_rate(p), rel=1e-9)
    p1, p2 = analytic.sagnac_port_probs(p)
    assert p1 == pytest.approx(0.5 * abs(f1) ** 2 / total, abs=1e-9)
    assert p1 + p2 == pytest.approx(1.0, abs=1e-12)


def test_from_phases_round_trip():
    p = analytic.SagnacParams.from_phases(0.98, 0.7, 0.4, 6.0, 1.1, 0.9)
    assert (p.delta_s, p.delta_m, p.delta_a, p.routing_phase) == pytest.approx((0.4, 6.0, 1.1, 0.9))


def test_port_probs_need_balanced_splitter():
    p = analytic.SagnacParams.from_phases(0.98, 0.7, 0, 0, 0, 0, sigma_s=0.5)
    with pytest.raises(ValueError):
        analytic.sagnac_port_probs(p)


def test_loop_phase_routes_between_ports():
    on = dict(sigma_ms=0.98, sigma_ma=0.7, delta_m=2 * math.pi, delta_a=2 * math.pi, routing_phase=math.pi / 2)
    p1, p2 = analytic.sagnac_port_probs(analytic.SagnacParams.from_phases(delta_s=0.0, **on))
    assert p2 == pytest.approx(1.0)
    p1, p2 = analytic.sagnac_port_probs(analytic.SagnacParams.from_phases(delta_s=math.pi, **on))
    assert p1 == pytest.approx(1.0)


def test_divergence_guard():
    with pytest.raises(ResonanceDivergenceError):
        analytic.ring_enhancements(analytic.RingParams(1 - 1e-15, 0.0))
