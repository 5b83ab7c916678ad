from __future__ import annotations

import math

import numpy as np
import pytest

from bbcool import (
    Bang,
    ControlBounds,
    InfeasibleConfiguration,
    NoConjugateTime,
    Point,
    SwitchPoint,
    first_integral,
    flow,
    inter_switch_time_x,
    inter_switch_time_y,
    next_switch_on_x,
    next_switch_on_y,
    switching_curves,
    x_axis_crossing,
    y_axis_crossings,
)
from bbcool.switching import JunctionKind, inter_switch_hyp_x, inter_switch_trig_y

B18 = ControlBounds(1.0, 8.0)


def test_switch_point_kind_inference():
    sp = SwitchPoint.at(1.2, 0.7)
    assert sp.kind is JunctionKind.XY
    assert sp.ratio_s == pytest.approx((0.7 / 1.2) ** 2)
    sp = SwitchPoint.at(1.2, -0.7)
    assert sp.kind is JunctionKind.YX
    with pytest.raises(ValueError):
        SwitchPoint.at(1.2, 0.0)
    with pytest.raises(ValueError):
        SwitchPoint(Point(1.0, -1.0), JunctionKind.XY, 1.0)


def test_inter_switch_time_y_half_period_limit():
    b = ControlBounds(1.0, 5.0)
    tau = inter_switch_time_y(SwitchPoint.at(1.3, 1e-12), b)
    assert tau == pytest.approx(math.pi / (2.0 * math.sqrt(b.u2)), abs=1e-10)


def test_inter_switch_time_y_spot_value():
    # at (1, 1) with u2 = 1: sin = -1, cos = 0, so the phase is 3*pi/2
    tau = inter_switch_time_y(SwitchPoint.at(1.0, 1.0), ControlBounds(1.0, 1.0))
    assert tau == pytest.approx(0.75 * math.pi, abs=1e-14)


def test_inter_switch_time_y_depends_only_on_slope():
    rng = np.random.default_rng(7)
    for _ in range(25):
        x1 = float(rng.uniform(0.2, 3.0))
        x2 = float(rng.uniform(0.05, 3.0))
        lam = float(rng.uniform(0.1, 10.0))
        t1 = inter_switch_time_y(SwitchPoint.at(x1, x2), B18)
        t2 = inter_switch_time_y(SwitchPoint.at(lam * x1, lam * x2), B18)
        assert t2 == pytest.approx(t1, rel=1e-12)


def test_inter_switch_time_y_rejects_lower_quadrant():
    with pytest.raises(ValueError):
        inter_switch_time_y(SwitchPoint.at(1.0, -1.0), B18)


def test_inter_switch_trig_identity():
    rng = np.random.default_rng(11)
    for _ in range(50):
        sp = SwitchPoint.at(float(rng.uniform(0.2, 3.0)), float(rng.uniform(0.05, 3.0)))
        s, c = inter_switch_trig_y(sp, B18)
        assert abs(s * s + c * c - 1.0) <= 1e-12


def test_inter_switch_time_x_spot_value():
    # at (1, -2) with u1 = 1: sinh = 4/3, cosh = 5/3, so tau = ln(3)/2
    tau = inter_switch_time_x(SwitchPoint.at(1.0, -2.0), ControlBounds(1.0, 1.0))
    assert tau == pytest.approx(0.5 * math.log(3.0), abs=1e-14)


def test_inter_switch_time_x_no_conjugate_at_cone():
    with pytest.raises(NoConjugateTime):
        inter_switch_time_x(SwitchPoint.at(1.0, -1.0), ControlBounds(1.0, 1.0))


def test_inter_switch_hyp_identity_and_ratio_recovery():
    rng = np.random.default_rng(13)
    for _ in range(50):
        u1 = float(rng.choice([1.0, 2.0]))
        b = ControlBounds(u1, 8.0)
        s = u1 * float(rng.uniform(1.5, 10.0))
        x1 = float(rng.uniform(0.2, 2.0))
        sp = SwitchPoint.at(x1, -math.sqrt(s) * x1)
        sh, ch = inter_switch_hyp_x(sp, b)
        assert abs(ch * ch - sh * sh - 1.0) <= 1e-12 * ch * ch
        tau = inter_switch_time_x(sp, b)
        ch_back = math.cosh(2.0 * math.sqrt(u1) * tau)
        s_back = u1 * (ch_back + 1.0) / (ch_back - 1.0)
        assert s_back == pytest.approx(s, rel=1e-10)


def test_inter_switch_time_x_cap_is_configurable():
    sp = SwitchPoint.at(1.0, -2.0)  # tau = ln(3)/2 ~ 0.55
    with pytest.raises(NoConjugateTime):
        inter_switch_time_x(sp, ControlBounds(1.0, 1.0), tau_max=0.5)


def test_next_switch_on_y_ratio_law():
    rng = np.random.default_rng(17)
    for _ in range(40):
        u1 = float(rng.choice([1.0, 2.0]))
        b = ControlBounds(u1, float(rng.choice([4.0, 8.0, 50.0])))
        alpha = float(rng.uniform(0.4, 1.5))
        kappa = alpha * float(rng.uniform(1.05, 2.5))
        sp = next_switch_on_y(kappa, alpha, b)
        mu_over_kappa = math.sqrt(
            (kappa**2 - alpha**2) * (u1 * alpha**2 * kappa**2 + 1.0)
        ) / (alpha * kappa**2)
        assert abs(abs(sp.p.x2 / sp.p.x1) - mu_over_kappa) <= 1e-12 * max(1.0, mu_over_kappa)
        assert sp.p.x2 < 0.0


def test_next_switch_on_y_not_mirror_image():
    sp = next_switch_on_y(1.3, 1.0, B18)
    assert sp.p.x1 != pytest.approx(1.3, abs=1e-6)


def test_next_switch_on_y_matches_flow_composition():
    # flow from the XY junction for its conjugate time lands on the same point
    alpha, kappa = 1.0, 1.3
    mu = math.sqrt((kappa**2 - alpha**2) * (alpha**2 * kappa**2 + 1.0)) / (alpha * kappa)
    start = SwitchPoint.at(kappa, mu)
    tau = inter_switch_time_y(start, B18)
    q = flow(start.p, Bang.Y, tau, B18)
    sp = next_switch_on_y(kappa, alpha, B18)
    assert sp.p.distance_to(q) <= 1e-9


def test_next_switch_on_y_membership_in_first_integrals():
    alpha, kappa = 1.0, 1.3
    mu = math.sqrt((kappa**2 - alpha**2) * (alpha**2 * kappa**2 + 1.0)) / (alpha * kappa)
    junction = Point(kappa, mu)
    sp = next_switch_on_y(kappa, alpha, B18)
    c_y = first_integral(junction, Bang.Y, B18)
    assert first_integral(sp.p, Bang.Y, B18) == pytest.approx(c_y, rel=1e-10)


def test_next_switch_on_x_ratio_law():
    rng = np.random.default_rng(19)
    checked = 0
    while checked < 40:
        u1 = float(rng.choice([1.0, 2.0]))
        u2 = float(rng.choice([8.0, 50.0]))
        b = ControlBounds(u1, u2)
        beta = float(rng.uniform(1.0, 3.0))
        inner = 1.0 / (math.sqrt(u2) * beta)
        zeta = float(rng.uniform(1.05 * inner, 0.9 * beta))
        xi_over_zeta = math.sqrt(
            (beta**2 - zeta**2) * (u2 * beta**2 * zeta**2 - 1.0)
        ) / (beta * zeta**2)
        if xi_over_zeta**2 <= u1 * 1.1:
            continue  # stay inside the feasible slope regime
        sp = next_switch_on_x(zeta, beta, b)
        assert abs(abs(sp.p.x2 / sp.p.x1) - xi_over_zeta) <= 1e-12 * max(1.0, xi_over_zeta)
        assert sp.p.x2 > 0.0
        checked += 1


def test_next_switch_on_x_matches_flow_composition():
    beta, zeta = 2.0, 0.9
    xi = -math.sqrt((beta**2 - zeta**2) * (8.0 * beta**2 * zeta**2 - 1.0)) / (beta * zeta)
    start = SwitchPoint.at(zeta, xi)
    tau = inter_switch_time_x(start, B18)
    q = flow(start.p, Bang.X, tau, B18)
    sp = next_switch_on_x(zeta, beta, B18)
    assert sp.p.distance_to(q) <= 1e-9
    assert sp.p.x1 != pytest.approx(zeta, abs=1e-6)  # not the mirror image


def test_next_switch_on_x_infeasible_when_slope_at_most_u1():
    # shallow junction: slope ratio below u1 leaves no conjugate switch
    with pytest.raises(InfeasibleConfiguration):
        next_switch_on_x(1.19, 1.2, ControlBounds(1.0, 8.0))


def test_next_switch_preconditions():
    with pytest.raises(ValueError):
        next_switch_on_y(0.9, 1.0, B18)  # kappa <= alpha
    with pytest.raises(ValueError):
        next_switch_on_x(1.5, 1.2, B18)  # zeta >= beta
    with pytest.raises(ValueError):
        next_switch_on_x(0.2, 0.3, ControlBounds(1.0, 1.0))  # beta is the inner crossing


def test_switch_map_iteration_preserves_ratio_with_alternating_sign():
    # seeds are drawn where a 20-step spiral stays within the float-conditioned
    # band (slope ratio near its cap keeps the per-turn expansion mild)
    rng = np.random.default_rng(20260810)
    for _ in range(10):
        u1 = float(rng.choice([1.0, 2.0]))
        u2 = float(rng.uniform(30.0, 60.0))
        b = ControlBounds(u1, u2)
        s_plus = 0.25 * (u2 - 1.0) ** 2
        s = s_plus * float(rng.uniform(0.55, 0.9))
        c = 2.0 * math.sqrt(s + u2) * float(rng.uniform(1.05, 1.6))
        k2 = 2.0 / (c + math.sqrt(c * c - 4.0 * (s + u2)))
        k = math.sqrt(k2)
        cur = SwitchPoint.at(k, -math.sqrt(s) * k)
        prev_mag = abs(cur.p.x2 / cur.p.x1)
        prev_sign = math.copysign(1.0, cur.p.x2)
        for _step in range(20):
            if cur.kind is JunctionKind.YX:
                beta = y_axis_crossings(cur.p, b)[1]
                cur = next_switch_on_x(cur.p.x1, beta, b)
            else:
                alpha = x_axis_crossing(cur.p, b)
                cur = next_switch_on_y(cur.p.x1, alpha, b)
            mag = abs(cur.p.x2 / cur.p.x1)
            sign = math.copysign(1.0, cur.p.x2)
            assert abs(mag - prev_mag) <= 1e-10
            assert sign != prev_sign
            prev_mag, prev_sign = mag, sign


def test_switching_curves_empty_grid():
    assert switching_curves(B18, [], resolution=50) == []


def test_switching_curves_zero_turn_regime_is_single_x_arc():
    curves = switching_curves(B18, np.linspace(1.2, 2.0, 9), resolution=40)
    assert len(curves) == 1
    (curve,) = curves
    assert curve.label == "turns0_initial_x_arc"
    assert curve.points.shape == (40, 2)
    assert curve.points[0, 0] == pytest.approx(1.0)
    assert curve.points[0, 1] == pytest.approx(0.0)
    assert np.all(curve.points[1:, 1] > 0.0)  # X-arc from (1, 0) rises


def test_switching_curves_mixed_regime_families():
    curves = switching_curves(B18, np.linspace(1.1, 10.0, 25), resolution=30)
    labels = {c.label for c in curves}
    assert labels == {"turns0_initial_x_arc", "turns1_switch0", "turns1_switch1"}
    by_label = {c.label: c for c in curves}
    assert all(c.points.shape[0] == 30 for c in curves)
    # first spiral switch dives below the axis, second rises above it
    assert np.all(by_label["turns1_switch0"].points[:, 1] < 0.0)
    assert np.all(by_label["turns1_switch1"].points[:, 1] > 0.0)
