"""Acceptance gate: every criterion below runs at its stated tolerance and
prints one pass line; run with ``pytest tests/test_acceptance.py -v -s``."""

from __future__ import annotations

import json
import math
import time
from pathlib import Path

import numpy as np
import pytest

from bbcool import (
    Bang,
    ControlBounds,
    NoSolution,
    Point,
    SwitchPoint,
    VerifyTolerances,
    approx_turn_ratio,
    candidate_time,
    conjugate_point_residual,
    cut_locus,
    feasible_ratio_interval,
    integrate_state,
    inter_switch_time_x,
    inter_switch_time_y,
    next_switch_on_x,
    next_switch_on_y,
    pmp_check,
    ratio_equation_sides,
    synthesize,
    time_n_turns,
    time_one_switch,
    x_axis_crossing,
    y_axis_crossings,
)
from bbcool.cli import main as cli_main
from bbcool.switching import JunctionKind

from conftest import sample_configs

B11 = ControlBounds(1.0, 1.0)
B18 = ControlBounds(1.0, 8.0)
B150 = ControlBounds(1.0, 50.0)


@pytest.fixture(scope="module")
def certified_sample():
    """Criterion 4/5/10 shared corpus: 50 synthesized and verified schedules."""
    configs = sample_configs(50)
    t_start = time.monotonic()
    entries = []
    for u1, u2, gamma in configs:
        bounds = ControlBounds(u1, u2)
        result = synthesize(gamma, bounds)
        traj = integrate_state(result.schedule, step=1e-5)
        report = pmp_check(result.schedule, step=1e-5)
        entries.append((bounds, gamma, result, traj, report))
    elapsed = time.monotonic() - t_start
    return entries, elapsed


def test_criterion_01_degenerate_transfer():
    t0, _ = time_one_switch(1.0 + 1e-8, B18)
    assert t0 <= 1e-3
    previous = math.inf
    for g in (1.1, 1.001, 1.00001, 1.0000001):
        t, _ = time_one_switch(g, B18)
        assert 0.0 < t < previous
        previous = t
    print(f"criterion 01 PASS: T0(1+1e-8) = {t0:.3e} <= 1e-3 and T0 decreases toward 0")


def test_criterion_02_closed_form_spot_value():
    t0, sp = time_one_switch(2.0, B11)
    expected = math.log(2.0) + math.pi / 4.0
    assert abs(t0 - expected) <= 1e-12
    assert abs(sp.x1**2 - 17.0 / 8.0) <= 1e-12
    print(f"criterion 02 PASS: |T0 - (ln 2 + pi/4)| = {abs(t0 - expected):.2e}, "
          f"|kappa^2 - 17/8| = {abs(sp.x1 ** 2 - 17.0 / 8.0):.2e}")


def test_criterion_03_intermediate_x_time_reduction():
    s_plus = feasible_ratio_interval(B18)[1]
    _, bd, _ = time_n_turns(5.0, B18, 1, s=s_plus)
    err = abs(bd.T_X - 0.5 * math.log(9.0 / 5.0))
    assert err <= 1e-12
    print(f"criterion 03 PASS: |T_X(s+) - ln(9/5)/2| = {err:.2e}")


def test_criterion_04_oracle_endpoint_equivalence(certified_sample):
    entries, elapsed = certified_sample
    worst = 0.0
    for bounds, gamma, _result, traj, _report in entries:
        err = traj.endpoint.distance_to(Point(gamma, 0.0))
        worst = max(worst, err)
        assert err <= 1e-6
    assert elapsed < 60.0
    print(f"criterion 04 PASS: 50 schedules, worst RK4 endpoint error {worst:.2e}, "
          f"pipeline {elapsed:.1f}s < 60s")


def test_criterion_05_pmp_certification(certified_sample):
    entries, _elapsed = certified_sample
    worst_h = worst_l2 = worst_l1x2 = 0.0
    total_violations = 0
    for _bounds, _gamma, _result, _traj, report in entries:
        assert report.max_abs_H <= 1e-6
        worst_h = max(worst_h, report.max_abs_H)
        for v in report.lambda2_at_switches:
            assert abs(v) <= 1e-7
            worst_l2 = max(worst_l2, abs(v))
        for v in report.lambda1_x2_at_switches:
            assert abs(v - 1.0) <= 1e-6
            worst_l1x2 = max(worst_l1x2, abs(v - 1.0))
        total_violations += report.phi_sign_violations
    assert total_violations == 0
    print(f"criterion 05 PASS: max|H| {worst_h:.2e}, |lambda2| {worst_l2:.2e}, "
          f"|lambda1*x2-1| {worst_l1x2:.2e}, 0 sign violations")


def test_criterion_06_transcendental_residual_and_monotonicity(certified_sample):
    entries, _ = certified_sample
    worst = 0.0
    checked = 0
    for bounds, gamma, result, _traj, _report in entries:
        for n, cand in result.candidates.items():
            if n >= 1 and cand.feasible:
                lhs, rhs = ratio_equation_sides(cand.s, gamma, bounds, n)
                assert abs(lhs - rhs) <= 1e-12
                lo, hi = feasible_ratio_interval(bounds)
                assert lo < cand.s <= hi
                worst = max(worst, abs(lhs - rhs))
                checked += 1
    assert checked > 0
    violations = 0
    for bounds, gamma, n in ((B18, 5.0, 1), (B18, 9.0, 2), (B150, 12.0, 2)):
        lo, hi = feasible_ratio_interval(bounds)
        grid = np.linspace(lo * (1.0 + 1e-9), hi, 1000)
        vals = np.array([ratio_equation_sides(float(s), gamma, bounds, n) for s in grid])
        violations += int(np.count_nonzero(np.diff(vals[:, 0]) >= 0.0))
        violations += int(np.count_nonzero(np.diff(vals[:, 1]) <= 0.0))
    assert violations == 0
    print(f"criterion 06 PASS: {checked} ratio roots, worst residual {worst:.2e}, "
          f"monotonicity violations 0/1000-point grids")


def test_criterion_07_figure_regime_reproduction():
    # u1 = 1, u2 = 8: exactly one zero/one-turn exchange on [1.05, 10]
    grid = np.linspace(1.05, 10.0, 180)
    signs = []
    for g in grid:
        try:
            diff = candidate_time(float(g), B18, 0) - candidate_time(float(g), B18, 1)
        except NoSolution:
            continue
        signs.append((float(g), math.copysign(1.0, diff)))
    flips = [
        (a[0], b[0]) for a, b in zip(signs, signs[1:]) if a[1] != b[1]
    ]
    assert len(flips) == 1
    gamma1 = cut_locus(B18, 0, 1, flips[0][0], flips[0][1], tol=1e-9)
    assert candidate_time(gamma1.gamma_star - 1e-3, B18, 0) < candidate_time(
        gamma1.gamma_star - 1e-3, B18, 1
    )
    assert candidate_time(gamma1.gamma_star + 1e-3, B18, 0) > candidate_time(
        gamma1.gamma_star + 1e-3, B18, 1
    )

    # u1 = 1, u2 = 50: additionally a one/two-turn exchange on [1.05, 15]
    grid50 = np.linspace(1.05, 15.0, 180)
    signs50 = []
    for g in grid50:
        try:
            diff = candidate_time(float(g), B150, 1) - candidate_time(float(g), B150, 2)
        except NoSolution:
            continue
        signs50.append((float(g), math.copysign(1.0, diff)))
    flips50 = [
        (a[0], b[0]) for a, b in zip(signs50, signs50[1:]) if a[1] != b[1]
    ]
    assert len(flips50) == 1
    gamma2 = cut_locus(B150, 1, 2, flips50[0][0], flips50[0][1], tol=1e-9)
    assert candidate_time(gamma2.gamma_star - 1e-3, B150, 1) < candidate_time(
        gamma2.gamma_star - 1e-3, B150, 2
    )
    assert candidate_time(gamma2.gamma_star + 1e-3, B150, 1) > candidate_time(
        gamma2.gamma_star + 1e-3, B150, 2
    )
    print(f"criterion 07 PASS: gamma1(u2=8) = {gamma1.gamma_star:.9f}, "
          f"gamma2(u2=50) = {gamma2.gamma_star:.9f}, single crossings confirmed")


def test_criterion_08_switch_ratio_iteration():
    rng = np.random.default_rng(20260810)
    worst_step = 0.0
    for _seed in range(10):
        u1 = float(rng.choice([1.0, 2.0]))
        u2 = float(rng.uniform(30.0, 60.0))
        bounds = ControlBounds(u1, u2)
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
                beta = y_axis_crossings(cur.p, bounds)[1]
                cur = next_switch_on_x(cur.p.x1, beta, bounds)
            else:
                alpha = x_axis_crossing(cur.p, bounds)
                cur = next_switch_on_y(cur.p.x1, alpha, bounds)
            mag = abs(cur.p.x2 / cur.p.x1)
            sign = math.copysign(1.0, cur.p.x2)
            assert abs(mag - prev_mag) <= 1e-10
            assert sign != prev_sign
            worst_step = max(worst_step, abs(mag - prev_mag))
            prev_mag, prev_sign = mag, sign
    print(f"criterion 08 PASS: 10 seeds x 20 steps, worst per-step ratio drift {worst_step:.2e}")


def test_criterion_09_conjugate_point_cross_validation():
    rng = np.random.default_rng(424242)
    worst = 0.0
    for k in range(30):
        u1 = float(rng.choice([1.0, 2.0]))
        u2 = float(rng.choice([4.0, 8.0, 50.0]))
        bounds = ControlBounds(u1, u2)
        if k % 2 == 0:
            sp = SwitchPoint.at(float(rng.uniform(0.3, 2.0)), float(rng.uniform(0.2, 3.0)))
            tau = inter_switch_time_y(sp, bounds)
            residual = conjugate_point_residual(sp.p, Bang.Y, tau, bounds, step=1e-5)
        else:
            s = u1 * float(rng.uniform(1.5, 4.0))
            x1 = float(rng.uniform(0.3, 1.5))
            sp = SwitchPoint.at(x1, -math.sqrt(s) * x1)
            tau = inter_switch_time_x(sp, bounds)
            residual = conjugate_point_residual(sp.p, Bang.X, tau, bounds, step=1e-5)
        assert residual <= 1e-7
        worst = max(worst, residual)
    print(f"criterion 09 PASS: 30 random switch points, worst parallelism residual {worst:.2e}")


def test_criterion_10_approximation_bound(certified_sample):
    entries, _ = certified_sample
    checked = 0
    for bounds, gamma, result, _traj, _report in entries:
        for n, cand in result.candidates.items():
            if n >= 1 and cand.feasible:
                assert approx_turn_ratio(gamma, bounds, n) >= cand.s - 1e-12
                checked += 1
    assert checked > 0
    print(f"criterion 10 PASS: s-hat >= s for all {checked} feasible (gamma, n) pairs")


def test_criterion_11_unit_bounds_single_switching():
    for g in np.linspace(1.05, 10.0, 20):
        result = synthesize(float(g), B11)
        assert result.optimal_n == 0
        assert result.schedule.structure() == "XY"
        assert result.schedule.n_switchings == 1
    print("criterion 11 PASS: 20 targets with unit bounds, always the XY schedule")


def test_criterion_12_negative_controls(tmp_path: Path):
    worst_exit = 0
    checked = 0
    for gamma in (2.0, 5.0):
        sched_path = tmp_path / f"sched_{gamma}.json"
        assert cli_main(["synthesize", "--u1", "1", "--u2", "8", "--gamma", str(gamma),
                         "--output", str(sched_path)]) == 0
        doc = json.loads(sched_path.read_text())
        for idx in range(len(doc["arcs"])):
            bad = json.loads(sched_path.read_text())
            bad["arcs"][idx]["duration"] += 1e-3
            bad_path = tmp_path / f"bad_{gamma}_{idx}.json"
            bad_path.write_text(json.dumps(bad))
            rep_path = tmp_path / f"rep_{gamma}_{idx}.json"
            code = cli_main(["verify", str(bad_path), "--u1", "1", "--u2", "8",
                             "--output", str(rep_path)])
            assert code == 4
            report = json.loads(rep_path.read_text())
            assert report["endpoint_error"] >= 1e-4
            worst_exit = max(worst_exit, code)
            checked += 1
    print(f"criterion 12 PASS: {checked} perturbed schedules all rejected with exit 4")
