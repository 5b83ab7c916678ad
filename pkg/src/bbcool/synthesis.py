"""Time-optimal schedule synthesis for the transfer (1, 0) -> (gamma, 0).

The optimal control is bang-bang and its structure is either a single
switching (one X-arc then one Y-arc) or a "spiral" with n >= 1 turns,
Y(XY)^n, that dives toward small x1 to exploit the 1/x1**3 repulsion.  All
candidate transfer times come in closed form once the common slope ratio
s = (x2/x1)**2 of the switch points is known; s solves one transcendental
equation on the interval (u1, (u2-1)**2/4].  The synthesizer enumerates the
finitely many candidate turn counts, picks the minimizer, and assembles the
full schedule with exact switch points.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .dynamics import Bang, ControlBounds, Point, first_integral, flow
from .switching import JunctionKind, SwitchPoint

__all__ = [
    "Arc",
    "BoundaryJumps",
    "Candidate",
    "ControlSchedule",
    "CutLocusPoint",
    "InfeasibleCandidate",
    "NoSignChange",
    "NoSolution",
    "SynthesisResult",
    "TimeBreakdown",
    "approx_turn_ratio",
    "candidate_time",
    "cut_locus",
    "feasible_ratio_interval",
    "make_arc",
    "max_turns",
    "ratio_equation_sides",
    "sample_trajectory",
    "solve_turn_ratio",
    "synthesize",
    "time_n_turns",
    "time_one_switch",
    "zero_turn_durations",
]

# Ties between candidate times below this are reported as cut-locus hits.
_TIE_TOL = 1e-12


class NoSolution(ValueError):
    """The transcendental ratio equation has no root for this configuration."""


class NoSignChange(ValueError):
    """The candidate-time difference does not change sign on the bracket."""


class InfeasibleCandidate(ValueError):
    """A candidate strategy is infeasible somewhere on the requested bracket."""


@dataclass(frozen=True)
class Arc:
    """One bang segment: control, duration, exact endpoints, conserved quantity."""

    ctrl: Bang
    duration: float
    start: Point
    end: Point
    c: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.duration) and self.duration >= 0.0):
            raise ValueError(f"arc duration must be >= 0, got {self.duration}")


def make_arc(start: Point, ctrl: Bang, duration: float, bounds: ControlBounds) -> Arc:
    """Build an arc from its start, control and duration; the end is flowed exactly."""
    return Arc(
        ctrl=ctrl,
        duration=duration,
        start=start,
        end=flow(start, ctrl, duration, bounds),
        c=first_integral(start, ctrl, bounds),
    )


@dataclass(frozen=True)
class BoundaryJumps:
    """Instantaneous control values pinned at the endpoints of the transfer.

    The interior bang-bang schedule solves the free-boundary problem; the
    physical trap profile additionally requires u = 1 at t = 0 and
    u = 1/gamma**4 at t = T, realized as zero-duration jumps.
    """

    u0: float
    uT: float


@dataclass(frozen=True)
class ControlSchedule:
    """Ordered bang arcs plus boundary-jump annotations.

    Structural invariants (alternating controls, nonnegative durations) are
    enforced at construction.  Geometric consistency (each arc's end equals
    the flow of its start) is a property of synthesized schedules and is what
    the verification oracle checks; it is deliberately not enforced here so
    that corrupted schedules can be loaded and then fail verification.
    """

    bounds: ControlBounds
    arcs: tuple[Arc, ...]
    gamma: float | None = None
    boundary_jumps: BoundaryJumps | None = None

    def __post_init__(self) -> None:
        for a, b in zip(self.arcs, self.arcs[1:]):
            if a.ctrl is b.ctrl:
                raise ValueError("schedule controls must alternate between the two bangs")
        if self.gamma is not None and self.boundary_jumps is None:
            object.__setattr__(
                self, "boundary_jumps", BoundaryJumps(u0=1.0, uT=1.0 / self.gamma**4)
            )

    @property
    def start(self) -> Point:
        return self.arcs[0].start if self.arcs else Point(1.0, 0.0)

    @property
    def end(self) -> Point:
        return self.arcs[-1].end if self.arcs else self.start

    @property
    def total_time(self) -> float:
        return math.fsum(a.duration for a in self.arcs)

    @property
    def switch_times(self) -> tuple[float, ...]:
        times, acc = [], 0.0
        for a in self.arcs[:-1]:
            acc += a.duration
            times.append(acc)
        return tuple(times)

    @property
    def switch_points(self) -> tuple[Point, ...]:
        return tuple(a.end for a in self.arcs[:-1])

    @property
    def n_switchings(self) -> int:
        return max(len(self.arcs) - 1, 0)

    def structure(self) -> str:
        return "".join(a.ctrl.value for a in self.arcs)


class TimeBreakdown(NamedTuple):
    """Transfer-time decomposition T_n = T_I + n*T_X + (n-1)*T_Y + T_F."""

    T_I: float
    T_X: float
    T_Y: float
    T_F: float


@dataclass(frozen=True)
class Candidate:
    """One candidate turn count with its feasibility, ratio and transfer time."""

    n: int
    feasible: bool
    s: float | None = None
    T: float | None = None
    breakdown: TimeBreakdown | None = None
    note: str | None = None


@dataclass(frozen=True)
class SynthesisResult:
    """All candidate strategies for one target plus the selected optimum."""

    candidates: dict[int, Candidate]
    optimal_n: int
    schedule: ControlSchedule
    n_max: int
    cut_locus_tie: bool = False


@dataclass(frozen=True)
class CutLocusPoint:
    """A target reached in equal minimal time by two distinct strategies."""

    gamma_star: float
    n: int
    m: int
    T: float


def _clamp_unit(v: float, what: str) -> float:
    if v > 1.0:
        if v > 1.0 + 1e-12:
            raise ValueError(f"inverse-cosine argument {v} out of range in {what}")
        return 1.0
    if v < -1.0:
        if v < -1.0 - 1e-12:
            raise ValueError(f"inverse-cosine argument {v} out of range in {what}")
        return -1.0
    return v


def zero_turn_durations(gamma: float, bounds: ControlBounds) -> tuple[float, float]:
    """Durations (t_x, t_y) of the two arcs of the one-switching transfer."""
    if not gamma > 1.0:
        raise ValueError(f"gamma must be > 1, got {gamma}")
    u1, u2 = bounds.u1, bounds.u2
    g2 = gamma * gamma
    rad_x = u1 * (g2 - 1.0) * (u2 * g2 - 1.0) / (g2 * (u1 + u2) * (u1 + 1.0))
    rad_y = u2 * (g2 - 1.0) * (u1 * g2 + 1.0) / ((u1 + u2) * (u2 * g2 * g2 - 1.0))
    t_x = math.asinh(math.sqrt(rad_x)) / math.sqrt(u1)
    t_y = math.asin(math.sqrt(_clamp_unit(rad_y, "zero_turn_durations"))) / math.sqrt(u2)
    return t_x, t_y


def time_one_switch(gamma: float, bounds: ControlBounds) -> tuple[float, Point]:
    """Transfer time T0 of the one-switching strategy and its switch point.

    The switch point (kappa, mu) is the intersection of the X-arc from (1, 0)
    with the Y-arc through (gamma, 0):
    kappa**2 = (u2*gamma**4 + 1 + gamma**2*(u1 - 1)) / (gamma**2*(u1 + u2)).
    T0 is the sum of the two closed-form arc durations.
    """
    t_x, t_y = zero_turn_durations(gamma, bounds)
    u1, u2 = bounds.u1, bounds.u2
    g2 = gamma * gamma
    k2 = (u2 * g2 * g2 + 1.0 + g2 * (u1 - 1.0)) / (g2 * (u1 + u2))
    kappa = math.sqrt(k2)
    mu = math.sqrt((k2 - 1.0) * (u1 * k2 + 1.0)) / kappa
    return t_x + t_y, Point(kappa, mu)


def feasible_ratio_interval(bounds: ControlBounds) -> tuple[float, float] | None:
    """The ratio interval (u1, (u2-1)**2/4], or None when it is empty."""
    s_plus = 0.25 * (bounds.u2 - 1.0) ** 2
    if s_plus <= bounds.u1:
        return None
    return bounds.u1, s_plus


def ratio_equation_sides(
    s: float, gamma: float, bounds: ControlBounds, n: int
) -> tuple[float, float]:
    """Left and right side of the transcendental equation for the slope ratio.

    LHS(s) = (c1 + sqrt(c1^2 - 4(s+u2))) / (c_last + sqrt(c_last^2 - 4(s+u2)))
    with c1 = u2 + 1 and c_last = u2*gamma^2 + 1/gamma^2; RHS(s) =
    ((s - u1)/(s + u2))**n.  The radicands are evaluated in the stable form
    4*(a^2 - s) with a = (u2-1)/2 resp. a = (u2*gamma^2 - 1/gamma^2)/2, which
    is exact algebraically and avoids cancellation near the upper endpoint.
    LHS is strictly decreasing and RHS strictly increasing on the feasible
    interval, so any root is unique.
    """
    u1, u2 = bounds.u1, bounds.u2
    g2 = gamma * gamma
    c1 = u2 + 1.0
    c_last = u2 * g2 + 1.0 / g2
    a1 = 0.5 * (u2 - 1.0)
    an = 0.5 * (u2 * g2 - 1.0 / g2)
    d1 = a1 * a1 - s
    dn = an * an - s
    if d1 < 0.0:
        if d1 < -1e-12 * max(1.0, a1 * a1):
            raise ValueError(f"s = {s} lies above the feasible interval")
        d1 = 0.0
    if dn < 0.0:
        raise ValueError(f"s = {s} incompatible with gamma = {gamma}")
    lhs = (c1 + 2.0 * math.sqrt(d1)) / (c_last + 2.0 * math.sqrt(dn))
    rhs = ((s - u1) / (s + u2)) ** n
    return lhs, rhs


def approx_turn_ratio(gamma: float, bounds: ControlBounds, n: int) -> float:
    """Closed-form upper bound on the slope ratio, from freezing s = u1 in the
    left side of the transcendental equation.

    Always >= the exact root when one exists; tight for small n and large
    gamma.  Raises NoSolution when the feasible interval is empty.
    """
    if not gamma > 1.0:
        raise ValueError(f"gamma must be > 1, got {gamma}")
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    u1, u2 = bounds.u1, bounds.u2
    if feasible_ratio_interval(bounds) is None:
        raise NoSolution(f"feasible ratio interval is empty for u1={u1}, u2={u2}")
    c_big, c_small = ratio_equation_sides(u1, gamma, bounds, n)
    del c_small  # RHS(u1) == 0
    c_frac = c_big ** (1.0 / n)
    if c_frac >= 1.0:
        raise ValueError("ratio-equation constant >= 1; cannot happen for gamma > 1")
    return (u1 + u2 * c_frac) / (1.0 - c_frac)


def solve_turn_ratio(
    gamma: float, bounds: ControlBounds, n: int, tol: float = 1e-13
) -> float:
    """Solve the transcendental ratio equation for an n-turn transfer to gamma.

    Bracketed bisection refined by secant steps, run in the substituted
    variable v = sqrt(s_plus - s) where the equation is smooth through the
    upper endpoint; the closed-form upper bound seeds the bracket.  Raises
    NoSolution when the interval is empty or the two sides never cross.
    """
    if not gamma > 1.0:
        raise ValueError(f"gamma must be > 1, got {gamma}")
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    interval = feasible_ratio_interval(bounds)
    if interval is None:
        raise NoSolution(
            f"feasible ratio interval (u1, (u2-1)^2/4] is empty for u1={bounds.u1}, u2={bounds.u2}"
        )
    u1, s_plus = interval

    def residual_v(v: float) -> float:
        lhs, rhs = ratio_equation_sides(s_plus - v * v, gamma, bounds, n)
        return lhs - rhs

    # residual is increasing in v (decreasing in s); root exists iff residual_v(0) <= 0
    f_lo = residual_v(0.0)
    if f_lo > 0.0:
        raise NoSolution(
            f"no {n}-turn solution for gamma={gamma}: the sides never cross on the interval"
        )
    if f_lo == 0.0:
        return s_plus
    v_hi = math.sqrt(s_plus - u1) * (1.0 - 1e-12)
    f_hi = residual_v(v_hi)
    if f_hi <= 0.0:  # root squeezed against s = u1 beyond float resolution
        raise NoSolution(f"{n}-turn root for gamma={gamma} is at the lower endpoint")
    v_lo = 0.0
    s_hat = approx_turn_ratio(gamma, bounds, n)
    if s_hat < s_plus:  # upper bound on s gives a lower bound on v
        v_seed = math.sqrt(s_plus - s_hat)
        f_seed = residual_v(v_seed)
        if f_seed <= 0.0:
            v_lo, f_lo = v_seed, f_seed
        else:
            v_hi, f_hi = v_seed, f_seed

    best_v, best_f = (v_lo, -f_lo) if -f_lo < f_hi else (v_hi, f_hi)
    use_secant = True
    for _ in range(300):
        v_mid = 0.5 * (v_lo + v_hi)
        if use_secant and f_hi != f_lo:
            v_sec = v_hi - f_hi * (v_hi - v_lo) / (f_hi - f_lo)
            if v_lo < v_sec < v_hi:
                v_mid = v_sec
        use_secant = not use_secant
        f_mid = residual_v(v_mid)
        if abs(f_mid) < abs(best_f):
            best_v, best_f = v_mid, f_mid
        if f_mid > 0.0:
            v_hi, f_hi = v_mid, f_mid
        else:
            v_lo, f_lo = v_mid, f_mid
        if v_hi - v_lo <= 4.0 * math.ulp(v_hi) and abs(best_f) <= tol:
            break
    return s_plus - best_v * best_v


def _breakdown(s: float, gamma: float, bounds: ControlBounds) -> TimeBreakdown:
    u1, u2 = bounds.u1, bounds.u2
    ru1, ru2 = math.sqrt(u1), math.sqrt(u2)
    g2 = gamma * gamma
    c1 = u2 + 1.0
    c_last = u2 * g2 + 1.0 / g2
    a1 = 0.5 * (u2 - 1.0)
    an = 0.5 * (u2 * g2 - 1.0 / g2)
    r1 = 2.0 * math.sqrt(max(a1 * a1 - s, 0.0))
    rn = 2.0 * math.sqrt(max(an * an - s, 0.0))
    big_r1 = u2 - 1.0  # sqrt(c1^2 - 4 u2)
    big_rn = u2 * g2 - 1.0 / g2  # sqrt(c_last^2 - 4 u2)
    t_i = math.acos(_clamp_unit(-(s * c1 + u2 * r1) / ((s + u2) * big_r1), "T_I")) / (2.0 * ru2)
    t_f = math.acos(_clamp_unit((-s * c_last + u2 * rn) / ((s + u2) * big_rn), "T_F")) / (2.0 * ru2)
    t_x = math.acosh((s + u1) / (s - u1)) / (2.0 * ru1)
    t_y = (2.0 * math.pi - math.acos(_clamp_unit((s - u2) / (s + u2), "T_Y"))) / (2.0 * ru2)
    return TimeBreakdown(T_I=t_i, T_X=t_x, T_Y=t_y, T_F=t_f)


def _spiral_switch_points(s: float, gamma: float, bounds: ControlBounds, n: int) -> tuple[SwitchPoint, ...]:
    """All 2n switch points of the n-turn spiral, in trajectory order.

    Odd points (YX junctions, x2 < 0) are the smaller slope-cone root of
    their Y-arc's quadratic; even points (XY junctions, x2 > 0) follow from
    the X-arc product relation k_next^2 = 1/((s - u1)*k^2).  Signs alternate
    with constant magnitude sqrt(s) of the slope.
    """
    u1, u2 = bounds.u1, bounds.u2
    a1 = 0.5 * (u2 - 1.0)
    c_y = u2 + 1.0
    r = 2.0 * math.sqrt(max(a1 * a1 - s, 0.0))
    k2 = 2.0 / (c_y + r)
    pts: list[SwitchPoint] = []
    rs = math.sqrt(s)
    for i in range(n):
        k = math.sqrt(k2)
        pts.append(SwitchPoint(Point(k, -rs * k), JunctionKind.YX, s))
        k2 = 1.0 / ((s - u1) * k2)
        k = math.sqrt(k2)
        pts.append(SwitchPoint(Point(k, rs * k), JunctionKind.XY, s))
        if i < n - 1:
            c_y = (s + u2) * k2 + 1.0 / k2
            disc = max(c_y * c_y - 4.0 * (s + u2), 0.0)
            k2 = 2.0 / (c_y + math.sqrt(disc))
    return tuple(pts)


def time_n_turns(
    gamma: float, bounds: ControlBounds, n: int, s: float | None = None
) -> tuple[float, TimeBreakdown, tuple[SwitchPoint, ...]]:
    """Transfer time of the n-turn spiral: total, breakdown and switch points.

    The total is T_I + n*T_X + (n-1)*T_Y + T_F, where all intermediate X-arcs
    share the duration T_X and all intermediate Y-arcs share T_Y (both depend
    only on the slope ratio).  Propagates NoSolution from the ratio equation.
    """
    if s is None:
        s = solve_turn_ratio(gamma, bounds, n)
    bd = _breakdown(s, gamma, bounds)
    total = bd.T_I + n * bd.T_X + (n - 1) * bd.T_Y + bd.T_F
    return total, bd, _spiral_switch_points(s, gamma, bounds, n)


def max_turns(gamma: float, bounds: ControlBounds) -> int:
    """Largest turn count that could still beat the one-switching time.

    Each turn costs at least T_X evaluated at the top of the ratio interval,
    so n is bounded by floor(T0 / T_X(s_plus)); zero when the spiral regime
    is infeasible ((u2-1)**2 <= 4*u1).
    """
    interval = feasible_ratio_interval(bounds)
    if interval is None:
        return 0
    _, s_plus = interval
    u1 = bounds.u1
    t_x_min = math.acosh((s_plus + u1) / (s_plus - u1)) / (2.0 * math.sqrt(u1))
    t0, _ = time_one_switch(gamma, bounds)
    return int(t0 / t_x_min)


def candidate_time(gamma: float, bounds: ControlBounds, n: int) -> float:
    """Transfer time of the n-turn candidate (n = 0 is the one-switching strategy)."""
    if n == 0:
        return time_one_switch(gamma, bounds)[0]
    return time_n_turns(gamma, bounds, n)[0]


def _zero_turn_schedule(gamma: float, bounds: ControlBounds) -> ControlSchedule:
    t_x, t_y = zero_turn_durations(gamma, bounds)
    _, sp = time_one_switch(gamma, bounds)
    start = Point(1.0, 0.0)
    target = Point(gamma, 0.0)
    arcs = (
        Arc(Bang.X, t_x, start, sp, first_integral(start, Bang.X, bounds)),
        Arc(Bang.Y, t_y, sp, target, first_integral(sp, Bang.Y, bounds)),
    )
    return ControlSchedule(bounds=bounds, arcs=arcs, gamma=gamma)


def _spiral_schedule(
    gamma: float,
    bounds: ControlBounds,
    n: int,
    bd: TimeBreakdown,
    pts: tuple[SwitchPoint, ...],
) -> ControlSchedule:
    nodes: list[Point] = [Point(1.0, 0.0)] + [sp.p for sp in pts] + [Point(gamma, 0.0)]
    ctrls: list[Bang] = [Bang.Y]
    durs: list[float] = [bd.T_I]
    for i in range(n):
        ctrls.append(Bang.X)
        durs.append(bd.T_X)
        ctrls.append(Bang.Y)
        durs.append(bd.T_Y if i < n - 1 else bd.T_F)
    arcs = tuple(
        Arc(ctrl, dur, a, b, first_integral(a, ctrl, bounds))
        for ctrl, dur, a, b in zip(ctrls, durs, nodes[:-1], nodes[1:])
    )
    return ControlSchedule(bounds=bounds, arcs=arcs, gamma=gamma)


def synthesize(
    gamma: float, bounds: ControlBounds, n_max_override: int | None = None
) -> SynthesisResult:
    """Full optimal synthesis for the transfer (1, 0) -> (gamma, 0).

    Evaluates the one-switching time and every feasible spiral up to the turn
    bound, selects the minimizer and assembles its schedule.  Exact ties
    (within 1e-12) go to the smaller turn count and are flagged as cut-locus
    hits.  With u1 = u2 = 1 the start is an equilibrium of the Y bang, so the
    one-switching schedule is always returned.
    """
    if not gamma > 1.0:
        raise ValueError(f"gamma must be > 1, got {gamma}")
    t0, _ = time_one_switch(gamma, bounds)
    bd0 = TimeBreakdown(T_I=zero_turn_durations(gamma, bounds)[0], T_X=0.0, T_Y=0.0,
                        T_F=zero_turn_durations(gamma, bounds)[1])
    n_max = max_turns(gamma, bounds) if n_max_override is None else n_max_override
    candidates: dict[int, Candidate] = {
        0: Candidate(n=0, feasible=True, s=None, T=t0, breakdown=bd0)
    }
    spirals: dict[int, tuple[float, TimeBreakdown, tuple[SwitchPoint, ...], float]] = {}
    for n in range(1, n_max + 1):
        try:
            s = solve_turn_ratio(gamma, bounds, n)
        except NoSolution as exc:
            candidates[n] = Candidate(n=n, feasible=False, note=str(exc))
            continue
        total, bd, pts = time_n_turns(gamma, bounds, n, s=s)
        spirals[n] = (total, bd, pts, s)
        candidates[n] = Candidate(n=n, feasible=True, s=s, T=total, breakdown=bd)

    best_n = 0
    best_t = t0
    tie = False
    for n in sorted(spirals):
        t_n = spirals[n][0]
        if t_n < best_t - _TIE_TOL:
            best_n, best_t = n, t_n
        elif abs(t_n - best_t) <= _TIE_TOL:
            tie = True  # keep the smaller turn count already stored

    if best_n == 0:
        schedule = _zero_turn_schedule(gamma, bounds)
    else:
        _, bd, pts, _ = spirals[best_n]
        schedule = _spiral_schedule(gamma, bounds, best_n, bd, pts)
    return SynthesisResult(
        candidates=candidates,
        optimal_n=best_n,
        schedule=schedule,
        n_max=n_max,
        cut_locus_tie=tie,
    )


def cut_locus(
    bounds: ControlBounds,
    n: int,
    m: int,
    gamma_lo: float,
    gamma_hi: float,
    tol: float = 1e-9,
    max_iter: int = 400,
) -> CutLocusPoint:
    """Target gamma* reached in equal time by the n-turn and m-turn strategies.

    Bisects T_n(gamma) - T_m(gamma) on [gamma_lo, gamma_hi].  Raises
    NoSignChange when the difference has equal signs at the ends and
    InfeasibleCandidate when either strategy has no solution somewhere on the
    bracket.
    """
    if not (1.0 < gamma_lo < gamma_hi):
        raise ValueError(f"need 1 < gamma_lo < gamma_hi, got [{gamma_lo}, {gamma_hi}]")

    def diff(g: float) -> float:
        try:
            return candidate_time(g, bounds, n) - candidate_time(g, bounds, m)
        except NoSolution as exc:
            raise InfeasibleCandidate(
                f"candidate infeasible at gamma = {g} while bracketing: {exc}"
            ) from exc

    f_lo = diff(gamma_lo)
    f_hi = diff(gamma_hi)
    if f_lo == 0.0:
        return CutLocusPoint(gamma_lo, n, m, candidate_time(gamma_lo, bounds, n))
    if f_hi == 0.0:
        return CutLocusPoint(gamma_hi, n, m, candidate_time(gamma_hi, bounds, n))
    if (f_lo > 0.0) == (f_hi > 0.0):
        raise NoSignChange(
            f"T_{n} - T_{m} has the same sign at both ends of [{gamma_lo}, {gamma_hi}]"
        )
    lo, hi = gamma_lo, gamma_hi
    mid = 0.5 * (lo + hi)
    for _ in range(max_iter):
        mid = 0.5 * (lo + hi)
        f_mid = diff(mid)
        if abs(f_mid) <= tol:
            return CutLocusPoint(mid, n, m, candidate_time(mid, bounds, n))
        if (f_mid > 0.0) == (f_lo > 0.0):
            lo, f_lo = mid, f_mid
        else:
            hi, f_hi = mid, f_mid
        if hi - lo <= math.ulp(hi):
            break
    f_mid = diff(mid)
    if abs(f_mid) <= tol:
        return CutLocusPoint(mid, n, m, candidate_time(mid, bounds, n))
    raise NoSignChange(
        f"bisection stalled at gamma = {mid} with |T_{n} - T_{m}| = {abs(f_mid):.3g} > {tol}"
    )


def sample_trajectory(schedule: ControlSchedule, n_samples: int = 400) -> np.ndarray:
    """Dense closed-form samples of a schedule: rows (t, x1, x2, u).

    Sample counts are allocated to arcs proportionally to their duration, and
    every arc boundary appears exactly once.
    """
    if n_samples < 2:
        raise ValueError("n_samples must be >= 2")
    if not schedule.arcs:
        raise ValueError("cannot sample an empty schedule")
    total = schedule.total_time
    rows: list[tuple[float, float, float, float]] = []
    t0 = 0.0
    for idx, arc in enumerate(schedule.arcs):
        u_val = arc.ctrl.control(schedule.bounds)
        k = max(2, int(round(n_samples * arc.duration / total)) if total > 0 else 2)
        local = np.linspace(0.0, arc.duration, k)
        start = 0 if idx == 0 else 1  # arc start already emitted by the previous arc
        for tau in local[start:]:
            q = flow(arc.start, arc.ctrl, float(tau), schedule.bounds)
            rows.append((t0 + float(tau), q.x1, q.x2, u_val))
        t0 += arc.duration
    return np.array(rows)
