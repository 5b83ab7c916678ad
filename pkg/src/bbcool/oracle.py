"""Independent numerical verification of synthesized schedules.

Everything in this module deliberately avoids the closed forms used by the
synthesizer: the state and costate are integrated with a fixed-step classical
Runge-Kutta scheme (arc boundaries are hit exactly by shortening the last
step), and the maximum-principle conditions are checked sample by sample.
A schedule passes when the integrated endpoint matches the target, the
control Hamiltonian vanishes along the whole trajectory, the switching
function changes sign exactly at the switch times and the costate satisfies
the switch-time normalization.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .dynamics import Bang, ControlBounds, DomainLimitError, Point
from .synthesis import ControlSchedule

try:
    from numba import njit
except ImportError:  # pragma: no cover - numba is a hard dependency in practice
    def njit(*args, **kwargs):  # type: ignore[misc]
        if args and callable(args[0]):
            return args[0]

        def deco(fn):
            return fn

        return deco

__all__ = [
    "AdjointState",
    "AdjointTrajectory",
    "ErmakovCheck",
    "StateTrajectory",
    "VerificationReport",
    "VerifyTolerances",
    "conjugate_point_residual",
    "ermakov_check",
    "integrate_adjoint",
    "integrate_state",
    "pmp_check",
]


@dataclass(frozen=True)
class AdjointState:
    """Costate row vector (lambda1, lambda2); the cost multiplier is fixed at -1."""

    lambda1: float
    lambda2: float

    def __post_init__(self) -> None:
        if self.lambda1 == 0.0 and self.lambda2 == 0.0:
            raise ValueError("the costate must be nontrivial")


@dataclass(frozen=True)
class StateTrajectory:
    """Dense fixed-step samples of a schedule's state trajectory."""

    t: np.ndarray
    x: np.ndarray  # shape (N, 2)
    u: np.ndarray  # shape (N,): control active at each sample
    endpoint: Point
    switch_times: tuple[float, ...]
    switch_indices: tuple[int, ...]


@dataclass(frozen=True)
class AdjointTrajectory:
    """State and costate samples of an anchored extremal lift."""

    t: np.ndarray
    x: np.ndarray  # shape (N, 2)
    lam: np.ndarray  # shape (N, 2)
    u: np.ndarray
    anchor_time: float
    switch_times: tuple[float, ...]
    switch_indices: tuple[int, ...]


@dataclass(frozen=True)
class VerificationReport:
    """Per-schedule maximum-principle residuals.

    endpoint_error: distance of the integrated endpoint from (gamma, 0).
    max_abs_H: largest |H| along the trajectory with the cost multiplier -1.
    switch_alignment: per switch, distance between the switch time and the
        nearest zero crossing of the switching function.
    phi_sign_violations: samples (outside a small window around each switch)
        where the sign of the switching function contradicts the active bang.
    lambda1_x2_at_switches: the product lambda1*x2 at each switch (should be 1).
    lambda2_at_switches: the costate component lambda2 at each switch (should be 0).
    """

    endpoint_error: float
    max_abs_H: float
    switch_alignment: tuple[float, ...]
    phi_sign_violations: int
    lambda1_x2_at_switches: tuple[float, ...]
    lambda2_at_switches: tuple[float, ...]


@dataclass(frozen=True)
class VerifyTolerances:
    """Acceptance thresholds for a verification run."""

    endpoint: float = 1e-6
    hamiltonian: float = 1e-6
    lambda2_at_switch: float = 1e-7
    lambda1_x2: float = 1e-6
    alignment: float = 1e-6

    def passes(self, report: VerificationReport) -> bool:
        return (
            report.endpoint_error <= self.endpoint
            and report.max_abs_H <= self.hamiltonian
            and all(abs(v) <= self.lambda2_at_switch for v in report.lambda2_at_switches)
            and all(abs(v - 1.0) <= self.lambda1_x2 for v in report.lambda1_x2_at_switches)
            and all(a <= self.alignment for a in report.switch_alignment)
            and report.phi_sign_violations == 0
        )


@dataclass(frozen=True)
class ErmakovCheck:
    """Boundary-condition check: endpoint must be (gamma, 0) within tolerance."""

    passed: bool
    x1_residual: float
    x2_residual: float


@njit(cache=True)
def _rk4_state(x1, x2, u, hs, x1_min, out):
    """RK4 steps of the state; returns the index of the failing step or -1."""
    out[0, 0] = x1
    out[0, 1] = x2
    for i in range(hs.shape[0]):
        h = hs[i]
        k1a = x2
        k1b = -u * x1 + 1.0 / (x1 * x1 * x1)
        a = x1 + 0.5 * h * k1a
        b = x2 + 0.5 * h * k1b
        k2a = b
        k2b = -u * a + 1.0 / (a * a * a)
        a = x1 + 0.5 * h * k2a
        b = x2 + 0.5 * h * k2b
        k3a = b
        k3b = -u * a + 1.0 / (a * a * a)
        a = x1 + h * k3a
        b = x2 + h * k3b
        k4a = b
        k4b = -u * a + 1.0 / (a * a * a)
        x1 = x1 + h * (k1a + 2.0 * k2a + 2.0 * k3a + k4a) / 6.0
        x2 = x2 + h * (k1b + 2.0 * k2b + 2.0 * k3b + k4b) / 6.0
        if not (x1_min < x1 < 1e300) or not (-1e300 < x2 < 1e300):
            return i
        out[i + 1, 0] = x1
        out[i + 1, 1] = x2
    return -1


@njit(cache=True)
def _rk4_extremal(x1, x2, l1, l2, u, hs, x1_min, out):
    """RK4 steps of the coupled state + costate; returns failing index or -1."""
    out[0, 0] = x1
    out[0, 1] = x2
    out[0, 2] = l1
    out[0, 3] = l2
    for i in range(hs.shape[0]):
        h = hs[i]
        # stage 1
        q = 1.0 / (x1 * x1 * x1 * x1)
        k1a = x2
        k1b = -u * x1 + q * x1  # 1/x1^3 = x1 * x1^-4
        k1c = l2 * (u + 3.0 * q)
        k1d = -l1
        a = x1 + 0.5 * h * k1a
        b = x2 + 0.5 * h * k1b
        c = l1 + 0.5 * h * k1c
        d = l2 + 0.5 * h * k1d
        # stage 2
        q = 1.0 / (a * a * a * a)
        k2a = b
        k2b = -u * a + q * a
        k2c = d * (u + 3.0 * q)
        k2d = -c
        a = x1 + 0.5 * h * k2a
        b = x2 + 0.5 * h * k2b
        c = l1 + 0.5 * h * k2c
        d = l2 + 0.5 * h * k2d
        # stage 3
        q = 1.0 / (a * a * a * a)
        k3a = b
        k3b = -u * a + q * a
        k3c = d * (u + 3.0 * q)
        k3d = -c
        a = x1 + h * k3a
        b = x2 + h * k3b
        c = l1 + h * k3c
        d = l2 + h * k3d
        # stage 4
        q = 1.0 / (a * a * a * a)
        k4a = b
        k4b = -u * a + q * a
        k4c = d * (u + 3.0 * q)
        k4d = -c
        x1 = x1 + h * (k1a + 2.0 * k2a + 2.0 * k3a + k4a) / 6.0
        x2 = x2 + h * (k1b + 2.0 * k2b + 2.0 * k3b + k4b) / 6.0
        l1 = l1 + h * (k1c + 2.0 * k2c + 2.0 * k3c + k4c) / 6.0
        l2 = l2 + h * (k1d + 2.0 * k2d + 2.0 * k3d + k4d) / 6.0
        if not (x1_min < x1 < 1e300) or not (-1e300 < x2 < 1e300):
            return i
        out[i + 1, 0] = x1
        out[i + 1, 1] = x2
        out[i + 1, 2] = l1
        out[i + 1, 3] = l2
    return -1


@njit(cache=True)
def _rk4_variational(x1, x2, w1, w2, u, hs, x1_min):
    """RK4 transport of a tangent vector w along the state flow; returns
    (status, x1, x2, w1, w2) with status < 0 on success."""
    for i in range(hs.shape[0]):
        h = hs[i]
        q = 1.0 / (x1 * x1 * x1 * x1)
        k1a = x2
        k1b = -u * x1 + q * x1
        k1c = w2
        k1d = -(u + 3.0 * q) * w1
        a = x1 + 0.5 * h * k1a
        b = x2 + 0.5 * h * k1b
        c = w1 + 0.5 * h * k1c
        d = w2 + 0.5 * h * k1d
        q = 1.0 / (a * a * a * a)
        k2a = b
        k2b = -u * a + q * a
        k2c = d
        k2d = -(u + 3.0 * q) * c
        a = x1 + 0.5 * h * k2a
        b = x2 + 0.5 * h * k2b
        c = w1 + 0.5 * h * k2c
        d = w2 + 0.5 * h * k2d
        q = 1.0 / (a * a * a * a)
        k3a = b
        k3b = -u * a + q * a
        k3c = d
        k3d = -(u + 3.0 * q) * c
        a = x1 + h * k3a
        b = x2 + h * k3b
        c = w1 + h * k3c
        d = w2 + h * k3d
        q = 1.0 / (a * a * a * a)
        k4a = b
        k4b = -u * a + q * a
        k4c = d
        k4d = -(u + 3.0 * q) * c
        x1 = x1 + h * (k1a + 2.0 * k2a + 2.0 * k3a + k4a) / 6.0
        x2 = x2 + h * (k1b + 2.0 * k2b + 2.0 * k3b + k4b) / 6.0
        w1 = w1 + h * (k1c + 2.0 * k2c + 2.0 * k3c + k4c) / 6.0
        w2 = w2 + h * (k1d + 2.0 * k2d + 2.0 * k3d + k4d) / 6.0
        if not (x1_min < x1 < 1e300):
            return i, x1, x2, w1, w2
    return -1, x1, x2, w1, w2


def _arc_steps(duration: float, step: float) -> np.ndarray:
    """Fixed steps covering one arc, with the last step shortened to land exactly."""
    if duration == 0.0:
        return np.empty(0, dtype=np.float64)
    n_full = int(duration / step)
    tail = duration - n_full * step
    if tail <= 1e-12 * step:
        return np.full(n_full, step)
    hs = np.empty(n_full + 1, dtype=np.float64)
    hs[:n_full] = step
    hs[n_full] = tail
    return hs


def _check_positive_step(step: float) -> None:
    if not (math.isfinite(step) and step > 0.0):
        raise ValueError(f"step must be > 0, got {step}")


def integrate_state(
    schedule: ControlSchedule, step: float = 1e-5, x1_min: float = 1e-6
) -> StateTrajectory:
    """Fixed-step RK4 integration of a schedule's state trajectory.

    Integration restarts at every switch so that arc boundaries are sample
    points.  Raises DomainLimitError if the state comes within ``x1_min``
    of the x1 = 0 boundary (or leaves the float range).
    """
    _check_positive_step(step)
    start = schedule.start
    if not schedule.arcs:
        t = np.zeros(1)
        x = np.array([[start.x1, start.x2]])
        u = np.zeros(1)
        return StateTrajectory(t, x, u, start, (), ())

    t_blocks: list[np.ndarray] = [np.zeros(1)]
    x_blocks: list[np.ndarray] = [np.array([[start.x1, start.x2]])]
    u_blocks: list[np.ndarray] = [np.array([schedule.arcs[0].ctrl.control(schedule.bounds)])]
    switch_indices: list[int] = []
    n_samples = 1
    t0 = 0.0
    x1, x2 = start.x1, start.x2
    for arc in schedule.arcs:
        u_val = arc.ctrl.control(schedule.bounds)
        hs = _arc_steps(arc.duration, step)
        out = np.empty((hs.shape[0] + 1, 2))
        fail = _rk4_state(x1, x2, u_val, hs, x1_min, out)
        if fail >= 0:
            t_fail = t0 + float(np.sum(hs[: fail + 1]))
            raise DomainLimitError(
                f"state reached x1 <= {x1_min:g} (or overflowed) at t = {t_fail:.6g}"
            )
        x1, x2 = float(out[-1, 0]), float(out[-1, 1])
        if hs.shape[0] > 0:
            t_blocks.append(t0 + np.cumsum(hs))
            x_blocks.append(out[1:])
            u_blocks.append(np.full(hs.shape[0], u_val))
            n_samples += hs.shape[0]
        t0 += arc.duration
        switch_indices.append(n_samples - 1)
    switch_indices = switch_indices[:-1]  # the last boundary is the endpoint
    t = np.concatenate(t_blocks)
    x = np.concatenate(x_blocks)
    u = np.concatenate(u_blocks)
    return StateTrajectory(
        t=t,
        x=x,
        u=u,
        endpoint=Point(x1, x2),
        switch_times=schedule.switch_times,
        switch_indices=tuple(switch_indices),
    )


def _default_anchor(schedule: ControlSchedule, step: float, x1_min: float) -> tuple[float, AdjointState]:
    """Anchor the costate at the first switch: lambda2 = 0, lambda1 = 1/x2."""
    if schedule.n_switchings < 1:
        raise ValueError(
            "a schedule with no switchings cannot be anchored; pass lambda_at explicitly"
        )
    first = schedule.arcs[0]
    hs = _arc_steps(first.duration, step)
    out = np.empty((hs.shape[0] + 1, 2))
    fail = _rk4_state(first.start.x1, first.start.x2, first.ctrl.control(schedule.bounds), hs, x1_min, out)
    if fail >= 0:
        raise DomainLimitError("state left the domain before the first switch")
    x2_switch = float(out[-1, 1])
    if x2_switch == 0.0:
        raise ValueError("x2 vanishes at the first switch; cannot normalize the costate")
    return first.duration, AdjointState(lambda1=1.0 / x2_switch, lambda2=0.0)


def integrate_adjoint(
    schedule: ControlSchedule,
    lambda_at: tuple[float, AdjointState] | None = None,
    step: float = 1e-5,
    x1_min: float = 1e-6,
) -> AdjointTrajectory:
    """Integrate the costate equation along a schedule, forward and backward
    from an anchor condition.

    By default the anchor sits at the first switch time t1 with
    lambda2(t1) = 0 and lambda1(t1) = 1/x2(t1), the normalization every
    normal extremal satisfies there.  Schedules without switchings require an
    explicit ``lambda_at`` anchor.  The state is co-integrated with the same
    RK4 grid, so costate samples pair with state samples exactly.
    """
    _check_positive_step(step)
    if not schedule.arcs:
        raise ValueError("cannot integrate the costate of an empty schedule")
    if lambda_at is None:
        anchor_time, anchor = _default_anchor(schedule, step, x1_min)
    else:
        anchor_time, anchor = lambda_at
        if not 0.0 <= anchor_time <= schedule.total_time + 1e-12:
            raise ValueError(f"anchor time {anchor_time} outside the schedule horizon")

    bounds = schedule.bounds
    durations = [a.duration for a in schedule.arcs]
    boundaries = [0.0]
    for d in durations:
        boundaries.append(boundaries[-1] + d)

    # state from t = 0 to the anchor (forward RK4), to seed both passes
    x1, x2 = schedule.start.x1, schedule.start.x2
    remaining = anchor_time
    fwd_plan: list[tuple[float, np.ndarray]] = []  # (u, steps) up to the anchor
    for arc in schedule.arcs:
        if remaining <= 0.0:
            break
        d = min(arc.duration, remaining)
        fwd_plan.append((arc.ctrl.control(bounds), _arc_steps(d, step)))
        remaining -= d
    for u_val, hs in fwd_plan:
        out = np.empty((hs.shape[0] + 1, 2))
        fail = _rk4_state(x1, x2, u_val, hs, x1_min, out)
        if fail >= 0:
            raise DomainLimitError("state left the domain before the anchor")
        x1, x2 = float(out[-1, 0]), float(out[-1, 1])

    xa1, xa2 = x1, x2
    l1, l2 = anchor.lambda1, anchor.lambda2

    # backward sweep: anchor -> 0, arcs reversed, steps negated and reversed
    bwd_t: list[np.ndarray] = []
    bwd_y: list[np.ndarray] = []
    bwd_u: list[np.ndarray] = []
    y = (xa1, xa2, l1, l2)
    t_cursor = anchor_time
    for idx in range(len(schedule.arcs) - 1, -1, -1):
        arc = schedule.arcs[idx]
        lo = boundaries[idx]
        if lo >= anchor_time:
            continue
        span = min(anchor_time, lo + arc.duration) - lo
        hs = _arc_steps(span, step)[::-1].copy() * -1.0
        u_val = arc.ctrl.control(bounds)
        out = np.empty((hs.shape[0] + 1, 4))
        fail = _rk4_extremal(y[0], y[1], y[2], y[3], u_val, hs, x1_min, out)
        if fail >= 0:
            raise DomainLimitError("extremal integration left the domain (backward pass)")
        y = tuple(float(v) for v in out[-1])
        ts = t_cursor + np.concatenate(([0.0], np.cumsum(hs)))
        bwd_t.append(ts[1:])
        bwd_y.append(out[1:])
        bwd_u.append(np.full(hs.shape[0], u_val))
        t_cursor = float(ts[-1])

    # forward sweep: anchor -> T
    fwd_t: list[np.ndarray] = []
    fwd_y: list[np.ndarray] = []
    fwd_u: list[np.ndarray] = []
    y = (xa1, xa2, l1, l2)
    t_cursor = anchor_time
    for arc, lo in zip(schedule.arcs, boundaries):
        hi = lo + arc.duration
        if hi <= anchor_time:
            continue
        start_t = max(lo, anchor_time)
        span = hi - start_t
        hs = _arc_steps(span, step)
        u_val = arc.ctrl.control(bounds)
        out = np.empty((hs.shape[0] + 1, 4))
        fail = _rk4_extremal(y[0], y[1], y[2], y[3], u_val, hs, x1_min, out)
        if fail >= 0:
            raise DomainLimitError("extremal integration left the domain (forward pass)")
        y = tuple(float(v) for v in out[-1])
        ts = t_cursor + np.concatenate(([0.0], np.cumsum(hs)))
        fwd_t.append(ts[1:])
        fwd_y.append(out[1:])
        fwd_u.append(np.full(hs.shape[0], u_val))
        t_cursor = float(ts[-1])

    # stitch: backward blocks run from the anchor toward 0; reverse them
    anchor_u = (
        schedule.arcs[0].ctrl.control(bounds)
        if anchor_time == 0.0
        else _control_at(schedule, anchor_time)
    )
    t_parts = [np.concatenate(bwd_t)[::-1] if bwd_t else np.empty(0)]
    y_parts = [np.concatenate(bwd_y)[::-1] if bwd_y else np.empty((0, 4))]
    u_parts = [np.concatenate(bwd_u)[::-1] if bwd_u else np.empty(0)]
    t_parts.append(np.array([anchor_time]))
    y_parts.append(np.array([[xa1, xa2, l1, l2]]))
    u_parts.append(np.array([anchor_u]))
    t_parts.append(np.concatenate(fwd_t) if fwd_t else np.empty(0))
    y_parts.append(np.concatenate(fwd_y) if fwd_y else np.empty((0, 4)))
    u_parts.append(np.concatenate(fwd_u) if fwd_u else np.empty(0))
    t = np.concatenate(t_parts)
    yy = np.concatenate(y_parts)
    uu = np.concatenate(u_parts)

    switch_times = schedule.switch_times
    switch_indices = tuple(int(np.argmin(np.abs(t - ts))) for ts in switch_times)
    return AdjointTrajectory(
        t=t,
        x=yy[:, :2],
        lam=yy[:, 2:],
        u=uu,
        anchor_time=anchor_time,
        switch_times=switch_times,
        switch_indices=switch_indices,
    )


def _control_at(schedule: ControlSchedule, t: float) -> float:
    """Active control value at time t (right-continuous at switches)."""
    acc = 0.0
    for arc in schedule.arcs:
        acc += arc.duration
        if t < acc:
            return arc.ctrl.control(schedule.bounds)
    return schedule.arcs[-1].ctrl.control(schedule.bounds)


def pmp_check(
    schedule: ControlSchedule,
    step: float = 1e-5,
    x1_min: float = 1e-6,
    switch_window: float | None = None,
) -> VerificationReport:
    """Maximum-principle certification of a schedule.

    Computes H = -1 + lambda1*x2 + lambda2*(1/x1**3 - x1*u) along the anchored
    extremal lift, locates the zero crossings of the switching function
    Phi = -lambda2 near each switch, and counts samples where sign(Phi)
    contradicts the active bang (u = -u1 demands Phi < 0, u = +u2 demands
    Phi > 0).  Samples within ``switch_window`` (default 2*step) of a switch
    are excluded from the sign census, since Phi legitimately vanishes there.
    """
    if schedule.gamma is None:
        raise ValueError("schedule carries no target; pmp_check needs gamma")
    if schedule.n_switchings < 1:
        raise ValueError("pmp_check needs at least one switching to anchor the costate")
    if switch_window is None:
        switch_window = 2.0 * step
    ext = integrate_adjoint(schedule, step=step, x1_min=x1_min)

    x1 = ext.x[:, 0]
    x2 = ext.x[:, 1]
    l1 = ext.lam[:, 0]
    l2 = ext.lam[:, 1]
    u = ext.u
    h_vals = -1.0 + l1 * x2 + l2 * (1.0 / x1**3 - x1 * u)
    max_abs_h = float(np.max(np.abs(h_vals)))

    endpoint = ext.x[-1]
    endpoint_error = float(math.hypot(endpoint[0] - schedule.gamma, endpoint[1]))

    phi = -l2
    expected = np.where(u > 0.0, 1.0, -1.0)
    near_switch = np.zeros(ext.t.shape, dtype=bool)
    for ts in ext.switch_times:
        near_switch |= np.abs(ext.t - ts) <= switch_window
    census = ~near_switch
    violations = int(np.count_nonzero(census & (phi * expected <= 0.0)))

    alignments: list[float] = []
    lam2_at: list[float] = []
    l1x2_at: list[float] = []
    for ts, k in zip(ext.switch_times, ext.switch_indices):
        lam2_at.append(float(l2[k]))
        l1x2_at.append(float(l1[k] * x2[k]))
        alignments.append(_zero_crossing_distance(ext.t, l2, k, ts))

    return VerificationReport(
        endpoint_error=endpoint_error,
        max_abs_H=max_abs_h,
        switch_alignment=tuple(alignments),
        phi_sign_violations=violations,
        lambda1_x2_at_switches=tuple(l1x2_at),
        lambda2_at_switches=tuple(lam2_at),
    )


def _zero_crossing_distance(t: np.ndarray, f: np.ndarray, k: int, ts: float) -> float:
    """Distance from t[k] ~ ts to the nearest linear-interpolated zero of f."""
    if f[k] == 0.0:
        return 0.0
    best = math.inf
    n = len(t)
    for j in range(max(k - 1, 0), -1, -1):
        if f[j] == 0.0:
            best = min(best, abs(t[j] - ts))
            break
        if f[j] * f[j + 1] < 0.0:
            tz = t[j] + (t[j + 1] - t[j]) * f[j] / (f[j] - f[j + 1])
            best = min(best, abs(tz - ts))
            break
    for j in range(k, n - 1):
        if f[j + 1] == 0.0:
            best = min(best, abs(t[j + 1] - ts))
            break
        if f[j] * f[j + 1] < 0.0:
            tz = t[j] + (t[j + 1] - t[j]) * f[j] / (f[j] - f[j + 1])
            best = min(best, abs(tz - ts))
            break
    if math.isinf(best):
        # no crossing found: report the horizon as an upper bound
        best = float(t[-1] - t[0])
    return best


def ermakov_check(
    schedule: ControlSchedule,
    gamma: float | None = None,
    step: float = 1e-5,
    tol: float = 1e-6,
    x1_min: float = 1e-6,
) -> ErmakovCheck:
    """Boundary-condition check for frictionless relaxation.

    Integrates the schedule and compares the endpoint against (gamma, 0);
    matching endpoints are exactly the condition under which the scale-factor
    equation preserves all level populations.  ``gamma`` defaults to the
    schedule's own target.
    """
    if gamma is None:
        gamma = schedule.gamma
    if gamma is None:
        raise ValueError("no target given and the schedule carries none")
    traj = integrate_state(schedule, step=step, x1_min=x1_min)
    r1 = abs(traj.endpoint.x1 - gamma)
    r2 = abs(traj.endpoint.x2)
    return ErmakovCheck(passed=(r1 <= tol and r2 <= tol), x1_residual=r1, x2_residual=r2)


def conjugate_point_residual(
    start: Point,
    ctrl: Bang,
    duration: float,
    bounds: ControlBounds,
    step: float = 1e-5,
    x1_min: float = 1e-6,
) -> float:
    """Parallelism residual of the conjugate-point condition for one arc.

    Transports the control field at the arc's endpoint backward along the
    variational equation to the arc's start; if the arc spans exactly one
    inter-switching interval the transported vector must be parallel to the
    control field at the start.  Returns the normalized cross product of the
    two vectors (0 = exactly parallel).
    """
    _check_positive_step(step)
    u_val = ctrl.control(bounds)
    # forward pass to the endpoint
    hs = _arc_steps(duration, step)
    out = np.empty((hs.shape[0] + 1, 2))
    fail = _rk4_state(start.x1, start.x2, u_val, hs, x1_min, out)
    if fail >= 0:
        raise DomainLimitError("state left the domain during the forward pass")
    qx1, qx2 = float(out[-1, 0]), float(out[-1, 1])
    # transport g(q) = (0, -x1(q)) backward to the start
    hs_back = hs[::-1].copy() * -1.0
    status, bx1, bx2, w1, w2 = _rk4_variational(qx1, qx2, 0.0, -qx1, u_val, hs_back, x1_min)
    if status >= 0:
        raise DomainLimitError("state left the domain during the backward transport")
    g1, g2 = 0.0, -start.x1
    cross = w1 * g2 - w2 * g1
    norm = math.hypot(w1, w2) * math.hypot(g1, g2)
    if norm == 0.0:
        raise ValueError("degenerate transport: zero vector")
    return abs(cross) / norm
