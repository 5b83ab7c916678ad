"""Switching structure of time-optimal bang-bang trajectories.

Between two consecutive switchings the adjoint transports the control field
along the active bang; the next switching happens where the transported field
re-aligns with the control field.  For this system that conjugate-point
condition closes into explicit trigonometric (Y-arc) and hyperbolic (X-arc)
relations that depend only on the slope ratio x2/x1 of the switch point, and
the map from one switch point to the next is algebraic.  This module exposes
the inter-switching times, the algebraic next-switch maps, and sweep-generated
switching curves for plotting.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .dynamics import ControlBounds, Point, evolve_x_from_axis

__all__ = [
    "InfeasibleConfiguration",
    "JunctionKind",
    "NoConjugateTime",
    "Polyline",
    "SwitchPoint",
    "inter_switch_hyp_x",
    "inter_switch_time_x",
    "inter_switch_time_y",
    "inter_switch_trig_y",
    "next_switch_on_x",
    "next_switch_on_y",
    "switching_curves",
]

# Radicands this close to zero are geometric tangencies, not errors.
_RADICAND_CLAMP = 1e-12


class NoConjugateTime(ValueError):
    """No further switching exists on this arc (or it lies beyond the time cap)."""


class InfeasibleConfiguration(ValueError):
    """The requested switch-point configuration is geometrically impossible."""


class JunctionKind(Enum):
    """Direction of a switching: XY leaves the X bang, YX leaves the Y bang."""

    XY = "XY"  # u jumps from -u1 to +u2; only possible with x2 > 0
    YX = "YX"  # u jumps from +u2 to -u1; only possible with x2 < 0


@dataclass(frozen=True)
class SwitchPoint:
    """A switching point with its junction direction and slope ratio (x2/x1)**2."""

    p: Point
    kind: JunctionKind
    ratio_s: float

    def __post_init__(self) -> None:
        if self.kind is JunctionKind.XY and not self.p.x2 > 0.0:
            raise ValueError(f"XY junctions need x2 > 0, got x2 = {self.p.x2}")
        if self.kind is JunctionKind.YX and not self.p.x2 < 0.0:
            raise ValueError(f"YX junctions need x2 < 0, got x2 = {self.p.x2}")
        if not self.ratio_s >= 0.0:
            raise ValueError(f"ratio_s must be >= 0, got {self.ratio_s}")

    @classmethod
    def at(cls, x1: float, x2: float) -> SwitchPoint:
        """Build a switch point at (x1, x2), inferring the junction from sign(x2)."""
        if x2 == 0.0:
            raise ValueError("switch points never lie on the x1 axis")
        kind = JunctionKind.XY if x2 > 0.0 else JunctionKind.YX
        return cls(Point(x1, x2), kind, (x2 / x1) ** 2)


def inter_switch_trig_y(sp: SwitchPoint, bounds: ControlBounds) -> tuple[float, float]:
    """(sin, cos) of twice the scaled Y inter-switching phase 2*sqrt(u2)*tau."""
    x1, x2 = sp.p.x1, sp.p.x2
    u2 = bounds.u2
    den = x2 * x2 + u2 * x1 * x1
    return (-2.0 * math.sqrt(u2) * x1 * x2 / den, (x2 * x2 - u2 * x1 * x1) / den)


def inter_switch_time_y(sp: SwitchPoint, bounds: ControlBounds) -> float:
    """Time from the XY junction ``sp`` to the next switching along the Y bang.

    The conjugate-point condition fixes sin and cos of the phase 2*sqrt(u2)*tau;
    a two-argument arctangent mapped into (0, 2*pi) picks the unique branch,
    rejecting the trivial roots tau = 0 and tau = pi/sqrt(u2) (the full period).
    The result depends only on the ratio x2/x1.
    """
    if not sp.p.x2 > 0.0:
        raise ValueError("inter_switch_time_y needs an XY junction (x2 > 0)")
    sin_v, cos_v = inter_switch_trig_y(sp, bounds)
    angle = math.atan2(sin_v, cos_v)
    if angle <= 0.0:
        angle += 2.0 * math.pi
    return angle / (2.0 * math.sqrt(bounds.u2))


def inter_switch_hyp_x(sp: SwitchPoint, bounds: ControlBounds) -> tuple[float, float]:
    """(sinh, cosh) of the scaled X inter-switching phase 2*sqrt(u1)*tau.

    Raises NoConjugateTime when x2**2 <= u1*x1**2, where the X bang admits no
    further switching.
    """
    x1, x2 = sp.p.x1, sp.p.x2
    u1 = bounds.u1
    den = x2 * x2 - u1 * x1 * x1
    if den <= 0.0:
        raise NoConjugateTime(
            f"no conjugate time on an X-arc with x2^2 <= u1*x1^2 (slope ratio {x2 * x2 / (x1 * x1):.6g} <= u1 = {u1})"
        )
    return (-2.0 * math.sqrt(u1) * x1 * x2 / den, (x2 * x2 + u1 * x1 * x1) / den)


def inter_switch_time_x(sp: SwitchPoint, bounds: ControlBounds, tau_max: float = 50.0) -> float:
    """Time from the YX junction ``sp`` to the next switching along the X bang.

    Uses the logarithmic form of the inverse hyperbolic cosine with the branch
    fixed by the sinh value (exact: sinh + cosh = exp(2*sqrt(u1)*tau)).  The
    time diverges as the slope ratio approaches u1 from above; values beyond
    ``tau_max`` raise NoConjugateTime instead of returning runaway numbers.
    """
    if not sp.p.x2 < 0.0:
        raise ValueError("inter_switch_time_x needs a YX junction (x2 < 0)")
    sinh_v, cosh_v = inter_switch_hyp_x(sp, bounds)
    tau = math.log(cosh_v + sinh_v) / (2.0 * math.sqrt(bounds.u1))
    if tau > tau_max:
        raise NoConjugateTime(f"inter-switch time {tau:.3g} exceeds the cap {tau_max:.3g}")
    return tau


def _clamped(radicand: float, what: str) -> float:
    if radicand < 0.0:
        if radicand >= -_RADICAND_CLAMP:
            return 0.0
        raise InfeasibleConfiguration(f"negative radicand {radicand:.3g} in {what}")
    return radicand


def next_switch_on_y(kappa: float, alpha: float, bounds: ControlBounds) -> SwitchPoint:
    """Next switching after an XY junction at x1 = kappa whose incoming X-arc
    crossed the axis at (alpha, 0), with kappa > alpha.

    Returns the YX junction (zeta, xi) reached along the Y bang.  The slope
    ratios obey xi/zeta = -mu/kappa, where mu is the x2 coordinate of the XY
    junction, so consecutive switch points share the magnitude of x2/x1 with
    alternating sign (and are not mirror images: in general zeta != kappa).
    """
    if not (alpha > 0.0 and kappa > alpha):
        raise ValueError(f"need kappa > alpha > 0, got kappa = {kappa}, alpha = {alpha}")
    u1, u2 = bounds.u1, bounds.u2
    k2, a2 = kappa * kappa, alpha * alpha
    rad = _clamped((k2 - a2) * (u1 * a2 * k2 + 1.0), "next_switch_on_y")
    den = (u1 + u2) * a2 * k2 * k2 + (1.0 - u1 * a2 * a2) * k2 - a2
    if den <= 0.0:
        raise InfeasibleConfiguration(
            f"nonpositive denominator radicand {den:.3g} in next_switch_on_y"
        )
    root = math.sqrt(den)
    zeta = alpha * kappa / root
    xi = -math.sqrt(rad) / (kappa * root)
    return SwitchPoint(Point(zeta, xi), JunctionKind.YX, (xi / zeta) ** 2)


def next_switch_on_x(zeta: float, beta: float, bounds: ControlBounds) -> SwitchPoint:
    """Next switching after a YX junction at x1 = zeta whose incoming Y-arc
    crossed the axis at its outer point (beta, 0), with zeta < beta and
    u2*beta**2 > 1/beta**2.

    Returns the XY junction (lam, nu) reached along the X bang; nu > 0 and
    nu/lam = -xi/zeta.  Raises InfeasibleConfiguration when the denominator
    radicand is nonpositive, which covers slope ratios at or below u1.
    """
    if not (zeta > 0.0 and zeta < beta):
        raise ValueError(f"need 0 < zeta < beta, got zeta = {zeta}, beta = {beta}")
    u1, u2 = bounds.u1, bounds.u2
    b2, z2 = beta * beta, zeta * zeta
    if not u2 * b2 > 1.0 / b2:
        raise ValueError("(beta, 0) must be the outer axis crossing (u2*beta^2 > 1/beta^2)")
    rad = _clamped((b2 - z2) * (u2 * b2 * z2 - 1.0), "next_switch_on_x")
    den = -(u1 + u2) * b2 * z2 * z2 + (1.0 + u2 * b2 * b2) * z2 - b2
    if den <= 0.0:
        raise InfeasibleConfiguration(
            f"nonpositive denominator radicand {den:.3g} in next_switch_on_x "
            "(slope ratio at or below u1)"
        )
    root = math.sqrt(den)
    lam = beta * zeta / root
    nu = math.sqrt(rad) / (zeta * root)
    return SwitchPoint(Point(lam, nu), JunctionKind.XY, (nu / lam) ** 2)


@dataclass(frozen=True)
class Polyline:
    """An ordered set of phase-plane samples with a family label."""

    label: str
    points: np.ndarray  # shape (N, 2): columns x1, x2


def switching_curves(
    bounds: ControlBounds,
    gamma_grid: list[float] | tuple[float, ...] | np.ndarray,
    resolution: int = 100,
) -> list[Polyline]:
    """Switching curves of the optimal synthesis over a grid of targets.

    Synthesizes the optimal schedule at every grid target, groups the grid
    into runs of constant optimal turn count, and emits one polyline per
    switch index per run, each resampled to ``resolution`` points across the
    run's target interval.  The zero-turn run contributes a single curve: the
    initial X-arc from (1, 0), which the one-switch switch points lie on.
    An empty grid yields an empty list.
    """
    from . import synthesis  # local import: synthesis does not depend on this module

    gammas = sorted(float(g) for g in np.asarray(gamma_grid, dtype=float).ravel())
    if not gammas:
        return []
    if gammas[0] <= 1.0:
        raise ValueError("all grid targets must be > 1")
    if resolution < 2:
        raise ValueError("resolution must be >= 2")

    optimal_n = [synthesis.synthesize(g, bounds).optimal_n for g in gammas]

    # maximal runs of constant optimal turn count
    runs: list[tuple[int, float, float]] = []
    start = 0
    for i in range(1, len(gammas) + 1):
        if i == len(gammas) or optimal_n[i] != optimal_n[start]:
            runs.append((optimal_n[start], gammas[start], gammas[i - 1]))
            start = i

    curves: list[Polyline] = []
    seen: dict[str, int] = {}

    def emit(label: str, pts: np.ndarray) -> None:
        if label in seen:
            seen[label] += 1
            label = f"{label}_{seen[label]}"
        else:
            seen[label] = 0
        curves.append(Polyline(label, pts))

    for n, g_lo, g_hi in runs:
        if n == 0:
            # the one-switch switch points all lie on the X-arc from (1, 0)
            t_end, _ = synthesis.zero_turn_durations(g_hi, bounds)
            ts = np.linspace(0.0, t_end, resolution)
            pts = np.array(
                [(q.x1, q.x2) for q in (evolve_x_from_axis(1.0, t, bounds) for t in ts)]
            )
            emit("turns0_initial_x_arc", pts)
            continue
        sample_gammas = np.linspace(g_lo, g_hi, resolution)
        families: list[list[tuple[float, float]]] = [[] for _ in range(2 * n)]
        for g in sample_gammas:
            try:
                _, _, pts = synthesis.time_n_turns(g, bounds, n)
            except synthesis.NoSolution:
                continue  # run boundary roundoff
            for j, sp in enumerate(pts):
                families[j].append((sp.p.x1, sp.p.x2))
        for j, fam in enumerate(families):
            emit(f"turns{n}_switch{j}", np.array(fam))
    return curves
