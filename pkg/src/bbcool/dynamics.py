"""Closed-form propagation of the planar trap-relaxation system under bang controls.

The state is (x1, x2), x1 > 0, with dynamics

    x1' = x2,    x2' = -u*x1 + 1/x1**3,

driven by a control u that only ever takes the extreme values -u1 (an "X" bang,
hyperbolic flow) or +u2 (a "Y" bang, closed periodic flow).  Each bang conserves
a quadratic first integral, which lets every arc be propagated exactly: X-arcs
through a hyperbolic phase, Y-arcs through a trigonometric phase.  No numerical
integration happens in this module.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

__all__ = [
    "Bang",
    "ControlBounds",
    "DomainLimitError",
    "Point",
    "SegmentInvariant",
    "evolve_x_from_axis",
    "evolve_y_from_axis",
    "first_integral",
    "flow",
    "is_y_equilibrium",
    "x_axis_crossing",
    "y_axis_crossings",
    "y_period",
]


class DomainLimitError(ArithmeticError):
    """Closed-form propagation left the half-plane x1 > 0 or overflowed."""


@dataclass(frozen=True)
class ControlBounds:
    """Admissible control interval [-u1, u2], with u1 >= 1 and u2 >= 1."""

    u1: float
    u2: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.u1) and self.u1 >= 1.0):
            raise ValueError(f"u1 must be a finite number >= 1, got {self.u1}")
        if not (math.isfinite(self.u2) and self.u2 >= 1.0):
            raise ValueError(f"u2 must be a finite number >= 1, got {self.u2}")


class Bang(Enum):
    """The two extreme controls: X freezes u = -u1, Y freezes u = +u2."""

    X = "X"
    Y = "Y"

    def control(self, bounds: ControlBounds) -> float:
        """Numeric control value of this bang under the given bounds."""
        return -bounds.u1 if self is Bang.X else bounds.u2

    @property
    def other(self) -> Bang:
        return Bang.Y if self is Bang.X else Bang.X


@dataclass(frozen=True)
class Point:
    """Phase-plane state (x1, x2): dimensionless scale factor and scaled rate."""

    x1: float
    x2: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.x1) and math.isfinite(self.x2) and self.x1 > 0.0):
            raise ValueError(
                f"state must have finite coordinates with x1 > 0, got ({self.x1}, {self.x2})"
            )

    def distance_to(self, other: Point) -> float:
        return math.hypot(self.x1 - other.x1, self.x2 - other.x2)


# The conserved quantity of one bang arc is a single real number.
SegmentInvariant = float


def first_integral(p: Point, ctrl: Bang, bounds: ControlBounds) -> SegmentInvariant:
    """Conserved quantity of the bang arc through ``p``.

    X-arcs conserve ``x2**2 - u1*x1**2 + 1/x1**2``; Y-arcs conserve
    ``x2**2 + u2*x1**2 + 1/x1**2`` (always >= 2*sqrt(u2)).
    """
    q = 1.0 / (p.x1 * p.x1)
    if ctrl is Bang.X:
        return p.x2 * p.x2 - bounds.u1 * p.x1 * p.x1 + q
    return p.x2 * p.x2 + bounds.u2 * p.x1 * p.x1 + q


def y_period(bounds: ControlBounds) -> float:
    """Period of every closed Y-arc: pi / sqrt(u2)."""
    return math.pi / math.sqrt(bounds.u2)


def is_y_equilibrium(beta: float, bounds: ControlBounds) -> bool:
    """True when (beta, 0) is the fixed point of the Y flow (u2 * beta**4 == 1)."""
    return bounds.u2 * beta**4 == 1.0


def evolve_x_from_axis(alpha: float, t: float, bounds: ControlBounds) -> Point:
    """Propagate the X bang for time ``t`` from the axis point (alpha, 0).

    Closed form: x1(t)**2 = A + B*cosh(2*sqrt(u1)*t) with
    A = (alpha**2 - 1/(u1*alpha**2))/2 and B = (alpha**2 + 1/(u1*alpha**2))/2,
    and x2 obtained by analytic differentiation.  Negative ``t`` evolves
    backward (cosh is even, x2 flips sign through sinh).

    Raises DomainLimitError when the hyperbolic growth overflows the float
    range instead of returning a silent infinity.
    """
    if not alpha > 0.0:
        raise ValueError(f"alpha must be > 0, got {alpha}")
    u1 = bounds.u1
    ru1 = math.sqrt(u1)
    inv = 1.0 / (u1 * alpha * alpha)
    a_coef = 0.5 * (alpha * alpha - inv)
    b_coef = 0.5 * (alpha * alpha + inv)
    w = 2.0 * ru1 * t
    try:
        ch = math.cosh(w)
        sh = math.sinh(w)
    except OverflowError as exc:
        raise DomainLimitError(
            f"hyperbolic phase {w:.6g} overflows the X-arc closed form"
        ) from exc
    x1sq = a_coef + b_coef * ch
    if not (math.isfinite(x1sq) and x1sq > 0.0):
        raise DomainLimitError(f"X-arc evaluation left the domain (x1^2 = {x1sq})")
    x1 = math.sqrt(x1sq)
    x2 = ru1 * b_coef * sh / x1
    if not math.isfinite(x2):
        raise DomainLimitError("X-arc velocity overflowed")
    return Point(x1, x2)


def evolve_y_from_axis(beta: float, t: float, bounds: ControlBounds) -> Point:
    """Propagate the Y bang for time ``t`` from the axis point (beta, 0).

    Closed form: x1(t)**2 = P + Q*cos(2*sqrt(u2)*t) with
    P = (beta**2 + 1/(u2*beta**2))/2 and Q = (beta**2 - 1/(u2*beta**2))/2.
    The orbit is periodic with period pi/sqrt(u2).  The degenerate center
    u2*beta**4 == 1 collapses to the constant equilibrium (beta, 0); detect it
    with :func:`is_y_equilibrium`.
    """
    if not beta > 0.0:
        raise ValueError(f"beta must be > 0, got {beta}")
    u2 = bounds.u2
    ru2 = math.sqrt(u2)
    inv = 1.0 / (u2 * beta * beta)
    p_coef = 0.5 * (beta * beta + inv)
    q_coef = 0.5 * (beta * beta - inv)
    if q_coef == 0.0 or is_y_equilibrium(beta, bounds):
        return Point(beta, 0.0)
    phase = 2.0 * ru2 * t
    x1sq = p_coef + q_coef * math.cos(phase)
    if x1sq <= 0.0:
        # cannot happen analytically (min is min(beta^2, 1/(u2 beta^2)) > 0)
        raise DomainLimitError(f"Y-arc evaluation left the domain (x1^2 = {x1sq})")
    x1 = math.sqrt(x1sq)
    x2 = -ru2 * q_coef * math.sin(phase) / x1
    return Point(x1, x2)


def x_axis_crossing(p: Point, bounds: ControlBounds) -> float:
    """The unique alpha > 0 where the X-arc through ``p`` meets the x1-axis.

    Every X level set crosses the axis exactly once, at
    x1**2 = (sqrt(c**2 + 4*u1) - c) / (2*u1); the rationalized form
    2/(sqrt(c**2+4*u1) + c) avoids cancellation for large positive c.
    """
    u1 = bounds.u1
    c = first_integral(p, Bang.X, bounds)
    s = math.hypot(c, 2.0 * math.sqrt(u1))
    return math.sqrt(2.0 / (s + c)) if c > 0.0 else math.sqrt((s - c) / (2.0 * u1))


def y_axis_crossings(p: Point, bounds: ControlBounds) -> tuple[float, float]:
    """Inner and outer axis crossings (min, max of x1) of the Y-orbit through ``p``."""
    u2 = bounds.u2
    c = first_integral(p, Bang.Y, bounds)
    disc = c * c - 4.0 * u2
    if disc < 0.0:
        # c >= 2*sqrt(u2) always; tolerate roundoff at the degenerate center
        if disc < -1e-12 * c * c:
            raise DomainLimitError(f"invalid Y first integral {c}")
        disc = 0.0
    r = math.sqrt(disc)
    outer = (c + r) / (2.0 * u2)
    inner = 2.0 / (c + r)
    return math.sqrt(inner), math.sqrt(outer)


def _flow_x(p: Point, t: float, bounds: ControlBounds) -> Point:
    u1 = bounds.u1
    ru1 = math.sqrt(u1)
    c = first_integral(p, Bang.X, bounds)
    s = math.hypot(c, 2.0 * ru1)  # sqrt(c^2 + 4 u1)
    # hyperbolic phase of p on its level set: x2 = s*sinh(theta)/(2*sqrt(u1)*x1)
    theta0 = math.asinh(2.0 * ru1 * p.x1 * p.x2 / s)
    theta = theta0 + 2.0 * ru1 * t
    try:
        sh_half = math.sinh(0.5 * theta)
        sh = math.sinh(theta)
    except OverflowError as exc:
        raise DomainLimitError(
            f"hyperbolic phase {theta:.6g} overflows the X-arc closed form"
        ) from exc
    # x1^2 = (s*cosh(theta) - c)/(2 u1), written without cancellation:
    x1sq = 2.0 / (s + c) + s * sh_half * sh_half / u1
    if not (math.isfinite(x1sq) and x1sq > 0.0):
        raise DomainLimitError(f"X-arc evaluation left the domain (x1^2 = {x1sq})")
    x1 = math.sqrt(x1sq)
    x2 = s * sh / (2.0 * ru1 * x1)
    if not math.isfinite(x2):
        raise DomainLimitError("X-arc velocity overflowed")
    return Point(x1, x2)


def _flow_y(p: Point, t: float, bounds: ControlBounds) -> Point:
    u2 = bounds.u2
    ru2 = math.sqrt(u2)
    c = first_integral(p, Bang.Y, bounds)
    disc = c * c - 4.0 * u2
    if disc <= 0.0:
        # degenerate center (disc == 0 up to roundoff): constant orbit
        return p
    r = math.sqrt(disc)
    # signed phase with explicit quadrant: sin = -2 sqrt(u2) x1 x2 / r, cos = (2 u2 x1^2 - c)/r
    phi0 = math.atan2(-2.0 * ru2 * p.x1 * p.x2, 2.0 * u2 * p.x1 * p.x1 - c)
    phi = phi0 + 2.0 * ru2 * t
    cos_half = math.cos(0.5 * phi)
    # x1^2 = (c + r*cos(phi))/(2 u2), written without cancellation at cos ~ -1:
    x1sq = 2.0 / (c + r) + r * cos_half * cos_half / u2
    if x1sq <= 0.0:
        raise DomainLimitError(f"Y-arc evaluation left the domain (x1^2 = {x1sq})")
    x1 = math.sqrt(x1sq)
    x2 = -r * math.sin(phi) / (2.0 * ru2 * x1)
    return Point(x1, x2)


def flow(p: Point, ctrl: Bang, t: float, bounds: ControlBounds) -> Point:
    """Exact propagation of ``p`` under the bang ``ctrl`` for time ``t``.

    Works from any start point: the arc's conserved quantity fixes its level
    set and the current hyperbolic/trigonometric phase is recovered from the
    coordinates, so no axis crossing is required.  Satisfies the semigroup
    law flow(flow(p, c, a), c, b) == flow(p, c, a + b) up to roundoff.
    """
    if t == 0.0:
        return p
    if ctrl is Bang.X:
        return _flow_x(p, t, bounds)
    return _flow_y(p, t, bounds)
