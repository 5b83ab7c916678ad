"""bbcool: provably time-optimal bang-bang schedules for harmonic-trap
relaxation, with an independent ODE/adjoint verification oracle.

The library synthesizes the minimum-time control transferring the reduced
scale-factor state from (1, 0) to (gamma, 0) under a control confined to
[-u1, u2], covering both the plain one-switching strategy and multi-turn
spiral strategies, and certifies every schedule numerically against the
maximum-principle conditions.
"""

from .dynamics import (
    Bang,
    ControlBounds,
    DomainLimitError,
    Point,
    SegmentInvariant,
    evolve_x_from_axis,
    evolve_y_from_axis,
    first_integral,
    flow,
    is_y_equilibrium,
    x_axis_crossing,
    y_axis_crossings,
    y_period,
)
from .oracle import (
    AdjointState,
    ErmakovCheck,
    VerificationReport,
    VerifyTolerances,
    conjugate_point_residual,
    ermakov_check,
    integrate_adjoint,
    integrate_state,
    pmp_check,
)
from .switching import (
    InfeasibleConfiguration,
    JunctionKind,
    NoConjugateTime,
    Polyline,
    SwitchPoint,
    inter_switch_time_x,
    inter_switch_time_y,
    next_switch_on_x,
    next_switch_on_y,
    switching_curves,
)
from .synthesis import (
    Arc,
    BoundaryJumps,
    Candidate,
    ControlSchedule,
    CutLocusPoint,
    InfeasibleCandidate,
    NoSignChange,
    NoSolution,
    SynthesisResult,
    TimeBreakdown,
    approx_turn_ratio,
    candidate_time,
    cut_locus,
    feasible_ratio_interval,
    make_arc,
    max_turns,
    ratio_equation_sides,
    sample_trajectory,
    solve_turn_ratio,
    synthesize,
    time_n_turns,
    time_one_switch,
    zero_turn_durations,
)

__version__ = "0.1.0"

__all__ = [
    "AdjointState",
    "Arc",
    "Bang",
    "BoundaryJumps",
    "Candidate",
    "ControlBounds",
    "ControlSchedule",
    "CutLocusPoint",
    "DomainLimitError",
    "ErmakovCheck",
    "InfeasibleCandidate",
    "InfeasibleConfiguration",
    "JunctionKind",
    "NoConjugateTime",
    "NoSignChange",
    "NoSolution",
    "Point",
    "Polyline",
    "SegmentInvariant",
    "SwitchPoint",
    "SynthesisResult",
    "TimeBreakdown",
    "VerificationReport",
    "VerifyTolerances",
    "approx_turn_ratio",
    "candidate_time",
    "conjugate_point_residual",
    "cut_locus",
    "ermakov_check",
    "evolve_x_from_axis",
    "evolve_y_from_axis",
    "feasible_ratio_interval",
    "first_integral",
    "flow",
    "integrate_adjoint",
    "integrate_state",
    "inter_switch_time_x",
    "inter_switch_time_y",
    "is_y_equilibrium",
    "make_arc",
    "max_turns",
    "next_switch_on_x",
    "next_switch_on_y",
    "pmp_check",
    "ratio_equation_sides",
    "sample_trajectory",
    "solve_turn_ratio",
    "switching_curves",
    "synthesize",
    "time_n_turns",
    "time_one_switch",
    "x_axis_crossing",
    "y_axis_crossings",
    "y_period",
    "zero_turn_durations",
]
