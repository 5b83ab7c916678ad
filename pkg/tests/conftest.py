from __future__ import annotations

import numpy as np

from bbcool import Arc, ControlBounds, ControlSchedule


def sample_configs(count: int = 50, seed: int = 90210) -> list[tuple[float, float, float]]:
    """Deterministic (u1, u2, gamma) sample used by the acceptance suite."""
    rng = np.random.default_rng(seed)
    configs = []
    while len(configs) < count:
        u1 = float(rng.choice([1.0, 2.0]))
        u2 = float(rng.choice([4.0, 8.0, 50.0]))
        g = float(rng.uniform(1.2, 12.0))
        configs.append((u1, u2, g))
    return configs


def perturb_duration(schedule: ControlSchedule, idx: int, delta: float) -> ControlSchedule:
    """Copy of a schedule with one arc duration shifted by ``delta``."""
    arcs = list(schedule.arcs)
    a = arcs[idx]
    arcs[idx] = Arc(a.ctrl, a.duration + delta, a.start, a.end, a.c)
    return ControlSchedule(
        bounds=schedule.bounds,
        arcs=tuple(arcs),
        gamma=schedule.gamma,
        boundary_jumps=schedule.boundary_jumps,
    )


def bounds(u1: float, u2: float) -> ControlBounds:
    return ControlBounds(u1, u2)
