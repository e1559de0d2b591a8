"""Lie-Trotter and Strang composition steppers and the time loop.

One step advances the clock by tau through the B sub-flow; within a Strang
step A^(tau/2) o B^(tau, t_n) o A^(tau/2) the potential integral of the
B sub-flow starts at t_n, as prescribed by the autonomized formulation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field

import numpy as np

from .backgrounds import PhysParams, soliton_solution
from .flows import FlowState, _flow_a_unchecked, _flow_b_unchecked, flow_A, flow_B
from .grid import Field
from .potentials import Potential

DEFAULT_QUAD = {"lie": "left", "strang": "midpoint"}


class BlowUpError(RuntimeError):
    """Raised when the blow-up guard trips during a run."""

    def __init__(self, t: float, last_state: FlowState):
        super().__init__(f"field magnitude exploded at t={t:.6g}")
        self.t = t
        self.last_state = last_state


@dataclass
class SchemeConfig:
    scheme: str = "strang"  # "lie" | "strang"
    form: str = "u"
    tau: float = 1e-3
    t_final: float = 1.0
    quad_rule: str | None = None  # defaults to the scheme-matched rule
    record_every: int = 1
    snapshot_every: int = 0  # 0: only initial/final snapshots are kept by callers

    def __post_init__(self) -> None:
        if self.scheme not in ("lie", "strang"):
            raise ValueError(f"unknown scheme {self.scheme!r}")
        if not 0 < self.tau <= 1:
            raise ValueError("tau must lie in (0, 1]")
        if self.t_final <= 0:
            raise ValueError("t_final must be positive")
        if self.record_every < 1:
            raise ValueError("record_every must be >= 1")

    @property
    def rule(self) -> str:
        return self.quad_rule or DEFAULT_QUAD[self.scheme]

    @property
    def n_steps(self) -> int:
        """T is rounded to an integer number of uniform steps; no partial
        final step is ever taken."""
        return round(self.t_final / self.tau)

    @property
    def actual_t_final(self) -> float:
        return self.n_steps * self.tau


def lie_step(
    state: FlowState, tau: float, pot: Potential, params: PhysParams, rule: str = "left"
) -> FlowState:
    """One Lie-Trotter step: B^(tau, t_n) o A^tau."""
    return flow_B(flow_A(state, tau, params), tau, pot, params, rule)


def strang_step(
    state: FlowState, tau: float, pot: Potential, params: PhysParams, rule: str = "midpoint"
) -> FlowState:
    """One Strang step: A^(tau/2) o B^(tau, t_n) o A^(tau/2)."""
    s = flow_A(state, 0.5 * tau, params)
    s = flow_B(s, tau, pot, params, rule)
    return flow_A(s, 0.5 * tau, params)


def strang_step_adjoint(
    state: FlowState, tau: float, pot: Potential, params: PhysParams, rule: str = "midpoint"
) -> FlowState:
    """The adjoint (time-reversed) Strang step: all sub-flow phases negated,
    clock moved back by tau. Composing a step with its adjoint is the
    identity up to round-off."""
    s = _flow_a_unchecked(state, -0.5 * tau, params)
    s = _flow_b_unchecked(s, -tau, pot, params, rule)
    return _flow_a_unchecked(s, -0.5 * tau, params)


STEPPERS = {"lie": lie_step, "strang": strang_step}


@dataclass
class Trajectory:
    times: list[float] = dc_field(default_factory=list)
    rows: list = dc_field(default_factory=list)  # DiagRow per recorded step
    snapshots: list[tuple[float, Field]] = dc_field(default_factory=list)
    final_state: FlowState | None = None
    aborted: bool = False


def evolve(
    state0: FlowState,
    cfg: SchemeConfig,
    pot: Potential,
    params: PhysParams,
    observers=(),
) -> Trajectory:
    """Run n_steps uniform steps, recording diagnostics at the configured
    cadence. Each observer is called as observer(step_index, state) and its
    return value (if not None) is appended to the trajectory rows.

    Aborts with BlowUpError if any field magnitude exceeds ten times the
    initial sup norm (at least 10)."""
    stepper = STEPPERS[cfg.scheme]
    rule = cfg.rule
    guard = 10.0 * max(1.0, float(np.max(np.abs(state0.full_values()))))

    traj = Trajectory()

    def record(n: int, state: FlowState) -> None:
        traj.times.append(state.t)
        for obs in observers:
            row = obs(n, state)
            if row is not None:
                traj.rows.append(row)
        if cfg.snapshot_every and (n % cfg.snapshot_every == 0 or n == cfg.n_steps):
            traj.snapshots.append((state.t, state.full_field().copy()))

    state = state0
    record(0, state)
    for n in range(1, cfg.n_steps + 1):
        state = stepper(state, cfg.tau, pot, params, rule)
        vals = state.field.values
        if not np.all(np.isfinite(vals)) or np.max(np.abs(state.full_values())) > guard:
            traj.final_state = state
            traj.aborted = True
            raise BlowUpError(state.t, state)
        if n % cfg.record_every == 0 or n == cfg.n_steps:
            record(n, state)
    traj.final_state = state
    return traj


@dataclass
class ReferenceProblem:
    """Reference-solution source: either the analytic soliton, or a fine-step
    Strang run from a stored initial state (tau_ref = 5e-5 by default)."""

    kind: str  # "soliton" | "numerical"
    soliton_speed: float = 0.0
    state0: FlowState | None = None
    pot: Potential | None = None
    params: PhysParams | None = None
    tau_ref: float = 5e-5

    def __post_init__(self) -> None:
        if self.kind not in ("soliton", "numerical"):
            raise ValueError(f"unknown reference kind {self.kind!r}")
        if self.kind == "numerical" and (self.state0 is None or self.pot is None or self.params is None):
            raise ValueError("numerical references need state0, pot and params")
        self._cache: dict[float, Field] = {}


def reference_solution(problem: ReferenceProblem, t: float, grid=None) -> Field:
    """Exact sample when analytic, else a cached fine-tau Strang solve."""
    if problem.kind == "soliton":
        if grid is None:
            raise ValueError("analytic soliton reference needs a grid")
        return soliton_solution(problem.soliton_speed, t, grid)
    if t in problem._cache:
        return problem._cache[t]
    if t == 0.0:
        out = problem.state0.full_field().copy()
    else:
        tau = problem.tau_ref
        n = round(t / tau)
        if not math.isclose(n * tau, t, rel_tol=1e-9, abs_tol=1e-12):
            raise ValueError(f"reference time {t} is not a multiple of tau_ref={tau}")
        cfg = SchemeConfig(scheme="strang", tau=tau, t_final=t, record_every=max(1, n))
        traj = evolve(problem.state0, cfg, problem.pot, problem.params)
        out = traj.final_state.full_field()
    problem._cache[t] = out
    return out
