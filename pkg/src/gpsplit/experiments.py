"""Experiment scenarios driven by JSON configurations.

Scenarios:

* soliton_convergence: 1D dark soliton (c=1.3 by default), Dirichlet box,
  tau sweep against the exact traveling wave; X2-error and energy-error
  slopes for Lie and Strang.
* perturbed_convergence: same box with u0 = phi_c - 0.5*exp(-x^2) and a
  fine-step Strang reference (tau_ref = 5e-5).
* soliton_conservation: per-step energy/mass monitoring at fixed tau.
* vortex_case_i / vortex_case_ii: 2D periodic stirring runs started from
  the energy minimizer, with plaquette vortex detection.
* custom: everything taken verbatim from the config.
"""

from __future__ import annotations

import json
import platform
import sys
from dataclasses import asdict, dataclass, field as dc_field
from pathlib import Path

import numpy as np

from . import __version__
from .backgrounds import Background, PhysParams, background_boundary, eval_background, soliton_solution
from .diagnostics import (
    DiagRow,
    energy_GL,
    error_norm,
    fit_order,
    mass_generalized,
    standard_observer,
    write_diagnostics_csv,
)
from .fieldio import write_snapshot
from .flows import FlowState
from .grid import DIRICHLET, Field, Grid, NormKind, norm
from .integrators import (
    BlowUpError,
    ReferenceProblem,
    SchemeConfig,
    Trajectory,
    evolve,
    reference_solution,
)
from .potentials import Potential, eval_potential

SCENARIOS = (
    "soliton_convergence",
    "soliton_conservation",
    "perturbed_convergence",
    "vortex_case_i",
    "vortex_case_ii",
    "custom",
)

DEFAULT_TAUS = (1e-2, 5e-3, 2.5e-3, 1.25e-3)


class ConfigError(ValueError):
    """Invalid run configuration (CLI exit code 2)."""


@dataclass
class RunConfig:
    scenario: str
    grid: Grid
    params: PhysParams
    potential: Potential
    scheme: SchemeConfig
    taus: tuple[float, ...] = ()
    soliton_speed: float = 1.3
    tau_ref: float = 5e-5
    out_dir: str = "out"
    seed: int = 0

    @staticmethod
    def from_dict(raw: dict) -> "RunConfig":
        try:
            scenario = raw["scenario"]
        except KeyError:
            raise ConfigError("config needs a 'scenario' key") from None
        if scenario not in SCENARIOS:
            raise ConfigError(f"unknown scenario {scenario!r}; choose from {SCENARIOS}")
        defaults = _scenario_defaults(scenario)
        merged = {**defaults, **raw}
        try:
            grid = Grid(**merged["grid"])
            params = PhysParams(**merged["params"])
            pot = Potential(**_with_tuple_center(merged["potential"]))
            scheme = SchemeConfig(**merged["scheme"])
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"bad configuration: {exc}") from exc
        taus = tuple(float(t) for t in merged.get("taus", ()))
        if taus and any(b >= a for a, b in zip(taus, taus[1:])):
            raise ConfigError("tau sweep must be strictly decreasing")
        cfg = RunConfig(
            scenario=scenario,
            grid=grid,
            params=params,
            potential=pot,
            scheme=scheme,
            taus=taus,
            soliton_speed=float(merged.get("soliton_speed", 1.3)),
            tau_ref=float(merged.get("tau_ref", 5e-5)),
            out_dir=str(merged.get("out_dir", "out")),
            seed=int(merged.get("seed", 0)),
        )
        _validate(cfg)
        return cfg

    @staticmethod
    def from_file(path: str | Path) -> "RunConfig":
        try:
            raw = json.loads(Path(path).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from exc
        return RunConfig.from_dict(raw)

    def resolved(self) -> dict:
        out = {
            "scenario": self.scenario,
            "grid": asdict(self.grid),
            "params": asdict(self.params),
            "potential": asdict(self.potential),
            "scheme": asdict(self.scheme),
            "taus": list(self.taus),
            "soliton_speed": self.soliton_speed,
            "tau_ref": self.tau_ref,
            "out_dir": self.out_dir,
            "seed": self.seed,
        }
        out["actual_t_final"] = self.scheme.actual_t_final
        return out


def _with_tuple_center(d: dict) -> dict:
    d = dict(d)
    if "center" in d:
        d["center"] = tuple(d["center"])
    return d


def _scenario_defaults(scenario: str) -> dict:
    soliton_box = {"dim": 1, "half_width": 60.0, "npts": 2048, "bc": DIRICHLET}
    if scenario in ("soliton_convergence", "perturbed_convergence"):
        return {
            "grid": soliton_box,
            "params": {"eps": 1.0, "mass": 0.5},
            "potential": {"kind": "zero"},
            "scheme": {"scheme": "strang", "tau": 1e-3, "t_final": 1.0},
            "taus": list(DEFAULT_TAUS),
        }
    if scenario == "soliton_conservation":
        return {
            "grid": soliton_box,
            "params": {"eps": 1.0, "mass": 0.5},
            "potential": {"kind": "zero"},
            "scheme": {"scheme": "strang", "tau": 1e-3, "t_final": 1.0},
        }
    if scenario in ("vortex_case_i", "vortex_case_ii"):
        case_ii = scenario.endswith("ii")
        pot = {"kind": "rotating_gaussian" if case_ii else "moving_gaussian",
               "v0": 50.0, "gamma": 10.0, "speed": 1.0}
        if case_ii:
            pot["r0"] = 0.5
        return {
            "grid": {"dim": 2, "half_width": 5.0, "npts": 256, "bc": "periodic"},
            "params": {"eps": 0.2, "mass": 15.0},
            "potential": pot,
            "scheme": {"scheme": "strang", "tau": 1e-3,
                       "t_final": 4.0 if case_ii else 1.0, "record_every": 50},
        }
    return {
        "grid": {"dim": 1, "half_width": 20.0, "npts": 256, "bc": "periodic"},
        "params": {"eps": 1.0, "mass": 0.5},
        "potential": {"kind": "zero"},
        "scheme": {"scheme": "strang", "tau": 1e-3, "t_final": 1.0},
    }


def _validate(cfg: RunConfig) -> None:
    if cfg.scenario in ("soliton_convergence", "perturbed_convergence", "soliton_conservation"):
        if cfg.grid.dim != 1:
            raise ConfigError(f"{cfg.scenario} needs a 1D grid")
        if not cfg.potential.is_zero:
            raise ConfigError(f"{cfg.scenario} runs with V = 0")
        if abs(cfg.soliton_speed) >= np.sqrt(2.0):
            raise ConfigError("soliton speed must satisfy |c| < sqrt(2)")
    if cfg.scenario in ("soliton_convergence", "perturbed_convergence") and len(cfg.taus) < 3:
        raise ConfigError("tau sweep needs at least 3 values")
    if cfg.scenario.startswith("vortex_"):
        if cfg.grid.dim != 2 or cfg.grid.bc != "periodic":
            raise ConfigError("vortex scenarios need a periodic 2D grid")
    if cfg.grid.bc == DIRICHLET and not cfg.potential.is_zero:
        raise ConfigError("the Dirichlet backend only supports V = 0")


# ---------------------------------------------------------------------------
# scenario building blocks


def soliton_initial_state(grid: Grid, c: float, perturbed: bool = False) -> FlowState:
    bg = Background(kind="dark_soliton", speed=c)
    u0 = eval_background(bg, grid)
    if perturbed:
        # u0 = phi_c - (1/2) exp(-x^2)
        u0 = Field(grid, u0.values - 0.5 * np.exp(-grid.axis**2))
    boundary = background_boundary(bg) if grid.bc == DIRICHLET else None
    return FlowState(field=u0, t=0.0, form="u", boundary=boundary)


def _metadata(cfg: RunConfig, extra: dict) -> dict:
    meta = {
        "config": cfg.resolved(),
        "versions": {
            "gpsplit": __version__,
            "python": platform.python_version(),
            "numpy": np.__version__,
            "scipy": __import__("scipy").__version__,
        },
    }
    meta.update(extra)
    return meta


def _write_json(data: dict, path: Path) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(data, indent=1, sort_keys=True) + "\n")


def _sweep_csv(path: Path, rows: list[tuple], slopes: dict) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    lines = ["scheme,tau,err_X2,energy_err,mass_err"]
    for scheme, tau, ex, ee, em in rows:
        lines.append(f"{scheme},{tau:.17g},{ex:.17g},{ee:.17g},{em:.17g}")
    for scheme in ("lie", "strang"):
        lines.append(f"{scheme}_slope,,{slopes[scheme]['x2']:.17g},{slopes[scheme]['energy']:.17g},")
    path.write_text("\n".join(lines) + "\n")


def _converged_run(cfg: RunConfig, scheme: str, tau: float, state0: FlowState):
    scfg = SchemeConfig(
        scheme=scheme,
        tau=tau,
        t_final=cfg.scheme.t_final,
        record_every=10**9,  # only initial and final rows
    )
    boundary = state0.boundary
    obs = standard_observer(cfg.potential, cfg.params, boundary_values=boundary)
    traj = evolve(state0, scfg, cfg.potential, cfg.params, observers=[obs])
    return traj, scfg.actual_t_final


def run_soliton_convergence(cfg: RunConfig, perturbed: bool | None = None) -> dict:
    """tau sweep for both schemes against the exact (or fine-step) reference.

    Writes convergence.csv (slopes appended) and run_metadata.json."""
    if perturbed is None:
        perturbed = cfg.scenario == "perturbed_convergence"
    out = Path(cfg.out_dir)
    grid, c = cfg.grid, cfg.soliton_speed
    state0 = soliton_initial_state(grid, c, perturbed)
    boundary = state0.boundary
    t_end = cfg.scheme.t_final

    if perturbed:
        ref_problem = ReferenceProblem(
            kind="numerical", state0=state0, pot=cfg.potential, params=cfg.params,
            tau_ref=cfg.tau_ref,
        )
        u_ref = reference_solution(ref_problem, t_end)
    else:
        u_ref = soliton_solution(c, t_end, grid)
    e_ref = energy_GL(u_ref, cfg.potential, t_end, cfg.params, boundary)
    m0 = mass_generalized(state0.full_field())

    rows = []
    errors: dict[str, list[float]] = {"lie": [], "strang": []}
    e_errors: dict[str, list[float]] = {"lie": [], "strang": []}
    for scheme in ("lie", "strang"):
        for tau in cfg.taus:
            traj, _ = _converged_run(cfg, scheme, tau, state0)
            u_fin = traj.final_state.full_field()
            ex = error_norm(u_fin, u_ref, NormKind.X2)
            ee = abs(energy_GL(u_fin, cfg.potential, t_end, cfg.params, boundary) - e_ref)
            em = abs(mass_generalized(u_fin) - m0)
            rows.append((scheme, tau, ex, ee, em))
            errors[scheme].append(ex)
            e_errors[scheme].append(ee)

    slopes = {
        s: {"x2": fit_order(cfg.taus, errors[s]), "energy": fit_order(cfg.taus, e_errors[s])}
        for s in ("lie", "strang")
    }
    _sweep_csv(out / "convergence.csv", rows, slopes)

    resolution = _resolution_check(cfg, perturbed) if not perturbed else {
        "mode": "shared-discretization reference",
        "note": "reference shares the spatial grid; the measured error is pure splitting error",
    }
    meta = _metadata(cfg, {
        "perturbed": perturbed,
        "slopes": slopes,
        "actual_t_final": t_end,
        "resolution_check": resolution,
    })
    _write_json(meta, out / "run_metadata.json")
    return {"rows": rows, "slopes": slopes, "out_dir": str(out)}


def _resolution_check(cfg: RunConfig, perturbed: bool) -> dict:
    """Grid-halving check: the smallest-tau Strang error should be basically
    unchanged at half the spatial resolution if splitting error dominates."""
    tau = min(cfg.taus)
    c = cfg.soliton_speed
    t_end = cfg.scheme.t_final
    results = {}
    for npts in (cfg.grid.npts, cfg.grid.npts // 2):
        g = Grid(dim=1, half_width=cfg.grid.half_width, npts=npts, bc=cfg.grid.bc)
        state0 = soliton_initial_state(g, c, perturbed)
        cfg_n = RunConfig(**{**cfg.__dict__, "grid": g})
        traj, _ = _converged_run(cfg_n, "strang", tau, state0)
        u_ref = soliton_solution(c, t_end, g)
        results[npts] = error_norm(traj.final_state.full_field(), u_ref, NormKind.X2)
    n_full, n_half = cfg.grid.npts, cfg.grid.npts // 2
    rel = abs(results[n_full] - results[n_half]) / results[n_full]
    return {
        "mode": "grid-halving",
        "tau": tau,
        "err_X2": {str(k): v for k, v in results.items()},
        "relative_change": rel,
        "splitting_error_dominates": bool(rel < 0.01),
    }


def run_soliton_conservation(cfg: RunConfig) -> dict:
    """Per-step energy and mass for a fixed tau, for both schemes."""
    out = Path(cfg.out_dir)
    grid, c = cfg.grid, cfg.soliton_speed
    summary = {}
    for scheme in ("lie", "strang"):
        state0 = soliton_initial_state(grid, c)
        scfg = SchemeConfig(
            scheme=scheme, tau=cfg.scheme.tau, t_final=cfg.scheme.t_final,
            record_every=cfg.scheme.record_every,
        )
        obs = standard_observer(cfg.potential, cfg.params, boundary_values=state0.boundary)
        traj = evolve(state0, scfg, cfg.potential, cfg.params, observers=[obs])
        write_diagnostics_csv(traj.rows, out / f"diagnostics_{scheme}.csv")
        e0, m0 = traj.rows[0].energy, traj.rows[0].mass
        summary[scheme] = {
            "max_energy_drift": max(abs(r.energy - e0) for r in traj.rows),
            "max_mass_drift": max(abs(r.mass - m0) for r in traj.rows),
        }
    meta = _metadata(cfg, {"summary": summary, "actual_t_final": cfg.scheme.actual_t_final})
    _write_json(meta, out / "run_metadata.json")
    return {"summary": summary, "out_dir": str(out)}


def run_vortex_case(cfg: RunConfig, minimize_cfg=None) -> dict:
    """2D stirring run from the frozen-potential energy minimizer.

    Emits diagnostics.csv (with vortex counts), vortex_events.csv, field and
    potential snapshots, the ground-state report and run metadata. A blow-up
    abort is reported in the metadata together with the last valid snapshot;
    the function then returns with "aborted": True."""
    from .groundstate import minimize

    out = Path(cfg.out_dir)
    fields_dir = out / "fields"
    res = minimize(cfg.potential, cfg.params, cfg.grid, minimize_cfg)
    write_snapshot(res.field, fields_dir / "groundstate")
    _write_json(res.report(), out / "groundstate_report.json")

    state0 = FlowState(field=res.field, t=0.0, form="u")
    obs = standard_observer(cfg.potential, cfg.params, detect_vortices=True)
    events: list[tuple] = []

    from .diagnostics import vortex_windings

    def event_logger(n: int, state):
        report = vortex_windings(state.full_field())
        for ev in report.events:
            i, j = ev.cell
            x1 = state.field.grid.axis[i]
            x2 = state.field.grid.axis[j]
            events.append((state.t, i, j, x1, x2, ev.charge, ev.density))
        return None

    n_steps = cfg.scheme.n_steps
    scfg = SchemeConfig(
        scheme="strang", tau=cfg.scheme.tau, t_final=cfg.scheme.t_final,
        record_every=cfg.scheme.record_every,
        snapshot_every=cfg.scheme.snapshot_every or max(1, n_steps // 4),
    )
    aborted = False
    try:
        traj = evolve(state0, scfg, cfg.potential, cfg.params, observers=[obs, event_logger])
    except BlowUpError as exc:
        traj = Trajectory()
        traj.aborted = True
        write_snapshot(exc.last_state.full_field(), fields_dir / "last_valid")
        aborted = True

    write_diagnostics_csv(traj.rows, out / "diagnostics.csv")
    lines = ["t,i,j,x1,x2,charge,density"]
    for t, i, j, x1, x2, q, rho in events:
        lines.append(f"{t:.17g},{i},{j},{x1:.17g},{x2:.17g},{q},{rho:.17g}")
    (out / "vortex_events.csv").write_text("\n".join(lines) + "\n")

    for idx, (t, snap) in enumerate(traj.snapshots):
        write_snapshot(snap, fields_dir / f"u_{idx:04d}")
        write_snapshot(eval_potential(cfg.potential, t, cfg.grid), fields_dir / f"pot_{idx:04d}")
    snap_times = [t for t, _ in traj.snapshots]

    meta = _metadata(cfg, {
        "aborted": aborted,
        "groundstate": res.report(),
        "snapshot_times": snap_times,
        "actual_t_final": scfg.actual_t_final,
        "n_vortex_events": len(events),
    })
    _write_json(meta, out / "run_metadata.json")
    return {
        "aborted": aborted,
        "events": events,
        "rows": traj.rows,
        "snapshot_times": snap_times,
        "out_dir": str(out),
    }


def run_custom(cfg: RunConfig) -> dict:
    """Verbatim single run from the config; random smooth perturbation of the
    unit background seeded by cfg.seed."""
    rng = np.random.default_rng(cfg.seed)
    g = cfg.grid
    # smooth random perturbation: a few low Fourier modes
    u = np.ones(g.shape, dtype=np.complex128)
    for _ in range(4):
        amp = 0.05 * (rng.standard_normal() + 1j * rng.standard_normal())
        if g.dim == 1 and g.bc == DIRICHLET:
            # sine modes vanish at the box boundary, keeping u(+-L) = 1
            k = rng.integers(1, 4) * np.pi / (2 * g.half_width)
            u = u + amp * np.sin(k * (g.axis + g.half_width))
        elif g.dim == 1:
            k = rng.integers(1, 4) * np.pi / g.half_width
            u = u + amp * np.exp(1j * k * g.axis)
        else:
            x1, x2 = g.coords()
            k1 = rng.integers(-3, 4) * np.pi / g.half_width
            k2 = rng.integers(-3, 4) * np.pi / g.half_width
            u = u + amp * np.exp(1j * (k1 * x1 + k2 * x2))
    boundary = (1.0 + 0.0j, 1.0 + 0.0j) if g.bc == DIRICHLET else None
    state0 = FlowState(field=Field(g, u), t=0.0, form="u", boundary=boundary)
    obs = standard_observer(cfg.potential, cfg.params, boundary_values=boundary,
                            detect_vortices=g.dim == 2)
    traj = evolve(state0, cfg.scheme, cfg.potential, cfg.params, observers=[obs])
    out = Path(cfg.out_dir)
    write_outputs(traj, out, cfg)
    return {"rows": traj.rows, "out_dir": str(out)}


def write_outputs(traj: Trajectory, out_dir: str | Path, cfg: RunConfig, extra: dict | None = None) -> None:
    """diagnostics.csv + field snapshots + run_metadata.json."""
    out = Path(out_dir)
    write_diagnostics_csv(traj.rows, out / "diagnostics.csv")
    for idx, (t, snap) in enumerate(traj.snapshots):
        write_snapshot(snap, out / "fields" / f"u_{idx:04d}")
    if traj.final_state is not None:
        write_snapshot(traj.final_state.full_field(), out / "fields" / "final")
    meta = _metadata(cfg, {"actual_t_final": cfg.scheme.actual_t_final, **(extra or {})})
    _write_json(meta, out / "run_metadata.json")


def run_scenario(cfg: RunConfig) -> dict:
    if cfg.scenario in ("soliton_convergence", "perturbed_convergence"):
        return run_soliton_convergence(cfg)
    if cfg.scenario == "soliton_conservation":
        return run_soliton_conservation(cfg)
    if cfg.scenario.startswith("vortex_"):
        return run_vortex_case(cfg)
    return run_custom(cfg)
