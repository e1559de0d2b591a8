"""Command-line entry point.

    gpsplit run <config.json>         single-run scenarios
    gpsplit sweep <config.json>       tau-sweep convergence scenarios
    gpsplit groundstate <config.json> energy minimizer only

Exit codes: 0 success, 2 configuration error, 3 blow-up abort.
The environment variable GPSPLIT_THREADS caps internal FFT parallelism.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .experiments import ConfigError, RunConfig, run_scenario, run_soliton_convergence
from .fieldio import write_snapshot
from .integrators import BlowUpError

SWEEP_SCENARIOS = ("soliton_convergence", "perturbed_convergence")


def _load(path: str, out: str | None) -> RunConfig:
    cfg = RunConfig.from_file(path)
    if out is not None:
        cfg.out_dir = out
    return cfg


def cmd_run(args) -> int:
    cfg = _load(args.config, args.out)
    if cfg.scenario in SWEEP_SCENARIOS:
        raise ConfigError(f"scenario {cfg.scenario!r} is a sweep; use 'gpsplit sweep'")
    try:
        result = run_scenario(cfg)
    except BlowUpError as exc:
        print(f"aborted: {exc}", file=sys.stderr)
        return 3
    if result.get("aborted"):
        print("aborted: blow-up guard tripped; last valid snapshot written", file=sys.stderr)
        return 3
    print(f"wrote artifacts to {result['out_dir']}")
    return 0


def cmd_sweep(args) -> int:
    cfg = _load(args.config, args.out)
    if cfg.scenario not in SWEEP_SCENARIOS:
        raise ConfigError(f"scenario {cfg.scenario!r} is not a sweep; use 'gpsplit run'")
    result = run_soliton_convergence(cfg)
    for scheme, s in result["slopes"].items():
        print(f"{scheme}: X2 slope {s['x2']:.3f}, energy slope {s['energy']:.3f}")
    print(f"wrote artifacts to {result['out_dir']}")
    return 0


def cmd_groundstate(args) -> int:
    from .experiments import _write_json
    from .groundstate import minimize

    cfg = _load(args.config, args.out)
    if cfg.grid.dim != 2 or cfg.grid.bc != "periodic":
        raise ConfigError("groundstate needs a periodic 2D grid")
    res = minimize(cfg.potential, cfg.params, cfg.grid)
    out = Path(cfg.out_dir)
    write_snapshot(res.field, out / "groundstate")
    _write_json(res.report(), out / "groundstate_report.json")
    print(f"energy {res.energy:.12g}, grad norm {res.grad_norm:.3g}, "
          f"{res.iterations} iterations, converged={res.converged}")
    return 0


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="gpsplit", description=__doc__,
                                     formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = parser.add_subparsers(dest="command", required=True)
    for name, fn in (("run", cmd_run), ("sweep", cmd_sweep), ("groundstate", cmd_groundstate)):
        p = sub.add_parser(name)
        p.add_argument("config", help="JSON run configuration")
        p.add_argument("--out", default=None, help="output directory (overrides config)")
        p.set_defaults(fn=fn)
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
