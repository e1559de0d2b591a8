"""Readers for the solver's on-disk artifact formats.

This package talks to the solver only through its documented files:

* field snapshots -- ``base.json`` header ``{dim, N, L, bc, dtype: "c128",
  order: "row-major"}`` next to ``base.bin`` holding little-endian
  interleaved float64 (re, im) pairs in row-major order;
* ``diagnostics.csv`` -- columns ``t,energy,mass,err_X2,norm_L2,norm_H2,
  vortex_count,net_winding``;
* ``convergence.csv`` -- columns ``scheme,tau,err_X2,energy_err,mass_err``
  with trailing ``<scheme>_slope`` summary rows.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

DIAG_COLUMNS = ("t", "energy", "mass", "err_X2", "norm_L2", "norm_H2",
                "vortex_count", "net_winding")
SWEEP_COLUMNS = ("scheme", "tau", "err_X2", "energy_err", "mass_err")


class SchemaError(ValueError):
    """An input file does not match its documented format."""


@dataclass(frozen=True)
class Snapshot:
    dim: int
    npts: int
    half_width: float
    bc: str
    values: np.ndarray

    @property
    def axis(self) -> np.ndarray:
        """Node coordinates along one direction."""
        n, l = self.npts, self.half_width
        if self.bc == "dirichlet":
            h = 2 * l / (n + 1)
            return -l + h * np.arange(1, n + 1)
        return -l + (2 * l / n) * np.arange(n)


def read_snapshot(base: str | Path) -> Snapshot:
    base = Path(base)
    if base.suffix == ".json":
        base = base.with_suffix("")
    json_path = base.with_suffix(".json")
    if not json_path.exists():
        raise SchemaError(f"missing snapshot header {json_path}")
    header = json.loads(json_path.read_text())
    for key in ("dim", "N", "L", "bc", "dtype", "order"):
        if key not in header:
            raise SchemaError(f"snapshot header {json_path} lacks {key!r}")
    if header["dtype"] != "c128" or header["order"] != "row-major":
        raise SchemaError(f"unsupported snapshot layout in {json_path}")
    raw = np.fromfile(base.with_suffix(".bin"), dtype="<c16")
    n, dim = int(header["N"]), int(header["dim"])
    if raw.size != n**dim:
        raise SchemaError(f"{base}.bin holds {raw.size} values, expected {n**dim}")
    return Snapshot(dim=dim, npts=n, half_width=float(header["L"]),
                    bc=header["bc"], values=raw.reshape((n,) * dim))


def read_diagnostics(path: str | Path) -> dict[str, np.ndarray]:
    path = Path(path)
    with path.open() as fh:
        rows = list(csv.reader(fh))
    if not rows or tuple(rows[0]) != DIAG_COLUMNS:
        raise SchemaError(f"{path} is not a diagnostics CSV (header {rows[:1]})")
    data = {c: [] for c in DIAG_COLUMNS}
    for row in rows[1:]:
        if len(row) != len(DIAG_COLUMNS):
            raise SchemaError(f"{path}: malformed row {row}")
        for c, cell in zip(DIAG_COLUMNS, row):
            data[c].append(float(cell) if cell else math.nan)
    return {c: np.asarray(v) for c, v in data.items()}


def read_convergence(path: str | Path) -> tuple[dict[str, dict[str, np.ndarray]], dict[str, float]]:
    """Returns (per-scheme columns, fitted slopes)."""
    path = Path(path)
    with path.open() as fh:
        rows = list(csv.reader(fh))
    if not rows or tuple(rows[0]) != SWEEP_COLUMNS:
        raise SchemaError(f"{path} is not a convergence CSV (header {rows[:1]})")
    sweeps: dict[str, dict[str, list[float]]] = {}
    slopes: dict[str, float] = {}
    for row in rows[1:]:
        scheme = row[0]
        if scheme.endswith("_slope"):
            slopes[scheme.removesuffix("_slope")] = float(row[2])
            continue
        entry = sweeps.setdefault(scheme, {c: [] for c in SWEEP_COLUMNS[1:]})
        for c, cell in zip(SWEEP_COLUMNS[1:], row[1:]):
            entry[c].append(float(cell) if cell else math.nan)
    return ({s: {c: np.asarray(v) for c, v in e.items()} for s, e in sweeps.items()},
            slopes)
