"""Field snapshot format: JSON header + raw little-endian complex128 binary.

A snapshot named ``base`` consists of ``base.json`` holding
``{dim, N, L, bc, dtype: "c128", order: "row-major"}`` and ``base.bin``
holding the node values as interleaved (re, im) float64 pairs in row-major
order.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .grid import Field, Grid

HEADER_KEYS = ("dim", "N", "L", "bc", "dtype", "order")


def write_snapshot(f: Field, base: str | Path) -> tuple[Path, Path]:
    base = Path(base)
    base.parent.mkdir(parents=True, exist_ok=True)
    header = {
        "dim": f.grid.dim,
        "N": f.grid.npts,
        "L": f.grid.half_width,
        "bc": f.grid.bc,
        "dtype": "c128",
        "order": "row-major",
    }
    json_path = base.with_suffix(".json")
    bin_path = base.with_suffix(".bin")
    json_path.write_text(json.dumps(header, indent=1) + "\n")
    f.values.astype("<c16").tofile(bin_path)
    return json_path, bin_path


def read_snapshot(base: str | Path) -> Field:
    base = Path(base)
    if base.suffix == ".json":
        base = base.with_suffix("")
    header = json.loads(base.with_suffix(".json").read_text())
    missing = [k for k in HEADER_KEYS if k not in header]
    if missing:
        raise ValueError(f"snapshot header {base}.json missing keys {missing}")
    if header["dtype"] != "c128" or header["order"] != "row-major":
        raise ValueError(f"unsupported snapshot layout in {base}.json")
    grid = Grid(dim=header["dim"], half_width=header["L"], npts=header["N"], bc=header["bc"])
    raw = np.fromfile(base.with_suffix(".bin"), dtype="<c16")
    if raw.size != grid.npts**grid.dim:
        raise ValueError(f"snapshot {base}.bin has {raw.size} values, expected {grid.npts**grid.dim}")
    return Field(grid, raw.reshape(grid.shape))
