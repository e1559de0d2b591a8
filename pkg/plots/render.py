#!/usr/bin/env python3
"""Render figures from solver artifacts.

    python3 plots/render.py --spec spec.json

The spec is a JSON object::

    {"kind": "profile" | "convergence" | "conservation" | "panels",
     "out":  "figure.png",
     ...kind-specific inputs...}

profile      {"snapshots": [{"path": base, "label": str}, ...],
              "window": [x_lo, x_hi]}           1D modulus/phase profiles
convergence  {"csv": "convergence.csv"}          log-log error lines with
                                                 order-1/order-2 guides
conservation {"csvs": [{"path": ..., "label": str}, ...]}
                                                 energy and mass drift vs t
panels       {"rows": [{"u": base, "potential": base, "title": str}, ...]}
                                                 density / phase / potential

Exit codes: 0 success, 2 bad spec or schema mismatch.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

if __package__ in (None, ""):
    sys.path.insert(0, str(Path(__file__).resolve().parent))
    from readers import SchemaError, read_convergence, read_diagnostics, read_snapshot
else:
    from .readers import SchemaError, read_convergence, read_diagnostics, read_snapshot

KINDS = ("profile", "convergence", "conservation", "panels")


def _require(spec: dict, key: str):
    if key not in spec:
        raise SchemaError(f"spec lacks required key {key!r}")
    return spec[key]


def plot_profile(spec: dict, fig):
    window = spec.get("window", (-10.0, 10.0))
    axes = fig.subplots(1, 2)
    for entry in _require(spec, "snapshots"):
        snap = read_snapshot(_require(entry, "path"))
        if snap.dim != 1:
            raise SchemaError("profile plots need 1D snapshots")
        x = snap.axis
        sel = (x >= window[0]) & (x <= window[1])
        label = entry.get("label", Path(entry["path"]).name)
        axes[0].plot(x[sel], np.abs(snap.values[sel]) ** 2, label=label)
        axes[1].plot(x[sel], np.angle(snap.values[sel]), label=label)
    axes[0].set_xlabel("x"), axes[0].set_ylabel(r"$|u|^2$")
    axes[1].set_xlabel("x"), axes[1].set_ylabel(r"$\arg u$")
    axes[0].legend(), axes[1].legend()


def plot_convergence(spec: dict, fig):
    sweeps, slopes = read_convergence(_require(spec, "csv"))
    ax = fig.subplots()
    taus_all = []
    for scheme, cols in sweeps.items():
        label = scheme
        if scheme in slopes:
            label = f"{scheme} (slope {slopes[scheme]:.2f})"
        ax.loglog(cols["tau"], cols["err_X2"], "o-", label=label)
        taus_all.extend(cols["tau"])
    t = np.array(sorted(set(taus_all)))
    if t.size:
        anchor = max(e["err_X2"].max() for e in sweeps.values())
        for order, style in ((1, "--"), (2, ":")):
            ax.loglog(t, anchor * (t / t.max()) ** order, style, color="gray",
                      label=f"order {order}")
    ax.set_xlabel(r"$\tau$"), ax.set_ylabel(r"$X^2$ error")
    ax.legend()


def plot_conservation(spec: dict, fig):
    axes = fig.subplots(1, 2)
    for entry in _require(spec, "csvs"):
        d = read_diagnostics(_require(entry, "path"))
        label = entry.get("label", Path(entry["path"]).stem)
        e_drift = np.abs(d["energy"] - d["energy"][0])
        m_drift = np.abs(d["mass"] - d["mass"][0])
        axes[0].semilogy(d["t"], np.maximum(e_drift, 1e-18), label=label)
        axes[1].semilogy(d["t"], np.maximum(m_drift, 1e-18), label=label)
    axes[0].set_xlabel("t"), axes[0].set_ylabel(r"$|\mathcal{E}(t)-\mathcal{E}(0)|$")
    axes[1].set_xlabel("t"), axes[1].set_ylabel(r"$|\mathcal{M}(t)-\mathcal{M}(0)|$")
    axes[0].legend(), axes[1].legend()


def plot_panels(spec: dict, fig):
    rows = _require(spec, "rows")
    axes = fig.subplots(len(rows), 3, squeeze=False)
    for r, entry in enumerate(rows):
        u = read_snapshot(_require(entry, "u"))
        if u.dim != 2:
            raise SchemaError("panel plots need 2D snapshots")
        extent = (-u.half_width, u.half_width, -u.half_width, u.half_width)
        # values are indexed [x1, x2]; transpose so x1 runs horizontally
        density = (np.abs(u.values) ** 2).T
        phase = np.angle(u.values).T
        im0 = axes[r, 0].imshow(density, origin="lower", extent=extent, cmap="viridis")
        im1 = axes[r, 1].imshow(phase, origin="lower", extent=extent,
                                cmap="twilight", vmin=-np.pi, vmax=np.pi)
        fig.colorbar(im0, ax=axes[r, 0], fraction=0.046)
        fig.colorbar(im1, ax=axes[r, 1], fraction=0.046)
        if "potential" in entry:
            pot = read_snapshot(entry["potential"])
            im2 = axes[r, 2].imshow(pot.values.real.T, origin="lower",
                                    extent=extent, cmap="magma")
            fig.colorbar(im2, ax=axes[r, 2], fraction=0.046)
        else:
            axes[r, 2].set_axis_off()
        if "title" in entry:
            axes[r, 0].set_ylabel(entry["title"])
    for ax, name in zip(axes[0], ("density", "phase", "potential")):
        ax.set_title(name)


RENDERERS = {
    "profile": (plot_profile, (9.0, 3.6)),
    "convergence": (plot_convergence, (5.4, 4.2)),
    "conservation": (plot_conservation, (9.0, 3.6)),
    "panels": (plot_panels, (10.5, 3.6)),
}


def render(spec: dict) -> Path:
    kind = _require(spec, "kind")
    if kind not in KINDS:
        raise SchemaError(f"unknown plot kind {kind!r}; choose from {KINDS}")
    out = Path(_require(spec, "out"))
    fn, size = RENDERERS[kind]
    if kind == "panels":
        size = (size[0], size[1] * max(1, len(spec.get("rows", []))))
    fig = plt.figure(figsize=size, dpi=110)
    try:
        fn(spec, fig)
        fig.tight_layout()
        out.parent.mkdir(parents=True, exist_ok=True)
        # fixed metadata keeps the PNG byte-stable across reruns
        fig.savefig(out, metadata={"Software": "plots"})
    finally:
        plt.close(fig)
    return out


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__,
                                 formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--spec", required=True, help="JSON plot specification")
    args = ap.parse_args(argv)
    try:
        spec = json.loads(Path(args.spec).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        print(f"cannot read spec: {exc}", file=sys.stderr)
        return 2
    try:
        out = render(spec)
    except (SchemaError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    print(f"wrote {out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
