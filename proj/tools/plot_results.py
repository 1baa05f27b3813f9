#!/usr/bin/env python3
"""Render the CSV outputs of a ks run as a single overview figure.

Usage: plot_results.py OUTPUT_DIR [--save FILE]

Reads whichever of controls.csv, iterations.csv, force_grid.csv, and
diagnostics.csv exist in OUTPUT_DIR and lays out the matching panels.
"""

import argparse
import csv
import math
import os
import sys

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np


def read_csv(path):
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    header, data = rows[0], rows[1:]
    cols = {name: np.array([float(r[i]) for r in data]) for i, name in enumerate(header)}
    return header, cols


def plot_controls(ax_int, ax_place, header, cols):
    t = cols["t"]
    for name in header:
        if name.startswith("alpha_"):
            ax_int.plot(t, cols[name], label=name)
        elif name.startswith(("theta_", "phi_")):
            ax_place.plot(t, cols[name], label=name)
    ax_int.set_title("intensities")
    ax_place.set_title("placements")
    for ax in (ax_int, ax_place):
        ax.set_xlabel("t")
        ax.legend(fontsize="x-small")


def plot_iterations(ax, cols):
    ax.semilogy(cols["iter"], cols["J"], label="J")
    ax.semilogy(cols["iter"], cols["tracking"], label="tracking")
    ax.semilogy(cols["iter"], cols["pg_norm"], label="|pg|")
    ax.set_title("optimization")
    ax.set_xlabel("iteration")
    ax.legend(fontsize="x-small")


def plot_force(ax, cols):
    times = sorted(set(cols["t"]))
    pick = times[-1]
    sel = cols["t"] == pick
    x, y = cols["x"][sel], cols["y"][sel]
    fx, fy = cols["fx"][sel], cols["fy"][sel]
    n = int(round(math.sqrt(len(x))))
    h2 = cols["h2"][sel].reshape(n, n)
    ax.pcolormesh(x.reshape(n, n), y.reshape(n, n), np.log10(np.maximum(h2, 1e-30)),
                  shading="auto", cmap="viridis")
    mag = np.hypot(fx, fy)
    scale = np.percentile(mag, 90) or 1.0
    step = max(1, n // 20)
    grid = lambda v: v.reshape(n, n)[::step, ::step]
    ax.quiver(grid(x), grid(y), grid(fx) / scale, grid(fy) / scale,
              color="white", width=0.004)
    ax.set_title(f"force at t={pick:g} (log10 |h|^2)")
    ax.set_aspect("equal")


def plot_diagnostics(ax_mass, ax_com, cols):
    t = cols["t"]
    ax_mass.plot(t, cols["mass"] / cols["mass"][0], label="mass / initial")
    ax_mass.plot(t, cols["max"], label="max")
    ax_mass.plot(t, cols["min"], label="min")
    ax_mass.set_title("transport diagnostics")
    ax_mass.set_xlabel("t")
    ax_mass.legend(fontsize="x-small")

    ax_com.plot(cols["com_x"], cols["com_y"], "-")
    ax_com.plot(cols["com_x"][0], cols["com_y"][0], "go", label="start")
    ax_com.plot(cols["com_x"][-1], cols["com_y"][-1], "rx", label="end")
    ax_com.set_title("center of mass path")
    ax_com.set_aspect("equal")
    ax_com.legend(fontsize="x-small")


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("output_dir")
    ap.add_argument("--save", default=None, help="figure file (default: OUTPUT_DIR/results.png)")
    args = ap.parse_args()

    d = args.output_dir
    panels = []
    if os.path.exists(os.path.join(d, "controls.csv")):
        panels.append(("controls", read_csv(os.path.join(d, "controls.csv"))))
    if os.path.exists(os.path.join(d, "iterations.csv")):
        panels.append(("iterations", read_csv(os.path.join(d, "iterations.csv"))))
    if os.path.exists(os.path.join(d, "force_grid.csv")):
        panels.append(("force", read_csv(os.path.join(d, "force_grid.csv"))))
    if os.path.exists(os.path.join(d, "diagnostics.csv")):
        panels.append(("diagnostics", read_csv(os.path.join(d, "diagnostics.csv"))))
    if not panels:
        sys.exit(f"no known CSV outputs in {d}")

    slots = sum(2 if kind in ("controls", "diagnostics") else 1 for kind, _ in panels)
    ncols = 2
    nrows = (slots + ncols - 1) // ncols
    fig, axes = plt.subplots(nrows, ncols, figsize=(11, 4 * nrows))
    axes = np.atleast_1d(axes).ravel()

    k = 0
    for kind, (header, cols) in panels:
        if kind == "controls":
            plot_controls(axes[k], axes[k + 1], header, cols)
            k += 2
        elif kind == "iterations":
            plot_iterations(axes[k], cols)
            k += 1
        elif kind == "force":
            plot_force(axes[k], cols)
            k += 1
        else:
            plot_diagnostics(axes[k], axes[k + 1], cols)
            k += 2
    for ax in axes[k:]:
        ax.axis("off")

    fig.tight_layout()
    out = args.save or os.path.join(d, "results.png")
    fig.savefig(out, dpi=130)
    print(f"wrote {out}")


if __name__ == "__main__":
    main()
