"""Benchmark figures rendered to files.

Uses the non-interactive Agg backend so rendering works headless; figures
land next to the delimited output the CLI writes.
"""

from __future__ import annotations

import os

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .bench import AmdahlFit, BenchTable, amdahl_speedup

TIMES_PNG = "times.png"
SPEEDUP_PNG = "speedup.png"


def _label(table: BenchTable) -> str:
    if table.rows:
        return f"{table.rows[0].algorithm} on {table.rows[0].dataset}"
    return "benchmark"


def render_time_figure(table: BenchTable, path) -> None:
    """Mean elapsed seconds vs workers, with std-dev error bars."""
    ws = sorted(table.stats)
    means = [table.stats[w][0] for w in ws]
    stds = [table.stats[w][1] for w in ws]
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    ax.errorbar(ws, means, yerr=stds, fmt="o-", capsize=3)
    ax.set_xlabel("workers W")
    ax.set_ylabel("elapsed seconds (mean of reps)")
    ax.set_title(_label(table))
    ax.set_xticks(ws)
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def render_speedup_figure(table: BenchTable, fit: AmdahlFit | None, path) -> None:
    """Measured speedup points with the fitted model curve and ideal line."""
    points = table.speedup_points()
    ws = [w for w, _ in points]
    phis = [phi for _, phi in points]
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    ax.plot(ws, phis, "o", label="measured")
    ax.plot(ws, ws, ":", color="gray", label="ideal")
    if fit is not None:
        dense = np.linspace(1.0, max(ws), 200)
        curve = [amdahl_speedup(fit.P, w) for w in dense]
        ax.plot(dense, curve, "-", label=f"model fit, P={fit.P:.4f}")
    ax.set_xlabel("workers W")
    ax.set_ylabel("speedup phi(W)")
    ax.set_title(_label(table))
    ax.set_xticks(ws)
    ax.grid(True, alpha=0.3)
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def render_benchmark_figures(table: BenchTable, fit: AmdahlFit | None, out_dir) -> list[str]:
    """Render both figures into out_dir; returns the written paths."""
    os.makedirs(out_dir, exist_ok=True)
    written = []
    times_path = os.path.join(out_dir, TIMES_PNG)
    render_time_figure(table, times_path)
    written.append(times_path)
    if table.speedups:
        speedup_path = os.path.join(out_dir, SPEEDUP_PNG)
        render_speedup_figure(table, fit, speedup_path)
        written.append(speedup_path)
    return written
