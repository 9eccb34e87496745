"""Strong-scaling benchmark protocol.

A benchmark sweeps worker counts, repeating each configuration R times, and
reduces the wall-clock observations to per-W mean and sample standard
deviation. Speedup is phi(W) = mean(W=1) / mean(W). The parallel fraction P
of the classical speedup model

    phi(W) = 1 / ((1 - P) + P / W)

is fitted to the measured points by least squares (dense grid plus ternary
refinement), and everything is emitted as CSV, plot-ready .dat columns, and
rendered figures.
"""

from __future__ import annotations

import csv
import os
import statistics
from dataclasses import dataclass, field
from typing import Callable, NamedTuple, Sequence

import numpy as np

from .bsp import run_supersteps
from .errors import MissingBaselineError, ParseError
from .graph import UndirectedGraph
from .labelprop import BasicLabelProgram, ScoredLabelProgram
from .rng import mix64

_REP_TAG = 0xBE7

CSV_HEADER = ["algorithm", "dataset", "workers", "rep", "elapsed_seconds"]
TIMINGS_CSV = "timings.csv"
TIMES_DAT = "times.dat"
SPEEDUP_DAT = "speedup.dat"


@dataclass(frozen=True)
class BenchConfig:
    algorithm: str
    dataset: str
    workers: tuple[int, ...] = tuple(range(1, 11))
    reps: int = 10
    seed: int = 42
    max_iterations: int = 10

    def __post_init__(self):
        ws = tuple(int(w) for w in self.workers)
        object.__setattr__(self, "workers", ws)
        if not ws:
            raise ValueError("workers must be non-empty")
        if ws[0] < 1 or any(a >= b for a, b in zip(ws, ws[1:])):
            raise ValueError(f"workers must be strictly increasing positive integers: {ws}")
        if self.reps < 1:
            raise ValueError(f"reps must be >= 1, got {self.reps}")
        if self.max_iterations < 1:
            raise ValueError(f"max_iterations must be >= 1, got {self.max_iterations}")


class BenchRow(NamedTuple):
    algorithm: str
    dataset: str
    workers: int
    rep: int
    elapsed_seconds: float


@dataclass
class BenchTable:
    rows: list[BenchRow]
    stats: dict[int, tuple[float, float]] = field(default_factory=dict)
    speedups: dict[int, float] = field(default_factory=dict)

    def speedup_points(self) -> list[tuple[int, float]]:
        """(W, phi) pairs; requires a W=1 baseline in the table."""
        if not self.speedups:
            raise MissingBaselineError("speedup needs timings at W=1 as the baseline")
        return sorted(self.speedups.items())


def _aggregate(rows: Sequence[BenchRow]) -> tuple[dict, dict]:
    by_w: dict[int, list[float]] = {}
    for row in rows:
        by_w.setdefault(row.workers, []).append(row.elapsed_seconds)
    stats = {}
    for w, xs in sorted(by_w.items()):
        mean = statistics.fmean(xs)
        std = statistics.stdev(xs) if len(xs) > 1 else 0.0
        stats[w] = (mean, std)
    speedups = {}
    if 1 in stats and all(mean > 0 for mean, _ in stats.values()):
        base = stats[1][0]
        speedups = {w: base / mean for w, (mean, std) in stats.items()}
    return stats, speedups


_PROGRAM_FACTORIES = {
    "lpa": lambda: BasicLabelProgram(),
    "lpa-score": lambda: ScoredLabelProgram(delta=0.5),
}

# runner(algorithm, graph, workers, max_iterations, seed) -> elapsed seconds
Runner = Callable[[str, UndirectedGraph, int, int, int], float]


def _default_runner(algorithm: str, g: UndirectedGraph, workers: int,
                    max_iterations: int, seed: int) -> float:
    program = _PROGRAM_FACTORIES[algorithm]()
    _, stats = run_supersteps(g, program, max_iterations, workers, seed)
    return stats.elapsed_seconds


def benchmark_algorithms() -> list[str]:
    """Algorithm names run_benchmark accepts with the built-in runner."""
    return sorted(_PROGRAM_FACTORIES)


def run_benchmark(cfg: BenchConfig, g: UndirectedGraph, runner: Runner | None = None) -> BenchTable:
    """Time cfg.algorithm over the worker sweep, cfg.reps runs per W.

    Repetition r uses the same derived seed at every W so each worker count
    times identical work. runner exists for tests that inject fake clocks;
    the default runs the real superstep loop.
    """
    if runner is None:
        if cfg.algorithm not in _PROGRAM_FACTORIES:
            raise ValueError(
                f"unknown algorithm {cfg.algorithm!r};"
                f" benchmarkable: {', '.join(benchmark_algorithms())}"
            )
        runner = _default_runner
    rows = []
    for w in cfg.workers:
        for rep in range(cfg.reps):
            elapsed = runner(cfg.algorithm, g, w, cfg.max_iterations,
                             mix64(_REP_TAG, cfg.seed, rep))
            rows.append(BenchRow(cfg.algorithm, cfg.dataset, w, rep, float(elapsed)))
    stats, speedups = _aggregate(rows)
    return BenchTable(rows, stats, speedups)


@dataclass(frozen=True)
class AmdahlFit:
    P: float
    residual: float


def amdahl_speedup(P: float, W: float) -> float:
    """Model speedup at worker count W with parallel fraction P."""
    if not 0.0 <= P <= 1.0:
        raise ValueError(f"P must lie in [0, 1], got {P}")
    if W < 1:
        raise ValueError(f"W must be >= 1, got {W}")
    if W == 1:
        # exactly 1 by definition; (1-P) + P round-trips inexactly for some P
        return 1.0
    return 1.0 / ((1.0 - P) + P / W)


def fit_parallel_fraction(points: Sequence[tuple[float, float]]) -> AmdahlFit:
    """Least-squares P over measured (W, phi) points.

    Dense grid search at step 1e-5 over [0, 1], then ternary refinement of
    the surrounding bracket. The SSE is smooth in P, so the combination
    pins the minimizer well below the 1e-4 tolerance used in tests.
    """
    if len(points) < 2:
        raise ValueError(f"need at least 2 points to fit, got {len(points)}")
    ws = np.array([float(w) for w, _ in points])
    phis = np.array([float(p) for _, p in points])
    if len(set(ws.tolist())) != len(ws):
        raise ValueError("W values must be distinct")
    if np.any(ws < 1):
        raise ValueError("W values must be >= 1")
    if np.any(phis <= 0):
        raise ValueError("phi values must be positive")

    def sse(p: float) -> float:
        pred = 1.0 / ((1.0 - p) + p / ws)
        return float(((pred - phis) ** 2).sum())

    grid = np.linspace(0.0, 1.0, 100_001)
    pred = 1.0 / ((1.0 - grid[:, None]) + np.outer(grid, 1.0 / ws))
    errs = ((pred - phis) ** 2).sum(axis=1)
    i = int(errs.argmin())
    lo = grid[max(i - 1, 0)]
    hi = grid[min(i + 1, len(grid) - 1)]
    for _ in range(200):
        m1 = lo + (hi - lo) / 3.0
        m2 = hi - (hi - lo) / 3.0
        if sse(m1) <= sse(m2):
            hi = m2
        else:
            lo = m1
    best = (lo + hi) / 2.0
    candidates = [best, float(grid[i])]
    p_star = min(candidates, key=sse)
    return AmdahlFit(P=p_star, residual=sse(p_star))


def emit_plot_data(table: BenchTable, fit: AmdahlFit | None, out_dir) -> None:
    """Write timings.csv, times.dat, and (given a fit) speedup.dat.

    times.dat columns: W mean std_dev. speedup.dat columns: W phi_measured
    phi_fit. Floats are written with repr-exact formatting so the CSV
    parses back to the original values.
    """
    os.makedirs(out_dir, exist_ok=True)
    with open(os.path.join(out_dir, TIMINGS_CSV), "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(CSV_HEADER)
        writer.writerows(table.rows)
    with open(os.path.join(out_dir, TIMES_DAT), "w") as fh:
        fh.write("# W mean_seconds std_dev_seconds\n")
        for w, (mean, std) in sorted(table.stats.items()):
            fh.write(f"{w} {mean} {std}\n")
    if fit is not None:
        points = table.speedup_points()
        with open(os.path.join(out_dir, SPEEDUP_DAT), "w") as fh:
            fh.write("# W speedup_measured speedup_fit\n")
            for w, phi in points:
                fh.write(f"{w} {phi} {amdahl_speedup(fit.P, w)}\n")


def load_timings_csv(path) -> list[BenchRow]:
    """Parse a timings.csv produced by emit_plot_data."""
    rows = []
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header != CSV_HEADER:
            raise ParseError(f"{path}: expected header {','.join(CSV_HEADER)}")
        for lineno, rec in enumerate(reader, 2):
            if not rec:
                continue
            if len(rec) != 5:
                raise ParseError(f"{path}:{lineno}: expected 5 fields, got {len(rec)}")
            try:
                rows.append(BenchRow(rec[0], rec[1], int(rec[2]), int(rec[3]), float(rec[4])))
            except ValueError:
                raise ParseError(f"{path}:{lineno}: malformed numeric field") from None
    return rows


def tables_from_rows(rows: Sequence[BenchRow]) -> dict[tuple[str, str], BenchTable]:
    """Group raw rows by (algorithm, dataset) and aggregate each group."""
    groups: dict[tuple[str, str], list[BenchRow]] = {}
    for row in rows:
        groups.setdefault((row.algorithm, row.dataset), []).append(row)
    out = {}
    for key, grp in sorted(groups.items()):
        stats, speedups = _aggregate(grp)
        out[key] = BenchTable(grp, stats, speedups)
    return out
