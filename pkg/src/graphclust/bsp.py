"""Synchronous superstep executor over shared-memory workers.

State is double-buffered: within a superstep every vertex update reads only
the previous buffer, so results cannot depend on the order vertices are
processed in. Vertices are split into contiguous ranges, one per worker.
Randomness inside programs must be derived from (seed, vertex, superstep),
never from scheduling, which makes the final state bit-identical for every
worker count; the test suite leans on that.

Workers are forked processes. They are started before the timer so that
elapsed_seconds covers only the superstep loop (per-superstep broadcast,
compute, and collection), not process creation or graph loading.
"""

from __future__ import annotations

import multiprocessing as mp
import pickle
import time
from dataclasses import dataclass
from typing import Any, Sequence

from .graph import UndirectedGraph


class SuperstepProgram:
    """Per-vertex rules executed by run_supersteps.

    update must be pure with respect to the current superstep: it sees the
    previous state array and must not attempt to observe states computed in
    the same superstep.
    """

    def init(self, vertex: int, seed: int) -> Any:
        raise NotImplementedError

    def update(
        self, vertex: int, prev: Sequence, graph: UndirectedGraph, superstep: int, seed: int
    ) -> Any:
        raise NotImplementedError

    def changed(self, old: Any, new: Any) -> bool:
        return old != new


@dataclass
class RunStats:
    supersteps_executed: int
    converged: bool
    elapsed_seconds: float


def _split_ranges(n: int, workers: int) -> list[tuple[int, int]]:
    bounds = [n * k // workers for k in range(workers + 1)]
    return [(bounds[k], bounds[k + 1]) for k in range(workers)]


def _worker_main(conn, graph: UndirectedGraph, program: SuperstepProgram, seed: int,
                 lo: int, hi: int) -> None:
    update = program.update
    changed = program.changed
    try:
        conn.send(("ready", None))
        while True:
            msg = pickle.loads(conn.recv_bytes())
            if msg is None:
                return
            step, prev = msg
            segment = [update(v, prev, graph, step, seed) for v in range(lo, hi)]
            n_changed = sum(1 for v in range(lo, hi) if changed(prev[v], segment[v - lo]))
            conn.send((segment, n_changed))
    except (EOFError, KeyboardInterrupt):
        return
    except Exception:
        import traceback

        conn.send(("error", traceback.format_exc()))
    finally:
        conn.close()


def run_supersteps(
    g: UndirectedGraph,
    program: SuperstepProgram,
    max_iterations: int,
    workers: int = 1,
    seed: int = 0,
) -> tuple[list, RunStats]:
    """Run program until no vertex changes or max_iterations update passes.

    Returns the final state array and run statistics. Superstep indices
    start at 1; the initialization pass is not counted against the
    iteration cap. converged means the last executed superstep changed
    nothing, so one more pass would be a no-op.
    """
    if workers < 1:
        raise ValueError(f"workers must be >= 1, got {workers}")
    if max_iterations < 0:
        raise ValueError(f"max_iterations must be >= 0, got {max_iterations}")
    n = g.vertex_count
    state = [program.init(v, seed) for v in range(n)]
    if max_iterations == 0:
        return state, RunStats(0, False, 0.0)
    g.adjacency_lists()
    if workers == 1:
        return _run_serial(g, program, state, max_iterations, seed)
    return _run_forked(g, program, state, max_iterations, workers, seed)


def _run_serial(g, program, state, max_iterations, seed):
    update = program.update
    changed = program.changed
    n = g.vertex_count
    executed = 0
    converged = False
    start = time.perf_counter()
    for step in range(1, max_iterations + 1):
        new_state = [update(v, state, g, step, seed) for v in range(n)]
        executed = step
        n_changed = sum(1 for v in range(n) if changed(state[v], new_state[v]))
        state = new_state
        if n_changed == 0:
            converged = True
            break
    elapsed = time.perf_counter() - start
    return state, RunStats(executed, converged, elapsed)


def _run_forked(g, program, state, max_iterations, workers, seed):
    ctx = mp.get_context("fork")
    conns, procs = [], []
    for lo, hi in _split_ranges(g.vertex_count, workers):
        parent, child = ctx.Pipe()
        proc = ctx.Process(
            target=_worker_main, args=(child, g, program, seed, lo, hi), daemon=True
        )
        proc.start()
        child.close()
        conns.append(parent)
        procs.append(proc)
    try:
        for conn in conns:
            tag, _ = conn.recv()
            assert tag == "ready"
        executed = 0
        converged = False
        start = time.perf_counter()
        for step in range(1, max_iterations + 1):
            blob = pickle.dumps((step, state), protocol=pickle.HIGHEST_PROTOCOL)
            for conn in conns:
                conn.send_bytes(blob)
            pieces = []
            n_changed = 0
            for conn in conns:
                part, count = conn.recv()
                if part == "error":
                    raise RuntimeError(f"superstep worker failed:\n{count}")
                pieces.append(part)
                n_changed += count
            executed = step
            state = [s for piece in pieces for s in piece]
            if n_changed == 0:
                converged = True
                break
        elapsed = time.perf_counter() - start
        return state, RunStats(executed, converged, elapsed)
    finally:
        for conn in conns:
            try:
                conn.send_bytes(pickle.dumps(None))
            except (BrokenPipeError, OSError):
                pass
            conn.close()
        for proc in procs:
            proc.join(timeout=10)
            if proc.is_alive():
                proc.terminate()


@dataclass(frozen=True)
class SuperstepRuntime:
    """Handle bundling the worker count for algorithms that run supersteps."""

    workers: int = 1

    def run(
        self,
        g: UndirectedGraph,
        program: SuperstepProgram,
        max_iterations: int,
        seed: int = 0,
    ) -> tuple[list, RunStats]:
        return run_supersteps(g, program, max_iterations, self.workers, seed)
