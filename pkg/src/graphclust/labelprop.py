"""Label propagation algorithms on the superstep runtime.

Three update rules share one skeleton: every vertex starts with its own id
as label and synchronously adopts the label with maximal support among its
neighbors, until nothing changes or the iteration cap is hit.

Tie handling: a vertex whose current label already attains the maximal
support keeps it; otherwise the winner is a seeded random pick among the
tied labels. The random stream is derived from (seed, vertex, superstep),
so a tie resolves identically no matter which worker processes the vertex.
Keeping a maximal current label matters on symmetric neighborhoods, where
always re-picking makes synchronized blocks swap labels forever.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Callable, Sequence

from .bsp import RunStats, SuperstepProgram, SuperstepRuntime
from .graph import Partition, UndirectedGraph
from .rng import derived_rng, mix64

_TIE_TAG = 0x1AB
_GAMMA_TAG = 0x2C9
_ROUND_TAG = 0x3F1


@dataclass(frozen=True)
class LpaConfig:
    """Knobs for the basic and score-attenuated variants."""

    max_iterations: int = 10
    delta: float = 0.5
    seed: int = 42

    def __post_init__(self):
        if self.max_iterations < 1:
            raise ValueError(f"max_iterations must be >= 1, got {self.max_iterations}")
        if not 0.0 <= self.delta <= 1.0:
            raise ValueError(f"delta must lie in [0, 1], got {self.delta}")


@dataclass(frozen=True)
class LlpConfig:
    """Knobs for layered label propagation."""

    iterations_K: int
    inner_max_iterations: int = 10
    seed: int = 42

    def __post_init__(self):
        if self.iterations_K < 1:
            raise ValueError(f"iterations_K must be >= 1, got {self.iterations_K}")
        if self.inner_max_iterations < 1:
            raise ValueError(
                f"inner_max_iterations must be >= 1, got {self.inner_max_iterations}"
            )


@dataclass
class Labeling:
    """Final per-vertex labels; scores are present for the scored variant."""

    labels: list[int]
    scores: list[float] | None = None

    def to_partition(self) -> Partition:
        return Partition.from_labels(self.labels)


class Ordering:
    """A permutation of the vertices: rank[v] is the position of v."""

    __slots__ = ("rank",)

    def __init__(self, rank: Sequence[int]):
        rank = [int(r) for r in rank]
        if sorted(rank) != list(range(len(rank))):
            raise ValueError("rank must be a permutation of 0..n-1")
        self.rank = rank

    def vertices_in_order(self) -> list[int]:
        out = [0] * len(self.rank)
        for v, r in enumerate(self.rank):
            out[r] = v
        return out


def _pick_max(scores: dict, current, rng_factory: Callable[[], random.Random]):
    """Label with maximal score; current wins ties it participates in."""
    mx = max(scores.values())
    tied = sorted(lbl for lbl, s in scores.items() if s == mx)
    if len(tied) == 1:
        return tied[0]
    if scores.get(current) == mx:
        return current
    return tied[rng_factory().randrange(len(tied))]


class BasicLabelProgram(SuperstepProgram):
    """Adopt the label with maximal summed incident edge weight."""

    def init(self, vertex: int, seed: int) -> int:
        return vertex

    def update(self, vertex, prev, graph, superstep, seed):
        ids, ws = graph.adjacency_lists()[vertex]
        if not ids:
            return prev[vertex]
        support: dict[int, float] = {}
        for j, w in zip(ids, ws):
            lbl = prev[j]
            support[lbl] = support.get(lbl, 0.0) + w
        return _pick_max(
            support, prev[vertex], lambda: derived_rng(_TIE_TAG, seed, vertex, superstep)
        )


class ScoredLabelProgram(SuperstepProgram):
    """Label adoption weighted by attenuating scores.

    State is (label, score). Support for a label is the sum of
    neighbor_score * edge_weight over neighbors holding it; a vertex that
    switches labels takes the best score seen for the new label minus
    delta, clamped to 0, so a label loses force as it spreads.
    """

    def __init__(self, delta: float):
        self.delta = delta

    def init(self, vertex: int, seed: int) -> tuple[int, float]:
        return (vertex, 1.0)

    def update(self, vertex, prev, graph, superstep, seed):
        ids, ws = graph.adjacency_lists()[vertex]
        if not ids:
            return prev[vertex]
        cur_label = prev[vertex][0]
        support: dict[int, float] = {}
        best: dict[int, float] = {}
        for j, w in zip(ids, ws):
            lbl, score = prev[j]
            support[lbl] = support.get(lbl, 0.0) + score * w
            if score > best.get(lbl, -1.0):
                best[lbl] = score
        new_label = _pick_max(
            support, cur_label, lambda: derived_rng(_TIE_TAG, seed, vertex, superstep)
        )
        if new_label == cur_label:
            return prev[vertex]
        return (new_label, max(0.0, best[new_label] - self.delta))


def apm_update(
    g: UndirectedGraph,
    labels: Sequence[int],
    label_counts: dict[int, int],
    gamma: float,
    v: int,
    tie_rng: random.Random,
) -> int:
    """One Potts-style update: support minus resolution penalty.

    Maximizes N_v(lambda) - gamma * (count(lambda) - N_v(lambda)) where
    N_v is weight-summed neighbor support and count is the global label
    count from label_counts. The vertex's own label always competes, with
    zero support if no neighbor carries it. gamma = 0 recovers the basic
    rule exactly.
    """
    ids, ws = g.adjacency_lists()[v]
    own = labels[v]
    if not ids:
        return own
    support: dict[int, float] = {}
    for j, w in zip(ids, ws):
        lbl = labels[j]
        support[lbl] = support.get(lbl, 0.0) + w
    objective = {
        lbl: n_v - gamma * (label_counts[lbl] - n_v) for lbl, n_v in support.items()
    }
    if own not in objective:
        objective[own] = -gamma * float(label_counts.get(own, 0))
    return _pick_max(objective, own, lambda: tie_rng)


class ApmProgram(SuperstepProgram):
    """Superstep wrapper around apm_update at a fixed resolution gamma.

    Global label counts are recomputed from the previous buffer once per
    superstep and cached on the instance; forked workers each rebuild the
    cache from their inherited copy, so the cache never crosses processes.
    """

    def __init__(self, gamma: float):
        if gamma < 0:
            raise ValueError(f"gamma must be >= 0, got {gamma}")
        self.gamma = gamma
        self._counts_step: int | None = None
        self._counts: dict[int, int] = {}

    def init(self, vertex: int, seed: int) -> int:
        return vertex

    def _counts_for(self, prev, superstep: int) -> dict[int, int]:
        if self._counts_step != superstep:
            counts: dict[int, int] = {}
            for lbl in prev:
                counts[lbl] = counts.get(lbl, 0) + 1
            self._counts = counts
            self._counts_step = superstep
        return self._counts

    def update(self, vertex, prev, graph, superstep, seed):
        counts = self._counts_for(prev, superstep)
        return apm_update(
            graph,
            prev,
            counts,
            self.gamma,
            vertex,
            derived_rng(_TIE_TAG, seed, vertex, superstep),
        )


def _run(g, program, max_iterations, seed, runtime) -> tuple[list, RunStats]:
    if runtime is None:
        runtime = SuperstepRuntime()
    return runtime.run(g, program, max_iterations, seed)


def lpa_basic(
    g: UndirectedGraph, cfg: LpaConfig, runtime: SuperstepRuntime | None = None
) -> Labeling:
    """Plain label propagation; every vertex starts with its own id."""
    states, _ = _run(g, BasicLabelProgram(), cfg.max_iterations, cfg.seed, runtime)
    return Labeling(labels=states)


def lpa_scored(
    g: UndirectedGraph, cfg: LpaConfig, runtime: SuperstepRuntime | None = None
) -> Labeling:
    """Score-attenuated label propagation (initial scores 1.0)."""
    states, _ = _run(g, ScoredLabelProgram(cfg.delta), cfg.max_iterations, cfg.seed, runtime)
    return Labeling(labels=[s[0] for s in states], scores=[s[1] for s in states])


def llp(
    g: UndirectedGraph, cfg: LlpConfig, runtime: SuperstepRuntime | None = None
) -> tuple[Ordering, list[Partition]]:
    """Layered label propagation: build a locality-friendly vertex ordering.

    Each of the K rounds draws a resolution gamma uniformly from
    {0} | {2**-i for i in 0..K}, runs APM propagation from fresh labels,
    then stable-sorts the current ordering by the round's labels (keyed by
    first appearance in that ordering), keeping same-label vertices
    adjacent. Returns the composed ordering and each round's partition.
    """
    n = g.vertex_count
    order = list(range(n))
    partitions: list[Partition] = []
    gamma_pool = [0.0] + [2.0 ** -i for i in range(cfg.iterations_K + 1)]
    gamma_rng = derived_rng(_GAMMA_TAG, cfg.seed)
    for rnd in range(cfg.iterations_K):
        gamma = gamma_rng.choice(gamma_pool)
        round_seed = mix64(_ROUND_TAG, cfg.seed, rnd)
        labels, _ = _run(g, ApmProgram(gamma), cfg.inner_max_iterations, round_seed, runtime)
        partitions.append(Partition.from_labels(labels))
        first_pos: dict[int, int] = {}
        for pos, v in enumerate(order):
            lbl = labels[v]
            if lbl not in first_pos:
                first_pos[lbl] = pos
        order.sort(key=lambda v: first_pos[labels[v]])
    rank = [0] * n
    for pos, v in enumerate(order):
        rank[v] = pos
    return Ordering(rank), partitions
