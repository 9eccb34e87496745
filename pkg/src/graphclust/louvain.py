"""Multilevel modularity optimization.

Each level runs the local moving heuristic (greedy per-vertex community
reassignment from singletons, in a seeded random sweep order, repeated
until a full sweep moves nothing), then contracts communities to
supernodes and recurses on the coarse graph. Because coarsening preserves
modularity, every accepted move raises Q on the original graph, so the
per-level Q sequence is strictly increasing.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import UndefinedModularityError
from .graph import Partition, UndirectedGraph, coarsen
from .metrics import CommunityState, exact_insertion_gain, modularity
from .rng import derived_rng

_SWEEP_TAG = 0x10F


@dataclass(frozen=True)
class LouvainConfig:
    min_gain: float = 1e-9
    max_levels: int = 32
    seed: int = 42

    def __post_init__(self):
        if not self.min_gain > 0:
            raise ValueError(f"min_gain must be > 0, got {self.min_gain}")
        if self.max_levels < 1:
            raise ValueError(f"max_levels must be >= 1, got {self.max_levels}")


@dataclass(frozen=True)
class LouvainLevel:
    partition: Partition
    q: float


@dataclass
class LouvainResult:
    levels: list[LouvainLevel] = field(default_factory=list)

    @property
    def final(self) -> Partition:
        return self.levels[-1].partition


def _local_moving(g: UndirectedGraph, rng, min_gain: float) -> tuple[CommunityState, bool]:
    """Greedy vertex moves until a full sweep changes nothing.

    A vertex is pulled out of its community, the exact insertion gain is
    evaluated for every adjacent community including the one it left, and
    it moves only when the best alternative beats returning by more than
    min_gain; ties among alternatives go to the smallest community id.
    """
    state = CommunityState(g)
    m = g.total_weight_m
    degrees = g.degrees.tolist()
    order = list(range(g.vertex_count))
    rng.shuffle(order)
    moved_any = False
    while True:
        moves = 0
        for v in order:
            nbw = state.neighbor_community_weights(v)
            if not nbw:
                continue
            old = state.community_of[v]
            w_old = nbw.get(old, 0.0)
            state.remove(v, w_old)
            k_v = degrees[v]
            stay = exact_insertion_gain(m, w_old, state.sigma_tot[old], k_v)
            best_c, best_gain = old, stay
            for c in sorted(nbw):
                if c == old:
                    continue
                gain = exact_insertion_gain(m, nbw[c], state.sigma_tot[c], k_v)
                if gain > best_gain:
                    best_c, best_gain = c, gain
            if best_c != old and best_gain - stay > min_gain:
                state.insert(v, best_c, nbw[best_c])
                moves += 1
            else:
                state.insert(v, old, w_old)
        if moves == 0:
            break
        moved_any = True
    return state, moved_any


def local_moving_phase(g: UndirectedGraph, seed: int, min_gain: float = 1e-9) -> Partition:
    """One local moving pass from singletons; equals the first level of louvain."""
    if g.total_weight_m <= 0:
        raise UndefinedModularityError("local moving needs total weight m > 0")
    state, _ = _local_moving(g, derived_rng(_SWEEP_TAG, seed, 0), min_gain)
    return state.to_partition()


def louvain(g: UndirectedGraph, cfg: LouvainConfig | None = None) -> LouvainResult:
    """Alternate local moving and coarsening until no gain above min_gain."""
    if cfg is None:
        cfg = LouvainConfig()
    if g.total_weight_m <= 0:
        raise UndefinedModularityError("modularity optimization needs total weight m > 0")
    levels: list[LouvainLevel] = []
    proj = list(range(g.vertex_count))
    cur = g
    for level in range(cfg.max_levels):
        state, moved = _local_moving(cur, derived_rng(_SWEEP_TAG, cfg.seed, level), cfg.min_gain)
        if not moved:
            break
        coarse_part = Partition.from_labels(state.community_of)
        proj = [coarse_part.assignment[p] for p in proj]
        projected = Partition(list(proj))
        levels.append(LouvainLevel(projected, modularity(g, projected)))
        if coarse_part.community_count == cur.vertex_count:
            break
        cur = coarsen(cur, coarse_part)
    if not levels:
        singles = Partition.singletons(g.vertex_count)
        levels.append(LouvainLevel(singles, modularity(g, singles)))
    return LouvainResult(levels)
