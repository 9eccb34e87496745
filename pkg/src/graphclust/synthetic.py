"""Deterministic synthetic graphs for tests and benchmarks."""

from __future__ import annotations

import numpy as np

from .graph import Partition, UndirectedGraph, from_arrays
from .rng import mix64

_PLANT_TAG = 0x91A


def ring_of_cliques(num_cliques: int, clique_size: int) -> UndirectedGraph:
    """num_cliques complete graphs of clique_size vertices joined in a ring.

    Clique c owns vertices [c*s, (c+1)*s); one unit edge links its last
    vertex to the first vertex of clique (c+1) mod num_cliques.
    """
    if num_cliques < 2:
        raise ValueError(f"a ring needs at least 2 cliques, got {num_cliques}")
    if clique_size < 1:
        raise ValueError(f"clique_size must be >= 1, got {clique_size}")
    s = clique_size
    tmpl_u, tmpl_v = np.triu_indices(s, k=1)
    us, vs = [], []
    for c in range(num_cliques):
        us.append(tmpl_u + c * s)
        vs.append(tmpl_v + c * s)
    bridges_u = np.array([c * s + s - 1 for c in range(num_cliques)], dtype=np.int64)
    bridges_v = np.array(
        [((c + 1) % num_cliques) * s for c in range(num_cliques)], dtype=np.int64
    )
    us.append(bridges_u)
    vs.append(bridges_v)
    return from_arrays(np.concatenate(us), np.concatenate(vs), 1.0, num_cliques * s)


def planted_partition(
    n: int,
    communities: int,
    intra_degree: float,
    inter_degree: float,
    seed: int = 42,
) -> tuple[UndirectedGraph, Partition]:
    """Random graph with dense blocks and sparse cross edges.

    intra_degree / inter_degree are the average number of within-block and
    cross-block neighbors per vertex. Duplicate sampled pairs are dropped,
    so realized degrees run slightly under the targets.
    """
    if not 1 <= communities <= n:
        raise ValueError(f"communities must satisfy 1 <= c <= {n}, got {communities}")
    if intra_degree < 0 or inter_degree < 0:
        raise ValueError("expected degrees must be >= 0")
    rng = np.random.default_rng(mix64(_PLANT_TAG, seed))
    base = n // communities
    sizes = np.full(communities, base, dtype=np.int64)
    sizes[: n - base * communities] += 1
    offsets = np.concatenate([[0], np.cumsum(sizes)])
    block_of = np.repeat(np.arange(communities), sizes)

    m_intra = int(round(n * intra_degree / 2.0))
    m_inter = int(round(n * inter_degree / 2.0))
    parts_u, parts_v = [], []
    if m_intra:
        b = rng.integers(0, communities, m_intra)
        i = offsets[b] + rng.integers(0, sizes[b])
        j = offsets[b] + rng.integers(0, sizes[b])
        keep = i != j
        parts_u.append(i[keep])
        parts_v.append(j[keep])
    if m_inter:
        i = rng.integers(0, n, m_inter)
        j = rng.integers(0, n, m_inter)
        keep = block_of[i] != block_of[j]
        parts_u.append(i[keep])
        parts_v.append(j[keep])
    if parts_u:
        u = np.concatenate(parts_u)
        v = np.concatenate(parts_v)
        lo = np.minimum(u, v)
        hi = np.maximum(u, v)
        key = np.unique(lo * n + hi)
        u, v = key // n, key % n
    else:
        u = v = np.zeros(0, dtype=np.int64)
    return from_arrays(u, v, 1.0, n), Partition(block_of)
