"""Shared brute-force oracles and generators for the test suite.

Everything here is deliberately naive: dense matrices, double sums,
exhaustive enumeration.  The point is independence from the library's
incremental/CSR code paths, not speed.
"""

import random

import numpy as np

from graphclust.graph import Partition, UndirectedGraph, from_arrays


def dense_adjacency(g: UndirectedGraph) -> np.ndarray:
    """Full symmetric matrix with self-loop weights on the diagonal."""
    n = g.vertex_count
    a = np.zeros((n, n))
    for v in range(n):
        ids, ws = g.neighbors(v)
        a[v, ids] = ws
        a[v, v] = g.self_loop_weight[v]
    return a


def brute_modularity(a: np.ndarray, labels) -> float:
    """Double-sum modularity straight off the dense matrix."""
    labels = np.asarray(labels)
    two_m = float(a.sum())
    k = a.sum(axis=1)
    same = labels[:, None] == labels[None, :]
    return float(((a - np.outer(k, k) / two_m) * same).sum() / two_m)


def all_partitions(n: int):
    """Yield every partition of range(n) as a label list.

    Uses restricted-growth strings so each set partition appears once.
    """
    labels = [0] * n
    maxes = [0] * n

    def rec(i):
        if i == n:
            yield list(labels)
            return
        cap = maxes[i - 1] + 1 if i > 0 else 0
        for c in range(cap + 1):
            labels[i] = c
            maxes[i] = max(maxes[i - 1], c) if i > 0 else c
            yield from rec(i + 1)

    yield from rec(0)


def random_graph(rng: random.Random, n: int, p: float = 0.5,
                 self_loops: bool = False) -> UndirectedGraph:
    """Random weighted graph on n vertices with at least one edge."""
    while True:
        edges = []
        for i in range(n):
            for j in range(i + 1, n):
                if rng.random() < p:
                    edges.append((i, j, rng.uniform(0.1, 3.0)))
        if self_loops:
            for i in range(n):
                if rng.random() < 0.3:
                    edges.append((i, i, rng.uniform(0.1, 3.0)))
        if edges:
            us, vs, ws = zip(*edges)
            return from_arrays(np.array(us), np.array(vs), np.array(ws), n)


def random_partition(rng: random.Random, n: int, max_blocks: int | None = None) -> Partition:
    b = rng.randint(1, max_blocks or n)
    labels = [rng.randrange(b) for _ in range(n)]
    return Partition.from_labels(labels)


def naive_single_link(points: np.ndarray, cut: float):
    """Agglomerative single-link clustering by repeated minimum merging.

    Returns the clustering at the given cut as a set of frozensets.
    Distances are computed the same way as the library (sqrt of a
    coordinate-order sum of squares) so exact float comparison at merge
    heights is meaningful.
    """
    n = len(points)
    clusters = [frozenset([i]) for i in range(n)]
    if n <= 1:
        return set(clusters)
    diff = points[:, None, :] - points[None, :, :]
    dist = np.sqrt((diff ** 2).sum(axis=-1))
    while len(clusters) > 1:
        best = None
        for a in range(len(clusters)):
            for b in range(a + 1, len(clusters)):
                d = min(dist[i, j] for i in clusters[a] for j in clusters[b])
                if best is None or d < best[0]:
                    best = (d, a, b)
        d, a, b = best
        if d > cut:
            break
        merged = clusters[a] | clusters[b]
        clusters = [c for idx, c in enumerate(clusters) if idx not in (a, b)]
        clusters.append(merged)
    return set(clusters)


def naive_mst_weight(points: np.ndarray) -> float:
    """Kruskal on the complete graph, plain sorted edge list."""
    n = len(points)
    diff = points[:, None, :] - points[None, :, :]
    dist = np.sqrt((diff ** 2).sum(axis=-1))
    edges = sorted((dist[i, j], i, j) for i in range(n) for j in range(i + 1, n))
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    total = 0.0
    taken = 0
    for d, i, j in edges:
        ri, rj = find(i), find(j)
        if ri != rj:
            parent[ri] = rj
            total += d
            taken += 1
            if taken == n - 1:
                break
    return total


def partition_blocks(p: Partition) -> set[frozenset[int]]:
    return {frozenset(b) for b in p.blocks()}
