"""Euclidean clustering: k-means and single-link agglomerative clustering.

k-means follows an online single pass (pick k seeded points, then assign
each remaining point to the closest centroid and update that centroid
immediately), optionally followed by standard batch expectation /
maximization sweeps until assignments stabilize. Single-link builds the
complete-graph minimum spanning tree with Prim's algorithm (no priority
queue, O(n) extra space, O(n^2) time), sorts the tree edges ascending, and
replays them as a merge sequence; cutting the resulting dendrogram at
distance t yields the connected components of the "closer than t" graph.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import EmptyInputError
from .graph import Partition
from .rng import derived_rng

_CHOOSE_TAG = 0x5EED


class PointSet:
    """Immutable set of fixed-dimension real points."""

    __slots__ = ("points", "dimension")

    def __init__(self, points):
        pts = np.array(points, dtype=np.float64)
        if pts.ndim != 2 or pts.shape[1] < 1:
            raise ValueError("points must form an (n, dimension) array with dimension >= 1")
        if not np.all(np.isfinite(pts)):
            raise ValueError("point coordinates must be finite")
        pts.setflags(write=False)
        self.points = pts
        self.dimension = pts.shape[1]

    def __len__(self) -> int:
        return len(self.points)


@dataclass
class KmeansResult:
    partition: Partition
    centroids: np.ndarray
    wcss: float
    # wcss after the online pass, then after every refinement sweep
    wcss_history: list[float]


def _wcss(pts: np.ndarray, centroids: np.ndarray, assign: np.ndarray) -> float:
    return float(((pts - centroids[assign]) ** 2).sum())


def _sq_dists(pts: np.ndarray, centroids: np.ndarray) -> np.ndarray:
    out = np.empty((len(pts), len(centroids)))
    for c in range(len(centroids)):
        out[:, c] = ((pts - centroids[c]) ** 2).sum(axis=1)
    return out


def kmeans(
    ps: PointSet,
    k: int,
    seed: int = 42,
    refine: bool = True,
    max_refine_iters: int = 100,
) -> KmeansResult:
    """Cluster into k groups; cluster ids index the centroid array."""
    n = len(ps)
    if not 1 <= k <= n:
        raise ValueError(f"k must satisfy 1 <= k <= {n}, got {k}")
    pts = ps.points
    rng = derived_rng(_CHOOSE_TAG, seed, k)
    chosen = rng.sample(range(n), k)
    centroids = pts[chosen].copy()
    assign = np.full(n, -1, dtype=np.int64)
    counts = np.ones(k)
    for c, idx in enumerate(chosen):
        assign[idx] = c
    for idx in range(n):
        if assign[idx] >= 0:
            continue
        x = pts[idx]
        c = int(((centroids - x) ** 2).sum(axis=1).argmin())
        assign[idx] = c
        counts[c] += 1.0
        centroids[c] += (x - centroids[c]) / counts[c]
    history = [_wcss(pts, centroids, assign)]

    if refine:
        for _ in range(max_refine_iters):
            d2 = _sq_dists(pts, centroids)
            new_assign = d2.argmin(axis=1)
            sizes = np.bincount(new_assign, minlength=k)
            empties = np.flatnonzero(sizes == 0)
            if len(empties):
                point_d2 = d2[np.arange(n), new_assign]
                for c in empties:
                    # move the farthest point whose donor keeps a member
                    eligible = sizes[new_assign] > 1
                    p = int(np.flatnonzero(eligible)[point_d2[eligible].argmax()])
                    sizes[new_assign[p]] -= 1
                    new_assign[p] = c
                    sizes[c] += 1
                    point_d2[p] = 0.0
            if np.array_equal(new_assign, assign):
                break
            assign = new_assign
            for c in range(k):
                centroids[c] = pts[assign == c].mean(axis=0)
            history.append(_wcss(pts, centroids, assign))

    return KmeansResult(Partition(assign), centroids, history[-1], history)


def kmeans_search(
    ps: PointSet, seed: int = 42, improvement_threshold: float = 0.10
) -> tuple[int, KmeansResult]:
    """Double k (1, 2, 4, ...) until cohesion stops improving.

    Stops at the first doubling whose wcss drop, measured relative to the
    k=1 baseline, falls below improvement_threshold, and returns the k
    before that doubling.
    """
    n = len(ps)
    if n < 1:
        raise EmptyInputError("cannot search cluster counts on an empty point set")
    best_k = 1
    best = kmeans(ps, 1, seed)
    baseline = best.wcss
    if baseline == 0.0:
        return best_k, best
    k = 2
    while k <= n:
        cur = kmeans(ps, k, seed)
        if (best.wcss - cur.wcss) / baseline < improvement_threshold:
            break
        best_k, best = k, cur
        k *= 2
    return best_k, best


@dataclass(frozen=True)
class Dendrogram:
    """Binary merge tree; merge ids follow the n + i convention.

    Leaves are 0..n-1; the i-th merge creates cluster id n + i from two
    existing cluster ids at the stated distance.
    """

    merges: list[tuple[int, int, float]]
    leaf_count: int

    def __post_init__(self):
        if self.leaf_count < 1:
            raise ValueError("dendrogram needs at least one leaf")
        if len(self.merges) != self.leaf_count - 1:
            raise ValueError(
                f"{self.leaf_count} leaves require {self.leaf_count - 1} merges,"
                f" got {len(self.merges)}"
            )
        used = set()
        last = 0.0
        for i, (a, b, dist) in enumerate(self.merges):
            top = self.leaf_count + i
            if not (0 <= a < top and 0 <= b < top and a != b):
                raise ValueError(f"merge {i} references invalid cluster ids ({a}, {b})")
            if a in used or b in used:
                raise ValueError(f"merge {i} reuses an already merged cluster")
            if dist < last:
                raise ValueError("merge distances must be non-decreasing")
            used.update((a, b))
            last = dist


def single_link_dendrogram(ps: PointSet) -> Dendrogram:
    """Exact single-link merge tree of the point set under Euclidean distance."""
    n = len(ps)
    if n == 0:
        raise EmptyInputError("cannot build a dendrogram from zero points")
    if n == 1:
        return Dendrogram([], 1)
    pts = ps.points
    in_tree = np.zeros(n, dtype=bool)
    in_tree[0] = True
    best_d2 = ((pts - pts[0]) ** 2).sum(axis=1)
    attach = np.zeros(n, dtype=np.int64)
    mst: list[tuple[int, int, float]] = []
    for _ in range(n - 1):
        j = int(np.where(in_tree, np.inf, best_d2).argmin())
        mst.append((int(attach[j]), j, float(np.sqrt(best_d2[j]))))
        in_tree[j] = True
        cand = ((pts - pts[j]) ** 2).sum(axis=1)
        closer = cand < best_d2
        best_d2[closer] = cand[closer]
        attach[closer] = j

    mst.sort(key=lambda e: (e[2], min(e[0], e[1]), max(e[0], e[1])))
    parent = list(range(n))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    cluster_id = list(range(n))
    merges: list[tuple[int, int, float]] = []
    for u, v, dist in mst:
        ru, rv = find(u), find(v)
        a, b = cluster_id[ru], cluster_id[rv]
        merges.append((min(a, b), max(a, b), dist))
        parent[ru] = rv
        cluster_id[rv] = n + len(merges) - 1
    return Dendrogram(merges, n)


def cut_dendrogram(d: Dendrogram, distance: float) -> Partition:
    """Flat partition after applying every merge with distance <= cut."""
    if distance < 0:
        raise ValueError(f"cut distance must be >= 0, got {distance}")
    n = d.leaf_count
    parent = list(range(n))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    # representative leaf for every dendrogram cluster id seen so far
    rep = {i: i for i in range(n)}
    for i, (a, b, dist) in enumerate(d.merges):
        if dist > distance:
            break
        ra, rb = find(rep[a]), find(rep[b])
        parent[ra] = rb
        rep[n + i] = rb
    return Partition.from_labels([find(v) for v in range(n)])
