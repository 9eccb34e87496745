"""Weighted undirected graphs and vertex partitions.

Storage convention for self-loops: the diagonal entry A_ii holds the full
weight of the loop and contributes once to the degree k_i and A_ii/2 to the
total weight m. Community coarsening relies on this: the self-loop of a
supernode is the sum of all A_ij with both endpoints inside the community,
which counts every internal edge twice, so m and modularity are preserved
across levels.
"""

from __future__ import annotations

from typing import Iterable, Sequence

import numpy as np

from .errors import GraphInputError, PartitionError


class UndirectedGraph:
    """Immutable weighted undirected graph in compressed sparse rows.

    Off-diagonal entries are stored in both directions with neighbor ids
    sorted per row; self-loop weights live in a separate dense array.
    """

    __slots__ = (
        "vertex_count",
        "indptr",
        "indices",
        "weights",
        "self_loop_weight",
        "degrees",
        "total_weight_m",
        "_adj_cache",
        "_row_cache",
    )

    def __init__(
        self,
        vertex_count: int,
        indptr: np.ndarray,
        indices: np.ndarray,
        weights: np.ndarray,
        self_loop_weight: np.ndarray,
    ):
        self.vertex_count = int(vertex_count)
        self.indptr = indptr
        self.indices = indices
        self.weights = weights
        self.self_loop_weight = self_loop_weight
        offdiag = np.zeros(self.vertex_count)
        if len(indices):
            rows = np.repeat(np.arange(self.vertex_count), np.diff(indptr))
            offdiag = np.bincount(rows, weights=weights, minlength=self.vertex_count)
        self.degrees = offdiag + self_loop_weight
        self.total_weight_m = float(weights.sum() / 2.0 + self_loop_weight.sum() / 2.0)
        for arr in (self.indptr, self.indices, self.weights, self.self_loop_weight, self.degrees):
            arr.setflags(write=False)
        self._adj_cache = None
        self._row_cache = None

    @property
    def edge_count(self) -> int:
        """Number of distinct undirected edges, self-loops included."""
        return len(self.indices) // 2 + int(np.count_nonzero(self.self_loop_weight))

    def neighbors(self, v: int) -> tuple[np.ndarray, np.ndarray]:
        """Sorted neighbor ids and weights of v; the self-loop is not included."""
        lo, hi = self.indptr[v], self.indptr[v + 1]
        return self.indices[lo:hi], self.weights[lo:hi]

    def degree(self, v: int) -> float:
        return float(self.degrees[v])

    def adjacency_lists(self) -> list[tuple[list[int], list[float]]]:
        """Per-vertex (ids, weights) as plain lists, cached.

        The superstep kernels iterate adjacency millions of times; plain
        list traversal is several times faster than elementwise numpy
        access, and the cache is built once in the parent process so forked
        workers inherit it.
        """
        if self._adj_cache is None:
            ids = self.indices.tolist()
            ws = self.weights.tolist()
            ptr = self.indptr.tolist()
            self._adj_cache = [
                (ids[ptr[v]:ptr[v + 1]], ws[ptr[v]:ptr[v + 1]])
                for v in range(self.vertex_count)
            ]
        return self._adj_cache

    def entry_rows(self) -> np.ndarray:
        """Row index of every stored off-diagonal entry, cached."""
        if self._row_cache is None:
            rows = np.repeat(np.arange(self.vertex_count), np.diff(self.indptr))
            rows.setflags(write=False)
            self._row_cache = rows
        return self._row_cache

    def validate(self) -> None:
        """Check structural invariants; raises GraphInputError on violation."""
        n = self.vertex_count
        if len(self.indptr) != n + 1 or self.indptr[0] != 0 or self.indptr[-1] != len(self.indices):
            raise GraphInputError("row pointer array is inconsistent")
        if np.any(self.weights <= 0) or not np.all(np.isfinite(self.weights)):
            raise GraphInputError("edge weights must be positive and finite")
        if np.any(self.self_loop_weight < 0) or not np.all(np.isfinite(self.self_loop_weight)):
            raise GraphInputError("self-loop weights must be non-negative and finite")
        seen = {}
        for v in range(n):
            ids, ws = self.neighbors(v)
            if len(ids) and (np.any(np.diff(ids) <= 0) or ids.min() < 0 or ids.max() >= n):
                raise GraphInputError(f"neighbor list of {v} is not strictly sorted in range")
            if np.any(ids == v):
                raise GraphInputError(f"self-loop stored off-diagonal at {v}")
            for j, w in zip(ids.tolist(), ws.tolist()):
                key = (min(v, j), max(v, j))
                if key in seen:
                    if seen[key] != w:
                        raise GraphInputError(f"asymmetric weight on edge {key}")
                else:
                    seen[key] = w


def _from_parts(
    vertex_count: int,
    u: np.ndarray,
    v: np.ndarray,
    w: np.ndarray,
    self_loop_weight: np.ndarray,
) -> UndirectedGraph:
    """Build from deduplicated off-diagonal edges (u < v elementwise)."""
    rows = np.concatenate([u, v])
    cols = np.concatenate([v, u])
    vals = np.concatenate([w, w])
    order = np.lexsort((cols, rows))
    indptr = np.zeros(vertex_count + 1, dtype=np.int64)
    np.cumsum(np.bincount(rows, minlength=vertex_count), out=indptr[1:])
    return UndirectedGraph(vertex_count, indptr, cols[order], vals[order], self_loop_weight)


def from_arrays(
    u: np.ndarray,
    v: np.ndarray,
    w: np.ndarray | float = 1.0,
    vertex_count: int | None = None,
) -> UndirectedGraph:
    """Build a graph from parallel endpoint arrays.

    Duplicate pairs (in either orientation) have their weights summed.
    Entries with u == v become self-loops, accumulating the full A_ii.
    """
    u = np.asarray(u, dtype=np.int64)
    v = np.asarray(v, dtype=np.int64)
    if np.isscalar(w):
        w = np.full(len(u), float(w))
    else:
        w = np.asarray(w, dtype=np.float64)
    if len(u) != len(v) or len(u) != len(w):
        raise GraphInputError("endpoint and weight arrays must have equal length")
    if len(u) and (u.min() < 0 or v.min() < 0):
        raise GraphInputError("vertex ids must be non-negative")
    if np.any(~np.isfinite(w)) or np.any(w <= 0):
        raise GraphInputError("edge weights must be positive and finite")
    if vertex_count is None:
        vertex_count = int(max(u.max(), v.max())) + 1 if len(u) else 0
    elif len(u) and max(u.max(), v.max()) >= vertex_count:
        raise GraphInputError("vertex id exceeds declared vertex count")

    self_loop = np.zeros(vertex_count)
    diag = u == v
    if diag.any():
        np.add.at(self_loop, u[diag], w[diag])
        u, v, w = u[~diag], v[~diag], w[~diag]
    lo = np.minimum(u, v)
    hi = np.maximum(u, v)
    if len(lo):
        key = lo * vertex_count + hi
        uniq, inverse = np.unique(key, return_inverse=True)
        wsum = np.bincount(inverse, weights=w)
        lo = (uniq // vertex_count).astype(np.int64)
        hi = (uniq % vertex_count).astype(np.int64)
    else:
        wsum = np.zeros(0)
    return _from_parts(vertex_count, lo, hi, wsum, self_loop)


def from_edge_list(edges: Iterable[tuple[int, int, float]]) -> UndirectedGraph:
    """Build a graph from (u, v, weight) triples.

    Triples are declarations of symmetric adjacency entries: repeating the
    same orientation accumulates by summing, while declaring both (u, v)
    and (v, u) must yield equal totals (they name the same matrix entry),
    so a plain symmetric listing of each edge twice is collapsed rather
    than doubled. Disagreeing mirrored declarations are rejected.
    """
    directed: dict[tuple[int, int], float] = {}
    self_loop: dict[int, float] = {}
    top = -1
    for entry in edges:
        try:
            a, b, w = entry
        except (TypeError, ValueError):
            raise GraphInputError(f"edge entry {entry!r} is not a (u, v, weight) triple")
        if not isinstance(a, (int, np.integer)) or not isinstance(b, (int, np.integer)):
            raise GraphInputError(f"vertex ids must be integers, got ({a!r}, {b!r})")
        a, b = int(a), int(b)
        if a < 0 or b < 0:
            raise GraphInputError(f"vertex ids must be non-negative, got ({a}, {b})")
        w = float(w)
        if not np.isfinite(w) or w <= 0:
            raise GraphInputError(f"edge ({a}, {b}) has non-positive or non-finite weight {w}")
        top = max(top, a, b)
        if a == b:
            self_loop[a] = self_loop.get(a, 0.0) + w
        else:
            directed[(a, b)] = directed.get((a, b), 0.0) + w
    us, vs, ws = [], [], []
    for (a, b), w in directed.items():
        if a > b:
            continue
        back = directed.get((b, a))
        if back is not None and back != w:
            raise GraphInputError(
                f"edge ({a}, {b}) declared in both orientations with unequal weights"
            )
        us.append(a)
        vs.append(b)
        ws.append(w)
    for (a, b), w in directed.items():
        if a > b and (b, a) not in directed:
            us.append(b)
            vs.append(a)
            ws.append(w)
    n = top + 1
    loops = np.zeros(n)
    for v, w in self_loop.items():
        loops[v] = w
    u_arr = np.array(us, dtype=np.int64)
    v_arr = np.array(vs, dtype=np.int64)
    order = np.lexsort((v_arr, u_arr))
    return _from_parts(n, u_arr[order], v_arr[order], np.array(ws)[order], loops)


def degree_weight(g: UndirectedGraph, i: int) -> float:
    """k_i = sum_j A_ij with the self-loop counted once."""
    if not 0 <= i < g.vertex_count:
        raise IndexError(f"vertex {i} out of range for {g.vertex_count} vertices")
    return float(g.degrees[i])


def total_weight(g: UndirectedGraph) -> float:
    """m = half the sum of all adjacency entries."""
    return g.total_weight_m


class Partition:
    """Assignment of every vertex to exactly one community.

    Community ids are dense: 0..R with no empty community. Construct with
    from_labels to renumber arbitrary hashable labels by first appearance.
    """

    __slots__ = ("assignment", "_sizes")

    def __init__(self, assignment: Sequence[int]):
        assignment = [int(c) for c in assignment]
        if assignment:
            top = max(assignment)
            if min(assignment) < 0:
                raise PartitionError("community ids must be non-negative")
            sizes = [0] * (top + 1)
            for c in assignment:
                sizes[c] += 1
            if 0 in sizes:
                raise PartitionError("community ids must be dense with no empty community")
        else:
            sizes = []
        self.assignment = assignment
        self._sizes = sizes

    @classmethod
    def from_labels(cls, labels: Sequence) -> "Partition":
        """Renumber labels to dense community ids in order of first appearance."""
        remap: dict = {}
        out = []
        for lbl in labels:
            if lbl not in remap:
                remap[lbl] = len(remap)
            out.append(remap[lbl])
        return cls(out)

    @classmethod
    def singletons(cls, n: int) -> "Partition":
        return cls(list(range(n)))

    @property
    def vertex_count(self) -> int:
        return len(self.assignment)

    @property
    def community_count(self) -> int:
        return len(self._sizes)

    def sizes(self) -> list[int]:
        return list(self._sizes)

    def blocks(self) -> list[list[int]]:
        out: list[list[int]] = [[] for _ in self._sizes]
        for v, c in enumerate(self.assignment):
            out[c].append(v)
        return out

    def as_sets(self) -> set[frozenset]:
        return {frozenset(b) for b in self.blocks()}

    def __eq__(self, other) -> bool:
        return isinstance(other, Partition) and self.assignment == other.assignment

    def __repr__(self) -> str:
        return f"Partition({self.community_count} communities over {self.vertex_count} vertices)"


def check_fits(g: UndirectedGraph, p: Partition) -> None:
    """Raise unless p assigns exactly the vertices of g."""
    if p.vertex_count != g.vertex_count:
        raise PartitionError(
            f"partition covers {p.vertex_count} vertices, graph has {g.vertex_count}"
        )


def coarsen(g: UndirectedGraph, p: Partition) -> UndirectedGraph:
    """Contract each community to a supernode.

    The supernode self-loop is sum(A_ij for i, j in the community), i.e.
    twice the internal off-diagonal weight plus internal self-loops;
    cross-community weights are summed on the single coarse edge. Total
    weight m is preserved exactly up to float reordering.
    """
    check_fits(g, p)
    r = p.community_count
    comm = np.asarray(p.assignment, dtype=np.int64)
    self_agg = np.zeros(r)
    if g.vertex_count:
        np.add.at(self_agg, comm, g.self_loop_weight)
    rows = g.entry_rows()
    if len(rows):
        cu = comm[rows]
        cv = comm[g.indices]
        once = rows < g.indices
        cu, cv, w = cu[once], cv[once], g.weights[once]
        same = cu == cv
        if same.any():
            np.add.at(self_agg, cu[same], 2.0 * w[same])
        cu, cv, w = cu[~same], cv[~same], w[~same]
        lo = np.minimum(cu, cv)
        hi = np.maximum(cu, cv)
        if len(lo):
            key = lo * r + hi
            uniq, inverse = np.unique(key, return_inverse=True)
            wsum = np.bincount(inverse, weights=w)
            return _from_parts(
                r,
                (uniq // r).astype(np.int64),
                (uniq % r).astype(np.int64),
                wsum,
                self_agg,
            )
    return _from_parts(r, np.zeros(0, np.int64), np.zeros(0, np.int64), np.zeros(0), self_agg)
