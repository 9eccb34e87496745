"""File formats: SNAP edge lists, ground-truth covers, partitions,
orderings, and point sets.

External vertex ids are arbitrary integers; graphs use dense 0-based ids
internally, so every reader returns (or consumes) an IdMap giving the
bijection. Dense ids are assigned in sorted external-id order, which makes
ingest deterministic and keeps written files diffable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .clustering import PointSet
from .errors import (
    EmptyGraphError,
    EmptyInputError,
    IncompletePartitionError,
    ParseError,
    PartitionError,
    UnknownVertexError,
)
from .graph import Partition, UndirectedGraph, from_arrays
from .labelprop import Ordering


class IdMap:
    """Bijection between external vertex ids and dense ids 0..n-1."""

    __slots__ = ("dense_to_external", "external_to_dense")

    def __init__(self, external_ids: Sequence[int]):
        self.dense_to_external = [int(x) for x in external_ids]
        self.external_to_dense = {x: i for i, x in enumerate(self.dense_to_external)}
        if len(self.external_to_dense) != len(self.dense_to_external):
            raise ValueError("external ids must be unique")

    @classmethod
    def from_ids(cls, ids: Iterable[int]) -> "IdMap":
        return cls(sorted(set(ids)))

    @classmethod
    def identity(cls, n: int) -> "IdMap":
        return cls(range(n))

    def to_dense(self, external: int) -> int:
        try:
            return self.external_to_dense[external]
        except KeyError:
            raise UnknownVertexError(f"vertex id {external} is not in the graph") from None

    def to_external(self, dense: int) -> int:
        return self.dense_to_external[dense]

    def __len__(self) -> int:
        return len(self.dense_to_external)


@dataclass
class Cover:
    """Ground-truth communities; sets may overlap, unlike a Partition."""

    communities: list[frozenset]

    def __post_init__(self):
        if any(not c for c in self.communities):
            raise ValueError("cover communities must be non-empty")

    def __len__(self) -> int:
        return len(self.communities)


def _data_lines(path):
    """Yield (line number, stripped text) skipping blanks and '#' comments."""
    with open(path) as fh:
        for lineno, raw in enumerate(fh, 1):
            text = raw.strip()
            if not text or text.startswith("#"):
                continue
            yield lineno, text


def read_snap_edge_list(path, allow_self_loops: bool = False) -> tuple[UndirectedGraph, IdMap]:
    """Load a SNAP-style edge list: two integer ids per line, '#' comments.

    Duplicate pairs, in either orientation, collapse to one unit-weight
    edge. Self-loop lines are rejected unless explicitly permitted.
    """
    pairs: set[tuple[int, int]] = set()
    for lineno, text in _data_lines(path):
        fields = text.split()
        if len(fields) != 2:
            raise ParseError(f"{path}:{lineno}: expected 2 fields, got {len(fields)}")
        try:
            u, v = int(fields[0]), int(fields[1])
        except ValueError:
            raise ParseError(f"{path}:{lineno}: non-integer vertex id") from None
        if u == v and not allow_self_loops:
            raise ParseError(f"{path}:{lineno}: self-loop on vertex {u}")
        pairs.add((u, v) if u <= v else (v, u))
    if not pairs:
        raise EmptyGraphError(f"{path}: no edges found")
    arr = np.array(sorted(pairs), dtype=np.int64)
    ext_ids = np.unique(arr)
    idmap = IdMap(ext_ids.tolist())
    dense_u = np.searchsorted(ext_ids, arr[:, 0])
    dense_v = np.searchsorted(ext_ids, arr[:, 1])
    return from_arrays(dense_u, dense_v, 1.0, len(ext_ids)), idmap


def read_ground_truth(path, idmap: IdMap) -> Cover:
    """One community per line as whitespace-separated external ids."""
    communities = []
    for lineno, text in _data_lines(path):
        members = set()
        for token in text.split():
            try:
                ext = int(token)
            except ValueError:
                raise ParseError(f"{path}:{lineno}: non-integer vertex id {token!r}") from None
            members.add(idmap.to_dense(ext))
        communities.append(frozenset(members))
    return Cover(communities)


def write_partition(p: Partition, idmap: IdMap, path) -> None:
    """Write "external_id<TAB>community_id" lines sorted by external id."""
    if p.vertex_count != len(idmap):
        raise PartitionError(
            f"partition covers {p.vertex_count} vertices, id map has {len(idmap)}"
        )
    rows = sorted(
        (idmap.to_external(v), p.assignment[v]) for v in range(p.vertex_count)
    )
    with open(path, "w") as fh:
        for ext, comm in rows:
            fh.write(f"{ext}\t{comm}\n")


def read_partition(path, idmap: IdMap) -> Partition:
    """Inverse of write_partition; every vertex must appear exactly once.

    Community ids are kept verbatim when they are already dense (so the
    write/read round trip is the identity) and renumbered by first
    appearance otherwise.
    """
    seen: dict[int, int] = {}
    for lineno, text in _data_lines(path):
        fields = text.split()
        if len(fields) != 2:
            raise ParseError(f"{path}:{lineno}: expected 2 fields, got {len(fields)}")
        try:
            ext, comm = int(fields[0]), int(fields[1])
        except ValueError:
            raise ParseError(f"{path}:{lineno}: non-integer field") from None
        dense = idmap.to_dense(ext)
        if dense in seen:
            raise ParseError(f"{path}:{lineno}: duplicate assignment for vertex {ext}")
        seen[dense] = comm
    if len(seen) != len(idmap):
        missing = len(idmap) - len(seen)
        raise IncompletePartitionError(f"{path}: {missing} vertices have no community")
    labels = [seen[v] for v in range(len(idmap))]
    try:
        return Partition(labels)
    except PartitionError:
        return Partition.from_labels(labels)


def write_ordering(o: Ordering, idmap: IdMap, path) -> None:
    """One external vertex id per line, in rank order."""
    if len(o.rank) != len(idmap):
        raise ValueError(f"ordering covers {len(o.rank)} vertices, id map has {len(idmap)}")
    with open(path, "w") as fh:
        for v in o.vertices_in_order():
            fh.write(f"{idmap.to_external(v)}\n")


def read_ordering(path, idmap: IdMap) -> Ordering:
    """Inverse of write_ordering."""
    rank: dict[int, int] = {}
    position = 0
    for lineno, text in _data_lines(path):
        try:
            ext = int(text)
        except ValueError:
            raise ParseError(f"{path}:{lineno}: non-integer vertex id") from None
        dense = idmap.to_dense(ext)
        if dense in rank:
            raise ParseError(f"{path}:{lineno}: vertex {ext} listed twice")
        rank[dense] = position
        position += 1
    if len(rank) != len(idmap):
        raise ParseError(f"{path}: ordering lists {len(rank)} of {len(idmap)} vertices")
    return Ordering([rank[v] for v in range(len(idmap))])


def read_points(path) -> tuple[PointSet, IdMap]:
    """Load "id coord1 ... coordD" lines; point order follows sorted ids."""
    rows: dict[int, list[float]] = {}
    dim = None
    for lineno, text in _data_lines(path):
        fields = text.split()
        if len(fields) < 2:
            raise ParseError(f"{path}:{lineno}: expected an id and at least one coordinate")
        try:
            ext = int(fields[0])
        except ValueError:
            raise ParseError(f"{path}:{lineno}: non-integer point id") from None
        try:
            coords = [float(tok) for tok in fields[1:]]
        except ValueError:
            raise ParseError(f"{path}:{lineno}: non-numeric coordinate") from None
        if any(not math.isfinite(c) for c in coords):
            raise ParseError(f"{path}:{lineno}: non-finite coordinate")
        if dim is None:
            dim = len(coords)
        elif len(coords) != dim:
            raise ParseError(
                f"{path}:{lineno}: expected {dim} coordinates, got {len(coords)}"
            )
        if ext in rows:
            raise ParseError(f"{path}:{lineno}: duplicate point id {ext}")
        rows[ext] = coords
    if not rows:
        raise EmptyInputError(f"{path}: no points found")
    ext_sorted = sorted(rows)
    return PointSet([rows[x] for x in ext_sorted]), IdMap(ext_sorted)


def write_edge_list(g: UndirectedGraph, idmap: IdMap, path) -> None:
    """Write one "u<TAB>v" line per undirected edge using external ids."""
    with open(path, "w") as fh:
        for v in range(g.vertex_count):
            if g.self_loop_weight[v] > 0:
                ext = idmap.to_external(v)
                fh.write(f"{ext}\t{ext}\n")
            ids, _ = g.neighbors(v)
            for j in ids[ids > v].tolist():
                fh.write(f"{idmap.to_external(v)}\t{idmap.to_external(j)}\n")
