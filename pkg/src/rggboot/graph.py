"""Compressed sparse adjacency for undirected simple graphs."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ParameterError


def _frozen(a: np.ndarray) -> np.ndarray:
    a.flags.writeable = False
    return a


@dataclass(frozen=True, eq=False)
class CSRGraph:
    """Undirected graph as CSR arrays; neighbor lists are sorted ascending."""

    indptr: np.ndarray
    indices: np.ndarray

    @property
    def num_nodes(self) -> int:
        return len(self.indptr) - 1

    @property
    def num_edges(self) -> int:
        return len(self.indices) // 2

    def degrees(self) -> np.ndarray:
        return np.diff(self.indptr)

    def neighbors(self, v: int) -> np.ndarray:
        return self.indices[self.indptr[v]:self.indptr[v + 1]]

    def edges(self) -> np.ndarray:
        """``(m, 2)`` array of edges ``(u, v)`` with ``u < v``, in lexicographic order."""
        rows = np.repeat(np.arange(self.num_nodes), self.degrees())
        keep = rows < self.indices
        return np.column_stack([rows[keep], self.indices[keep]])

    def to_sets(self) -> list[set[int]]:
        return [set(self.neighbors(v).tolist()) for v in range(self.num_nodes)]

    @classmethod
    def from_edges(cls, num_nodes: int, edges) -> "CSRGraph":
        """Build from an iterable or array of ``(u, v)`` pairs; duplicates and self-loops dropped."""
        e = np.asarray(edges, dtype=np.int64).reshape(-1, 2)
        if len(e) and (e.min() < 0 or e.max() >= num_nodes):
            raise ParameterError("edge endpoint out of range")
        e = e[e[:, 0] != e[:, 1]]
        rows = np.concatenate([e[:, 0], e[:, 1]])
        cols = np.concatenate([e[:, 1], e[:, 0]])
        order = np.lexsort((cols, rows))
        rows, cols = rows[order], cols[order]
        if len(rows):
            dup = np.zeros(len(rows), dtype=bool)
            dup[1:] = (rows[1:] == rows[:-1]) & (cols[1:] == cols[:-1])
            rows, cols = rows[~dup], cols[~dup]
        indptr = np.zeros(num_nodes + 1, dtype=np.int64)
        np.cumsum(np.bincount(rows, minlength=num_nodes), out=indptr[1:])
        return cls(_frozen(indptr), _frozen(cols.astype(np.int64)))


def as_csr(graph) -> CSRGraph:
    """Accept either a :class:`CSRGraph` or anything carrying one as ``.adjacency``."""
    return getattr(graph, "adjacency", graph)


def gather_neighbors(g: CSRGraph, nodes: np.ndarray) -> np.ndarray:
    """Concatenated neighbor lists of ``nodes`` (with repetition)."""
    starts = g.indptr[nodes]
    lens = g.indptr[nodes + 1] - starts
    total = int(lens.sum())
    if total == 0:
        return np.empty(0, dtype=np.int64)
    offs = np.arange(total) - np.repeat(np.cumsum(lens) - lens, lens)
    return g.indices[np.repeat(starts, lens) + offs]


def complete_graph(k: int) -> CSRGraph:
    iu = np.triu_indices(k, 1)
    return CSRGraph.from_edges(k, np.column_stack(iu))


def path_graph(k: int) -> CSRGraph:
    v = np.arange(k - 1)
    return CSRGraph.from_edges(k, np.column_stack([v, v + 1]))


def grid_graph(side: int) -> CSRGraph:
    """4-neighbor lattice on ``side x side`` sites, node id ``i * side + j``."""
    ids = np.arange(side * side).reshape(side, side)
    horiz = np.column_stack([ids[:, :-1].ravel(), ids[:, 1:].ravel()])
    vert = np.column_stack([ids[:-1, :].ravel(), ids[1:, :].ravel()])
    return CSRGraph.from_edges(side * side, np.vstack([horiz, vert]))
