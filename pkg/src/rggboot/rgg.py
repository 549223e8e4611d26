"""Random geometric graphs on a square.

Two sampling models are supported: a unit-intensity Poisson process on
``[0, sqrt(n)]^2`` and ``n`` uniform points on ``[0, 1]^2``. Graphs join
every pair of points at Euclidean distance at most ``radius``; there is no
torus wrapping, so nodes near the boundary have truncated neighborhoods.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components

from . import seeding
from .errors import ParameterError
from .graph import CSRGraph, _frozen

LAMBDA_C = 1.44  # giant-component constant, simulation estimate in 2-D


class PointMode(str, Enum):
    POISSON = "poisson"  # intensity 1 on [0, sqrt(n)]^2
    UNIFORM = "uniform"  # exactly n points on [0, 1]^2


@dataclass(frozen=True, eq=False)
class PointSet:
    points: np.ndarray  # (N, 2) float64
    side: float
    mode: PointMode
    seed: int
    n_param: int

    def __len__(self) -> int:
        return len(self.points)


def sample_points(mode: PointMode | str, n: int, seed: int) -> PointSet:
    """Draw a point set; identical ``(mode, n, seed)`` gives identical points.

    Poisson mode draws the count from ``Poisson(n)`` (numpy's exact sampler)
    and places that many i.i.d. uniform points in ``[0, sqrt(n)]^2``.
    """
    mode = PointMode(mode)
    if int(n) != n or n < 1:
        raise ParameterError(f"n must be a positive integer, got {n}")
    n = int(n)
    rng = seeding.stream(seed, seeding.POINTS, 0 if mode is PointMode.POISSON else 1, n)
    if mode is PointMode.POISSON:
        side = math.sqrt(n)
        count = int(rng.poisson(n))
    else:
        side = 1.0
        count = n
    pts = rng.uniform(0.0, side, size=(count, 2))
    return PointSet(_frozen(pts), side, mode, int(seed) & seeding.MASK64, n)


def point_set_from_array(points, side: float) -> PointSet:
    """Wrap explicit coordinates (used for hand-built instances)."""
    pts = np.asarray(points, dtype=np.float64).reshape(-1, 2).copy()
    if len(pts) and (pts.min() < 0 or pts.max() > side):
        raise ParameterError("points must lie in [0, side]^2")
    return PointSet(_frozen(pts), float(side), PointMode.UNIFORM, 0, len(pts))


@dataclass(frozen=True, eq=False)
class GridIndex:
    """Points bucketed into square cells of side ``bucket``."""

    bucket: float
    ncell: int
    cell_of: np.ndarray  # flat cell id per node
    order: np.ndarray  # node ids sorted by cell
    starts: np.ndarray  # ncell*ncell + 1 offsets into ``order``


def _bucket(points: np.ndarray, side: float, bucket: float, ncell: int | None = None) -> GridIndex:
    if ncell is None:
        ncell = max(1, math.ceil(side / bucket))
    ij = np.minimum((points / bucket).astype(np.int64), ncell - 1)
    flat = ij[:, 0] * ncell + ij[:, 1]
    order = np.argsort(flat, kind="stable")
    starts = np.zeros(ncell * ncell + 1, dtype=np.int64)
    np.cumsum(np.bincount(flat, minlength=ncell * ncell), out=starts[1:])
    return GridIndex(bucket, ncell, _frozen(flat), _frozen(order), _frozen(starts))


@dataclass(frozen=True, eq=False)
class GeometricGraph:
    pointset: PointSet
    radius: float
    adjacency: CSRGraph
    grid: GridIndex
    a_param: float | None = None

    @property
    def num_nodes(self) -> int:
        return self.adjacency.num_nodes

    @property
    def num_edges(self) -> int:
        return self.adjacency.num_edges

    def degrees(self) -> np.ndarray:
        return self.adjacency.degrees()

    def interior_mask(self) -> np.ndarray:
        """Nodes at least ``radius`` away from every side of the square."""
        p = self.pointset.points
        r, s = self.radius, self.pointset.side
        return np.all((p >= r) & (p <= s - r), axis=1)


# half of the 3x3 neighborhood; (0, 0) handled with i < j
_HALF_OFFSETS = ((0, 0), (0, 1), (1, -1), (1, 0), (1, 1))


def _candidate_pairs(grid: GridIndex, dx: int, dy: int):
    n = grid.ncell
    ci, cj = np.divmod(np.arange(n * n), n)
    ni, nj = ci + dx, cj + dy
    ok = (ni >= 0) & (ni < n) & (nj >= 0) & (nj < n)
    src_cells = np.nonzero(ok)[0]
    dst_cells = ni[ok] * n + nj[ok]
    starts = grid.starts
    # every point of a source cell pairs with every point of its target cell
    src_counts = starts[src_cells + 1] - starts[src_cells]
    dst_counts = starts[dst_cells + 1] - starts[dst_cells]
    u = _ranges(starts[src_cells], src_counts)
    per_point = np.repeat(dst_counts, src_counts)
    u = np.repeat(u, per_point)
    v = _ranges(np.repeat(starts[dst_cells], src_counts), per_point)
    return grid.order[u], grid.order[v]


def _ranges(first: np.ndarray, lengths: np.ndarray) -> np.ndarray:
    """Concatenation of ``arange(f, f + l)`` over paired entries."""
    total = int(lengths.sum())
    return np.repeat(first, lengths) + np.arange(total) - np.repeat(np.cumsum(lengths) - lengths, lengths)


def _grid_edges(points: np.ndarray, grid: GridIndex, radius: float) -> np.ndarray:
    r2 = radius * radius
    chunks = []
    for dx, dy in _HALF_OFFSETS:
        u, v = _candidate_pairs(grid, dx, dy)
        if dx == 0 and dy == 0:
            keep = u < v
            u, v = u[keep], v[keep]
        d = points[u] - points[v]
        close = d[:, 0] * d[:, 0] + d[:, 1] * d[:, 1] <= r2
        chunks.append(np.column_stack([u[close], v[close]]))
    return np.vstack(chunks) if chunks else np.empty((0, 2), dtype=np.int64)


def brute_force_edges(points: np.ndarray, radius: float) -> np.ndarray:
    """All-pairs edge list, O(N^2); reference for small instances."""
    points = np.asarray(points, dtype=np.float64)
    iu, ju = np.triu_indices(len(points), 1)
    d = points[iu] - points[ju]
    close = d[:, 0] * d[:, 0] + d[:, 1] * d[:, 1] <= radius * radius
    return np.column_stack([iu[close], ju[close]])


def build_graph(pointset: PointSet, radius: float) -> GeometricGraph:
    """Connect all pairs within ``radius`` using buckets of side ``radius``."""
    if not radius > 0:
        raise ParameterError(f"radius must be positive, got {radius}")
    pts = pointset.points
    grid = _bucket(pts, pointset.side, radius)
    edges = _grid_edges(pts, grid, radius)
    adjacency = CSRGraph.from_edges(len(pts), edges)
    a = None
    if pointset.mode is PointMode.POISSON and pointset.n_param >= 2:
        a = math.pi * radius * radius / math.log(pointset.n_param)
    return GeometricGraph(pointset, float(radius), adjacency, grid, a)


def radius_for(a: float, n: float) -> float:
    """Radius ``sqrt(a ln n / pi)`` in the units of the ``[0, sqrt(n)]^2`` square."""
    if not a > 0:
        raise ParameterError(f"a must be positive, got {a}")
    if not n >= 2:
        raise ParameterError(f"n must be at least 2, got {n}")
    return math.sqrt(a * math.log(n) / math.pi)


def unit_radius(a: float, n: float) -> float:
    """Same radius rescaled to the unit square."""
    return radius_for(a, n) / math.sqrt(n)


def critical_radii(n: float) -> tuple[float, float]:
    """Unit-square giant-component radius ``r_c`` and connectivity radius ``r_t``."""
    if not n >= 2:
        raise ParameterError(f"n must be at least 2, got {n}")
    return math.sqrt(LAMBDA_C / n), math.sqrt(math.log(n) / (math.pi * n))


def random_rgg(n: int, a: float, seed: int) -> GeometricGraph:
    """Poisson-mode graph on ``[0, sqrt(n)]^2`` with radius ``sqrt(a ln n / pi)``."""
    return build_graph(sample_points(PointMode.POISSON, n, seed), radius_for(a, n))


def connectivity(graph) -> tuple[bool, list[int]]:
    """Whether the graph is connected, and component sizes in descending order."""
    g = getattr(graph, "adjacency", graph)
    n = g.num_nodes
    if n == 0:
        return True, []
    mat = csr_matrix((np.ones(len(g.indices), dtype=np.int8), g.indices, g.indptr), shape=(n, n))
    ncomp, labels = connected_components(mat, directed=False)
    sizes = sorted(np.bincount(labels, minlength=ncomp).tolist(), reverse=True)
    return ncomp == 1, sizes


@dataclass(frozen=True, eq=False)
class CellGrid:
    """Tiling of the square into cells of side ``radius / sqrt(5)``.

    Any two nodes in the same cell or in side-sharing cells are adjacent.
    The last row and column of cells may be clipped by the square boundary.
    """

    cell_side: float
    ncell: int
    counts: np.ndarray  # (ncell, ncell) node counts, indexed [x-cell, y-cell]
    cell_of: np.ndarray  # flat cell id per node
    order: np.ndarray
    starts: np.ndarray
    full: np.ndarray = field(repr=False)  # (ncell, ncell) True where the cell is not clipped

    def members(self, i: int, j: int) -> np.ndarray:
        c = i * self.ncell + j
        return self.order[self.starts[c]:self.starts[c + 1]]

    @property
    def num_cells(self) -> int:
        return self.ncell * self.ncell


def tile_cells(graph: GeometricGraph) -> CellGrid:
    if graph.a_param is None:
        raise ParameterError("tile_cells needs a Poisson-mode graph on [0, sqrt(n)]^2")
    return tile_points(graph.pointset, graph.radius)


def tile_points(pointset: PointSet, radius: float) -> CellGrid:
    """Cell tiling straight from the points; no edges are needed for it."""
    s = radius / math.sqrt(5.0)
    side = pointset.side
    ratio = side / s
    # tolerate float noise when the side is an exact multiple of the cell
    ncell = max(1, round(ratio) if abs(ratio - round(ratio)) < 1e-9 else math.ceil(ratio))
    g = _bucket(pointset.points, side, s, ncell)
    counts = np.diff(g.starts).reshape(ncell, ncell)
    edge_ok = (np.arange(1, ncell + 1) * s) <= side * (1 + 1e-12)
    full = np.outer(edge_ok, edge_ok)
    return CellGrid(s, ncell, _frozen(counts), g.cell_of, g.order, g.starts, _frozen(full))


def min_cell_count_predicate(cells: CellGrid, threshold: float, include_clipped: bool = False) -> bool:
    """True iff every considered cell holds at least ``threshold`` nodes."""
    if threshold < 0:
        raise ParameterError(f"threshold must be non-negative, got {threshold}")
    counts = cells.counts if include_clipped else cells.counts[cells.full]
    return bool(np.all(counts >= threshold))


def cell_restricted_graph(graph: GeometricGraph, cells: CellGrid) -> CSRGraph:
    """Subgraph keeping only edges inside one cell or between side-sharing cells."""
    e = graph.adjacency.edges()
    ci, cj = np.divmod(cells.cell_of[e[:, 0]], cells.ncell)
    di, dj = np.divmod(cells.cell_of[e[:, 1]], cells.ncell)
    keep = np.abs(ci - di) + np.abs(cj - dj) <= 1
    return CSRGraph.from_edges(graph.num_nodes, e[keep])


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def write_points_csv(pointset: PointSet, path) -> None:
    with open(Path(path), "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["id", "x", "y"])
        for i, (x, y) in enumerate(pointset.points):
            w.writerow([i, _fmt(x), _fmt(y)])


def write_edges_csv(graph, path) -> None:
    g = getattr(graph, "adjacency", graph)
    with open(Path(path), "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["u", "v"])
        w.writerows(g.edges().tolist())


def read_points_csv(path, side: float) -> PointSet:
    with open(Path(path), newline="") as fh:
        rows = list(csv.DictReader(fh))
    pts = [(float(r["x"]), float(r["y"])) for r in sorted(rows, key=lambda r: int(r["id"]))]
    return point_set_from_array(pts, side)
