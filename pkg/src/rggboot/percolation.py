"""Bootstrap percolation with synchronous updates.

An inactive node becomes active in round ``t + 1`` when at least ``theta``
of its neighbors are active at the end of round ``t``; active nodes never
deactivate. Note the rule is "at least", not "strictly more than".

The engine is event driven: each round only the neighbors of nodes that
activated in the previous round have their counters bumped and are
re-examined, so a whole run costs O(|E|).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import seeding
from .errors import ParameterError
from .graph import CSRGraph, as_csr, gather_neighbors, grid_graph

NEVER = -1


@dataclass(frozen=True)
class BPParams:
    p: float
    theta: int
    max_steps: int | None = None  # defaults to 4 |V|

    def __post_init__(self):
        if not 0.0 <= self.p <= 1.0:
            raise ParameterError(f"p must lie in [0, 1], got {self.p}")
        if int(self.theta) != self.theta or self.theta < 1:
            raise ParameterError(f"theta must be an integer >= 1, got {self.theta}")
        if self.max_steps is not None and self.max_steps < 0:
            raise ParameterError(f"max_steps must be non-negative, got {self.max_steps}")


@dataclass(eq=False)
class Configuration:
    active: np.ndarray  # bool per node
    activation_time: np.ndarray  # round of activation, NEVER if inactive
    pending_counts: np.ndarray  # active-neighbor count per node
    uniforms: np.ndarray | None = None  # per-node U_v, kept in coupling mode

    @property
    def num_active(self) -> int:
        return int(self.active.sum())

    def copy(self) -> "Configuration":
        return Configuration(
            self.active.copy(), self.activation_time.copy(), self.pending_counts.copy(), self.uniforms
        )


@dataclass
class PercolationOutcome:
    fully_active: bool
    steps: int
    initial_active: int
    final_active: int
    final_fraction: float
    truncated: bool = False
    activation_profile: np.ndarray = field(default=None, repr=False)  # activations per round
    configuration: Configuration | None = field(default=None, repr=False)


def configuration_from_active(graph, active) -> Configuration:
    g = as_csr(graph)
    active = np.asarray(active, dtype=bool).copy()
    if active.shape != (g.num_nodes,):
        raise ParameterError("initial active mask must have one entry per node")
    counts = np.bincount(gather_neighbors(g, np.nonzero(active)[0]), minlength=g.num_nodes)
    times = np.where(active, 0, NEVER)
    return Configuration(active, times, counts.astype(np.int64))


def draw_uniforms(num_nodes: int, seed: int) -> np.ndarray:
    return seeding.stream(seed, seeding.CONFIG).random(num_nodes)


def init_configuration(graph, p: float, seed: int, coupling: bool = False) -> Configuration:
    """Bernoulli(p) product initial state; node ``v`` is active iff ``U_v < p``."""
    if not 0.0 <= p <= 1.0:
        raise ParameterError(f"p must lie in [0, 1], got {p}")
    u = draw_uniforms(as_csr(graph).num_nodes, seed)
    config = configuration_from_active(graph, u < p)
    if coupling:
        config.uniforms = u
    return config


def evolve(graph, config: Configuration, theta: int, max_steps: int | None = None) -> PercolationOutcome:
    """Run synchronous rounds in place on ``config`` until stable or capped."""
    g = as_csr(graph)
    n = g.num_nodes
    if max_steps is None:
        max_steps = 4 * n
    active, times, counts = config.active, config.activation_time, config.pending_counts
    initial = int(active.sum())

    cand = np.nonzero(~active & (counts >= theta))[0]
    profile = [initial]
    steps = 0
    truncated = False
    while cand.size:
        if steps >= max_steps:
            truncated = True
            break
        steps += 1
        active[cand] = True
        times[cand] = steps
        profile.append(cand.size)
        touched = gather_neighbors(g, cand)
        counts += np.bincount(touched, minlength=n)
        touched = np.unique(touched)
        cand = touched[~active[touched] & (counts[touched] >= theta)]

    final = int(active.sum())
    return PercolationOutcome(
        fully_active=final == n and not truncated,
        steps=steps,
        initial_active=initial,
        final_active=final,
        final_fraction=final / n if n else 1.0,
        truncated=truncated,
        activation_profile=np.asarray(profile, dtype=np.int64),
        configuration=config,
    )


def run(graph, params: BPParams, seed: int) -> PercolationOutcome:
    if as_csr(graph).num_nodes == 0:
        raise ParameterError("cannot run bootstrap percolation on an empty graph")
    config = init_configuration(graph, params.p, seed)
    return evolve(graph, config, params.theta, params.max_steps)


def run_from(graph, active, theta: int, max_steps: int | None = None) -> PercolationOutcome:
    """Run from an explicit initial active set (mask or index list)."""
    g = as_csr(graph)
    active = np.asarray(active)
    if active.dtype != bool:
        mask = np.zeros(g.num_nodes, dtype=bool)
        mask[active.astype(np.int64)] = True
        active = mask
    return evolve(g, configuration_from_active(g, active), theta, max_steps)


def run_coupled(graph, params_list: list[BPParams], seed: int) -> list[PercolationOutcome]:
    """Runs for several ``p`` sharing one uniform per node, so initial sets are nested."""
    if not params_list:
        return []
    thetas = {pr.theta for pr in params_list}
    if len(thetas) != 1:
        raise ParameterError("coupled runs must share theta")
    ps = [pr.p for pr in params_list]
    if len(set(ps)) != len(ps):
        raise ParameterError("coupled runs need distinct p values")
    g = as_csr(graph)
    u = draw_uniforms(g.num_nodes, seed)
    out = []
    for pr in params_list:
        config = configuration_from_active(g, u < pr.p)
        config.uniforms = u
        out.append(evolve(g, config, pr.theta, pr.max_steps))
    return out


def lattice(N: int) -> CSRGraph:
    """The ``(N+1) x (N+1)`` grid of integer points in ``[0, N]^2``."""
    if N < 1:
        raise ParameterError(f"N must be >= 1, got {N}")
    return grid_graph(N + 1)


def run_lattice_theta1(N: int, p: float, seed: int, step_cap: int | None = None) -> PercolationOutcome:
    """Threshold-1 percolation on the square lattice ``[0, N]^2``."""
    if not 0.0 <= p <= 1.0:
        raise ParameterError(f"p must lie in [0, 1], got {p}")
    g = lattice(N)
    config = configuration_from_active(g, seeding.stream(seed, seeding.LATTICE, N).random(g.num_nodes) < p)
    return evolve(g, config, 1, step_cap)


def stability_check(graph, configuration: Configuration, theta: int) -> bool:
    """True iff no inactive node has ``theta`` or more active neighbors (counts recomputed)."""
    g = as_csr(graph)
    active = np.asarray(configuration.active, dtype=bool)
    counts = np.bincount(gather_neighbors(g, np.nonzero(active)[0]), minlength=g.num_nodes)
    return not bool(np.any(~active & (counts >= theta)))


def seeded_cell_predicate(graph, cells, configuration: Configuration, theta: int) -> bool:
    """True iff some tiling cell holds at least ``theta`` initially active nodes."""
    active = np.asarray(configuration.active, dtype=bool)
    if configuration.activation_time is not None:
        active = active & (configuration.activation_time == 0)
    per_cell = np.bincount(cells.cell_of[active], minlength=cells.num_cells)
    return bool(per_cell.max(initial=0) >= theta)


def outcome_row(seed: int, p: float, theta: int, outcome: PercolationOutcome) -> dict:
    """Flat record matching the per-run CSV schema."""
    return {
        "seed": seed,
        "p": p,
        "theta": theta,
        "initial_active": outcome.initial_active,
        "final_active": outcome.final_active,
        "final_fraction": outcome.final_fraction,
        "steps": outcome.steps,
        "fully_active": int(outcome.fully_active),
        "truncated": int(outcome.truncated),
    }


OUTCOME_FIELDS = (
    "seed", "p", "theta", "initial_active", "final_active", "final_fraction", "steps", "fully_active", "truncated",
)
