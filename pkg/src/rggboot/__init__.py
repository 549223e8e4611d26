"""Bootstrap percolation on random geometric graphs: simulation and analytic bounds."""

from .analysis import (
    H,
    J,
    ThresholdBounds,
    bahadur_rao_poisson_tail,
    feasible_gamma_range,
    invert,
    p_double_prime,
    p_prime,
    poisson_tail,
    rate_I,
    stable_config_bound,
    theta_for,
)
from .errors import DomainError, NumericError, ParameterError
from .graph import CSRGraph
from .harness import SweepRow, SweepSpec, reproduce_table1, run_sweep, verify_tiling_claims
from .percolation import (
    BPParams,
    Configuration,
    PercolationOutcome,
    init_configuration,
    run,
    run_coupled,
    run_lattice_theta1,
    seeded_cell_predicate,
    stability_check,
)
from .rgg import (
    CellGrid,
    GeometricGraph,
    PointMode,
    PointSet,
    build_graph,
    connectivity,
    critical_radii,
    min_cell_count_predicate,
    radius_for,
    sample_points,
    tile_cells,
)

__version__ = "0.1.0"
