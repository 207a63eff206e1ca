"""Discrete absolutely minimizing Lipschitz extensions on metric networks.

The library solves the nodal fixed-point equation whose solution extends
Dirichlet data on a finite network with the least possible modulus of
continuity: every free node carries the minimax of weighted two-point
means of its neighbor values.  Includes network validation and geodesics,
Lipschitz/concave moduli of boundary data, the Gauss-Seidel solver with
McShane initialization, lattice and slotted test domains, and the
benchmark error tables.
"""

from .errors import *  # noqa: F401,F403
from .modulus import (
    ModulusFn,
    least_concave_modulus,
    linear_modulus,
    lipschitz_constant,
    modulus_sup_distance,
)
from .network import (
    DistanceMatrix,
    Network,
    build_network,
    geodesic_matrix,
    geodesic_rows,
    has_descent_property,
    hausdorff_distance,
    pairwise_distance,
    read_network,
    subnetwork,
    write_network,
)
from .solver import (
    DirichletProblem,
    SolveReport,
    dirichlet_problem,
    extend_to_point,
    infinity_mean,
    lipschitz_quotient,
    mcshane_extension,
    read_field,
    residual,
    solve,
    sweep,
    write_field,
)
from .grids import (
    GridSpec,
    MeshQuality,
    SlotDomain,
    build_grid,
    build_slot_domain,
    geodesic_cone,
    grid_boundary_probe,
    grid_probe_points,
    mesh_quality,
    rect_detour_distance,
    rect_detour_matrix,
)
from .experiments import (
    EXACT_SOLUTIONS,
    SMOOTH_FUNCTIONS,
    TABLE_IDS,
    ConsistencyReport,
    ErrorTable,
    ExactSolution,
    SmoothFunction,
    consistency_check,
    run_cell,
    run_table,
    slot_experiments,
)

__version__ = "0.1.0"
