"""Fixed-point solver for infinity-harmonic extensions on networks.

The scheme: every non-Dirichlet node must equal the minimax of weighted
two-point means of its neighbor values,

    value(u; x) = min over z of max over q of
                  (d(x,z) u(q) + d(x,q) u(z)) / (d(x,z) + d(x,q)),

with z, q ranging over the neighborhood of x.  This is simultaneously the
maximin and the unique minimizer of the local Lipschitz quotient
``J(c) = max_z |u(z) - c| / d(x, z)``.  Starting from the McShane upper
extension of the boundary data, sequential (Gauss-Seidel) sweeps decrease
pointwise and converge to the unique solution; comparison with the
boundary data holds throughout.

The sweep updates one node at a time in a fixed ascending order, each node
seeing the values already updated earlier in the same sweep.  Because the
nodal value is nonexpansive in the neighbor values, the equation residual
after a sweep never exceeds that sweep's largest nodal change, which is
what the stopping rule monitors.
"""

import json
import time
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from . import _kernels
from .errors import (
    BoundaryMismatch,
    EmptyTargetSet,
    InvalidTolerance,
    NoCoordinates,
    OrderMismatch,
    UndefinedNeighborValue,
)
from .modulus import ModulusFn, least_concave_modulus, linear_modulus, lipschitz_constant
from .network import (
    DistanceMatrix,
    Network,
    geodesic_rows,
    has_descent_property,
    pairwise_distance,
)

__all__ = [
    "DirichletProblem",
    "SolveReport",
    "dirichlet_problem",
    "infinity_mean",
    "lipschitz_quotient",
    "mcshane_extension",
    "sweep",
    "solve",
    "residual",
    "extend_to_point",
    "write_field",
    "read_field",
]

#: pointwise increase tolerated before a sweep sequence is flagged non-monotone
MONOTONE_SLACK = 1e-13


@dataclass(frozen=True)
class SolveReport:
    """What the solver did: sweep count, final residual, monotonicity, time."""

    iterations: int
    final_residual: float
    monotone: bool
    wall_time: float
    converged: bool = True

    def to_json(self) -> str:
        return json.dumps({
            "iterations": self.iterations,
            "final_residual": self.final_residual,
            "monotone": self.monotone,
            "wall_time": self.wall_time,
            "converged": self.converged,
        })


@dataclass(frozen=True)
class DirichletProblem:
    """A network, a nonempty Dirichlet node set, boundary values, a modulus.

    ``dist`` may carry a precomputed all-pairs geodesic matrix; when absent,
    only the boundary rows are computed (lazily), which is all the solver
    needs.
    """

    net: Network
    dirichlet: np.ndarray
    values: np.ndarray
    modulus: ModulusFn
    dist: DistanceMatrix | None = None

    def __post_init__(self):
        dirichlet = np.asarray(self.dirichlet, dtype=np.int64)
        values = np.asarray(self.values, dtype=float)
        if values.shape != dirichlet.shape:
            raise ValueError("boundary values must match the Dirichlet set")
        order = np.argsort(dirichlet, kind="stable")
        dirichlet, values = dirichlet[order], values[order]
        if np.any(np.diff(dirichlet) == 0):
            raise ValueError("duplicate Dirichlet nodes")
        object.__setattr__(self, "dirichlet", dirichlet)
        object.__setattr__(self, "values", values)
        if dirichlet.size == 0:
            raise EmptyTargetSet("Dirichlet set is empty")
        if dirichlet[0] < 0 or dirichlet[-1] >= self.net.n_nodes:
            raise ValueError("Dirichlet node out of range")
        if not np.all(np.isfinite(values)):
            raise ValueError("boundary values must be finite")
        ok, witness = has_descent_property(self.net, dirichlet, metric="geodesic")
        if not ok:  # cannot happen on a connected network; guards future edits
            raise ValueError(f"descent property fails at node {witness}")

    @cached_property
    def interior(self) -> np.ndarray:
        mask = np.ones(self.net.n_nodes, dtype=bool)
        mask[self.dirichlet] = False
        return np.nonzero(mask)[0].astype(np.int64)

    @cached_property
    def boundary_geodesics(self) -> np.ndarray:
        """Geodesic distances from each Dirichlet node to every node."""
        if self.dist is not None:
            return self.dist.d_g[self.dirichlet]
        return geodesic_rows(self.net, self.dirichlet)


def dirichlet_problem(net, nodes, values, modulus="lipschitz",
                      dist=None) -> DirichletProblem:
    """Assemble a problem, deriving the modulus from the boundary data.

    ``modulus`` may be a ready :class:`ModulusFn`, ``"lipschitz"`` (linear
    modulus with the data's Lipschitz constant — the default, and what the
    grid experiments use) or ``"concave"`` (least concave majorant of the
    data increments).  Distances between boundary samples use the ambient
    metric when the network has one, else the geodesic metric.
    """
    nodes = np.asarray(nodes, dtype=np.int64)
    values = np.asarray(values, dtype=float)
    if isinstance(modulus, ModulusFn):
        return DirichletProblem(net, nodes, values, modulus, dist)
    if modulus not in ("lipschitz", "concave"):
        raise ValueError(f"unknown modulus mode {modulus!r}")
    if nodes.size == 1:
        return DirichletProblem(net, nodes, values, linear_modulus(0.0), dist)
    if net.coords is not None and net.ambient_norm is not None:
        dmat = pairwise_distance(net.coords[nodes], net.coords[nodes], net.ambient_norm)
    elif dist is not None:
        dmat = dist.d_g[np.ix_(nodes, nodes)]
    else:
        dmat = geodesic_rows(net, nodes)[:, nodes]
    if modulus == "lipschitz":
        fn = linear_modulus(lipschitz_constant(values, dmat))
    else:
        fn = least_concave_modulus(values, dmat)
    return DirichletProblem(net, nodes, values, fn, dist)


def infinity_mean(net: Network, u, x: int) -> float:
    """Minimax of weighted two-point means over the neighborhood of ``x``.

    Reference implementation by full pair enumeration.  In debug runs the
    equality of the min-max and max-min forms is asserted.
    """
    nbrs = net.neighbors(x)
    d = net.neighbor_lengths(x)
    u = np.asarray(u, dtype=float)
    uv = u[nbrs]
    if not np.all(np.isfinite(uv)):
        raise UndefinedNeighborValue(f"nonfinite neighbor value at node {x}")
    m = (d[:, None] * uv[None, :] + d[None, :] * uv[:, None]) / (d[:, None] + d[None, :])
    value = m.max(axis=1).min()
    assert abs(m.min(axis=1).max() - value) <= 1e-12 * max(1.0, abs(value))
    return float(value)


def lipschitz_quotient(net: Network, u, x: int, candidate: float) -> float:
    """Local Lipschitz quotient ``max_z |u(z) - candidate| / d(x, z)``.

    The nodal value computed by :func:`infinity_mean` is its unique
    minimizer over candidates.
    """
    nbrs = net.neighbors(x)
    d = net.neighbor_lengths(x)
    uv = np.asarray(u, dtype=float)[nbrs]
    if not np.all(np.isfinite(uv)):
        raise UndefinedNeighborValue(f"nonfinite neighbor value at node {x}")
    return float(np.max(np.abs(uv - candidate) / d))


def mcshane_extension(problem: DirichletProblem) -> np.ndarray:
    """McShane upper extension ``min_s (f(s) + w(d_g(x, s)))`` of the data.

    Agrees with the boundary values on the Dirichlet set, inherits the
    modulus along geodesics, and never drops below the data minimum.  With
    a modulus that saturates at the data's range (the flat-tailed least
    concave majorant) it also stays below the data maximum; a linear tail
    or a Lipschitz modulus can poke above it on nodes geodesically farther
    than the data diameter, which does not affect the solve: the start
    stays above the solution and the sweeps bring it down.
    """
    w = problem.modulus
    lifted = problem.values[:, None] + w(problem.boundary_geodesics)
    u = lifted.min(axis=0)
    u[problem.dirichlet] = problem.values
    return u


def _check_order(problem, order):
    if order is None:
        return problem.interior
    order = np.asarray(order, dtype=np.int64)
    if not np.array_equal(np.sort(order), problem.interior):
        raise OrderMismatch("order must enumerate exactly the non-Dirichlet nodes")
    return order


def sweep(problem: DirichletProblem, u, order=None) -> np.ndarray:
    """One Gauss-Seidel sweep; returns the updated field, input untouched.

    Nodes are visited in ``order`` (default: ascending index), each update
    seeing the values of nodes already updated in this sweep.  Dirichlet
    nodes are never modified.
    """
    order = _check_order(problem, order)
    v = np.array(u, dtype=float, copy=True)
    net = problem.net
    _kernels.sweep_inplace(v, order, net.indptr, net.indices, net.lengths)
    return v


def residual(problem: DirichletProblem, u) -> float:
    """Sup over non-Dirichlet nodes of the fixed-point defect of ``u``."""
    u = np.asarray(u, dtype=float)
    if not np.array_equal(u[problem.dirichlet], problem.values):
        raise BoundaryMismatch("field disagrees with boundary data on the Dirichlet set")
    net = problem.net
    return float(_kernels.residual_max(u, problem.interior, net.indptr,
                                       net.indices, net.lengths))


def solve(problem: DirichletProblem, tol: float = 1e-9, max_sweeps: int | None = None,
          init=None):
    """Iterate sweeps from the McShane extension until the residual is ≤ tol.

    Returns ``(field, report)``.  The stopping rule watches the largest
    nodal change of each sweep: the post-sweep residual never exceeds it
    (the nodal value is nonexpansive in the neighbor values), and the
    distance to the fixed point is estimated from the geometric tail
    ``change * rho / (1 - rho)`` with ``rho`` the observed change ratio.
    Both must drop below ``tol``-sized thresholds; the final residual is
    measured and reported.  ``init`` replaces the McShane start (the fixed
    point does not depend on it; the monotone flag does).  If
    ``max_sweeps`` (default ``200 * N``) is exhausted, the best iterate is
    returned with ``converged=False``.
    """
    if not np.isfinite(tol) or tol <= 0:
        raise InvalidTolerance("tol must be positive")
    if max_sweeps is None:
        max_sweeps = 200 * problem.net.n_nodes
    t0 = time.perf_counter()
    if init is None:
        u = mcshane_extension(problem)
    else:
        u = np.array(init, dtype=float, copy=True)
        u[problem.dirichlet] = problem.values
    net = problem.net
    order = problem.interior
    monotone = True
    sweeps = 0
    converged = order.size == 0
    stop = tol / 4.0
    prev_change = np.inf
    while sweeps < max_sweeps and not converged:
        change, increase = _kernels.sweep_inplace(u, order, net.indptr,
                                                  net.indices, net.lengths)
        sweeps += 1
        if increase > MONOTONE_SLACK:
            monotone = False
        if change <= stop:
            rho = change / prev_change if 0.0 < prev_change < np.inf else 0.0
            tail = change * rho / (1.0 - rho) if rho < 1.0 else np.inf
            if change == 0.0 or tail <= tol / 2.0:
                if residual(problem, u) <= tol:
                    converged = True
                else:
                    stop /= 4.0
        prev_change = change
    report = SolveReport(
        iterations=sweeps,
        final_residual=residual(problem, u),
        monotone=monotone,
        wall_time=time.perf_counter() - t0,
        converged=converged,
    )
    return u, report


def extend_to_point(problem: DirichletProblem, solution, p, metric=None) -> float:
    """McShane lift of a solved field to an arbitrary ambient point.

    ``min over nodes s of (solution(s) + w(d(s, p)))`` with ``d`` the ambient
    metric — the network's norm by default, or a callable
    ``metric(coords, p) -> distances`` for domains whose ambient metric is
    not a norm.
    """
    if metric is None:
        if problem.net.coords is None or problem.net.ambient_norm is None:
            raise NoCoordinates("ambient lift needs coordinates and a metric")
        d = pairwise_distance(problem.net.coords,
                              np.asarray(p, dtype=float)[None, :],
                              problem.net.ambient_norm)[:, 0]
    else:
        d = np.asarray(metric(problem.net.coords, np.asarray(p, dtype=float)), dtype=float)
    return float(np.min(np.asarray(solution, dtype=float) + problem.modulus(d)))


# -- field I/O -------------------------------------------------------------------


def write_field(path, values, coords=None) -> None:
    """Dump a nodal field as ``node,x,y,value`` CSV (blank coords if absent)."""
    values = np.asarray(values, dtype=float)
    with open(path, "w") as fh:
        fh.write("node,x,y,value\n")
        for i, v in enumerate(values):
            if coords is None:
                fh.write(f"{i},,,{float(v)!r}\n")
            else:
                fh.write(f"{i},{float(coords[i, 0])!r},{float(coords[i, 1])!r},"
                         f"{float(v)!r}\n")


def read_field(path):
    """Read a field CSV; returns ``(values, coords_or_None)``."""
    values, xs, ys = [], [], []
    with open(path) as fh:
        header = next(fh)
        if header.strip() != "node,x,y,value":
            raise ValueError("not a field dump")
        for line in fh:
            _, x, y, v = line.strip().split(",")
            values.append(float(v))
            if x:
                xs.append(float(x))
                ys.append(float(y))
    coords = np.column_stack([xs, ys]) if xs else None
    return np.asarray(values), coords
