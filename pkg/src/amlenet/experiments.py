"""Benchmark experiments: exact solutions, error tables, the slotted domain,
and the ball-mean expansion check.

The error tables solve the fixed-point equation on grids with boundary data
sampled from a catalog of functions whose continuum extension is known, and
record the sup-norm node error.  Table ids follow the usual numbering of
this benchmark set:

* ``7.1`` cone ``r`` (Euclidean edges, sup-norm neighborhoods, thin boundary)
* ``7.2`` polar angle ``theta`` (square shifted off the origin)
* ``7.3`` ``sqrt(r) * exp(theta/2)`` (same shifted square)
* ``7.4`` cone ``r`` with the thick boundary band of width ``k h``
* ``7.5`` saddles ``x^2 - y^2`` (sup-norm convention) and ``|x| - |y|``
  (1-norm convention) on the origin-centered square ``[-1, 1]^2``, k = 1
"""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .errors import NonfiniteExact, ZeroGradient
from .grids import GridSpec, build_grid, build_slot_domain, geodesic_cone
from .solver import dirichlet_problem, solve

__all__ = [
    "ExactSolution",
    "SmoothFunction",
    "EXACT_SOLUTIONS",
    "SMOOTH_FUNCTIONS",
    "ErrorTable",
    "TABLE_IDS",
    "run_cell",
    "run_table",
    "slot_experiments",
    "consistency_check",
    "ConsistencyReport",
]


@dataclass(frozen=True)
class ExactSolution:
    """A reference extension with the grid conventions it is exact for."""

    id: str
    fn: callable
    ball_norm: str = "sup"
    edge_norm: str = "euclid"
    zoom: float = 1.0
    shift: tuple = (0.0, 0.0)


@dataclass(frozen=True)
class SmoothFunction:
    """Twice-differentiable test function with closed-form derivatives."""

    id: str
    fn: callable
    grad: callable
    hess: callable

    def infinity_laplacian(self, x, y) -> float:
        """Second derivative along the normalized gradient direction."""
        g = np.asarray(self.grad(x, y), dtype=float)
        norm = float(np.hypot(*g))
        if norm < 1e-12:
            raise ZeroGradient(f"{self.id} has a critical point at ({x}, {y})")
        h = np.asarray(self.hess(x, y), dtype=float)
        d = g / norm
        return float(d @ h @ d)


def _radius(x, y):
    return np.sqrt(x * x + y * y)


EXACT_SOLUTIONS = {
    "cone_r": ExactSolution("cone_r", _radius),
    "angle_theta": ExactSolution("angle_theta", lambda x, y: np.arctan2(y, x),
                                 shift=(0.25, 0.25)),
    "spiral_r12": ExactSolution(
        "spiral_r12",
        lambda x, y: np.sqrt(_radius(x, y)) * np.exp(np.arctan2(y, x) / 2.0),
        shift=(0.25, 0.25)),
    "aronsson_x43": ExactSolution(
        "aronsson_x43",
        lambda x, y: np.abs(x) ** (4.0 / 3.0) - np.abs(y) ** (4.0 / 3.0)),
    "supnorm_x2y2": ExactSolution("supnorm_x2y2", lambda x, y: x * x - y * y,
                                  ball_norm="sup", edge_norm="sup",
                                  zoom=2.0, shift=(-1.0, -1.0)),
    "onenorm_absxy": ExactSolution("onenorm_absxy",
                                   lambda x, y: np.abs(x) - np.abs(y),
                                   ball_norm="one", edge_norm="one",
                                   zoom=2.0, shift=(-1.0, -1.0)),
}

SMOOTH_FUNCTIONS = {
    "linear": SmoothFunction(
        "linear",
        lambda x, y: 3.0 * x - 2.0 * y + 1.0,
        lambda x, y: (3.0, -2.0),
        lambda x, y: ((0.0, 0.0), (0.0, 0.0))),
    "quad_mix": SmoothFunction(
        "quad_mix",
        lambda x, y: x * x + 2.0 * y,
        lambda x, y: (2.0 * x, 2.0),
        lambda x, y: ((2.0, 0.0), (0.0, 0.0))),
    "saddle": SmoothFunction(
        "saddle",
        lambda x, y: x * x - y * y,
        lambda x, y: (2.0 * x, -2.0 * y),
        lambda x, y: ((2.0, 0.0), (0.0, -2.0))),
    "quartic_diff": SmoothFunction(
        "quartic_diff",
        lambda x, y: x ** 4 - y ** 4,
        lambda x, y: (4.0 * x ** 3, -4.0 * y ** 3),
        lambda x, y: ((12.0 * x * x, 0.0), (0.0, -12.0 * y * y))),
    "cone_r": SmoothFunction(
        "cone_r",
        lambda x, y: np.hypot(x, y),
        lambda x, y: (x / np.hypot(x, y), y / np.hypot(x, y)),
        lambda x, y: ((y * y / np.hypot(x, y) ** 3, -x * y / np.hypot(x, y) ** 3),
                      (-x * y / np.hypot(x, y) ** 3, x * x / np.hypot(x, y) ** 3))),
}


def run_cell(exact, spec: GridSpec, tol: float = 1e-9) -> float:
    """Solve one grid with boundary data from ``exact``; sup-norm node error."""
    if isinstance(exact, str):
        exact = EXACT_SOLUTIONS[exact]
    net, dirichlet = build_grid(spec)
    with np.errstate(all="ignore"):  # finiteness is checked explicitly
        reference = np.asarray(exact.fn(net.coords[:, 0], net.coords[:, 1]), dtype=float)
    if not np.all(np.isfinite(reference)):
        raise NonfiniteExact(f"{exact.id} is singular on this grid")
    problem = dirichlet_problem(net, dirichlet, reference[dirichlet],
                                modulus="lipschitz")
    u, _ = solve(problem, tol=tol)
    return float(np.max(np.abs(u - reference)))


def _spec_for(exact: ExactSolution, n: int, k: int, boundary: str) -> GridSpec:
    return GridSpec(n=n, k=k, ball_norm=exact.ball_norm, edge_norm=exact.edge_norm,
                    boundary=boundary, zoom=exact.zoom, shift=exact.shift)


#: table id -> (exact solution id, boundary kind, default k values)
TABLE_IDS = {
    "7.1": ("cone_r", "thin", (1, 2, 3, 4, 5, 6, 7)),
    "7.2": ("angle_theta", "thin", (1, 2, 3, 4)),
    "7.3": ("spiral_r12", "thin", (1, 2, 3)),
    "7.4": ("cone_r", "thick", (2, 3, 4, 5)),
    "7.5": (None, "thin", (1,)),
}


@dataclass(frozen=True)
class ErrorTable:
    """Sup-norm errors on a grid of experiment parameters."""

    row_kind: str                 # 'k' or 'row'
    row_labels: tuple
    cols: tuple                   # n values
    cells: np.ndarray
    metadata: dict = field(default_factory=dict)

    def to_csv(self) -> str:
        lines = [f"# {key}={self.metadata[key]}" for key in sorted(self.metadata)]
        lines.append(f"{self.row_kind}/n," + ",".join(str(n) for n in self.cols))
        for label, row in zip(self.row_labels, self.cells):
            lines.append(f"{label}," + ",".join(f"{v:.17g}" for v in row))
        return "\n".join(lines) + "\n"

    def to_json(self) -> str:
        import json
        return json.dumps({
            "row_kind": self.row_kind,
            "row_labels": list(self.row_labels),
            "cols": list(self.cols),
            "cells": [[float(v) for v in row] for row in self.cells],
            "metadata": self.metadata,
        })


def run_table(table_id: str, n_list=None, k_list=None, tol: float = 1e-9,
              workers: int = 1) -> ErrorTable:
    """Fill one benchmark table; cells are independent solves.

    ``workers > 1`` evaluates cells in a thread pool (the sweep kernels
    release the GIL); the result does not depend on the worker count.
    """
    if table_id not in TABLE_IDS:
        raise ValueError(f"unknown table {table_id!r}; choose from {sorted(TABLE_IDS)}")
    exact_id, boundary, default_k = TABLE_IDS[table_id]
    n_list = tuple(n_list) if n_list else (8, 16, 32, 64)
    k_list = tuple(k_list) if k_list else default_k

    if table_id == "7.5":
        rows = [EXACT_SOLUTIONS["supnorm_x2y2"], EXACT_SOLUTIONS["onenorm_absxy"]]
        labels = ("e1", "e2")
        jobs = [(exact, _spec_for(exact, n, 1, boundary))
                for exact in rows for n in n_list]
    else:
        exact = EXACT_SOLUTIONS[exact_id]
        labels = tuple(str(k) for k in k_list)
        jobs = [(exact, _spec_for(exact, n, k, boundary))
                for k in k_list for n in n_list]

    def cell(job):
        return run_cell(job[0], job[1], tol=tol)

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            flat = list(pool.map(cell, jobs))
    else:
        flat = [cell(job) for job in jobs]
    cells = np.array(flat, dtype=float).reshape(len(labels), len(n_list))

    meta_exact = rows[0].id + "," + rows[1].id if table_id == "7.5" else exact_id
    first = jobs[0][1]
    metadata = {
        "table": table_id,
        "function": meta_exact,
        "boundary": boundary,
        "ball_norm": first.ball_norm if table_id != "7.5" else "sup,one",
        "edge_norm": first.edge_norm if table_id != "7.5" else "sup,one",
        "zoom": repr(first.zoom),
        "shift": f"{first.shift[0]!r},{first.shift[1]!r}",
        "tol": repr(tol),
    }
    return ErrorTable(row_kind="row" if table_id == "7.5" else "k",
                      row_labels=labels, cols=n_list, cells=cells,
                      metadata=metadata)


def slot_experiments(n: int, k: int, eps=None, variant: str = "both_boundaries",
                     tol: float = 1e-9):
    """Solve the slotted-domain problem with geodesic-cone boundary data.

    The data is the graph-geodesic cone from the point ``(1/2, 0)``; the
    Dirichlet set is either the union of the outer frame and the ring
    around the slot (``both_boundaries``) or the outer frame alone
    (``outer_only``).  Returns ``(cone, solution, report)`` with the report
    carrying the sup gap from the cone and the mirror-symmetry defect.
    """
    net, meta = build_slot_domain(n, k, eps)
    cone = geodesic_cone(net, (0.5, 0.0))
    S = meta.dirichlet(variant)
    problem = dirichlet_problem(net, S, cone[S], modulus="lipschitz")
    u, rep = solve(problem, tol=tol)
    mirror = meta.mirror_permutation()
    report = {
        "n": n,
        "k": k,
        "eps": float(meta.eps),
        "variant": variant,
        "sup_gap_from_cone": float(np.max(np.abs(u - cone))),
        "mirror_gap": float(np.max(np.abs(u - u[mirror]))),
        "solve": rep,
    }
    return cone, u, report


# -- ball-mean expansion ------------------------------------------------------------


@dataclass(frozen=True)
class ConsistencyReport:
    """Measured ``(max/2 + min/2 - u) / h^2`` ratios over shrinking balls."""

    fn_id: str
    point: tuple
    hs: tuple
    ratios: tuple
    infinity_laplacian: float
    extrapolated: float

    @property
    def constant(self):
        """Ratio of the extrapolated limit to the infinity Laplacian."""
        if self.infinity_laplacian == 0.0:
            return None
        return self.extrapolated / self.infinity_laplacian


def _circle_extremum(fn, x, y, h, sign, n_angles):
    """Extremum of ``fn`` on the circle of radius h, refined to round-off."""
    theta = np.linspace(0.0, 2.0 * np.pi, n_angles, endpoint=False)
    vals = sign * fn(x + h * np.cos(theta), y + h * np.sin(theta))
    i = int(np.argmax(vals))
    step = 2.0 * np.pi / n_angles
    a, b = theta[i] - step, theta[i] + step
    gold = (np.sqrt(5.0) - 1.0) / 2.0

    def g(t):
        return sign * fn(x + h * np.cos(t), y + h * np.sin(t))

    c, d = b - gold * (b - a), a + gold * (b - a)
    gc, gd = g(c), g(d)
    for _ in range(120):
        if gc > gd:
            b, d, gd = d, c, gc
            c = b - gold * (b - a)
            gc = g(c)
        else:
            a, c, gc = c, d, gd
            d = a + gold * (b - a)
            gd = g(d)
        if b - a < 1e-13:
            break
    return sign * g(0.5 * (a + b))


def consistency_check(fn, x: float, y: float, h_list=None,
                      n_angles: int = 4096) -> ConsistencyReport:
    """Expansion ratios of the half-max-plus-half-min ball mean at a point.

    For each radius ``h`` the maximum and minimum of the function over the
    circle of radius ``h`` (dense angular sampling plus golden-section
    refinement; with a nonzero gradient the ball extrema sit on the circle)
    give the ratio ``(max/2 + min/2 - u(x)) / h^2``.  The limit constant is
    estimated by Richardson extrapolation of the two smallest radii and
    compared against the closed-form infinity Laplacian of the function.
    Requires a nonzero gradient at the point.
    """
    if isinstance(fn, str):
        fn = SMOOTH_FUNCTIONS[fn]
    hs = tuple(h_list) if h_list else (0.2, 0.1, 0.05, 0.025)
    if len(hs) < 2 or any(h <= 0 for h in hs):
        raise ValueError("need at least two positive radii")
    g = np.asarray(fn.grad(x, y), dtype=float)
    if np.hypot(*g) < 1e-12:
        raise ZeroGradient(f"{fn.id} has a critical point at ({x}, {y})")
    dinf = fn.infinity_laplacian(x, y)
    center = float(fn.fn(x, y))
    ratios = []
    for h in hs:
        top = _circle_extremum(fn.fn, x, y, h, +1.0, n_angles)
        bot = _circle_extremum(fn.fn, x, y, h, -1.0, n_angles)
        ratios.append(float((0.5 * top + 0.5 * bot - center) / (h * h)))
    # eliminate the O(h) term from the two smallest radii
    h1, h2 = hs[-2], hs[-1]
    r1, r2 = ratios[-2], ratios[-1]
    extrapolated = r2 + (r2 - r1) * h2 / (h1 - h2)
    return ConsistencyReport(fn_id=fn.id, point=(x, y), hs=hs,
                             ratios=tuple(ratios), infinity_laplacian=dinf,
                             extrapolated=float(extrapolated))
