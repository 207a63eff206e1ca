"""Square-lattice test domains: plain grids, a slotted domain, mesh quality.

Grids live on ``[0, 1]^2`` (optionally zoomed and shifted): nodes at
``(i h, j h)`` with ``h = 1/n``, neighborhoods the closed norm-ball of
radius ``k h``, and edge lengths measured in a configurable norm.  The
slotted domain removes an open horizontal rectangle from the square and
keeps only line-of-sight edges, so the graph geodesic approximates the
domain's intrinsic metric.
"""

from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from scipy.spatial import cKDTree

from .errors import NoCoordinates
from .network import (
    _NORM_P,
    Network,
    _csr_from_pairs,
    _rowwise_distance,
    _validate,
    geodesic_rows,
    has_descent_property,
    pairwise_distance,
)

__all__ = [
    "GridSpec",
    "MeshQuality",
    "SlotDomain",
    "build_grid",
    "build_slot_domain",
    "geodesic_cone",
    "mesh_quality",
    "grid_probe_points",
    "grid_boundary_probe",
    "rect_detour_distance",
    "rect_detour_matrix",
]

_NORMS = ("euclid", "sup", "one")


def _offsets(k: int, norm: str):
    """Integer lattice offsets inside the closed norm-ball of radius k."""
    offs = []
    for di in range(-k, k + 1):
        for dj in range(-k, k + 1):
            if di == 0 and dj == 0:
                continue
            if norm == "sup":
                ok = max(abs(di), abs(dj)) <= k
            elif norm == "one":
                ok = abs(di) + abs(dj) <= k
            else:
                ok = di * di + dj * dj <= k * k
            if ok:
                offs.append((di, dj))
    return offs


@dataclass(frozen=True)
class GridSpec:
    """Parameters of a square-lattice domain.

    ``zoom`` and ``shift`` map the unit square: node coordinates are
    ``shift + zoom * (i h, j h)``.  ``boundary`` selects the Dirichlet set:
    the lattice points on the frame (``thin``) or the full frame band of
    width ``k h`` (``thick``; with ``k = n/2`` the band is the whole grid
    and the problem degenerates to pure boundary data).
    """

    n: int
    k: int = 1
    ball_norm: str = "sup"
    edge_norm: str = "euclid"
    boundary: str = "thin"
    zoom: float = 1.0
    shift: tuple = (0.0, 0.0)

    def __post_init__(self):
        if self.n < 2:
            raise ValueError("n must be at least 2")
        if not 1 <= self.k <= self.n // 2:
            raise ValueError("k must satisfy 1 <= k <= n/2")
        if self.ball_norm not in _NORMS or self.edge_norm not in _NORMS:
            raise ValueError("norms must be one of 'euclid', 'sup', 'one'")
        if self.boundary not in ("thin", "thick"):
            raise ValueError("boundary must be 'thin' or 'thick'")
        if not (np.isfinite(self.zoom) and self.zoom > 0):
            raise ValueError("zoom must be positive")

    @property
    def h(self) -> float:
        return 1.0 / self.n


def build_grid(spec: GridSpec):
    """Build the lattice network and its Dirichlet set; returns ``(net, S)``.

    Symmetry and connectivity are re-validated, and the Dirichlet set is
    checked to admit strict descent in the ambient metric.
    """
    n, k, m = spec.n, spec.k, spec.n + 1
    step = spec.zoom * spec.h
    ii, jj = np.meshgrid(np.arange(m), np.arange(m), indexing="ij")
    ii, jj = ii.ravel(), jj.ravel()
    coords = np.column_stack([spec.shift[0] + ii * step, spec.shift[1] + jj * step])
    rows, cols, vals = [], [], []
    for di, dj in _offsets(k, spec.ball_norm):
        w = _rowwise_distance(np.array([[di * step, dj * step]]),
                              np.array([[0.0, 0.0]]), spec.edge_norm)[0]
        tgt_i, tgt_j = ii + di, jj + dj
        ok = (tgt_i >= 0) & (tgt_i < m) & (tgt_j >= 0) & (tgt_j < m)
        rows.append(np.nonzero(ok)[0])
        cols.append(tgt_i[ok] * m + tgt_j[ok])
        vals.append(np.full(int(ok.sum()), w))
    indptr, indices, lengths = _csr_from_pairs(
        m * m, np.concatenate(rows), np.concatenate(cols), np.concatenate(vals))
    _validate(indptr, indices, lengths, m * m)
    net = Network(indptr, indices, lengths, coords, spec.edge_norm)
    if spec.boundary == "thin":
        on_frame = (ii == 0) | (ii == n) | (jj == 0) | (jj == n)
    else:
        margin = np.minimum(np.minimum(ii, n - ii), np.minimum(jj, n - jj))
        on_frame = margin <= k
    dirichlet = np.nonzero(on_frame)[0].astype(np.int64)
    if dirichlet.size < m * m:
        ok, witness = has_descent_property(net, dirichlet, metric="ambient")
        if not ok:
            raise ValueError(f"grid lacks ambient descent toward its boundary "
                             f"(witness node {witness})")
    return net, dirichlet


# -- slotted (non-convex) domain -------------------------------------------------


def _segment_hits_open_rect(ax, ay, bx, by, rect):
    """Exact test: does the open segment cross the open axis-aligned rectangle?

    Endpoints are integer lattice coordinates and the rectangle bounds are
    Fractions, so grazing contact (touching an edge or corner) is decided
    exactly and counts as visible.
    """
    tlo, thi = Fraction(0), Fraction(1)
    for p0, p1, lo, hi in ((ax, bx, rect[0], rect[1]), (ay, by, rect[2], rect[3])):
        d = p1 - p0
        if d == 0:
            if not lo < p0 < hi:
                return False
        else:
            t0 = Fraction(lo - p0, d)
            t1 = Fraction(hi - p0, d)
            if t0 > t1:
                t0, t1 = t1, t0
            if t0 > tlo:
                tlo = t0
            if t1 < thi:
                thi = t1
            if tlo >= thi:
                return False
    return tlo < thi


@dataclass(frozen=True)
class SlotDomain:
    """Metadata of a slotted grid: lattice ids, boundary masks, slot bounds."""

    n: int
    k: int
    eps: Fraction
    rect: tuple                      # slot bounds in lattice units (Fractions)
    lattice_i: np.ndarray
    lattice_j: np.ndarray
    node_of_lattice: np.ndarray      # (n+1)^2 map, -1 where removed
    inner_ring: np.ndarray           # nodes adjacent to a removed lattice point
    outer_frame: np.ndarray          # nodes on the square's boundary
    removed: int

    def mirror_permutation(self) -> np.ndarray:
        """Node permutation realizing the left-right symmetry x -> 1 - x."""
        m = self.n + 1
        perm = self.node_of_lattice[(self.n - self.lattice_i) * m + self.lattice_j]
        if np.any(perm < 0):
            raise ValueError("domain is not mirror symmetric")
        return perm

    def dirichlet(self, variant: str) -> np.ndarray:
        """Dirichlet node set: ``"both_boundaries"`` or ``"outer_only"``."""
        if variant == "both_boundaries":
            mask = self.inner_ring | self.outer_frame
        elif variant == "outer_only":
            mask = self.outer_frame
        else:
            raise ValueError(f"unknown slot variant {variant!r}")
        return np.nonzero(mask)[0].astype(np.int64)


def build_slot_domain(n: int, k: int, eps=None):
    """Unit square minus an open horizontal slot, line-of-sight edges only.

    The slot is ``]1/4 - eps, 3/4 + eps[ x ]1/2 - eps, 1/2 + eps[``
    (default ``eps = 1/(2n)``, which removes the single lattice row
    segment it covers).  Nodes inside the open slot are dropped; two nodes
    within Euclidean distance ``k/n`` are neighbors iff the open segment
    between them misses the open slot.  Visibility is decided in exact
    rational arithmetic — floating-point grazing decisions would break the
    domain's left-right symmetry.  Returns ``(net, SlotDomain)``.
    """
    eps = Fraction(1, 2 * n) if eps is None else Fraction(eps)
    if not 0 < eps < Fraction(1, 4):
        raise ValueError("eps must lie strictly between 0 and 1/4")
    m = n + 1
    h = 1.0 / n
    rect = (Fraction(n, 4) - n * eps, 3 * Fraction(n, 4) + n * eps,
            Fraction(n, 2) - n * eps, Fraction(n, 2) + n * eps)
    ii, jj = np.meshgrid(np.arange(m), np.arange(m), indexing="ij")
    ii, jj = ii.ravel(), jj.ravel()
    inside = np.zeros(m * m, dtype=bool)
    for p in range(m * m):
        inside[p] = (rect[0] < int(ii[p]) < rect[1]) and (rect[2] < int(jj[p]) < rect[3])
    keep = ~inside
    node_of = -np.ones(m * m, dtype=np.int64)
    node_of[keep] = np.arange(int(keep.sum()))
    ki, kj = ii[keep], jj[keep]
    npts = int(keep.sum())
    offs = _offsets(k, "euclid")
    rows, cols, vals = [], [], []
    for x in range(npts):
        for di, dj in offs:
            ti, tj = int(ki[x]) + di, int(kj[x]) + dj
            if not (0 <= ti <= n and 0 <= tj <= n):
                continue
            y = node_of[ti * m + tj]
            if y < 0:
                continue
            if _segment_hits_open_rect(int(ki[x]), int(kj[x]), ti, tj, rect):
                continue
            rows.append(x)
            cols.append(int(y))
            vals.append(float(np.hypot(di * h, dj * h)))
    indptr, indices, lengths = _csr_from_pairs(
        npts, np.asarray(rows, dtype=np.int64), np.asarray(cols, dtype=np.int64),
        np.asarray(vals))
    _validate(indptr, indices, lengths, npts)
    coords = np.column_stack([ki * h, kj * h])
    net = Network(indptr, indices, lengths, coords, "euclid")
    removed = ~keep
    ring = np.zeros(npts, dtype=bool)
    for di in (-1, 0, 1):
        for dj in (-1, 0, 1):
            if di == 0 and dj == 0:
                continue
            ti, tj = ki + di, kj + dj
            ok = (ti >= 0) & (ti <= n) & (tj >= 0) & (tj <= n)
            hit = np.zeros(npts, dtype=bool)
            hit[ok] = removed[np.where(ok, ti * m + tj, 0)[ok]]
            ring |= hit
    outer = (ki == 0) | (ki == n) | (kj == 0) | (kj == n)
    meta = SlotDomain(n=n, k=k, eps=eps, rect=rect, lattice_i=ki, lattice_j=kj,
                      node_of_lattice=node_of, inner_ring=ring, outer_frame=outer,
                      removed=int(removed.sum()))
    return net, meta


def _segments_blocked(A, B, rect_xy):
    """Vectorized open-segment vs open-rectangle intersection (float)."""
    x0, x1, y0, y1 = (float(v) for v in rect_xy)
    A = np.atleast_2d(A)
    B = np.atleast_2d(B)
    tlo = np.zeros(A.shape[0])
    thi = np.ones(A.shape[0])
    for axis, (lo, hi) in enumerate(((x0, x1), (y0, y1))):
        p0, p1 = A[:, axis], B[:, axis]
        d = p1 - p0
        with np.errstate(divide="ignore", invalid="ignore"):
            t0 = (lo - p0) / d
            t1 = (hi - p0) / d
        swap = t0 > t1
        t0, t1 = np.where(swap, t1, t0), np.where(swap, t0, t1)
        inslab = (p0 > lo) & (p0 < hi)
        par = d == 0
        t0 = np.where(par, np.where(inslab, -np.inf, np.inf), t0)
        t1 = np.where(par, np.where(inslab, np.inf, -np.inf), t1)
        tlo = np.maximum(tlo, t0)
        thi = np.minimum(thi, t1)
    return tlo < thi


def rect_detour_matrix(rect_xy, P, Q) -> np.ndarray:
    """Pairwise intrinsic distances of the slotted square: the Euclidean
    distance when the straight segment misses the open rectangle, else the
    shortest corner route around it.  Shapes: P (m,2), Q (k,2) -> (m,k).
    """
    x0, x1, y0, y1 = (float(v) for v in rect_xy)
    P = np.atleast_2d(np.asarray(P, dtype=float))
    Q = np.atleast_2d(np.asarray(Q, dtype=float))
    corners = np.array([[x0, y0], [x0, y1], [x1, y0], [x1, y1]])
    out = pairwise_distance(P, Q, "euclid")
    ii, jj = np.meshgrid(np.arange(P.shape[0]), np.arange(Q.shape[0]), indexing="ij")
    blocked = _segments_blocked(P[ii.ravel()], Q[jj.ravel()],
                                rect_xy).reshape(out.shape)
    if not blocked.any():
        return out
    bi, bj = np.nonzero(blocked)
    pts_p, pts_q = P[bi], Q[bj]
    npair = bi.size
    # 6-point shortest path per blocked pair: endpoints + 4 corners
    d = np.full((npair, 6, 6), np.inf)
    nodes = [pts_p, pts_q] + [np.broadcast_to(c, (npair, 2)) for c in corners]
    for a in range(6):
        d[:, a, a] = 0.0
        for b in range(a + 1, 6):
            fly = np.hypot(nodes[a][:, 0] - nodes[b][:, 0],
                           nodes[a][:, 1] - nodes[b][:, 1])
            vis = ~_segments_blocked(nodes[a], nodes[b], rect_xy)
            val = np.where(vis, fly, np.inf)
            d[:, a, b] = val
            d[:, b, a] = val
    for via in range(6):
        d = np.minimum(d, d[:, :, via, None] + d[:, None, via, :])
    out[bi, bj] = d[:, 0, 1]
    return out


def rect_detour_distance(rect_xy, p, q) -> float:
    """Shortest distance from ``p`` to ``q`` around an open rectangle."""
    return float(rect_detour_matrix(rect_xy, np.asarray(p)[None, :],
                                    np.asarray(q)[None, :])[0, 0])


def geodesic_cone(net: Network, apex) -> np.ndarray:
    """Geodesic distance field from the node nearest to ``apex``."""
    if net.coords is None:
        raise NoCoordinates("geodesic cone needs coordinates to place the apex")
    apex = np.asarray(apex, dtype=float)
    node = int(np.argmin(((net.coords - apex) ** 2).sum(axis=1)))
    return geodesic_rows(net, [node])[0]


# -- mesh quality ------------------------------------------------------------------


@dataclass(frozen=True)
class MeshQuality:
    """Covering radius, largest neighborhood radius, geodesic-metric gap."""

    r_n: float
    rho_n: float
    dg_minus_d: float


def mesh_quality(net: Network, dirichlet, domain_points, boundary_points,
                 metric="euclid") -> MeshQuality:
    """Fineness measures of a network against its continuum domain.

    ``domain_points`` and ``boundary_points`` are dense samples of the
    domain and of the continuum Dirichlet region.  ``metric`` is the
    ambient metric: a norm name, or a callable ``metric(P, Q)`` returning
    pairwise distances (used for non-convex domains).

    * ``r_n``: max over domain samples of the distance to the nearest node,
      combined with the Hausdorff gap between the Dirichlet nodes and the
      boundary samples;
    * ``rho_n``: largest ambient distance across an edge;
    * ``dg_minus_d``: sup over node pairs of geodesic minus ambient distance.
    """
    if net.coords is None:
        raise NoCoordinates("mesh quality needs node coordinates")
    dirichlet = np.asarray(dirichlet, dtype=np.int64)
    domain_points = np.asarray(domain_points, dtype=float)
    boundary_points = np.asarray(boundary_points, dtype=float)
    if callable(metric):
        amb = metric
        cover = amb(domain_points, net.coords).min(axis=1).max()
        to_nodes = amb(boundary_points, net.coords[dirichlet]).min(axis=1).max()
        from_nodes = amb(net.coords[dirichlet], boundary_points).min(axis=1).max()
    else:
        def amb(P, Q, _norm=metric):
            return pairwise_distance(P, Q, _norm)

        tree = cKDTree(net.coords)
        cover = tree.query(domain_points, p=_NORM_P[metric])[0].max()
        btree = cKDTree(net.coords[dirichlet])
        to_nodes = btree.query(boundary_points, p=_NORM_P[metric])[0].max()
        btree2 = cKDTree(boundary_points)
        from_nodes = btree2.query(net.coords[dirichlet], p=_NORM_P[metric])[0].max()
    r_n = float(max(cover, to_nodes, from_nodes))

    src = np.repeat(np.arange(net.n_nodes), np.diff(net.indptr))
    if callable(metric):
        edge_amb = np.array([amb(net.coords[a][None, :], net.coords[b][None, :])[0, 0]
                             for a, b in zip(src, net.indices)])
    else:
        edge_amb = _rowwise_distance(net.coords[src], net.coords[net.indices], metric)
    rho_n = float(edge_amb.max())

    d_g = geodesic_rows(net, np.arange(net.n_nodes))
    d_amb = amb(net.coords, net.coords)
    dg_minus_d = float(np.max(d_g - d_amb))
    return MeshQuality(r_n=r_n, rho_n=rho_n, dg_minus_d=dg_minus_d)


def grid_probe_points(spec: GridSpec, refine: int = 10) -> np.ndarray:
    """Dense lattice sampling of the (zoomed, shifted) square domain."""
    m = refine * spec.n + 1
    t = spec.shift[0] + spec.zoom * np.linspace(0.0, 1.0, m)
    s = spec.shift[1] + spec.zoom * np.linspace(0.0, 1.0, m)
    gx, gy = np.meshgrid(t, s, indexing="ij")
    return np.column_stack([gx.ravel(), gy.ravel()])


def grid_boundary_probe(spec: GridSpec, refine: int = 10) -> np.ndarray:
    """Dense sampling of the continuum Dirichlet region of a grid.

    Thin boundary: the frame curve of the square.  Thick boundary: the
    frame band of width ``k h``.
    """
    m = refine * spec.n + 1
    t = np.linspace(0.0, 1.0, m)
    if spec.boundary == "thin":
        zero, one = np.zeros(m), np.ones(m)
        pts = np.concatenate([
            np.column_stack([t, zero]), np.column_stack([t, one]),
            np.column_stack([zero, t]), np.column_stack([one, t]),
        ])
    else:
        gx, gy = np.meshgrid(t, t, indexing="ij")
        margin = np.minimum(np.minimum(gx, 1 - gx), np.minimum(gy, 1 - gy))
        band = margin <= spec.k * spec.h + 1e-12
        pts = np.column_stack([gx[band], gy[band]])
    return np.asarray(spec.shift, dtype=float) + spec.zoom * pts
