"""Finite metric networks: validated adjacency, geodesics, set distances.

A network is a finite node set with symmetric neighborhoods and positive
edge lengths.  Nodes are dense integers ``0..N-1``; adjacency is stored in
CSR form (``indptr``, ``indices``, ``lengths``) with neighbor lists sorted
per row, which is what the solver kernels consume directly.  Optional node
coordinates and an ambient norm give the underlying point metric for
networks built from metric balls.
"""

from dataclasses import dataclass

import numpy as np
from scipy import sparse
from scipy.sparse.csgraph import connected_components, dijkstra
from scipy.spatial import cKDTree

from .errors import (
    AsymmetricAdjacency,
    DisconnectedGraph,
    EmptyNeighborhood,
    EmptySet,
    EmptyTargetSet,
    NonpositiveEdge,
)

__all__ = [
    "Network",
    "DistanceMatrix",
    "build_network",
    "geodesic_matrix",
    "geodesic_rows",
    "ambient_matrix",
    "pairwise_distance",
    "has_descent_property",
    "hausdorff_distance",
    "subnetwork",
    "write_network",
    "read_network",
]

_NORM_P = {"euclid": 2.0, "sup": np.inf, "one": 1.0}


def pairwise_distance(p, q, norm="euclid"):
    """Distance matrix between point sets ``p`` (m,2) and ``q`` (k,2)."""
    p = np.atleast_2d(np.asarray(p, dtype=float))
    q = np.atleast_2d(np.asarray(q, dtype=float))
    diff = np.abs(p[:, None, :] - q[None, :, :])
    if norm == "euclid":
        return np.sqrt((diff ** 2).sum(axis=2))
    if norm == "sup":
        return diff.max(axis=2)
    if norm == "one":
        return diff.sum(axis=2)
    raise ValueError(f"unknown norm {norm!r}")


def _rowwise_distance(p, q, norm):
    diff = np.abs(np.asarray(p, dtype=float) - np.asarray(q, dtype=float))
    if norm == "euclid":
        return np.sqrt((diff ** 2).sum(axis=1))
    if norm == "sup":
        return diff.max(axis=1)
    if norm == "one":
        return diff.sum(axis=1)
    raise ValueError(f"unknown norm {norm!r}")


@dataclass(frozen=True)
class Network:
    """Immutable finite metric network in CSR adjacency form."""

    indptr: np.ndarray
    indices: np.ndarray
    lengths: np.ndarray
    coords: np.ndarray | None = None
    ambient_norm: str | None = None

    @property
    def n_nodes(self) -> int:
        return self.indptr.size - 1

    @property
    def n_edges(self) -> int:
        """Number of undirected edges."""
        return self.indices.size // 2

    def neighbors(self, x: int) -> np.ndarray:
        return self.indices[self.indptr[x]:self.indptr[x + 1]]

    def neighbor_lengths(self, x: int) -> np.ndarray:
        return self.lengths[self.indptr[x]:self.indptr[x + 1]]

    def edge_length(self, x: int, y: int) -> float:
        row = self.neighbors(x)
        pos = np.searchsorted(row, y)
        if pos == row.size or row[pos] != y:
            raise KeyError(f"{y} is not a neighbor of {x}")
        return float(self.neighbor_lengths(x)[pos])

    def csr(self) -> sparse.csr_matrix:
        n = self.n_nodes
        return sparse.csr_matrix((self.lengths, self.indices, self.indptr), shape=(n, n))


@dataclass(frozen=True)
class DistanceMatrix:
    """All-pairs geodesic distances, plus the ambient metric when known."""

    d_g: np.ndarray
    d_ambient: np.ndarray | None = None


def _csr_from_pairs(n, rows, cols, vals):
    order = np.lexsort((cols, rows))
    rows, cols, vals = rows[order], cols[order], vals[order]
    indptr = np.searchsorted(rows, np.arange(n + 1)).astype(np.int64)
    return indptr, cols.astype(np.int64), vals.astype(np.float64)


def _validate(indptr, indices, lengths, n):
    if n < 2:
        raise EmptyNeighborhood("a network needs at least two nodes")
    deg = np.diff(indptr)
    if np.any(deg == 0):
        bad = int(np.argmax(deg == 0))
        raise EmptyNeighborhood(f"node {bad} has no neighbors")
    if np.any(~np.isfinite(lengths)) or np.any(lengths <= 0):
        raise NonpositiveEdge("edge lengths must be positive and finite")
    mat = sparse.csr_matrix((lengths, indices, indptr), shape=(n, n))
    if (abs(mat - mat.T) > 0).nnz:
        raise AsymmetricAdjacency("adjacency or edge lengths are not symmetric")
    ncomp, _ = connected_components(mat, directed=False)
    if ncomp != 1:
        raise DisconnectedGraph(f"{ncomp} connected components")


def build_network(coords=None, radius=None, adjacency=None, weights=None,
                  ball_norm="euclid", edge_norm="euclid") -> Network:
    """Build and validate a network.

    Two modes:

    * metric balls: pass ``coords`` (N,2) and ``radius``; nodes within the
      closed ``ball_norm``-ball of each other become neighbors and edge
      lengths are their ``edge_norm`` distances.
    * explicit adjacency: pass ``adjacency`` as a sequence of neighbor lists
      (entry ``i`` lists the neighbors of node ``i``; self entries are
      ignored).  Edge lengths come from ``weights`` — a ``{(i, j): w}``
      mapping — or, if omitted, from coordinates.

    Raises the specific validation error on any violation: empty
    neighborhoods, asymmetric adjacency, nonpositive edges, or a
    disconnected graph.
    """
    if coords is not None:
        coords = np.asarray(coords, dtype=float)
    if adjacency is None:
        if coords is None or radius is None:
            raise ValueError("need coords and radius, or an explicit adjacency")
        n = coords.shape[0]
        if n < 2:
            raise EmptyNeighborhood("a network needs at least two nodes")
        tree = cKDTree(coords)
        pairs = tree.query_pairs(radius, p=_NORM_P[ball_norm], output_type="ndarray")
        if pairs.size == 0:
            raise EmptyNeighborhood("no pair of nodes within the given radius")
        rows = np.concatenate([pairs[:, 0], pairs[:, 1]])
        cols = np.concatenate([pairs[:, 1], pairs[:, 0]])
        vals = _rowwise_distance(coords[pairs[:, 0]], coords[pairs[:, 1]], edge_norm)
        vals = np.concatenate([vals, vals])
        indptr, indices, lengths = _csr_from_pairs(n, rows, cols, vals)
        _validate(indptr, indices, lengths, n)
        return Network(indptr, indices, lengths, coords, edge_norm)

    n = len(adjacency)
    rows, cols = [], []
    for i, nbrs in enumerate(adjacency):
        for j in nbrs:
            if j == i:
                continue
            rows.append(i)
            cols.append(int(j))
    rows = np.asarray(rows, dtype=np.int64)
    cols = np.asarray(cols, dtype=np.int64)
    if weights is not None:
        wmap = {}
        for (i, j), w in weights.items():
            wmap[(i, j)] = float(w)
            wmap.setdefault((j, i), float(w))
            if wmap[(j, i)] != float(w):
                raise AsymmetricAdjacency(f"weights for edge ({i},{j}) disagree")
        try:
            vals = np.array([wmap[(i, j)] for i, j in zip(rows, cols)])
        except KeyError as exc:
            raise NonpositiveEdge(f"missing weight for edge {exc}") from None
    elif coords is not None:
        vals = _rowwise_distance(coords[rows], coords[cols], edge_norm)
    else:
        raise ValueError("explicit adjacency needs weights or coords")
    indptr, indices, lengths = _csr_from_pairs(n, rows, cols, vals)
    _validate(indptr, indices, lengths, n)
    ambient = edge_norm if coords is not None and weights is None else None
    return Network(indptr, indices, lengths, coords, ambient)


def geodesic_rows(net: Network, sources) -> np.ndarray:
    """Geodesic distances from each source node to every node (len(sources), N)."""
    sources = np.asarray(sources, dtype=np.int64)
    return dijkstra(net.csr(), directed=False, indices=sources)


def ambient_matrix(net: Network) -> np.ndarray | None:
    if net.coords is None or net.ambient_norm is None:
        return None
    return pairwise_distance(net.coords, net.coords, net.ambient_norm)


def geodesic_matrix(net: Network) -> DistanceMatrix:
    """All-pairs geodesic matrix (one shortest-path run per source node)."""
    d_g = geodesic_rows(net, np.arange(net.n_nodes))
    return DistanceMatrix(d_g=d_g, d_ambient=ambient_matrix(net))


def _set_distance(net: Network, targets, metric):
    targets = np.asarray(targets, dtype=np.int64)
    if metric == "geodesic":
        return dijkstra(net.csr(), directed=False, indices=targets, min_only=True)
    if metric == "ambient":
        amb = ambient_matrix(net)
        if amb is None:
            raise ValueError("network has no ambient metric")
        return amb[:, targets].min(axis=1)
    raise ValueError(f"unknown metric {metric!r}")


def has_descent_property(net: Network, targets, metric="geodesic"):
    """Check that every node off ``targets`` has a strictly closer neighbor.

    Returns ``(True, None)`` when, for each node at positive distance from
    the target set, some neighbor is strictly closer to the set under the
    chosen metric (``"geodesic"`` or ``"ambient"``); otherwise
    ``(False, witness_node)``.
    """
    targets = np.asarray(targets, dtype=np.int64)
    if targets.size == 0:
        raise EmptyTargetSet("target set is empty")
    d = _set_distance(net, targets, metric)
    nbr_min = np.minimum.reduceat(d[net.indices], net.indptr[:-1])
    bad = (d > 0) & ~(nbr_min < d)
    if np.any(bad):
        return False, int(np.argmax(bad))
    return True, None


def hausdorff_distance(a, b, dist) -> float:
    """Hausdorff distance between node sets under a pairwise distance matrix."""
    a = np.asarray(a, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64)
    if a.size == 0 or b.size == 0:
        raise EmptySet("Hausdorff distance needs nonempty sets")
    dist = np.asarray(dist, dtype=float)
    d_ab = dist[np.ix_(a, b)]
    return float(max(d_ab.min(axis=1).max(), d_ab.min(axis=0).max()))


def subnetwork(net: Network, nodes):
    """Induced subnetwork on ``nodes``; returns ``(sub, mapping)``.

    ``mapping`` sends old node ids to new dense ids (-1 elsewhere).  The
    subnetwork is validated, so carving a disconnected or isolated piece
    raises the usual errors.
    """
    nodes = np.unique(np.asarray(nodes, dtype=np.int64))
    mapping = -np.ones(net.n_nodes, dtype=np.int64)
    mapping[nodes] = np.arange(nodes.size)
    rows, cols, vals = [], [], []
    for x in nodes:
        nbrs = net.neighbors(x)
        keep = mapping[nbrs] >= 0
        rows.append(np.full(int(keep.sum()), mapping[x]))
        cols.append(mapping[nbrs[keep]])
        vals.append(net.neighbor_lengths(x)[keep])
    indptr, indices, lengths = _csr_from_pairs(
        nodes.size, np.concatenate(rows), np.concatenate(cols), np.concatenate(vals))
    _validate(indptr, indices, lengths, nodes.size)
    coords = net.coords[nodes] if net.coords is not None else None
    return Network(indptr, indices, lengths, coords, net.ambient_norm), mapping


# -- text file format ----------------------------------------------------------
#
# Line-oriented:
#   nodes N dim D
#   <N coordinate lines, D floats each>     (or the single line: none)
#   <N adjacency lines:  i: j1 j2 ...>
#   edges                                    (optional section)
#   i j w                                    (one triple per line)
#
# With coordinates and no edges section, lengths are recomputed as Euclidean
# distances; an edges section overrides them.


def write_network(net: Network, path) -> None:
    """Write in the line-oriented text format described in the module."""
    lines = []
    if net.coords is not None:
        lines.append(f"nodes {net.n_nodes} dim {net.coords.shape[1]}")
        for row in net.coords:
            lines.append(" ".join(repr(float(v)) for v in row))
    else:
        lines.append(f"nodes {net.n_nodes} dim 0")
        lines.append("none")
    for i in range(net.n_nodes):
        lines.append(f"{i}: " + " ".join(str(int(j)) for j in net.neighbors(i)))
    euclidean = (net.coords is not None and net.ambient_norm == "euclid")
    if not euclidean:
        lines.append("edges")
        for i in range(net.n_nodes):
            for j, w in zip(net.neighbors(i), net.neighbor_lengths(i)):
                if i < j:
                    lines.append(f"{i} {j} {repr(float(w))}")
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")


def read_network(path) -> Network:
    """Parse the text format written by :func:`write_network`."""
    with open(path) as fh:
        lines = [ln.strip() for ln in fh if ln.strip()]
    head = lines[0].split()
    if head[0] != "nodes":
        raise ValueError("expected header 'nodes N dim D'")
    n, dim = int(head[1]), int(head[3])
    pos = 1
    coords = None
    if lines[pos] == "none":
        pos += 1
    else:
        coords = np.array([[float(v) for v in lines[pos + i].split()] for i in range(n)])
        if coords.shape != (n, dim):
            raise ValueError("coordinate block does not match header")
        pos += n
    adjacency = []
    for i in range(n):
        left, _, right = lines[pos + i].partition(":")
        if int(left) != i:
            raise ValueError(f"adjacency line {i} mislabeled")
        adjacency.append([int(tok) for tok in right.split()])
    pos += n
    weights = None
    if pos < len(lines):
        if lines[pos] != "edges":
            raise ValueError("expected optional 'edges' section")
        weights = {}
        for ln in lines[pos + 1:]:
            i, j, w = ln.split()
            weights[(int(i), int(j))] = float(w)
    return build_network(coords=coords, adjacency=adjacency, weights=weights)
