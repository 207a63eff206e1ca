import numpy as np
import pytest
from scipy.sparse.csgraph import minimum_spanning_tree

from amlenet import build_network, dirichlet_problem


def random_geometric_network(rng, n_nodes, radius_factor=1.2):
    """Connected random geometric graph with Euclidean edge lengths."""
    pts = rng.uniform(size=(n_nodes, 2))
    full = np.sqrt(((pts[:, None, :] - pts[None, :, :]) ** 2).sum(axis=2))
    mst = minimum_spanning_tree(full).toarray()
    radius = radius_factor * mst.max()
    return build_network(coords=pts, radius=radius)


def random_weighted_network(rng, n_nodes, extra_edges=None):
    """Connected random graph with arbitrary positive weights, no coords."""
    if extra_edges is None:
        extra_edges = n_nodes
    adjacency = [[] for _ in range(n_nodes)]
    weights = {}

    def link(a, b):
        if a == b or b in adjacency[a]:
            return
        adjacency[a].append(b)
        adjacency[b].append(a)
        weights[(a, b)] = float(rng.uniform(0.1, 2.0))

    order = rng.permutation(n_nodes)
    for i in range(1, n_nodes):
        link(int(order[i]), int(order[rng.integers(0, i)]))
    for _ in range(extra_edges):
        link(int(rng.integers(0, n_nodes)), int(rng.integers(0, n_nodes)))
    return build_network(adjacency=adjacency, weights=weights)


def random_problem(rng, net, n_boundary=None, modulus="lipschitz"):
    n = net.n_nodes
    if n_boundary is None:
        n_boundary = int(rng.integers(2, max(3, n // 3)))
    nodes = rng.choice(n, size=min(n_boundary, n - 1), replace=False)
    values = rng.normal(size=nodes.size)
    return dirichlet_problem(net, nodes, values, modulus=modulus)


@pytest.fixture
def path3():
    """Unit path a - b - c with Dirichlet data 0, 2 at the ends."""
    net = build_network(coords=[[0.0, 0.0], [1.0, 0.0], [2.0, 0.0]],
                        adjacency=[[1], [0, 2], [1]])
    return dirichlet_problem(net, [0, 2], [0.0, 2.0])
