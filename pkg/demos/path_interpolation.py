"""Smallest possible example: extending two values along a path.

Three nodes on a line, data 0 and 2 at the ends.  The unique solution of
the nodal minimax equation interpolates linearly, the McShane start is
already the solution here, and the ambient lift evaluates the extension
between nodes.
"""

import numpy as np

from amlenet import (
    build_network,
    dirichlet_problem,
    extend_to_point,
    geodesic_matrix,
    mcshane_extension,
    read_network,
    solve,
    write_network,
)

net = build_network(coords=[[0.0, 0.0], [1.0, 0.0], [2.0, 0.0]],
                    adjacency=[[1], [0, 2], [1]])
print(f"network: {net.n_nodes} nodes, {net.n_edges} edges")
print("geodesic distances:\n", geodesic_matrix(net).d_g)

problem = dirichlet_problem(net, [0, 2], [0.0, 2.0])
print("derived modulus: slope", problem.modulus.tail_slope, "per unit distance")

u0 = mcshane_extension(problem)
print("McShane start:", u0)

u, report = solve(problem, tol=1e-12)
print("solution:", u)
print(f"sweeps={report.iterations} residual={report.final_residual:.1e} "
      f"monotone={report.monotone}")

# evaluate the extension off the nodes
for x in (0.5, 1.25, 1.9):
    print(f"lift at ({x}, 0): {extend_to_point(problem, u, (x, 0.0)):.4f}")

# the network round-trips through the text format
write_network(net, "/tmp/path_demo.net")
again = read_network("/tmp/path_demo.net")
assert np.array_equal(again.indices, net.indices)
print("network file round-trip ok")
