"""Concave moduli of continuity from sampled data.

The least concave nondecreasing majorant of the increments |f(x) - f(y)|
against distances d(x, y) is a piecewise-linear function; it is what the
solver's McShane start consumes, and it obeys two stability inequalities:
perturbing the data moves the modulus by at most twice the perturbation,
and restricting the data moves it by at most four times the modulus at the
Hausdorff distance of the restriction sets.
"""

import json

import numpy as np

from amlenet import (
    ModulusFn,
    geodesic_matrix,
    hausdorff_distance,
    least_concave_modulus,
    lipschitz_constant,
    modulus_sup_distance,
)
from amlenet.network import build_network

rng = np.random.default_rng(1)
pts = np.sort(rng.uniform(0, 2, size=6))
net = build_network(coords=np.column_stack([pts, np.zeros(6)]),
                    adjacency=[[1], [0, 2], [1, 3], [2, 4], [3, 5], [4]])
d = geodesic_matrix(net).d_g
f = np.sin(2.0 * pts) + 0.3 * pts

kappa = lipschitz_constant(f, d)
w = least_concave_modulus(f, d)
print("samples:", np.round(f, 4))
print("Lipschitz constant:", round(kappa, 4))
print("modulus breakpoints:", [(round(float(t), 4), round(float(v), 4))
                               for t, v in zip(w.ts, w.ws)])
print("tail slope:", round(w.tail_slope, 4))

# serialization round-trip
blob = json.dumps(w.to_dict())
back = ModulusFn.from_dict(json.loads(blob))
print("JSON round-trip exact:", bool(np.all(back(np.linspace(0, 3, 50))
                                            == w(np.linspace(0, 3, 50)))))

# perturbation stability: sup |w(f) - w(g)| <= 2 sup |f - g|
g = f + rng.uniform(-0.05, 0.05, size=f.size)
wg = least_concave_modulus(g, d)
lhs = modulus_sup_distance(w, wg, horizon=float(d.max()))
print(f"perturbation: sup|w(f)-w(g)| = {lhs:.4f} <= "
      f"2 sup|f-g| = {2 * np.max(np.abs(f - g)):.4f}")

# restriction stability against the Hausdorff distance of the index sets
a, b = np.array([0, 1, 2, 3]), np.array([2, 3, 4, 5])
wa = least_concave_modulus(f[a], d[np.ix_(a, a)])
wb = least_concave_modulus(f[b], d[np.ix_(b, b)])
delta = hausdorff_distance(a, b, d)
print(f"restriction: Hausdorff distance {delta:.4f}, "
      f"bound 4*w(f; delta) = {4 * w(delta):.4f}")
