"""Compiled inner loops for the Gauss-Seidel sweeps.

The nodal value is the minimax of weighted two-point means over the
neighborhood; rows whose running maximum already reaches the current
minimum are abandoned early, which leaves the computed value exact.
"""

import numpy as np
from numba import njit


@njit(cache=True, nogil=True)
def node_value(u, a, b, indices, lengths):
    mu = np.inf
    for i in range(a, b):
        di = lengths[i]
        ui = u[indices[i]]
        m = -np.inf
        for j in range(a, b):
            dj = lengths[j]
            v = (di * u[indices[j]] + dj * ui) / (di + dj)
            if v > m:
                m = v
                if m >= mu:
                    break
        if m < mu:
            mu = m
    return mu


@njit(cache=True, nogil=True)
def sweep_inplace(u, order, indptr, indices, lengths):
    """One sequential sweep; returns (max |change|, max increase)."""
    max_change = 0.0
    max_increase = 0.0
    for oi in range(order.size):
        x = order[oi]
        mu = node_value(u, indptr[x], indptr[x + 1], indices, lengths)
        ch = mu - u[x]
        if ch > max_increase:
            max_increase = ch
        if abs(ch) > max_change:
            max_change = abs(ch)
        u[x] = mu
    return max_change, max_increase


@njit(cache=True, nogil=True)
def residual_max(u, order, indptr, indices, lengths):
    """Sup over the given nodes of |u(x) - value(u; x)|; does not mutate u."""
    worst = 0.0
    for oi in range(order.size):
        x = order[oi]
        mu = node_value(u, indptr[x], indptr[x + 1], indices, lengths)
        r = abs(u[x] - mu)
        if r > worst:
            worst = r
    return worst
