"""Lipschitz constants and least concave moduli of continuity.

A modulus of continuity is represented piecewise-linearly: breakpoints
``(t_0, w_0) = (0, 0), (t_1, w_1), ...`` with strictly increasing ``t``,
nondecreasing ``w`` and strictly decreasing chord slopes, plus a linear
tail beyond the last breakpoint.  The least concave majorant of sampled
increments is exactly of this form, so the representation is closed under
everything the solver needs.
"""

from dataclasses import dataclass

import numpy as np

from .errors import DuplicatePoints, NegativeArgument, SingleSample

__all__ = [
    "ModulusFn",
    "linear_modulus",
    "lipschitz_constant",
    "least_concave_modulus",
    "modulus_sup_distance",
]


@dataclass(frozen=True)
class ModulusFn:
    """Concave, nondecreasing modulus of continuity with ``w(0) = 0``.

    Parameters
    ----------
    ts, ws : ndarray
        Breakpoint abscissae and values. ``ts[0] = ws[0] = 0``.
    tail_slope : float
        Slope used beyond ``ts[-1]``; at most the last chord slope.
    """

    ts: np.ndarray
    ws: np.ndarray
    tail_slope: float

    def __post_init__(self):
        ts = np.atleast_1d(np.asarray(self.ts, dtype=float))
        ws = np.atleast_1d(np.asarray(self.ws, dtype=float))
        object.__setattr__(self, "ts", ts)
        object.__setattr__(self, "ws", ws)
        if ts.shape != ws.shape or ts.ndim != 1 or ts.size == 0:
            raise ValueError("breakpoints must be two 1-d arrays of equal length")
        if ts[0] != 0.0 or ws[0] != 0.0:
            raise ValueError("modulus must start at (0, 0)")
        if ts.size > 1:
            dt = np.diff(ts)
            if np.any(dt <= 0):
                raise ValueError("breakpoint abscissae must increase strictly")
            slopes = np.diff(ws) / dt
            if np.any(slopes < -1e-12):
                raise ValueError("modulus must be nondecreasing")
            if np.any(np.diff(slopes) >= 1e-12):
                raise ValueError("chord slopes must decrease (concavity)")
            if self.tail_slope > slopes[-1] + 1e-12:
                raise ValueError("tail slope exceeds the last chord slope")
        if self.tail_slope < 0:
            raise ValueError("tail slope must be nonnegative")

    def __call__(self, t):
        """Evaluate at ``t`` (scalar or array); raises on negative input."""
        t = np.asarray(t, dtype=float)
        if np.any(t < 0):
            raise NegativeArgument("modulus argument must be nonnegative")
        out = np.interp(t, self.ts, self.ws)
        last_t, last_w = self.ts[-1], self.ws[-1]
        out = np.where(t > last_t, last_w + self.tail_slope * (t - last_t), out)
        return float(out) if out.ndim == 0 else out

    def to_dict(self):
        """JSON-ready form: breakpoint pairs plus the tail slope."""
        return {
            "breakpoints": [[float(t), float(w)] for t, w in zip(self.ts, self.ws)],
            "tail_slope": float(self.tail_slope),
        }

    @classmethod
    def from_dict(cls, d):
        pts = np.asarray(d["breakpoints"], dtype=float)
        return cls(pts[:, 0], pts[:, 1], float(d["tail_slope"]))


def linear_modulus(kappa: float) -> ModulusFn:
    """The Lipschitz modulus ``t -> kappa * t``."""
    if kappa < 0 or not np.isfinite(kappa):
        raise ValueError("Lipschitz constant must be finite and nonnegative")
    return ModulusFn(np.zeros(1), np.zeros(1), float(kappa))


def _increment_pairs(values, dist):
    values = np.asarray(values, dtype=float)
    dist = np.asarray(dist, dtype=float)
    m = values.size
    if m < 2:
        raise SingleSample("need at least two samples")
    if dist.shape != (m, m):
        raise ValueError("dist must be an (m, m) matrix of pairwise distances")
    iu, ju = np.triu_indices(m, k=1)
    d = dist[iu, ju]
    g = np.abs(values[iu] - values[ju])
    zero = d <= 0
    if np.any(zero & (g > 0)):
        raise DuplicatePoints("distinct values at zero distance")
    return d[~zero], g[~zero]


def lipschitz_constant(values, dist) -> float:
    """Largest difference quotient ``|f(x) - f(y)| / d(x, y)`` over sample pairs.

    ``values`` is a length-m vector of samples and ``dist`` the matching
    (m, m) distance matrix.  Pairs at zero distance with equal values are
    ignored; with distinct values they raise :class:`DuplicatePoints`.
    """
    d, g = _increment_pairs(values, dist)
    if d.size == 0:
        return 0.0
    return float(np.max(g / d))


def least_concave_modulus(values, dist) -> ModulusFn:
    """Least concave nondecreasing majorant of the sampled increments.

    Builds the upper concave envelope of the points ``(d(x,y), |f(x)-f(y)|)``
    together with the origin.  The result dominates every sampled pair and
    touches at least one; beyond the largest sampled distance it continues
    linearly with the final hull slope (flat once the hull would bend down).
    """
    d, g = _increment_pairs(values, dist)
    if d.size == 0:
        return linear_modulus(0.0)
    order = np.argsort(d, kind="stable")
    d, g = d[order], g[order]
    # one point per distinct abscissa: the largest increment
    keep_t, keep_w = [0.0], [0.0]
    for t, w in zip(d, g):
        if t == keep_t[-1]:
            keep_w[-1] = max(keep_w[-1], w)
        else:
            keep_t.append(float(t))
            keep_w.append(float(w))
    # upper hull by monotone chain (strict right turns only)
    hull = []
    for p in zip(keep_t, keep_w):
        while len(hull) >= 2:
            (t0, w0), (t1, w1) = hull[-2], hull[-1]
            if (w1 - w0) * (p[0] - t1) <= (p[1] - w1) * (t1 - t0):
                hull.pop()
            else:
                break
        hull.append(p)
    ts = np.array([p[0] for p in hull])
    ws = np.array([p[1] for p in hull])
    slopes = np.diff(ws) / np.diff(ts)
    # cut where the hull stops rising; a nondecreasing majorant is flat there
    rising = np.nonzero(slopes <= 0)[0]
    if rising.size:
        stop = rising[0] + 1
        ts, ws = ts[:stop], ws[:stop]
        tail = 0.0
    else:
        tail = float(slopes[-1]) if slopes.size else 0.0
    return ModulusFn(ts, ws, tail)


def modulus_sup_distance(m1: ModulusFn, m2: ModulusFn, horizon: float) -> float:
    """Sup of ``|m1 - m2|`` over ``[0, horizon]``.

    Both functions are piecewise linear, so the supremum is attained on the
    union of their breakpoints and the horizon; a dense grid is added anyway
    for robustness.
    """
    if horizon <= 0:
        raise ValueError("horizon must be positive")
    grid = np.concatenate([m1.ts, m2.ts, np.linspace(0.0, horizon, 1025)])
    grid = np.unique(grid[grid <= horizon])
    grid = np.append(grid, horizon) if grid[-1] < horizon else grid
    return float(np.max(np.abs(m1(grid) - m2(grid))))
