"""Measuring the constant in the half-max-plus-half-min ball expansion.

For a smooth function with nonzero gradient, the quantity

    (max over the h-ball / 2 + min over the h-ball / 2 - u(x)) / h^2

tends to a fixed multiple of the infinity Laplacian of u at x.  The
multiple is measured here rather than assumed: across test functions the
ratios converge to 0.5 * D^2u(Du/|Du|, Du/|Du|).  (A commonly quoted
value for this constant is -3/2; the measurement does not support it.)
"""

from amlenet import consistency_check

CASES = [("quad_mix", 1.0, 1.0), ("saddle", 1.0, 0.0),
         ("quartic_diff", 0.8, 0.3), ("cone_r", 0.6, 0.8),
         ("linear", 0.3, 0.7)]

for fn_id, x, y in CASES:
    rep = consistency_check(fn_id, x, y, h_list=(0.16, 0.08, 0.04, 0.02))
    print(f"{fn_id} at ({x}, {y}):")
    for h, r in zip(rep.hs, rep.ratios):
        print(f"  h={h:<5g} ratio={r: .8f}")
    if rep.constant is None:
        print(f"  infinity Laplacian = {rep.infinity_laplacian:.3g}; "
              "ratio stays at zero\n")
    else:
        print(f"  infinity Laplacian = {rep.infinity_laplacian:.6f}, "
              f"measured constant = {rep.constant:.6f}\n")
