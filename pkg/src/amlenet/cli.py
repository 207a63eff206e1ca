"""Command-line front end.

Subcommands::

    amlenet table 7.1 --n 8,16,32 --k 1,2,3 --tol 1e-9 --out t71.csv
    amlenet solve problem.toml --out field.csv
    amlenet slot --n 16 --k 2 --out slot --format csv
    amlenet consistency quad_mix 1.0 1.0 --h 0.2,0.1,0.05,0.025

Exit codes: 0 success, 1 runtime error, 2 usage error.
"""

import argparse
import json
import sys

import numpy as np

from .errors import AmlenetError
from .experiments import (
    SMOOTH_FUNCTIONS,
    TABLE_IDS,
    consistency_check,
    run_table,
    slot_experiments,
)
from .grids import GridSpec, build_grid
from .modulus import ModulusFn
from .network import build_network, read_network
from .solver import dirichlet_problem, solve, write_field

__all__ = ["main", "build_parser"]


def _int_list(text):
    return [int(tok) for tok in text.split(",") if tok]


def _float_list(text):
    return [float(tok) for tok in text.split(",") if tok]


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="amlenet",
                                description="infinity-harmonic extensions on networks")
    sub = p.add_subparsers(dest="command", required=True)

    t = sub.add_parser("table", help="fill one benchmark error table")
    t.add_argument("id", choices=sorted(TABLE_IDS))
    t.add_argument("--n", type=_int_list, default=[8, 16, 32, 64])
    t.add_argument("--k", type=_int_list, default=None)
    t.add_argument("--tol", type=float, default=1e-9)
    t.add_argument("--workers", type=int, default=1)
    t.add_argument("--out", default=None)
    t.add_argument("--format", choices=["csv", "json"], default="csv")

    s = sub.add_parser("solve", help="solve a problem described by a config file")
    s.add_argument("config")
    s.add_argument("--out", default=None)
    s.add_argument("--format", choices=["csv", "json"], default="csv")

    sl = sub.add_parser("slot", help="slotted-domain experiments")
    sl.add_argument("config", nargs="?", default=None,
                    help="optional TOML/JSON file with n, k, slot_eps, variant, tol")
    sl.add_argument("--n", type=int, default=16)
    sl.add_argument("--k", type=int, default=2)
    sl.add_argument("--eps", type=float, default=None)
    sl.add_argument("--tol", type=float, default=1e-9)
    sl.add_argument("--variant", default="both",
                    choices=["both", "both_boundaries", "outer_only"])
    sl.add_argument("--out", default=None)
    sl.add_argument("--format", choices=["csv", "json"], default="csv")

    c = sub.add_parser("consistency", help="ball-mean expansion ratios at a point")
    c.add_argument("fn", choices=sorted(SMOOTH_FUNCTIONS))
    c.add_argument("x", type=float)
    c.add_argument("y", type=float)
    c.add_argument("--h", type=_float_list, default=None)
    c.add_argument("--out", default=None)
    return p


def _load_config(path):
    if path.endswith(".json"):
        with open(path) as fh:
            return json.load(fh)
    import tomli
    with open(path, "rb") as fh:
        return tomli.load(fh)


_GRID_KEY_ALIASES = {"norm": "ball_norm", "edge_metric": "edge_norm"}


def _network_from_config(cfg):
    if "grid" in cfg:
        g = {_GRID_KEY_ALIASES.get(key, key): value
             for key, value in cfg["grid"].items()}
        g.pop("slot_eps", None)
        fn_id = g.pop("function", None)
        shift = tuple(g.pop("shift", (0.0, 0.0)))
        spec = GridSpec(shift=shift, **g)
        net, dirichlet = build_grid(spec)
        if fn_id is not None:
            from .experiments import EXACT_SOLUTIONS
            fn = EXACT_SOLUTIONS[fn_id].fn
            values = np.asarray(fn(net.coords[dirichlet, 0], net.coords[dirichlet, 1]))
            return net, dirichlet, values
        return net, None, None
    n = cfg["network"]
    if "file" in n:
        net = build_network_from_file(n["file"])
    elif "adjacency" in n:
        weights = None
        if "weights" in n:
            weights = {(int(i), int(j)): float(w) for i, j, w in n["weights"]}
        coords = np.asarray(n["coords"], dtype=float) if "coords" in n else None
        net = build_network(coords=coords, adjacency=n["adjacency"], weights=weights,
                            edge_norm=n.get("edge_norm", "euclid"))
    else:
        net = build_network(coords=np.asarray(n["coords"], dtype=float),
                            radius=float(n["radius"]),
                            ball_norm=n.get("ball_norm", "euclid"),
                            edge_norm=n.get("edge_norm", "euclid"))
    return net, None, None


def build_network_from_file(path):
    return read_network(path)


def _cmd_table(args) -> int:
    table = run_table(args.id, n_list=args.n, k_list=args.k, tol=args.tol,
                      workers=args.workers)
    text = table.to_csv() if args.format == "csv" else table.to_json() + "\n"
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    print(f"table {args.id}: {len(table.row_labels)}x{len(table.cols)} cells, "
          f"max error {table.cells.max():.6g}")
    return 0


def _cmd_solve(args) -> int:
    cfg = _load_config(args.config)
    net, dirichlet, values = _network_from_config(cfg)
    if dirichlet is None:
        d = cfg["dirichlet"]
        dirichlet = np.asarray(d["nodes"], dtype=np.int64)
        values = np.asarray(d["values"], dtype=float)
    solver_cfg = cfg.get("solver", {})
    modulus = solver_cfg.get("modulus", "lipschitz")
    if isinstance(modulus, dict):
        modulus = ModulusFn.from_dict(modulus)
    tol = float(solver_cfg.get("tol", 1e-9))
    max_sweeps = solver_cfg.get("max_sweeps") or None
    problem = dirichlet_problem(net, dirichlet, values, modulus=modulus)
    u, report = solve(problem, tol=tol, max_sweeps=max_sweeps)
    if args.out:
        if args.format == "csv":
            write_field(args.out, u, net.coords)
        else:
            with open(args.out, "w") as fh:
                fh.write(json.dumps({"values": [float(v) for v in u]}) + "\n")
    print(f"solved {net.n_nodes} nodes: sweeps={report.iterations} "
          f"residual={report.final_residual:.3e} monotone={report.monotone}")
    return 0


def _cmd_slot(args) -> int:
    n, k, eps, tol, variant = args.n, args.k, args.eps, args.tol, args.variant
    if args.config:
        cfg = _load_config(args.config)
        cfg = cfg.get("slot", cfg)
        n = int(cfg.get("n", n))
        k = int(cfg.get("k", k))
        eps = cfg.get("slot_eps", cfg.get("eps", eps))
        tol = float(cfg.get("tol", tol))
        variant = cfg.get("variant", variant)
    variants = (["both_boundaries", "outer_only"] if variant == "both"
                else [variant])
    fields = {}
    reports = {}
    cone = None
    for var in variants:
        cone, u, report = slot_experiments(n, k, eps=eps, variant=var, tol=tol)
        fields[var] = u
        reports[var] = report
        print(f"slot {var}: gap from cone {report['sup_gap_from_cone']:.6g}, "
              f"mirror defect {report['mirror_gap']:.3e}, "
              f"sweeps {report['solve'].iterations}")
    if len(fields) == 2:
        cross = float(np.max(np.abs(fields["both_boundaries"] - fields["outer_only"])))
        print(f"slot variants differ by {cross:.6g} (sup norm)")
    if args.out:
        from .grids import build_slot_domain
        net, _ = build_slot_domain(n, k, eps)
        if args.format == "csv":
            write_field(f"{args.out}_cone.csv", cone, net.coords)
            for var, u in fields.items():
                write_field(f"{args.out}_{var}.csv", u, net.coords)
        else:
            blob = {"cone": [float(v) for v in cone]}
            for var, u in fields.items():
                rep = dict(reports[var])
                rep["solve"] = json.loads(rep["solve"].to_json())
                blob[var] = {"values": [float(v) for v in u], "report": rep}
            with open(f"{args.out}.json", "w") as fh:
                fh.write(json.dumps(blob) + "\n")
    return 0


def _cmd_consistency(args) -> int:
    report = consistency_check(args.fn, args.x, args.y, h_list=args.h)
    for h, r in zip(report.hs, report.ratios):
        print(f"h={h:g}: ratio={r:.10f}")
    line = (f"extrapolated {report.extrapolated:.10f}, "
            f"infinity Laplacian {report.infinity_laplacian:.10f}")
    if report.constant is not None:
        line += f", constant {report.constant:.10f}"
    print(line)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(json.dumps({
                "fn": report.fn_id, "point": list(report.point),
                "hs": list(report.hs), "ratios": list(report.ratios),
                "infinity_laplacian": report.infinity_laplacian,
                "extrapolated": report.extrapolated,
                "constant": report.constant,
            }) + "\n")
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code else 0
    handlers = {
        "table": _cmd_table,
        "solve": _cmd_solve,
        "slot": _cmd_slot,
        "consistency": _cmd_consistency,
    }
    try:
        return handlers[args.command](args)
    except (AmlenetError, ValueError, KeyError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
