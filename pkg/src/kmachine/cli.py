"""Command line front end: gen, run, sweep, validate.

Config files are flat JSON key-value documents; any flag given on the
command line overrides the same key from the file.
"""

import argparse
import sys

from .graphs import dump_edge_list, generate
from .harness import fit_scaling, format_csv, load_config, run_experiment, run_sweep


def _ints(text):
    return [int(x) for x in text.split(",") if x]


def _add_override_flags(p):
    p.add_argument("--algorithm")
    p.add_argument("--n", type=int)
    p.add_argument("--p", type=float)
    p.add_argument("--wmax", type=int)
    p.add_argument("--model")
    p.add_argument("--b", type=int)
    p.add_argument("--k", type=_ints, help="comma separated machine counts")
    p.add_argument("--seeds", type=_ints, help="comma separated seeds")
    p.add_argument("--w", dest="W", type=int, help="link bandwidth in bits")
    p.add_argument("--mode", choices=["p2p", "bcast"])
    p.add_argument("--gamma", type=float)
    p.add_argument("--tokens-per-node", dest="tokens_per_node", type=int)
    p.add_argument("--eps", type=float)
    p.add_argument("--delta", type=int)
    p.add_argument("--source", type=int)
    p.add_argument("--out")


def _emit(rows, out):
    text = format_csv(rows)
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def cmd_gen(args):
    g = generate(args.model, args.n, args.seed, p=args.p, wmax=args.wmax)
    text = dump_edge_list(g)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


def _config_from_args(args):
    overrides = {
        k: getattr(args, k, None)
        for k in ("algorithm", "n", "p", "wmax", "model", "b", "k", "seeds",
                  "W", "mode", "gamma", "tokens_per_node", "eps", "delta",
                  "source", "out")
    }
    return load_config(args.config, overrides)


def cmd_run(args):
    cfg = _config_from_args(args)
    rows = run_experiment(cfg)
    _emit(rows, cfg.out)
    return 0 if all(r["success"] for r in rows) else 1


def cmd_sweep(args):
    cfg = _config_from_args(args)
    rows = run_sweep(cfg, args.sweep)
    fit = fit_scaling(rows, args.sweep)
    _emit(rows, cfg.out)
    print(
        f"# sweep {args.sweep}: slope {fit.slope:.4f}, intercept "
        f"{fit.intercept:.4f}, R^2 {fit.r2:.4f}",
        file=sys.stderr,
    )
    return 0 if all(r["success"] for r in rows) else 1


def cmd_validate(args):
    from .acceptance import validate_all

    results, csv_text, ok = validate_all(seed=args.seed)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(csv_text)
    summary = f"{sum(r.passed for r in results)}/{len(results)} criteria passed"
    print(summary)
    return 0 if ok else 1


def main(argv=None):
    ap = argparse.ArgumentParser(
        prog="kmachine",
        description="simulate per-vertex graph algorithms and price their "
        "communication on a bandwidth-limited machine network",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", help="write a generated graph as an edge list")
    g.add_argument("--model", required=True)
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--p", type=float)
    g.add_argument("--wmax", type=int)
    g.add_argument("--out")
    g.set_defaults(fn=cmd_gen)

    r = sub.add_parser("run", help="run one experiment config")
    r.add_argument("--config", required=True)
    _add_override_flags(r)
    r.set_defaults(fn=cmd_run)

    s = sub.add_parser("sweep", help="run a config and fit a scaling law")
    s.add_argument("--config", required=True)
    s.add_argument("--sweep", choices=["k", "n"], default="k")
    _add_override_flags(s)
    s.set_defaults(fn=cmd_sweep)

    v = sub.add_parser("validate", help="run the full validation battery")
    v.add_argument("--seed", type=int, default=7)
    v.add_argument("--out", help="write all validation rows as CSV")
    v.set_defaults(fn=cmd_validate)

    args = ap.parse_args(argv)
    return args.fn(args)


if __name__ == "__main__":
    sys.exit(main())
