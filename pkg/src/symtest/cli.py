"""Command line interface: ``symtest {test,null-table,efficiency,power}``."""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import secrets
import sys
from pathlib import Path

from . import efficiency as eff
from .distributions import FAMILIES
from .nulldist import NullTable, TableMismatchError, power_curve, run_test, simulate_null
from .stats import MAX_K, SampleFormatError, read_sample

EXIT_OK = 0
EXIT_INPUT = 2


class InputError(Exception):
    pass


def _float_list(text):
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a comma separated list of numbers: {text!r}")


def _build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--kind", choices=("integral", "kolmogorov"), default="integral")
    common.add_argument("--k", type=int, default=2)
    common.add_argument("--variant", type=str.upper, choices=("U", "V"), default="U")
    common.add_argument("--allow-large-k", action="store_true",
                        help=f"permit k > {MAX_K}")

    sim = argparse.ArgumentParser(add_help=False)
    sim.add_argument("--reps", type=int, default=10_000)
    sim.add_argument("--seed", type=int, default=None,
                     help="master seed; drawn at random and reported when omitted")
    sim.add_argument("--workers", type=int, default=1)

    parser = argparse.ArgumentParser(
        prog="symtest",
        description="Tests of symmetry about zero based on extremal order statistics.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("test", parents=[common, sim], help="test a sample for symmetry")
    p.add_argument("data", help="text file, one number per line, '#' comments")
    p.add_argument("--alpha", type=float, default=0.05)
    p.add_argument("--sided", choices=("two", "right"), default="two")
    p.add_argument("--table", help="null table JSON; created there if missing")
    p.add_argument("--format", choices=("text", "json"), default="text")

    p = sub.add_parser("null-table", parents=[common, sim], help="simulate a null table")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--table", "--out", dest="table", help="output path (default stdout)")
    p.add_argument("--format", choices=("json", "csv"), default="json",
                   help="json: full table; csv: quantile summary")

    p = sub.add_parser("efficiency", help="local Bahadur efficiencies")
    p.add_argument("--family", action="append",
                   help="family name(s), repeatable or comma separated")
    p.add_argument("--kind", choices=("integral", "kolmogorov"))
    p.add_argument("--k", type=int, action="append", help="order(s); repeatable")
    p.add_argument("--exact-variances", "--exact", action="store_true",
                   help="print exact projection variances as p/q")
    p.add_argument("--format", choices=("text", "json", "csv"), default="text")

    p = sub.add_parser("power", parents=[common, sim], help="simulated power curve")
    p.add_argument("--family", default="normal", choices=sorted(FAMILIES))
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--theta", type=_float_list, default=[0.0, 0.1, 0.2, 0.3, 0.5])
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--alpha", type=float, default=0.05)
    p.add_argument("--sided", choices=("two", "right"), default="two")
    p.add_argument("--table", help="null table JSON; created there if missing")
    p.add_argument("--format", choices=("text", "json", "csv"), default="csv")
    return parser


def _seed(args):
    if args.seed is None:
        args.seed = secrets.randbits(32)
    return args.seed


def _resolve_table(args, n):
    """Load the null table named by ``--table`` or the cache, else simulate."""
    path = args.table
    if path is None and os.environ.get("SYMTEST_TABLE_DIR"):
        name = f"{args.kind}_k{args.k}_{args.variant}_n{n}_r{args.reps}_s{_seed(args)}.json"
        path = os.path.join(os.environ["SYMTEST_TABLE_DIR"], name)
    if path is not None and os.path.exists(path):
        try:
            table = NullTable.load(path)
        except (ValueError, KeyError) as exc:
            raise InputError(f"{path}: invalid null table ({exc})")
        if not table.matches(args.kind, args.k, args.variant, n):
            raise InputError(
                f"{path}: table is for kind={table.kind} k={table.k} "
                f"variant={table.variant} n={table.n}"
            )
        return table
    table = simulate_null(args.kind, args.k, args.variant, n, args.reps, _seed(args),
                          workers=args.workers)
    if path is not None:
        Path(path).parent.mkdir(parents=True, exist_ok=True)
        table.save(path)
    return table


def cmd_test(args, out):
    try:
        x = read_sample(args.data)
    except FileNotFoundError:
        raise InputError(f"{args.data}: no such file")
    except SampleFormatError as exc:
        raise InputError(f"{args.data}: {exc}")
    if not 0 < args.alpha < 1:
        raise InputError("--alpha must lie in (0, 1)")
    need = args.k + 1
    if x.size < need:
        raise InputError(f"{args.data}: need at least {need} observations, got {x.size}")
    table = _resolve_table(args, x.size)
    rec = run_test(x, args.kind, args.k, args.variant, args.alpha, table, args.sided)
    if args.format == "json":
        out.write(json.dumps(rec.to_dict()) + "\n")
        return
    name = "I" if rec.kind == "integral" else "D"
    deg = rec.k + 1 if rec.kind == "integral" else rec.k
    out.write(f"statistic   {name}_n^({deg}) [{rec.variant}] = {rec.statistic:.4f}  (n={rec.n})\n")
    out.write(f"p-value     {rec.p_value:.4f}  ({rec.sided}-sided)\n")
    verdict = "reject" if rec.reject else "do not reject"
    out.write(f"decision    {verdict} symmetry at alpha={rec.alpha:g}\n")
    out.write(f"null table  id={rec.table_id} reps={rec.rep_count} master_seed={rec.master_seed}\n")


def cmd_null_table(args, out):
    if args.n < args.k + 1:
        raise InputError(f"--n must be at least k+1 = {args.k + 1}")
    if args.reps < 100:
        raise InputError("--reps must be at least 100")
    table = simulate_null(args.kind, args.k, args.variant, args.n, args.reps, _seed(args),
                          workers=args.workers)
    text = table.to_json() + "\n" if args.format == "json" else table.quantiles_csv()
    if args.table is None:
        out.write(text)
        return
    try:
        with open(args.table, "w", encoding="utf-8") as fh:
            fh.write(text)
    except OSError as exc:
        raise InputError(f"cannot write {args.table}: {exc.strerror}")
    out.write(f"wrote {args.table} (id={table.table_id}, master_seed={table.master_seed})\n")


def _families(args):
    if not args.family:
        return list(eff.DEFAULT_FAMILIES)
    names = [f.strip().lower() for item in args.family for f in item.split(",") if f.strip()]
    for name in names:
        if name not in FAMILIES:
            raise InputError(f"unknown family {name!r}")
    return names


def _write_variances(args, out):
    ks = args.k or [2, 3, 4, 5, 6]
    rows = [(k, eff.sigma2_exact(k)) for k in ks]
    if args.format == "json":
        out.write(json.dumps({str(k): str(v) for k, v in rows}) + "\n")
    elif args.format == "csv":
        w = csv.writer(out, lineterminator="\n")
        w.writerow(["k", "sigma2"])
        w.writerows((k, str(v)) for k, v in rows)
    else:
        for k, v in rows:
            out.write(f"k={k}  sigma2 = {v}\n")


def cmd_efficiency(args, out):
    if args.exact_variances:
        _write_variances(args, out)
        return
    families = _families(args)
    if args.kind or args.k:
        kinds = [args.kind] if args.kind else ["integral", "kolmogorov"]
        ks = args.k or [2, 4]
        configs = [(kind, k) for kind in kinds for k in ks]
    else:
        configs = list(eff.DEFAULT_CONFIGS)
    table = eff.efficiency_table(families, configs)
    if args.format == "json":
        reports = [rep.to_dict() for row in table.values() for rep in row.values()]
        out.write(json.dumps(reports) + "\n")
    elif args.format == "csv":
        w = csv.writer(out, lineterminator="\n")
        w.writerow(["kind", "k", "family", "slope_coefficient", "fisher_info", "efficiency"])
        for row in table.values():
            for rep in row.values():
                w.writerow([rep.kind, rep.k, rep.family, repr(rep.slope_coefficient),
                            repr(rep.fisher_info), repr(rep.efficiency)])
    else:
        out.write("statistic".ljust(12) + "".join(f.rjust(10) for f in families) + "\n")
        for (kind, k), row in table.items():
            label = f"I_n^({k + 1})" if kind == "integral" else f"D_n^({k})"
            out.write(label.ljust(12)
                      + "".join(f"{row[f].efficiency:10.4f}" for f in families) + "\n")


def cmd_power(args, out):
    if not 0 < args.alpha < 1:
        raise InputError("--alpha must lie in (0, 1)")
    if args.n < args.k + 1:
        raise InputError(f"--n must be at least k+1 = {args.k + 1}")
    seed = _seed(args)
    table = _resolve_table(args, args.n)
    points = power_curve(args.family, args.kind, args.k, args.variant, args.n, args.theta,
                         args.trials, args.alpha, seed, table=table, sided=args.sided)
    meta = {"family": args.family, "kind": args.kind, "k": args.k, "variant": args.variant,
            "n": args.n, "alpha": args.alpha, "master_seed": seed,
            "table_id": table.table_id}
    if args.format == "json":
        out.write(json.dumps({**meta, "points": [p.to_dict() for p in points]}) + "\n")
    elif args.format == "csv":
        w = csv.writer(out, lineterminator="\n")
        w.writerow(["theta", "power", "se", "rejections", "trials", "master_seed"])
        for p in points:
            w.writerow([p.theta, repr(p.power), repr(p.se), p.rejections, p.trials, seed])
    else:
        out.write(f"{args.kind} k={args.k} {args.family} n={args.n} alpha={args.alpha:g} "
                  f"master_seed={seed}\n")
        for p in points:
            out.write(f"theta={p.theta:<8g} power={p.power:.4f}  se={p.se:.4f}\n")


COMMANDS = {
    "test": cmd_test,
    "null-table": cmd_null_table,
    "efficiency": cmd_efficiency,
    "power": cmd_power,
}


def main(argv=None, out=None):
    out = out if out is not None else sys.stdout
    args = _build_parser().parse_args(argv)
    if getattr(args, "k", None) is not None and not isinstance(args.k, list):
        if args.k < 2 or (args.k > MAX_K and not args.allow_large_k):
            print(f"symtest: error: --k must be in [2, {MAX_K}]", file=sys.stderr)
            return EXIT_INPUT
    try:
        COMMANDS[args.command](args, out)
    except (InputError, TableMismatchError) as exc:
        print(f"symtest: error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
