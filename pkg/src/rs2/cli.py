"""Command-line harness: gen, linear, sublinear, verify, sweep.

The RS2_BUDGET environment variable caps seed-family enumeration budgets.
Sweep runs emit a versioned CSV and optionally render figures next to it.
"""

from __future__ import annotations

import argparse
import json
import os
import random
import sys
import time
from fractions import Fraction

from . import generators, report as rep
from .graph import dump_graph, load_graph, verify_ruling_set
from .hashing import DEFAULT_ENUM_BUDGET
from .linear import LinearParams, run_linear
from .mpc import ModelViolationError, MpcConfig
from .sublinear import SparsifyParams, f_of_delta, run_sublinear


def _budget() -> int:
    raw = os.environ.get("RS2_BUDGET")
    return int(raw) if raw else DEFAULT_ENUM_BUDGET


def _read_graph(path: str):
    with open(path) as fh:
        return load_graph(fh.read())


def _fraction(text: str) -> Fraction:
    return Fraction(text)


def cmd_gen(args) -> int:
    params = {}
    for key in ("n", "d", "D", "seed", "padding"):
        val = getattr(args, key if key != "D" else "big_d", None)
        if val is not None:
            params[key] = val
    if args.prob is not None:
        params["prob"] = args.prob
    if args.epsilon is not None:
        params["epsilon"] = args.epsilon
    if args.class_exps:
        params["class_exps"] = [int(x) for x in args.class_exps.split(",")]
    g = generators.generate(args.model, **params)
    text = dump_graph(g)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
        print(f"wrote {args.out}: n={g.n} m={g.m}")
    else:
        sys.stdout.write(text)
    return 0


def _run_linear(g, args):
    params = LinearParams(
        epsilon=args.epsilon,
        d0_exp=args.d0,
        k_sample=args.k_sample,
        k_mis=args.k_mis,
        max_iter=args.max_iter,
        enum_budget=_budget(),
        scan_budget=args.scan_budget,
        rng_seeds=random.Random(args.rng_seed) if args.baseline_random else None,
    )
    result = run_linear(g, params=params)
    algorithm = "baseline-random" if args.baseline_random else "linear"
    return result, rep.linear_report(g, result, params, algorithm), algorithm


def cmd_linear(args) -> int:
    g = _read_graph(args.graph)
    t0 = time.time()
    result, report, algorithm = _run_linear(g, args)
    elapsed = time.time() - t0
    if args.report:
        rep.write_json(args.report, report)
    print(
        f"{algorithm}: |S|={len(result.members)} valid={result.valid} "
        f"rounds={result.ledger.total_rounds} iterations={len(result.iterations)} "
        f"({elapsed:.2f}s)",
        file=sys.stderr,
    )
    return 0 if result.valid else 1


def cmd_sublinear(args) -> int:
    g = _read_graph(args.graph)
    config = MpcConfig(regime="sublinear", n=g.n, m=g.m, alpha=args.alpha)
    params = SparsifyParams(
        f=f_of_delta(g.max_degree()),
        alpha=args.alpha,
        eps_hd=args.eps_hd,
        enum_budget=_budget(),
        scan_budget=args.scan_budget,
    )
    t0 = time.time()
    result = run_sublinear(g, config, params)
    elapsed = time.time() - t0
    report = rep.sublinear_report(g, result, params)
    if args.report:
        rep.write_json(args.report, report)
    print(
        f"sublinear: |S|={len(result.members)} valid={result.valid} "
        f"core_rounds={result.core_rounds} mis_rounds={result.mis_rounds} ({elapsed:.2f}s)",
        file=sys.stderr,
    )
    return 0 if result.valid else 1


def cmd_verify(args) -> int:
    g = _read_graph(args.graph)
    with open(args.members) as fh:
        data = json.load(fh)
    members = data["ruling_set"]["members"] if isinstance(data, dict) else data
    result = verify_ruling_set(g, members, beta=args.beta)
    print(
        f"valid={result.valid} members={len(result.members)} "
        f"violations={len(result.independence_violations)} uncovered={len(result.uncovered)}"
    )
    return 0 if result.valid else 1


def _sweep_one(entry: dict) -> str:
    gen_spec = dict(entry["generator"])
    model = gen_spec.pop("model")
    if "epsilon" in gen_spec:
        gen_spec["epsilon"] = Fraction(gen_spec["epsilon"])
    g = generators.generate(model, **gen_spec)
    algorithm = entry.get("algorithm", "linear")
    opts = entry.get("params", {})
    try:
        if algorithm in ("linear", "baseline-random"):
            params = LinearParams(
                epsilon=Fraction(opts.get("epsilon", "1/40")),
                d0_exp=opts.get("d0_exp", 6),
                scan_budget=opts.get("scan_budget", 64),
                enum_budget=_budget(),
                rng_seeds=random.Random(opts.get("rng_seed", 0))
                if algorithm == "baseline-random"
                else None,
            )
            result = run_linear(g, params=params)
        elif algorithm == "sublinear":
            result = run_sublinear(g)
        else:
            raise ValueError(f"unknown algorithm {algorithm!r}")
        return rep.result_to_csv_row(algorithm, g, result)
    except ModelViolationError as exc:
        return rep.csv_row(algorithm, g, error=str(exc))


def cmd_sweep(args) -> int:
    with open(args.config) as fh:
        entries = json.load(fh)
    if not entries:
        print("sweep config is empty", file=sys.stderr)
        return 2
    lines = [rep.csv_header()]
    for entry in entries:
        lines.append(_sweep_one(entry))
    text = "\n".join(lines) + "\n"
    with open(args.out, "w") as fh:
        fh.write(text)
    print(f"wrote {args.out} ({len(entries)} rows)", file=sys.stderr)
    if args.plot_dir:
        from .plots import render_sweep_figures

        rows = [dict(zip(rep.CSV_COLUMNS, line.split(","))) for line in lines[1:]]
        written = render_sweep_figures(rows, args.plot_dir)
        for path in written:
            print(f"wrote {path}", file=sys.stderr)
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="rs2", description="deterministic 2-ruling-set toolkit")
    sub = ap.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", help="generate a graph")
    g.add_argument("--model", required=True, choices=generators.MODELS)
    g.add_argument("--n", type=int)
    g.add_argument("--d", type=int)
    g.add_argument("--D", dest="big_d", type=int)
    g.add_argument("--prob", type=float)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--epsilon", type=_fraction)
    g.add_argument("--class-exps", dest="class_exps")
    g.add_argument("--padding", type=int)
    g.add_argument("--out")
    g.set_defaults(func=cmd_gen)

    ln = sub.add_parser("linear", help="run the linear-regime algorithm")
    ln.add_argument("--graph", required=True)
    ln.add_argument("--epsilon", type=_fraction, default=Fraction(1, 40))
    ln.add_argument("--d0", type=int, default=6)
    ln.add_argument("--k-sample", type=int, default=4)
    ln.add_argument("--k-mis", type=int, default=2)
    ln.add_argument("--max-iter", type=int, default=20)
    ln.add_argument("--scan-budget", type=int, default=64)
    ln.add_argument("--baseline-random", action="store_true")
    ln.add_argument("--rng-seed", type=int, default=0)
    ln.add_argument("--report")
    ln.set_defaults(func=cmd_linear)

    sl = sub.add_parser("sublinear", help="run the sublinear-regime algorithm")
    sl.add_argument("--graph", required=True)
    sl.add_argument("--alpha", type=float, default=0.5)
    sl.add_argument("--eps-hd", type=_fraction, default=Fraction(1, 20))
    sl.add_argument("--scan-budget", type=int, default=256)
    sl.add_argument("--report")
    sl.set_defaults(func=cmd_sublinear)

    vf = sub.add_parser("verify", help="verify a ruling set against a graph")
    vf.add_argument("--graph", required=True)
    vf.add_argument("--members", required=True, help="JSON list or report file")
    vf.add_argument("--beta", type=int, default=2)
    vf.set_defaults(func=cmd_verify)

    sw = sub.add_parser("sweep", help="run a batch of configs to CSV (+ figures)")
    sw.add_argument("--config", required=True, help="JSON list of run entries")
    sw.add_argument("--out", required=True)
    sw.add_argument("--plot-dir")
    sw.set_defaults(func=cmd_sweep)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
