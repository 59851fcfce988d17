"""Command-line entry point: generate, solve, exact, bench."""

from __future__ import annotations

import argparse
import csv
import io
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import replace
from pathlib import Path
from typing import Sequence

from .assignment import InstanceTooLargeError
from .construction import construct
from .exact import solve_exact
from .instances import (CLASS_PRESETS, GeneratorSpec, InvalidSpecError, ParseError,
                        derive_seeds, generate, instance_files, read_instance, weight_grid,
                        write_instance, write_solution)
from .model import CostBreakdown, InstanceError, Weights, build_cost_matrix, evaluate
from .svns import LOCAL_SEARCH_NEIGHBORHOODS, SvnsParams, solve

CSV_SCHEMA_VERSION = 1
BENCH_COLUMNS = (
    "instance", "seed", "config", "construct_total", "svns_total", "improvement_pct",
    "runtime_ms", "path_cost", "replenishment_cost", "hri_cost", "team_cost", "travel_cost",
    "status",
)

DEFAULT_UNIMPROVED_GRID = (10, 20, 40)
DEFAULT_KMAX_GRID = (10, 30, 60)


def _fmt(x: float) -> str:
    return format(x, ".10g")


def _summary(cost: CostBreakdown) -> str:
    return (f"R1={_fmt(cost.path_cost)} R2={_fmt(cost.replenishment_cost)} "
            f"H={_fmt(cost.hri_cost)} team={_fmt(cost.team_cost_total)} "
            f"total={_fmt(cost.total)}")


def _override_weights(instance, args):
    w = instance.weights
    if args.alpha is None and args.beta is None and args.gamma is None:
        return w
    return Weights(w.alpha if args.alpha is None else args.alpha,
                   w.beta if args.beta is None else args.beta,
                   w.gamma if args.gamma is None else args.gamma)


def _search_params(args, **extra) -> SvnsParams:
    return SvnsParams(k_max=args.kmax, unimproved_max=args.unimproved_max, seed=args.seed,
                      candidate_assignment=args.candidate_assignment,
                      seq_exchange_empty_side=not args.strict_seq_exchange,
                      seq_exchange_reversal=not args.strict_seq_exchange, **extra)


def cmd_generate(args) -> int:
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    for i, seed in enumerate(derive_seeds(args.seed, args.count), 1):
        spec = GeneratorSpec.preset(args.instance_class, seed=seed, num_vehicles=args.vehicles)
        write_instance(generate(spec), out / f"{args.instance_class}_{i:03d}.txt")
    print(f"wrote {args.count} instance(s) to {out}")
    return 0


def cmd_solve(args) -> int:
    instance = read_instance(args.instance)
    weights = _override_weights(instance, args)
    params = _search_params(args)
    print(f"kmax={params.k_max} unimproved-max={params.unimproved_max} seed={params.seed} "
          f"alpha={_fmt(weights.alpha)} beta={_fmt(weights.beta)} gamma={_fmt(weights.gamma)}")
    matrix = build_cost_matrix(instance)
    sol, cost, trace = solve(instance, params, weights, matrix)
    print(_summary(cost))
    if args.out:
        write_solution(sol, args.out, cost)
    if args.trace:
        Path(args.trace).write_text(trace.to_csv())
    return 0


def cmd_exact(args) -> int:
    instance = read_instance(args.instance)
    try:
        sol, cost = solve_exact(instance)
    except InstanceTooLargeError as exc:
        print(f"error: instance-too-large: {exc}", file=sys.stderr)
        return 2
    print(_summary(cost))
    if args.out:
        write_solution(sol, args.out, cost)
    return 0


def _bench_task(task) -> dict:
    """One (instance, configuration) run; failures come back as rows."""
    path, config, params, weights, timing = task
    row = dict.fromkeys(BENCH_COLUMNS, "")
    row.update(instance=Path(path).name, seed=params.seed, config=config)
    try:
        instance = read_instance(path)
        weights = weights or instance.weights
        matrix = build_cost_matrix(instance)
        t0 = time.perf_counter()
        start = evaluate(construct(instance, matrix, params.seed, weights), instance, matrix,
                         weights)
        _, cost, _ = solve(instance, params, weights, matrix)
        elapsed = (time.perf_counter() - t0) * 1000
    except Exception as exc:  # noqa: BLE001 - recorded in the row, batch continues
        row["status"] = f"error: {type(exc).__name__}: {exc}"
        return row
    imp = 100.0 * (start.total - cost.total) / start.total if start.total else 0.0
    row.update(
        construct_total=_fmt(start.total), svns_total=_fmt(cost.total),
        improvement_pct=_fmt(imp), runtime_ms=f"{elapsed:.0f}" if timing else "",
        path_cost=_fmt(cost.path_cost), replenishment_cost=_fmt(cost.replenishment_cost),
        hri_cost=_fmt(cost.hri_cost), team_cost=_fmt(cost.team_cost_total),
        travel_cost=_fmt(cost.travel_cost), status="ok")
    return row


def worker_count() -> int:
    raw = os.environ.get("MVRP_THREADS", "0").strip() or "0"
    n = int(raw)
    return n if n > 0 else (os.cpu_count() or 1)


def run_tasks(tasks: list) -> list[dict]:
    workers = min(worker_count(), len(tasks))
    if workers <= 1:
        return [_bench_task(t) for t in tasks]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(_bench_task, tasks))


def bench_configs(args) -> list[tuple[str, SvnsParams, Weights | None]]:
    base = _search_params(args)
    if args.experiment == "improvement":
        return [("default", base, None)]
    if args.experiment == "params":
        return [(f"unimproved={u};kmax={k}", replace(base, unimproved_max=u, k_max=k), None)
                for u in args.unimproved_grid for k in args.kmax_grid]
    if args.experiment == "neighborhoods":
        return [(n, replace(base, neighborhoods=(n,)), None) for n in LOCAL_SEARCH_NEIGHBORHOODS]
    return [(f"alpha={_fmt(w.alpha)};beta={_fmt(w.beta)};gamma={_fmt(w.gamma)}", base, w)
            for w in weight_grid()]


def format_rows(rows: Sequence[dict]) -> str:
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=BENCH_COLUMNS, lineterminator="\n")
    w.writeheader()
    w.writerows(rows)
    return buf.getvalue()


def _plot_data(rows: Sequence[dict]) -> str:
    """gnuplot-style blocks, one per instance: config travel_cost hri_cost total."""
    out, current = [], None
    for r in rows:
        if r["status"] != "ok":
            continue
        if r["instance"] != current:
            if current is not None:
                out.append("\n")
            current = r["instance"]
            out.append(f"# {current}\n# config travel_cost hri_cost svns_total\n")
        out.append(f"{r['config']} {r['travel_cost']} {r['hri_cost']} {r['svns_total']}\n")
    return "".join(out)


def cmd_bench(args) -> int:
    files = instance_files(args.instances)
    if not files:
        print(f"error: no instance files in {args.instances}", file=sys.stderr)
        return 2
    configs = bench_configs(args)
    order = {c[0]: i for i, c in enumerate(configs)}
    tasks = [(str(f), name, params, weights, not args.no_runtime)
             for f in files for name, params, weights in configs]
    rows = sorted(run_tasks(tasks), key=lambda r: (r["instance"], order[r["config"]]))
    text = format_rows(rows)
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    if args.plot_data:
        Path(args.plot_data).write_text(_plot_data(rows))
    failed = sum(r["status"] != "ok" for r in rows)
    if failed:
        print(f"{failed} run(s) failed", file=sys.stderr)
    return 1 if failed else 0


def _int_list(text: str) -> tuple[int, ...]:
    return tuple(int(v) for v in text.split(",") if v)


def _add_search_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--kmax", type=int, default=30)
    p.add_argument("--unimproved-max", type=int, default=40)
    p.add_argument("--candidate-assignment", choices=("rule3", "rules12"), default="rule3",
                   help="assignment used to score route-neighborhood candidates")
    p.add_argument("--strict-seq-exchange", action="store_true",
                   help="plain sequence exchange: no empty segments, no segment reversal")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="mvrp", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    g = sub.add_parser("generate", help="write seeded random instances")
    g.add_argument("--class", dest="instance_class", choices=sorted(CLASS_PRESETS),
                   required=True)
    g.add_argument("--count", type=int, default=1)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--vehicles", type=int, default=None,
                   help="vehicle count for classes that offer a choice")
    g.add_argument("--out-dir", required=True)
    g.set_defaults(func=cmd_generate)

    s = sub.add_parser("solve", help="run SVNS on one instance")
    s.add_argument("--instance", required=True)
    _add_search_flags(s)
    for name in ("alpha", "beta", "gamma"):
        s.add_argument(f"--{name}", type=float, default=None)
    s.add_argument("--trace", help="write the search trace CSV here")
    s.add_argument("--out", help="write the solution file here")
    s.set_defaults(func=cmd_solve)

    e = sub.add_parser("exact", help="exhaustive optimum for small instances")
    e.add_argument("--instance", required=True)
    e.add_argument("--out")
    e.set_defaults(func=cmd_exact)

    b = sub.add_parser("bench", help="run a benchmark experiment over an instance directory")
    b.add_argument("experiment", choices=("improvement", "params", "neighborhoods", "weights"))
    b.add_argument("--instances", required=True, help="directory of instance files")
    _add_search_flags(b)
    b.add_argument("--unimproved-grid", type=_int_list, default=DEFAULT_UNIMPROVED_GRID)
    b.add_argument("--kmax-grid", type=_int_list, default=DEFAULT_KMAX_GRID)
    b.add_argument("--out", help="CSV path (stdout if omitted)")
    b.add_argument("--plot-data", help="also write gnuplot-style data here")
    b.add_argument("--no-runtime", action="store_true",
                   help="leave runtime_ms empty so output is byte-reproducible")
    b.set_defaults(func=cmd_bench)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    if getattr(args, "count", 0) < 0:
        print("error: --count must be >= 0", file=sys.stderr)
        return 2
    try:
        return args.func(args)
    except (ParseError, InstanceError, InvalidSpecError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
