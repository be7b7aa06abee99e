"""Command-line front end.

Subcommands: `run` replays a workload file and prints one line per
query; `gen` writes a random workload file; `fuzz` generates a workload
and replays it differentially against the exact oracle; `measure`
estimates cut-edge recovery success rates; `bench` sweeps an n grid
across modes on matched workloads and prints a delimited table.

Exit codes: 0 success, 1 contract or parse error (also a failed
`--fail-on-mismatch` gate), 2 soundness violation (an impossible
query answer or a broken structural invariant).
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from concurrent.futures import ThreadPoolExecutor

from xorforest.layered_connectivity import StateCorruptionError
from xorforest.oracle_harness import (
    Config,
    SoundnessError,
    WorkloadError,
    differential_run,
    generate_workload,
    load_workload,
    measure_success_rate,
    replay,
    save_workload,
)


def _parse_mix(text: str) -> tuple[float, float, float]:
    parts = text.split(":")
    if len(parts) != 3:
        raise ValueError(f"mix must be i:d:q, got {text!r}")
    try:
        wi, wd, wq = (float(p) for p in parts)
    except ValueError:
        raise ValueError(f"mix fields must be numbers, got {text!r}")
    return wi, wd, wq


def _parse_int_list(text: str) -> list[int]:
    try:
        return [int(p) for p in text.split(",") if p.strip() != ""]
    except ValueError:
        raise ValueError(f"expected comma-separated integers, got {text!r}")


def _stats_json(stats) -> str:
    return json.dumps(stats.to_dict(), indent=2, sort_keys=True) + "\n"


def _emit(text: str, out_path: str | None) -> None:
    if out_path:
        with open(out_path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _config_from(args, mode: str | None = None) -> Config:
    return Config(
        n=args.n,
        seed=args.seed,
        c_factor=args.c_factor,
        families=args.families,
        mode=mode if mode is not None else args.mode,
        copies=args.copies,
        check_cadence=args.check_cadence,
        fail_on_mismatch=getattr(args, "fail_on_mismatch", False),
        omit_timings=args.omit_timings,
    )


def cmd_run(args) -> int:
    workload = load_workload(args.workload)
    args.n = workload.n
    config = _config_from(args)
    outputs: list[bool] = []
    stats = replay(workload, config, outputs=outputs)
    for value in outputs:
        sys.stdout.write("1\n" if value else "0\n")
    if args.out:
        _emit(_stats_json(stats), args.out)
    if args.figures:
        from xorforest.report import render_run_figures

        render_run_figures(stats, args.figures)
    if config.fail_on_mismatch and stats.query_mismatches:
        print(f"{stats.query_mismatches} query mismatches", file=sys.stderr)
        return 1
    return 0


def cmd_gen(args) -> int:
    workload = generate_workload(args.n, args.ops, args.mix, args.seed)
    if args.out:
        save_workload(workload, args.out)
    else:
        sys.stdout.write(f"{workload.n} {len(workload.ops)}\n")
        for kind, u, v in workload.ops:
            sys.stdout.write(f"{kind} {u} {v}\n")
    return 0


def cmd_fuzz(args) -> int:
    workload = generate_workload(args.n, args.ops, args.mix, args.seed)
    mode = "boosted" if args.mode == "boosted" else "differential"
    config = _config_from(args, mode=mode)
    stats = differential_run(workload, config)
    _emit(_stats_json(stats), args.out)
    if args.figures:
        from xorforest.report import render_run_figures

        render_run_figures(stats, args.figures, prefix="fuzz")
    if config.fail_on_mismatch and stats.query_mismatches:
        print(f"{stats.query_mismatches} query mismatches", file=sys.stderr)
        return 1
    return 0


def cmd_measure(args) -> int:
    rows = measure_success_rate(
        args.n, args.cut_sizes, args.trials, args.seed, families=args.families
    )
    lines = ["cut_size\ttrials\thits\trate\tlcb99"]
    for row in rows:
        lines.append(
            f"{row['cut_size']}\t{row['trials']}\t{row['hits']}"
            f"\t{row['rate']:.6f}\t{row['lcb99']:.6f}"
        )
    sys.stdout.write("\n".join(lines) + "\n")
    if args.out:
        _emit(json.dumps(rows, indent=2, sort_keys=True) + "\n", args.out)
    if args.figures:
        from xorforest.report import render_success_figure

        render_success_figure(rows, args.figures)
    return 0


def _bench_cell(n: int, mode: str, args) -> dict:
    workload = generate_workload(n, args.ops, args.mix, args.seed + n)
    copies = args.copies
    if mode == "boosted" and copies is None:
        copies = math.ceil(math.log2(n))
    config = Config(
        n=n,
        seed=args.seed + n,
        c_factor=args.c_factor,
        families=args.families,
        mode=mode,
        copies=copies if mode == "boosted" else None,
        check_cadence=args.check_cadence,
        omit_timings=args.omit_timings,
    )
    stats = replay(workload, config)
    counts = workload.counts()
    row = {
        "n": n,
        "mode": mode,
        "inserts": counts["I"],
        "deletes": counts["D"],
        "queries": counts["Q"],
        "insert_ops_mean": stats.cutset_ops["insert"]["mean"],
        "delete_ops_mean": stats.cutset_ops["delete"]["mean"],
        "query_ops_mean": stats.cutset_ops["query"]["mean"],
        "delete_ops_max": stats.cutset_ops["delete"]["max"],
    }
    if stats.timings is not None:
        row["insert_p50_us"] = stats.timings["insert"]["p50"] * 1e6
        row["delete_p50_us"] = stats.timings["delete"]["p50"] * 1e6
        row["delete_p99_us"] = stats.timings["delete"]["p99"] * 1e6
    return row


def cmd_bench(args) -> int:
    cells = [(n, mode) for n in args.n_grid for mode in args.modes]
    if args.jobs > 1:
        with ThreadPoolExecutor(max_workers=args.jobs) as pool:
            futures = [pool.submit(_bench_cell, n, mode, args)
                       for n, mode in cells]
            rows = [f.result() for f in futures]
    else:
        rows = [_bench_cell(n, mode, args) for n, mode in cells]
    columns = ["n", "mode", "inserts", "deletes", "queries",
               "insert_ops_mean", "delete_ops_mean", "query_ops_mean",
               "delete_ops_max"]
    if not args.omit_timings:
        columns += ["insert_p50_us", "delete_p50_us", "delete_p99_us"]
    lines = ["\t".join(columns)]
    for row in rows:
        cells_out = []
        for col in columns:
            val = row[col]
            cells_out.append(f"{val:.4f}" if isinstance(val, float) else str(val))
        lines.append("\t".join(cells_out))
    sys.stdout.write("\n".join(lines) + "\n")
    if args.out:
        _emit(json.dumps(rows, indent=2, sort_keys=True) + "\n", args.out)
    if args.figures:
        from xorforest.report import render_bench_figures

        render_bench_figures(rows, args.figures)
    return 0


def _add_common(parser, include_n=True, n_default=128) -> None:
    if include_n:
        parser.add_argument("--n", type=int, default=n_default,
                            help=f"vertex count (default {n_default})")
    parser.add_argument("--seed", type=int, default=0,
                        help="base random seed (default 0)")
    parser.add_argument("--c-factor", type=int, default=4, dest="c_factor",
                        help="layer count scale factor (default 4)")
    parser.add_argument("--families", type=int, default=3,
                        help="sampling families per cut structure (default 3)")
    parser.add_argument("--copies", type=int, default=None,
                        help="copies per layer in boosted mode")
    parser.add_argument("--check-cadence", type=int, default=0,
                        dest="check_cadence",
                        help="full invariant audit every K ops (0 = never)")
    parser.add_argument("--omit-timings", action="store_true",
                        dest="omit_timings",
                        help="exclude wall-clock data for byte-stable stats")
    parser.add_argument("--out", default=None,
                        help="write the stats document to this path")
    parser.add_argument("--figures", default=None, metavar="DIR",
                        help="render figures into this directory")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="xorforest",
        description="fully dynamic connectivity: run, fuzz, measure, bench",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="replay a workload file")
    p_run.add_argument("--workload", required=True,
                       help="workload file to replay")
    p_run.add_argument("--mode", default="layered",
                       choices=["layered", "boosted", "oracle", "differential"])
    p_run.add_argument("--fail-on-mismatch", action="store_true",
                       dest="fail_on_mismatch",
                       help="exit 1 if differential queries ever disagree")
    _add_common(p_run, include_n=False)
    p_run.set_defaults(func=cmd_run, n=None)

    p_gen = sub.add_parser("gen", help="generate a workload file")
    p_gen.add_argument("--ops", type=int, default=10000,
                       help="operation count (default 10000)")
    p_gen.add_argument("--mix", type=_parse_mix, default=(0.45, 0.45, 0.10),
                       help="insert:delete:query weights (default 45:45:10)")
    p_gen.add_argument("--n", type=int, default=128)
    p_gen.add_argument("--seed", type=int, default=0)
    p_gen.add_argument("--out", default=None,
                       help="output file (default: stdout)")
    p_gen.set_defaults(func=cmd_gen)

    p_fuzz = sub.add_parser("fuzz", help="differential fuzz against the oracle")
    p_fuzz.add_argument("--ops", type=int, default=10000)
    p_fuzz.add_argument("--mix", type=_parse_mix, default=(0.45, 0.45, 0.10))
    p_fuzz.add_argument("--mode", default="layered",
                        choices=["layered", "boosted"])
    p_fuzz.add_argument("--fail-on-mismatch", action="store_true",
                        dest="fail_on_mismatch",
                        help="exit 1 on any one-sided query mismatch")
    _add_common(p_fuzz)
    p_fuzz.set_defaults(func=cmd_fuzz)

    p_measure = sub.add_parser("measure",
                               help="estimate cut-edge recovery success rates")
    p_measure.add_argument("--cut-sizes", type=_parse_int_list,
                           default=[1, 2, 4, 16, 256], dest="cut_sizes")
    p_measure.add_argument("--trials", type=int, default=10000)
    _add_common(p_measure, n_default=1024)
    p_measure.set_defaults(func=cmd_measure)

    p_bench = sub.add_parser("bench", help="sweep n and modes on one workload")
    p_bench.add_argument("--n-grid", type=_parse_int_list,
                         default=[256, 1024, 4096], dest="n_grid")
    p_bench.add_argument("--modes", type=lambda s: s.split(","),
                         default=["layered", "boosted"])
    p_bench.add_argument("--ops", type=int, default=2000)
    p_bench.add_argument("--mix", type=_parse_mix, default=(0.45, 0.45, 0.10))
    p_bench.add_argument("--jobs", type=int, default=1,
                         help="cells to run concurrently (results identical)")
    _add_common(p_bench, include_n=False)
    p_bench.set_defaults(func=cmd_bench)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on usage errors; 2 is reserved for soundness
        # violations here, so fold parse failures into the contract code.
        return 0 if exc.code == 0 else 1
    try:
        return args.func(args)
    except (WorkloadError, ValueError, OSError) as err:
        print(f"error: {err}", file=sys.stderr)
        return 1
    except (SoundnessError, StateCorruptionError) as err:
        print(f"soundness violation: {err}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
