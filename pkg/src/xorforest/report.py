"""Figure rendering for run stats, success tables, and benchmark rows.

Everything renders through the file-backed backend and writes PNG
files with deterministic names into a caller-chosen directory; no
display server is touched. Each renderer returns the list of paths it
wrote so callers can report them alongside the textual output.
"""

from __future__ import annotations

import os

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt


def _finish(fig, path: str, written: list[str]) -> None:
    fig.tight_layout()
    fig.savefig(path, dpi=110)
    plt.close(fig)
    written.append(path)


def render_run_figures(stats, outdir: str, prefix: str = "run") -> list[str]:
    """Figures for one replay: op-cost bars, layer health, timings."""
    os.makedirs(outdir, exist_ok=True)
    data = stats.to_dict() if hasattr(stats, "to_dict") else dict(stats)
    written: list[str] = []

    kinds = [k for k in ("insert", "delete", "query") if k in data["cutset_ops"]]
    if kinds:
        fig, ax = plt.subplots(figsize=(6, 4))
        means = [data["cutset_ops"][k]["mean"] for k in kinds]
        maxes = [data["cutset_ops"][k]["max"] for k in kinds]
        xs = range(len(kinds))
        ax.bar([x - 0.2 for x in xs], means, width=0.4, label="mean")
        ax.bar([x + 0.2 for x in xs], maxes, width=0.4, label="max")
        ax.set_xticks(list(xs), kinds)
        ax.set_ylabel("cut-structure operations per op")
        ax.set_title(f"per-operation cost (n={data['n']}, {data['mode']})")
        ax.legend()
        _finish(fig, os.path.join(outdir, f"{prefix}_cutset_ops.png"), written)

    layer_totals = data.get("invariant1_total") or []
    if layer_totals and data.get("invariant_checks"):
        fig, ax = plt.subplots(figsize=(7, 4))
        ax.bar(range(len(layer_totals)), layer_totals)
        ax.set_xlabel("layer")
        ax.set_ylabel("unmerged non-maximal trees (total over audits)")
        ax.set_title(
            f"layer health across {data['invariant_checks']} audits"
        )
        _finish(fig, os.path.join(outdir, f"{prefix}_layer_health.png"), written)

    timings = data.get("timings")
    if timings:
        fig, ax = plt.subplots(figsize=(6, 4))
        kinds = [k for k in ("insert", "delete", "query") if k in timings]
        for offset, quant in zip((-0.25, 0.0, 0.25), ("p50", "p90", "p99")):
            ys = [timings[k][quant] * 1e6 for k in kinds]
            ax.bar([x + offset for x in range(len(kinds))], ys,
                   width=0.25, label=quant)
        ax.set_xticks(range(len(kinds)), kinds)
        ax.set_ylabel("time per op (microseconds)")
        ax.set_yscale("log")
        ax.set_title(f"latency quantiles (n={data['n']}, {data['mode']})")
        ax.legend()
        _finish(fig, os.path.join(outdir, f"{prefix}_timings.png"), written)

    return written


def render_success_figure(rows, outdir: str,
                          prefix: str = "success") -> list[str]:
    """Hit rate against cut size, with the one-half floor marked."""
    os.makedirs(outdir, exist_ok=True)
    written: list[str] = []
    rows = sorted(rows, key=lambda r: r["cut_size"])
    sizes = [r["cut_size"] for r in rows]
    rates = [r["rate"] for r in rows]
    lows = [r["lcb99"] for r in rows]
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.plot(sizes, rates, marker="o", label="observed rate")
    ax.plot(sizes, lows, marker=".", linestyle="--", label="99% lower bound")
    ax.axhline(0.5, color="gray", linestyle=":", label="required floor")
    if sizes and max(sizes) > 8:
        ax.set_xscale("symlog")
    ax.set_ylim(0, 1.05)
    ax.set_xlabel("cut size")
    ax.set_ylabel("per-call success rate")
    ax.set_title("cut-edge recovery success")
    ax.legend()
    _finish(fig, os.path.join(outdir, f"{prefix}_rates.png"), written)
    return written


def render_bench_figures(rows, outdir: str, prefix: str = "bench") -> list[str]:
    """Per-op cost curves over the n grid, one line per mode."""
    os.makedirs(outdir, exist_ok=True)
    written: list[str] = []
    modes = sorted({r["mode"] for r in rows})
    for metric, label in (
        ("insert_ops_mean", "cut-structure ops per insert"),
        ("delete_ops_mean", "cut-structure ops per delete"),
    ):
        fig, ax = plt.subplots(figsize=(6, 4))
        for mode in modes:
            series = sorted(
                (r for r in rows if r["mode"] == mode), key=lambda r: r["n"]
            )
            ax.plot(
                [r["n"] for r in series],
                [r[metric] for r in series],
                marker="o",
                label=mode,
            )
        ax.set_xscale("log", base=2)
        ax.set_xlabel("vertices")
        ax.set_ylabel(label)
        ax.set_title(label)
        ax.legend()
        _finish(
            fig,
            os.path.join(outdir, f"{prefix}_{metric.split('_')[0]}_cost.png"),
            written,
        )
    return written
