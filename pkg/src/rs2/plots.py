"""Matplotlib figures for sweep output, rendered to files (Agg backend)."""

from __future__ import annotations

import math
import os

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt


def _rows_for(rows: list[dict], algorithm: str) -> list[dict]:
    return [r for r in rows if r["algorithm"] == algorithm and not r.get("error")]


def plot_rounds_vs_n(rows: list[dict], path: str) -> bool:
    """Total rounds against n for linear-regime runs (flatness check)."""
    data = sorted(_rows_for(rows, "linear"), key=lambda r: int(r["n"]))
    if not data:
        return False
    ns = [int(r["n"]) for r in data]
    rounds = [int(r["total_rounds"]) for r in data]
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.plot(ns, rounds, "o-")
    ax.set_xscale("log", base=2)
    ax.set_xlabel("n")
    ax.set_ylabel("total charged rounds")
    ax.set_ylim(0, max(rounds) + 2)
    ax.set_title("linear regime: rounds vs n")
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)
    return True


def plot_rounds_vs_delta(rows: list[dict], path: str) -> bool:
    """Core rounds against max degree for sublinear runs, with the
    sqrt(log D) * loglog D reference curve."""
    data = sorted(_rows_for(rows, "sublinear"), key=lambda r: int(r["delta"]))
    if not data:
        return False
    deltas = [int(r["delta"]) for r in data]
    core = [int(r["core_rounds"]) for r in data]
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.plot(deltas, core, "o-", label="core rounds (excl. final MIS)")
    ref = [
        math.sqrt(math.log2(d)) * max(1.0, math.log2(math.log2(d))) if d > 2 else 1.0
        for d in deltas
    ]
    scale = max(core) / max(ref) if max(ref) > 0 else 1.0
    ax.plot(deltas, [scale * x for x in ref], "--", label="C*sqrt(log D)*loglog D")
    ax.set_xscale("log", base=2)
    ax.set_xlabel("max degree")
    ax.set_ylabel("rounds")
    ax.legend()
    ax.set_title("sublinear regime: rounds vs degree")
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)
    return True


def render_sweep_figures(rows: list[dict], outdir: str) -> list[str]:
    os.makedirs(outdir, exist_ok=True)
    written = []
    p1 = os.path.join(outdir, "rounds_vs_n.png")
    if plot_rounds_vs_n(rows, p1):
        written.append(p1)
    p2 = os.path.join(outdir, "rounds_vs_delta.png")
    if plot_rounds_vs_delta(rows, p2):
        written.append(p2)
    return written
