"""File reporting for benchmark runs: delimited output plus figures.

Figures are rendered headlessly to files; the CSV sits alongside them so
the numbers behind every plot stay machine-readable.
"""

from __future__ import annotations

import csv
from pathlib import Path
from typing import Iterable, Mapping

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .descent import RationalBase, iter_descent

CSV_FIELDS = (
    "fixture",
    "outcome",
    "factor_digits",
    "iterations",
    "gcd_calls",
    "wall_time_ms",
    "divisors_ok",
)


def write_bench_csv(rows: Iterable[Mapping], path: str | Path) -> Path:
    """One CSV row per fixture run, fixed column order."""
    path = Path(path)
    with path.open("w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=CSV_FIELDS)
        writer.writeheader()
        for row in rows:
            writer.writerow({k: row.get(k, "") for k in CSV_FIELDS})
    return path


def render_bench_summary(rows: Iterable[Mapping], path: str | Path) -> Path:
    """Bar chart of wall time and gcd calls per fixture."""
    rows = list(rows)
    path = Path(path)
    names = [str(r["fixture"]) for r in rows]
    times = [float(r["wall_time_ms"]) for r in rows]
    calls = [int(r["gcd_calls"]) for r in rows]

    fig, (ax_time, ax_calls) = plt.subplots(1, 2, figsize=(10, 4))
    ax_time.bar(names, times, color="tab:blue")
    ax_time.set_ylabel("wall time (ms)")
    ax_time.tick_params(axis="x", rotation=30)
    ax_calls.bar(names, calls, color="tab:orange")
    ax_calls.set_ylabel("gcd calls")
    ax_calls.tick_params(axis="x", rotation=30)
    fig.suptitle("descent benchmark")
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path


def render_descent_trajectory(
    n: int,
    base: RationalBase,
    path: str | Path,
    mark_iteration: int | None = None,
) -> Path:
    """Plot the bit length of Q after each descent step.

    Values overflow floats long before they overflow ints, so the plot
    tracks bit lengths, which fall on a straight line of slope
    -log2(a/b).  An optional marker flags the step where a probe hit.
    """
    path = Path(path)
    bits = [int(n).bit_length()]
    for q in iter_descent(n, base):
        bits.append(q.bit_length())

    fig, ax = plt.subplots(figsize=(7, 4))
    ax.plot(range(len(bits)), bits, lw=1.2, color="tab:blue")
    if mark_iteration is not None and mark_iteration < len(bits):
        ax.axvline(mark_iteration, color="tab:red", ls="--", lw=1)
        ax.annotate(
            "hit",
            xy=(mark_iteration, bits[mark_iteration]),
            xytext=(5, 5),
            textcoords="offset points",
            color="tab:red",
        )
    ax.set_xlabel("descent step")
    ax.set_ylabel("bits of Q")
    ax.set_title(f"descent of a {int(n).bit_length()}-bit input, base {base}")
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path
