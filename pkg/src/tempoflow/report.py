"""Delimited tables and figure rendering for experiment reports.

Result data stays exact: JSON and CSV carry rationals as strings, and the
PNG figures are derived views written next to the primary output.  Figures
carry fixed metadata so identical runs produce identical bytes.
"""

from __future__ import annotations

import csv
import math
from typing import Iterable, Mapping, Sequence

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)

from .model import is_infinite  # noqa: E402

PNG_METADATA = {"Software": "tempoflow"}


def fmt(x) -> str:
    """Stable exact rendering of a report scalar; empty for missing."""
    if x is None:
        return ""
    if isinstance(x, bool):
        return "yes" if x else "no"
    if isinstance(x, float) and math.isinf(x):
        return "inf"
    if is_infinite(x):
        return "inf"
    return str(x)


def write_csv(path, header: Sequence[str], rows: Iterable[Sequence]) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        for row in rows:
            writer.writerow([fmt(x) for x in row])


def format_table(headers: Sequence[str], rows: Iterable[Sequence]) -> str:
    """Aligned plain-text table; returns a string ending in a newline."""
    cells = [[fmt(x) for x in row] for row in rows]
    widths = [len(h) for h in headers]
    for row in cells:
        for i, cell in enumerate(row):
            widths[i] = max(widths[i], len(cell))
    def line(parts):
        return "  ".join(p.ljust(w) for p, w in zip(parts, widths)).rstrip()
    out = [line(headers), line(["-" * w for w in widths])]
    out.extend(line(row) for row in cells)
    return "\n".join(out) + "\n"


def _finite(x) -> float:
    value = float(x)
    if not math.isfinite(value):
        raise ValueError("figure rendering expects finite values")
    return value


def render_pattern_figure(path, series: Mapping[str, Mapping[int, object]], title: str) -> None:
    """Step plot of one or more value-over-time patterns."""
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    for label, pattern in series.items():
        thetas = sorted(pattern)
        ax.step(thetas, [_finite(pattern[t]) for t in thetas], where="post", label=label)
    ax.set_xlabel("time")
    ax.set_ylabel("value reached")
    ax.set_title(title)
    ax.legend(loc="lower right", fontsize="small")
    fig.tight_layout()
    fig.savefig(path, metadata=PNG_METADATA)
    plt.close(fig)


def render_price_figure(path, report, title: str) -> None:
    """Undirected-versus-oriented comparison bars for one PriceReport."""
    fig, ax = plt.subplots(figsize=(4.5, 4.0))
    labels = ["undirected", "best oriented"]
    values = [report.undirected, report.oriented]
    heights = [0.0 if is_infinite(v) else float(v) for v in values]
    bars = ax.bar(labels, heights, color=["#4477aa", "#ee6677"])
    for bar, value in zip(bars, values):
        ax.annotate(
            fmt(value),
            (bar.get_x() + bar.get_width() / 2, bar.get_height()),
            ha="center",
            va="bottom",
            fontsize="small",
        )
    ax.set_ylabel("flow value" if report.objective == "flow" else "quickest time")
    ax.set_title(title)
    fig.tight_layout()
    fig.savefig(path, metadata=PNG_METADATA)
    plt.close(fig)


def render_eaf_figure(path, report, title: str) -> None:
    """Undirected pattern against every orientation's value curve."""
    fig, ax = plt.subplots(figsize=(6.5, 4.0))
    for i, row in enumerate(report.rows):
        thetas = sorted(row.pattern)
        ax.step(
            thetas,
            [_finite(row.pattern[t]) for t in thetas],
            where="post",
            color="0.75",
            linewidth=0.8,
            label="orientations" if i == 0 else None,
        )
    pattern = report.undirected_pattern
    thetas = sorted(pattern)
    ax.step(
        thetas,
        [_finite(pattern[t]) for t in thetas],
        where="post",
        color="#222222",
        linewidth=2.0,
        label="undirected pattern",
    )
    ax.set_xlabel("time")
    ax.set_ylabel("value reached")
    ax.set_title(title)
    ax.legend(loc="lower right", fontsize="small")
    fig.tight_layout()
    fig.savefig(path, metadata=PNG_METADATA)
    plt.close(fig)
