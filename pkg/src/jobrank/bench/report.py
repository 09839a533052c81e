"""Evaluation report rendering: text table, CSV, JSON, and PNG figures."""

from __future__ import annotations

import csv
import json
from pathlib import Path

import matplotlib

matplotlib.use("Agg")  # headless rendering only
import matplotlib.pyplot as plt

from .evaluate import EvalReport

TABLE_COLUMNS = (
    ("config", "name"),
    ("ndcg@5", "metrics.ndcg@5"),
    ("ndcg@10", "metrics.ndcg@10"),
    ("recall@50", "metrics.recall@50"),
    ("recall@100", "metrics.recall@100"),
    ("mrr", "metrics.mrr"),
    ("p50 ms", "latency_ms.p50"),
    ("p95 ms", "latency_ms.p95"),
)


def _cell(row: dict, path: str) -> str:
    node = row
    for part in path.split("."):
        node = node[part]
    if isinstance(node, float):
        return f"{node:.4f}"
    return str(node)


def render_text_table(report: EvalReport) -> str:
    headers = [h for h, _ in TABLE_COLUMNS]
    rows = [[_cell(r, path) for _, path in TABLE_COLUMNS] for r in report.grid]
    widths = [
        max(len(headers[i]), *(len(r[i]) for r in rows)) if rows else len(headers[i])
        for i in range(len(headers))
    ]
    lines = [
        "  ".join(h.ljust(widths[i]) for i, h in enumerate(headers)),
        "  ".join("-" * w for w in widths),
    ]
    for r in rows:
        lines.append("  ".join(r[i].ljust(widths[i]) for i in range(len(r))))
    lines.append("")
    lines.append(
        f"queries={report.query_count} postings={report.posting_count} "
        f"zero-label queries={len(report.zero_label_queries)}"
    )
    return "\n".join(lines) + "\n"


def write_csv(report: EvalReport, path: str | Path) -> None:
    headers = [h for h, _ in TABLE_COLUMNS]
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(headers)
        for r in report.grid:
            writer.writerow([_cell(r, p) for _, p in TABLE_COLUMNS])


def render_figures(report: EvalReport, outdir: str | Path) -> list[Path]:
    """Bar charts per configuration: ranking quality, recall, latency."""
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    names = [r["name"] for r in report.grid]
    paths: list[Path] = []

    def bars(filename: str, series: dict[str, list[float]], ylabel: str, title: str) -> None:
        fig, ax = plt.subplots(figsize=(8, 4.5))
        n_series = len(series)
        width = 0.8 / max(1, n_series)
        for i, (label, values) in enumerate(series.items()):
            offsets = [x + i * width for x in range(len(names))]
            ax.bar(offsets, values, width=width, label=label)
        ax.set_xticks([x + 0.4 - width / 2 for x in range(len(names))])
        ax.set_xticklabels(names, rotation=20, ha="right")
        ax.set_ylabel(ylabel)
        ax.set_title(title)
        if n_series > 1:
            ax.legend()
        fig.tight_layout()
        target = outdir / filename
        fig.savefig(target, dpi=120)
        plt.close(fig)
        paths.append(target)

    bars(
        "ndcg.png",
        {
            "ndcg@5": [r["metrics"]["ndcg@5"] for r in report.grid],
            "ndcg@10": [r["metrics"]["ndcg@10"] for r in report.grid],
        },
        "ndcg",
        "Ranking quality by configuration",
    )
    bars(
        "recall.png",
        {
            "recall@50": [r["metrics"]["recall@50"] for r in report.grid],
            "recall@100": [r["metrics"]["recall@100"] for r in report.grid],
        },
        "recall",
        "Candidate recall by configuration (pre-filter)",
    )
    bars(
        "latency.png",
        {
            "p50": [r["latency_ms"]["p50"] for r in report.grid],
            "p95": [r["latency_ms"]["p95"] for r in report.grid],
        },
        "milliseconds",
        "Query latency by configuration",
    )
    return paths


def write_report(report: EvalReport, outdir: str | Path) -> dict[str, Path]:
    """Write report.json, report.csv, report.txt, and the PNG figures."""
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    json_path = outdir / "report.json"
    json_path.write_text(
        json.dumps(report.to_dict(), sort_keys=True, indent=2) + "\n", encoding="utf-8"
    )
    csv_path = outdir / "report.csv"
    write_csv(report, csv_path)
    txt_path = outdir / "report.txt"
    txt_path.write_text(render_text_table(report), encoding="utf-8")
    figure_paths = render_figures(report, outdir / "figures")
    out = {"json": json_path, "csv": csv_path, "table": txt_path}
    for p in figure_paths:
        out[p.stem] = p
    return out
