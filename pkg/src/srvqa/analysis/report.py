"""CSV / JSON / Markdown rendering of benchmark outputs.

Output tables mirror the benchmark's reporting shapes: a BSQ-rate grid
(methods x codecs), a per-clip ranking with top-3 markers, and a metric
correlation table.
"""

from __future__ import annotations

import csv
import io
import json
from typing import Dict, List, Mapping, Sequence

from .bsq import BsqResult
from .correlation import CorrelationReport
from .ranking import RankedRow

_MARKER_DECOR = {"best": "**{}**", "second": "__{}__", "third": "*{}*"}


def bsq_grid(
    results: Mapping[str, Mapping[str, float]], codecs: Sequence[str]
) -> List[List[str]]:
    """Rows = SR methods, columns = codecs, cells = average BSQ-rate."""
    header = ["sr_method"] + list(codecs)
    rows = [header]
    for method in results:
        row = [method]
        for codec in codecs:
            value = results[method].get(codec)
            row.append("" if value is None else f"{value:.3f}")
        rows.append(row)
    return rows


def rank_rows_table(rows: Sequence[RankedRow]) -> List[List[str]]:
    if not rows:
        return []
    metric_names = list(rows[0].metrics.keys())
    header = ["rank", "label", "subjective_score"] + metric_names
    table = [header]
    for row in rows:
        cells = [str(row.rank), row.label, f"{row.subjective_score:.3f}"]
        cells += [f"{row.metrics[m]:.3f}" for m in metric_names]
        table.append(cells)
    return table


def correlation_table(reports: Sequence[CorrelationReport]) -> List[List[str]]:
    table = [["metric", "plcc", "srcc"]]
    for r in reports:
        table.append([r.metric, f"{r.plcc:.3f}", f"{r.srcc:.3f}"])
    return table


def write_csv(table: Sequence[Sequence[str]], path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as f:
        csv.writer(f).writerows(table)


def csv_text(table: Sequence[Sequence[str]]) -> str:
    buf = io.StringIO()
    csv.writer(buf).writerows(table)
    return buf.getvalue()


def write_json(payload, path) -> None:
    with open(path, "w", encoding="utf-8") as f:
        json.dump(payload, f, indent=2, sort_keys=True)
        f.write("\n")


def markdown_table(table: Sequence[Sequence[str]]) -> str:
    if not table:
        return ""
    lines = ["| " + " | ".join(table[0]) + " |"]
    lines.append("|" + "|".join([" --- "] * len(table[0])) + "|")
    for row in table[1:]:
        lines.append("| " + " | ".join(row) + " |")
    return "\n".join(lines) + "\n"


def markdown_ranking(rows: Sequence[RankedRow]) -> str:
    """Ranking table with bold/underline/italic top-3 markers per column."""
    if not rows:
        return ""
    metric_names = list(rows[0].metrics.keys())
    table = [["rank", "label", "subjective_score"] + metric_names]
    for row in rows:
        cells = [str(row.rank), row.label]
        for column, value in [("subjective_score", row.subjective_score)] + [
            (m, row.metrics[m]) for m in metric_names
        ]:
            text = f"{value:.3f}"
            marker = row.markers.get(column)
            if marker:
                text = _MARKER_DECOR[marker].format(text)
            cells.append(text)
        table.append(cells)
    return markdown_table(table)


def bsq_results_to_grid(
    results: Sequence[BsqResult],
) -> Dict[str, Dict[str, float]]:
    """Group (test='method+codec' vs reference) results into a method x codec
    grid; labels are expected as 'method+codec'."""
    grid: Dict[str, Dict[str, float]] = {}
    for r in results:
        method, _, codec = r.test_label.partition("+")
        grid.setdefault(method, {})[codec or "default"] = r.bsq_rate
    return grid
