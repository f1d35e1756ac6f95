"""Report emission: per-cell CSV/markdown plus the per-model robustness
summary. Row order and number formatting are fixed so identical runs emit
byte-identical files."""

from __future__ import annotations

import csv
import os
from dataclasses import dataclass

COLUMNS = (
    "group", "source", "model", "config_id",
    "min_map", "mean_map", "max_map", "map_dev", "ttime_ms", "etime_ms",
)


@dataclass(frozen=True)
class ReportRow:
    group: str
    source: str
    model: str
    config_id: str
    min_map: float
    mean_map: float
    max_map: float
    map_dev: float
    ttime_ms: int
    etime_ms: int

    def cells(self) -> list[str]:
        return [
            self.group, self.source, self.model, self.config_id,
            f"{self.min_map:.6f}", f"{self.mean_map:.6f}", f"{self.max_map:.6f}",
            f"{self.map_dev:.6f}", str(self.ttime_ms), str(self.etime_ms),
        ]


def _sorted_rows(rows) -> list[ReportRow]:
    return sorted(rows, key=lambda r: (r.group, r.source, r.model, r.config_id))


def emit_report(rows, out_dir, formats=("csv", "markdown")) -> list[str]:
    """Write report.csv / report.md with one row per evaluated cell."""
    os.makedirs(out_dir, exist_ok=True)
    rows = _sorted_rows(rows)
    written = []
    if "csv" in formats:
        path = os.path.join(out_dir, "report.csv")
        with open(path, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(COLUMNS)
            for row in rows:
                writer.writerow(row.cells())
        written.append(path)
    if "markdown" in formats:
        path = os.path.join(out_dir, "report.md")
        with open(path, "w", encoding="utf-8") as fh:
            fh.write("| " + " | ".join(COLUMNS) + " |\n")
            fh.write("|" + "|".join(["---"] * len(COLUMNS)) + "|\n")
            for row in rows:
                fh.write("| " + " | ".join(row.cells()) + " |\n")
        written.append(path)
    return written


def robustness_rows(rows) -> list[ReportRow]:
    """Aggregate cells into one row per (group, source, model): min, mean and
    max MAP across that model's configurations plus their spread."""
    grouped: dict[tuple[str, str, str], list[ReportRow]] = {}
    for row in rows:
        grouped.setdefault((row.group, row.source, row.model), []).append(row)
    out = []
    for (group, source, model), members in sorted(grouped.items()):
        maps = [m.mean_map for m in members]
        out.append(ReportRow(
            group=group,
            source=source,
            model=model,
            config_id=f"{len(members)}-configs",
            min_map=min(maps),
            mean_map=sum(maps) / len(maps),
            max_map=max(maps),
            map_dev=max(maps) - min(maps),
            ttime_ms=sum(m.ttime_ms for m in members),
            etime_ms=sum(m.etime_ms for m in members),
        ))
    return out


def write_report_files(result, out_dir, formats=("csv", "markdown")) -> list[str]:
    """Emit the per-cell report, the robustness summary and the missing-cell
    and warning logs for a finished run."""
    os.makedirs(out_dir, exist_ok=True)
    written = emit_report(result.rows, out_dir, formats)

    summary = robustness_rows(result.rows)
    path = os.path.join(out_dir, "robustness.csv")
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(COLUMNS)
        for row in summary:
            writer.writerow(row.cells())
    written.append(path)

    path = os.path.join(out_dir, "missing_cells.log")
    with open(path, "w", encoding="utf-8") as fh:
        for key, reason in sorted(result.missing):
            fh.write(f"{key}\t{reason}\n")
    written.append(path)

    path = os.path.join(out_dir, "warnings.log")
    with open(path, "w", encoding="utf-8") as fh:
        for line in result.warnings:
            fh.write(line + "\n")
    written.append(path)
    return written


def read_report_csv(path) -> list[ReportRow]:
    rows = []
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        for record in reader:
            rows.append(ReportRow(
                group=record["group"],
                source=record["source"],
                model=record["model"],
                config_id=record["config_id"],
                min_map=float(record["min_map"]),
                mean_map=float(record["mean_map"]),
                max_map=float(record["max_map"]),
                map_dev=float(record["map_dev"]),
                ttime_ms=int(record["ttime_ms"]),
                etime_ms=int(record["etime_ms"]),
            ))
    return rows
