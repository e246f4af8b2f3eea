"""Run-report assembly, CSV table emission, and text rendering."""

from __future__ import annotations

import json

from .errors import FormatError

METRIC_NAMES = ("accuracy", "precision", "recall", "f1")
ABLATION_NAMES = ("hybrid", "ctf_only", "dbf_only")


def write_report_json(path, report: dict) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(report, fh, indent=2, sort_keys=True)
        fh.write("\n")


def load_report_json(path) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            report = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise FormatError(f"{path}: {exc}") from exc
    if not isinstance(report, dict) or "scenarios" not in report:
        raise FormatError(f"{path}: not a run report (missing 'scenarios')")
    return report


def write_classifier_tables(stem, report: dict) -> list[str]:
    """One CSV per scenario: classifier rows, metric mean/std columns."""
    paths = []
    for scenario, body in sorted(report.get("scenarios", {}).items()):
        path = f"{stem}.{scenario}.table.csv"
        with open(path, "w", encoding="utf-8") as fh:
            header = ["classifier"]
            for name in METRIC_NAMES:
                header += [f"{name}_mean", f"{name}_std"]
            fh.write(",".join(header) + "\n")
            for clf, metrics in sorted(body.get("classifiers", {}).items()):
                row = [clf]
                for name in METRIC_NAMES:
                    cell = metrics.get(name, {})
                    row += [f"{cell.get('mean', float('nan')):.6f}",
                            f"{cell.get('std', float('nan')):.6f}"]
                fh.write(",".join(row) + "\n")
        paths.append(path)
    return paths


def write_ablation_csv(stem, report: dict) -> str:
    """Accuracy-by-feature-set rows: hybrid vs CTF-only vs DBF-only."""
    path = f"{stem}.ablation.csv"
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("scenario,feature_set,accuracy_mean,accuracy_std\n")
        for scenario, body in sorted(report.get("scenarios", {}).items()):
            for name in ABLATION_NAMES:
                cell = body.get("ablations", {}).get(name, {}).get("accuracy", {})
                fh.write(
                    f"{scenario},{name},{cell.get('mean', float('nan')):.6f},"
                    f"{cell.get('std', float('nan')):.6f}\n"
                )
    return path


def _fmt_cell(metrics: dict | None, name: str) -> str:
    if not metrics or name not in metrics:
        return "n/a"
    cell = metrics[name]
    return f"{cell['mean']*100:6.2f} ± {cell['std']*100:4.2f}"


def render_report_text(report: dict) -> str:
    """Aligned per-scenario tables with mean ± std percentages."""
    lines = []
    prov = report.get("provenance", {})
    if prov:
        lines.append(
            f"run {prov.get('version', '?')}  seed={prov.get('seed', '?')}  "
            f"config={str(prov.get('config_hash', '?'))[:12]}"
        )
        lines.append("")
    scenarios = report.get("scenarios", {})
    expected = sorted(scenarios) or []
    for scenario in expected:
        body = scenarios[scenario] or {}
        lines.append(f"scenario: {scenario}")
        header = f"  {'classifier':<16}" + "".join(f"{m:>16}" for m in METRIC_NAMES)
        lines.append(header)
        classifiers = body.get("classifiers", {})
        if not classifiers:
            lines.append("  (no classifier results: n/a)")
        for clf in sorted(classifiers):
            row = f"  {clf:<16}"
            for name in METRIC_NAMES:
                row += f"{_fmt_cell(classifiers[clf], name):>16}"
            lines.append(row)
        ablations = body.get("ablations", {})
        if ablations:
            lines.append(f"  {'feature set':<16}{'accuracy':>16}")
            for name in ABLATION_NAMES:
                cell = ablations.get(name)
                row = f"  {name:<16}{_fmt_cell(cell, 'accuracy'):>16}"
                lines.append(row)
        lines.append("")
    if not scenarios:
        lines.append("(empty report: n/a)")
    return "\n".join(lines)
