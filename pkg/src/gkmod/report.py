"""Serialization of task results into report.json and report.md."""

from __future__ import annotations

import json
import os
from fractions import Fraction
from typing import Dict, List, Sequence

from . import __version__
from .config import load_schema

REPORT_FORMAT = 1


def build_report(results: Sequence, config_path: str, lie_name: str, ambient_dim: int, seed_rng: int) -> dict:
    """Machine-readable report; contains no timing so identical runs give identical bytes."""
    return {
        "format": REPORT_FORMAT,
        "gkmod_version": __version__,
        "config": os.path.basename(str(config_path)),
        "lie": lie_name,
        "ambient_dim": ambient_dim,
        "seed_rng": seed_rng,
        "all_passed": all(r.passed and r.error is None for r in results),
        "tasks": [r.to_json() for r in results],
    }


def _encode(obj):
    if isinstance(obj, Fraction):
        return str(obj)
    if hasattr(obj, "to_json"):
        return obj.to_json()
    if isinstance(obj, (set, frozenset, tuple)):
        return list(obj)
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def dumps(report: dict) -> str:
    return json.dumps(report, indent=2, sort_keys=True, ensure_ascii=False, default=_encode) + "\n"


def validate_report(report: dict) -> None:
    import jsonschema

    jsonschema.validate(report, load_schema("report.schema.json"))


def render_markdown(report: dict, results: Sequence, timings: Dict[str, float], backend: str) -> str:
    lines: List[str] = [f"# gkmod report: {report['config']}", ""]
    lines.append(f"Lie algebra `{report['lie']}` on R^{report['ambient_dim']}, RNG seed {report['seed_rng']}, "
                 f"kernel backend `{backend}`.")
    lines.append("")
    lines.append("| task | kind | verdict | truncation | seconds |")
    lines.append("|---|---|---|---|---|")
    for r, rec in zip(results, report["tasks"]):
        trunc = ", ".join(f"{k}={v}" for k, v in rec["truncation"].items()) or "-"
        lines.append(f"| {r.name} | {r.kind} | {rec['verdict']} | {trunc} | {timings.get(r.name, 0.0):.2f} |")
    lines.append("")
    for r, rec in zip(results, report["tasks"]):
        lines.append(f"## {r.name} ({r.kind}): {rec['verdict']}")
        lines.append("")
        if r.error:
            lines.append(f"Error: `{r.error}`")
            lines.append("")
            continue
        if rec["truncation"]:
            lines.append("Truncation: " + ", ".join(f"{k} = {v}" for k, v in rec["truncation"].items()))
            lines.append("")
        if r.markdown:
            lines.extend(r.markdown)
            lines.append("")
    overall = "PASS" if report["all_passed"] else "FAIL"
    lines.append(f"Overall: **{overall}**")
    return "\n".join(lines) + "\n"


def write_reports(out_dir: str, report: dict, markdown: str) -> None:
    os.makedirs(out_dir, exist_ok=True)
    with open(os.path.join(out_dir, "report.json"), "w", encoding="utf-8") as fh:
        fh.write(dumps(report))
    with open(os.path.join(out_dir, "report.md"), "w", encoding="utf-8") as fh:
        fh.write(markdown)
