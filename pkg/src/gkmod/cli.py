"""Command line entry point: ``gkmod run <config>``."""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from typing import List, Optional

from .config import ConfigParseError, ConfigValidationError, build_config, read_config
from .kernel import BACKEND
from .lie import PRESETS
from .report import build_report, dumps, render_markdown, validate_report, write_reports
from .tasks import TaskResult, run_task

log = logging.getLogger("gkmod")

EXIT_OK, EXIT_TASK_FAILURE, EXIT_PARSE, EXIT_VALIDATION = 0, 1, 2, 3


def _configure_logging() -> None:
    level = os.environ.get("GKMOD_LOG", "error").lower()
    levels = {"error": logging.ERROR, "info": logging.INFO, "debug": logging.DEBUG}
    logging.basicConfig(level=levels.get(level, logging.ERROR), format="%(levelname)s %(name)s: %(message)s",
                        stream=sys.stderr)


def _timed(raw: dict, preset: Optional[str], index: int, seed_rng: int):
    # worker entry point: rebuild the config so nothing unpicklable crosses processes
    cfg = build_config(raw, preset)
    start = time.perf_counter()
    result = run_task(cfg, index, seed_rng)
    return result, time.perf_counter() - start


def run(config_path: str, preset: Optional[str] = None, out_dir: str = "gkmod_out", seed_rng: int = 0,
        jobs: int = 1) -> int:
    try:
        raw = read_config(config_path)
    except ConfigParseError as exc:
        print(f"gkmod: parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    try:
        cfg = build_config(raw, preset)
    except ConfigValidationError as exc:
        print(f"gkmod: validation error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    log.info("loaded %s: %d task(s), backend %s", config_path, len(cfg.tasks), BACKEND)

    results: List[TaskResult] = []
    timings = {}
    try:
        if jobs > 1 and len(cfg.tasks) > 1:
            with ProcessPoolExecutor(max_workers=jobs) as pool:
                futures = [pool.submit(_timed, raw, preset, i, seed_rng) for i in range(len(cfg.tasks))]
                pairs = [f.result() for f in futures]
        else:
            pairs = []
            for i in range(len(cfg.tasks)):
                start = time.perf_counter()
                pairs.append((run_task(cfg, i, seed_rng), time.perf_counter() - start))
    except ConfigValidationError as exc:
        print(f"gkmod: validation error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    for r, dt in pairs:
        results.append(r)
        timings[r.name] = dt
        log.info("task %s (%s): %s in %.2fs", r.name, r.kind, "pass" if r.passed else "fail", dt)
        if r.error:
            log.error("task %s raised %s", r.name, r.error)

    report = build_report(results, config_path, cfg.lie.name, cfg.n, seed_rng)
    report = json.loads(dumps(report))
    validate_report(report)
    write_reports(out_dir, report, render_markdown(report, results, timings, BACKEND))
    failed = [r.name for r in results if not r.passed or r.error]
    for name in failed:
        print(f"gkmod: task failed: {name}", file=sys.stderr)
    return EXIT_TASK_FAILURE if failed else EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="gkmod", description="Batch analyses of Lie algebra actions on "
                                     "polynomial-times-Gaussian functions.")
    sub = parser.add_subparsers(dest="command", required=True)
    r = sub.add_parser("run", help="run the tasks of a JSON config")
    r.add_argument("config")
    r.add_argument("--preset", choices=sorted(PRESETS), help="override the Lie algebra of the config")
    r.add_argument("--out", default="gkmod_out", help="output directory for report.json and report.md")
    r.add_argument("--seed-rng", type=int, default=0, help="seed for random sampling")
    r.add_argument("--jobs", type=int, default=1, help="maximum number of tasks run in parallel")
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    _configure_logging()
    if args.jobs < 1:
        print("gkmod: --jobs must be at least 1", file=sys.stderr)
        return EXIT_VALIDATION
    return run(args.config, args.preset, args.out, args.seed_rng, args.jobs)


if __name__ == "__main__":
    sys.exit(main())
