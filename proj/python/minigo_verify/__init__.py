"""Bounded verification of channel safety, global deadlocks and goroutine
leaks in MiniGo programs."""

import json

from ._core import (
    REPORT_SCHEMA,
    AssumptionError,
    MinigoError,
    MissingBound,
    Model,
    ModelError,
    ParseError,
    Program,
    UnresolvedBounds,
    analyze_json,
    build,
    check,
    emit_promela,
    parse,
    parse_file,
    render_report,
)

__all__ = [
    "REPORT_SCHEMA",
    "AssumptionError",
    "MinigoError",
    "MissingBound",
    "Model",
    "ModelError",
    "ParseError",
    "Program",
    "UnresolvedBounds",
    "analyze",
    "analyze_json",
    "build",
    "check",
    "emit_promela",
    "parse",
    "parse_file",
    "render_report",
]


def analyze(files, bounds=None, **options):
    """Runs the full analysis over `files` and returns the report as a dict.

    Options mirror the command line: default_bound, emit_promela_dir,
    strict, stop_on_first, exhaustive, max_procs, max_states, jobs.
    """
    return json.loads(analyze_json([str(f) for f in files], bounds or {}, **options))
