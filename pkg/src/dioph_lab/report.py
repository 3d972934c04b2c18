"""JSON/CSV report emission with config hashes and timing sidecars.

Report bodies are deterministic for a given (config, seed): wall-clock
figures go to a ``.timing.json`` file next to the report.
"""
from __future__ import annotations

import csv
import hashlib
import json
import os
import time
from contextlib import contextmanager

from .config import RunConfig


def config_hash(cfg: RunConfig) -> str:
    return hashlib.sha256(cfg.canonical().encode()).hexdigest()


def build_report(cfg: RunConfig, checks: list, verdict: bool, body: dict) -> dict:
    """``checks`` are the tags of the inequalities exercised by the run."""
    return {
        "subcommand": cfg.subcommand,
        "config": cfg.to_json(),
        "config_sha256": config_hash(cfg),
        "seed": cfg.seed,
        "checks": sorted(checks),
        "verdict": "PASS" if verdict else "FAIL",
        "result": body,
    }


def write_json(path: str, obj) -> None:
    d = os.path.dirname(path)
    if d:
        os.makedirs(d, exist_ok=True)
    with open(path, "w") as fh:
        json.dump(obj, fh, indent=2, sort_keys=True)
        fh.write("\n")


def write_csv(path: str, header, rows) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(header)
        for r in rows:
            w.writerow(r)


def timing_path(path: str) -> str:
    root, _ = os.path.splitext(path)
    return root + ".timing.json"


@contextmanager
def stopwatch():
    rec = {}
    t0 = time.perf_counter()
    c0 = time.process_time()
    try:
        yield rec
    finally:
        rec["wall_seconds"] = round(time.perf_counter() - t0, 3)
        rec["cpu_seconds"] = round(time.process_time() - c0, 3)
