"""
Benchmark grids

A YAML grid lists cells; every cell crosses its corruption, b, method and seed
lists. Each combination becomes one BenchRow. Rows are sorted before they are
written, so the CSV does not depend on scheduling.
"""

import logging
import sys
import threading
import time
from concurrent.futures import ThreadPoolExecutor
from itertools import product
from pathlib import Path
from typing import Dict, List, Tuple

import numpy as np
import yaml

from ..config import get_settings
from ..core.instance import CorruptionSpec, corrupt, satisfied_fraction
from ..core.pipeline import solve
from ..core.warmup import solve_zero
from ..errors import ConfigError, LlocError
from ..formats.report import bench_csv
from ..models.schemas import (
    BenchCell,
    BenchGrid,
    BenchRow,
    Distribution,
    ExtensionMode,
    PipelineConfig,
    SelectionMode,
)
from .commands import generate_instance, generate_positions

logger = logging.getLogger(__name__)

RunSpec = Tuple[BenchCell, float, int, str, int]


def load_grid(path) -> BenchGrid:
    with open(path, "r") as f:
        data = yaml.safe_load(f) or {}
    if not isinstance(data, dict):
        raise ConfigError(f"Bench config {path} must be a mapping")
    return BenchGrid(**data)


def expand(grid: BenchGrid) -> List[RunSpec]:
    runs = []
    for cell in grid.cells:
        for corruption, b, method, seed in product(cell.corruption, cell.b, cell.method, cell.seeds):
            runs.append((cell, corruption, b, method, seed))
    return runs


def run_one(spec: RunSpec) -> BenchRow:
    cell, corruption, b, method, seed = spec
    instance_id = f"{cell.dist.value}-n{cell.n}-s{seed}"
    started = time.perf_counter()
    fraction = None
    failed = ""
    n = cell.n
    try:
        explicit_k = cell.dist is Distribution.MIXED_GAP and cell.k is not None
        positions = generate_positions(cell.dist, None if explicit_k else cell.n, seed,
                                       cell.clusters, cell.spread, cell.k)
        n = int(positions.size)
        inst = corrupt(generate_instance(positions, cell.dist), CorruptionSpec(corruption, seed))
        if method == "zero":
            fraction = satisfied_fraction(inst, solve_zero(inst))
        else:
            settings = get_settings()
            selection = SelectionMode.ESTIMATE if inst.n > settings.estimate_threshold else SelectionMode.EXACT
            cfg = PipelineConfig(
                b=b,
                extension_mode=ExtensionMode(method),
                selection=selection,
                samples=settings.estimate_samples,
                exact_cap=settings.exact_cap,
                heuristic_restarts=settings.heuristic_restarts,
                seed=seed,
            )
            fraction = solve(inst, cfg).satisfied_fraction
    except (LlocError, ValueError) as e:
        failed = f"{type(e).__name__}: {e}"
        logger.warning(f"Bench row {instance_id} b={b} {method} failed: {failed}")

    wall_ms = round((time.perf_counter() - started) * 1000.0, 3)
    return BenchRow(
        instance_id=instance_id,
        n=n,
        b=b,
        corruption=corruption,
        seed=seed,
        method=method,
        satisfied_fraction=fraction,
        wall_ms=wall_ms,
        failed=failed,
    )


def run_grid(grid: BenchGrid, workers: int = 1) -> List[BenchRow]:
    runs = expand(grid)
    rows: List[BenchRow] = []
    lock = threading.Lock()

    def task(spec: RunSpec):
        row = run_one(spec)
        with lock:
            rows.append(row)

    logger.info(f"Bench '{grid.name}': {len(runs)} runs on {workers} workers")
    if workers > 1 and len(runs) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            list(pool.map(task, runs))
    else:
        for spec in runs:
            task(spec)

    return sorted(rows, key=lambda r: (r.instance_id, r.b, r.corruption, r.method, r.seed))


def summarize(rows: List[BenchRow]) -> List[str]:
    """One line per (n, b, corruption, method) cell: mean +- std of the satisfied fraction"""
    groups: Dict[Tuple, List[BenchRow]] = {}
    for row in rows:
        dist = row.instance_id.split("-")[0]
        groups.setdefault((dist, row.n, row.b, row.corruption, row.method), []).append(row)

    lines = []
    for (dist, n, b, corruption, method), members in sorted(groups.items()):
        values = np.asarray([r.satisfied_fraction for r in members if r.satisfied_fraction is not None])
        failures = sum(1 for r in members if r.failed)
        if values.size:
            stats = f"{values.mean():.4f} +- {values.std():.4f}"
        else:
            stats = "n/a"
        lines.append(
            f"{dist:<10} n={n:<5} b={b:<3} eps={corruption:<7} {method:<9} "
            f"{stats} ({values.size} ok, {failures} failed)"
        )
    return lines


def cmd_bench(args) -> int:
    grid = load_grid(args.config)
    workers = args.threads if args.threads is not None else get_settings().worker_count
    rows = run_grid(grid, workers=workers)
    Path(args.out).write_text(bench_csv(rows))
    for line in summarize(rows):
        sys.stdout.write(line + "\n")
    logger.info(f"Wrote {len(rows)} rows to {args.out}")
    return 0
