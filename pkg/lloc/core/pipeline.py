"""
General approximation pipeline

For every candidate leftmost point p: pivot tournament, feedback arc set,
ordering with p prepended, bucketing, retraction, WLLOC solve, extension.
The candidate with the fewest violated constraints wins.
"""

import logging
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Union

import numpy as np

from ..errors import ConfigError, InvalidPartition, LengthMismatch
from ..models.schemas import (
    CandidateRecord,
    ExtensionMode,
    PipelineConfig,
    RetractionMode,
    SelectionMode,
    SolveReport,
)
from ..config import get_settings
from ..utils.helpers import min_positive_gap
from ..utils.logging import StageTimer
from ..utils.rng import derive_seed
from ..utils.validators import validate_partition, validate_point
from .arrangement import solve_exact
from .instance import Embedding, Instance, violated_count, violated_estimate
from .tournament import FasResult, pivot_tournament, solve_fas, topological_order
from .wlloc import CellSolution, WllocInstance, representative_retraction, retraction, solve_heuristic

logger = logging.getLogger(__name__)

JITTER_FACTOR = 1e-3


def bucketize(ordering: Sequence[int], b: int) -> List[List[int]]:
    """
    Cut the ordering into b contiguous blocks; when b does not divide n the
    first n mod b blocks get one extra element
    """
    ordering = [int(x) for x in ordering]
    n = len(ordering)
    if b < 3 or b > n:
        raise ConfigError(f"b must be in [3, n={n}], got {b}")
    size, extra = divmod(n, b)
    buckets = []
    start = 0
    for j in range(b):
        length = size + 1 if j < extra else size
        buckets.append(ordering[start:start + length])
        start += length
    return buckets


def extend(g: Sequence[float], buckets: Sequence[Sequence[int]],
           mode: ExtensionMode = ExtensionMode.COLLAPSE,
           ordering: Optional[Sequence[int]] = None) -> Embedding:
    """
    Lift bucket positions to all points.

    COLLAPSE puts every point of bucket j at g[j]. JITTER spreads bucket j
    evenly over [g[j] - delta, g[j] + delta] in within-bucket order, with
    delta = 1e-3 * (smallest positive gap of g); the spread runs in the
    direction of g from the first bucket to the last.
    """
    g = np.asarray(g, dtype=float)
    if g.size != len(buckets):
        raise LengthMismatch(len(buckets), int(g.size))
    n = sum(len(bucket) for bucket in buckets)
    buckets = validate_partition(buckets, n)
    mode = ExtensionMode(mode)

    positions = np.empty(n, dtype=float)
    if mode is ExtensionMode.COLLAPSE:
        for j, bucket in enumerate(buckets):
            positions[bucket] = g[j]
        return Embedding(positions)

    gap = min_positive_gap(g)
    delta = JITTER_FACTOR * gap if gap is not None else 0.0
    descending = g.size > 1 and g[0] > g[-1]
    rank = None
    if ordering is not None:
        if sorted(int(x) for x in ordering) != list(range(n)):
            raise InvalidPartition("ordering must be a permutation of the bucketed points")
        rank = {int(x): r for r, x in enumerate(ordering)}

    for j, bucket in enumerate(buckets):
        members = sorted(bucket, key=rank.__getitem__) if rank is not None else list(bucket)
        if len(members) == 1:
            positions[members[0]] = g[j]
            continue
        offsets = np.linspace(-delta, delta, len(members))
        if descending:
            offsets = offsets[::-1]
        positions[members] = g[j] + offsets
    return Embedding(positions)


@dataclass
class PivotCandidate:
    pivot: int
    back_arcs: int
    retraction_weight: int
    exact: bool
    embedding: Embedding
    score: Union[int, float] = 0
    estimated: bool = False
    timer: StageTimer = field(default_factory=StageTimer)

    def record(self) -> CandidateRecord:
        return CandidateRecord(
            pivot=self.pivot,
            back_arcs=self.back_arcs,
            retraction_weight=self.retraction_weight,
            solver="exact" if self.exact else "heuristic",
            violated=self.score,
            estimated=self.estimated,
        )


def _wlloc_solve(w: WllocInstance, cfg: PipelineConfig, seed: int) -> CellSolution:
    if w.b <= cfg.exact_cap:
        return solve_exact(w, exact_cap=cfg.exact_cap)
    return solve_heuristic(w, restarts=cfg.heuristic_restarts, seed=seed)


@dataclass(frozen=True)
class PivotRetraction:
    fas: FasResult
    ordering: List[int]
    buckets: List[List[int]]
    wlloc: WllocInstance


def build_retraction(inst: Instance, p: int, cfg: PipelineConfig,
                     timer: Optional[StageTimer] = None) -> PivotRetraction:
    """Steps up to the retraction for leftmost point p"""
    p = validate_point(p, inst.n)
    b = cfg.resolved_b(inst.n)
    seed = derive_seed(cfg.seed, p)
    timer = timer or StageTimer(f"pivot {p}", logger)

    with timer.stage("tournament"):
        tournament = pivot_tournament(inst, p)

    with timer.stage("fas"):
        fas = solve_fas(tournament, cfg.fas_method, max_rounds=cfg.local_max_rounds)
        ordering = [p] + topological_order(fas, tournament)

    with timer.stage("bucketize"):
        buckets = bucketize(ordering, b)

    with timer.stage("retraction"):
        if cfg.retraction is RetractionMode.REPRESENTATIVE:
            w, _ = representative_retraction(inst, buckets, seed, convention=cfg.convention)
        else:
            w = retraction(inst, buckets, convention=cfg.convention)

    return PivotRetraction(fas=fas, ordering=ordering, buckets=buckets, wlloc=w)


def solve_for_pivot(inst: Instance, p: int, cfg: PipelineConfig) -> PivotCandidate:
    """One candidate embedding for leftmost point p"""
    p = validate_point(p, inst.n)
    timer = StageTimer(f"pivot {p}", logger)
    built = build_retraction(inst, p, cfg, timer)

    with timer.stage("wlloc"):
        solution = _wlloc_solve(built.wlloc, cfg, derive_seed(cfg.seed, p))

    with timer.stage("extend"):
        embedding = extend(solution.positions, built.buckets, cfg.extension_mode, built.ordering)

    return PivotCandidate(
        pivot=p,
        back_arcs=built.fas.back_arcs,
        retraction_weight=solution.violated_weight,
        exact=solution.exact,
        embedding=embedding,
        timer=timer,
    )


def _score(inst: Instance, candidate: PivotCandidate, cfg: PipelineConfig) -> PivotCandidate:
    with candidate.timer.stage("select"):
        if cfg.selection is SelectionMode.ESTIMATE:
            seed = derive_seed(cfg.seed, candidate.pivot)
            candidate.score = violated_estimate(inst, candidate.embedding, cfg.samples, seed)
            candidate.estimated = True
        else:
            candidate.score = violated_count(inst, candidate.embedding)
    return candidate


def solve(inst: Instance, cfg: PipelineConfig, threads: int = 1) -> SolveReport:
    """
    Run every pivot of cfg.pivot_set, keep the candidate with the smallest
    score (ties by smaller pivot), and recount its violations exactly
    """
    pivots = cfg.pivots(inst.n)
    b = cfg.resolved_b(inst.n)
    workers = threads if threads > 0 else get_settings().worker_count
    logger.info(
        f"Solving n={inst.n} with b={b}, {len(pivots)} pivots, "
        f"{cfg.extension_mode.value} extension, {cfg.selection.value} selection, {workers} workers"
    )
    started = time.perf_counter()

    def run(p: int) -> PivotCandidate:
        return _score(inst, solve_for_pivot(inst, p, cfg), cfg)

    if workers > 1 and len(pivots) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            candidates = list(pool.map(run, pivots))
    else:
        candidates = [run(p) for p in pivots]

    winner = min(candidates, key=lambda c: (c.score, c.pivot))
    timer = StageTimer("solve", logger)
    for candidate in candidates:
        timer.merge(candidate.timer)
    with timer.stage("recount"):
        violated = violated_count(inst, winner.embedding)

    total = inst.total_constraints
    timings = timer.as_millis()
    timings["total"] = round((time.perf_counter() - started) * 1000.0, 3)
    logger.info(f"Chosen pivot {winner.pivot}: {violated} of {total} constraints violated")

    return SolveReport(
        chosen_pivot=winner.pivot,
        satisfied_fraction=1.0 - violated / total,
        violated_count=violated,
        total_constraints=total,
        exact=all(c.exact for c in candidates),
        config=cfg.model_dump(mode="json"),
        candidates=[c.record() for c in candidates],
        timings_ms=timings,
        embedding=winner.embedding.tolist(),
    )
