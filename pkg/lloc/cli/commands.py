"""
Subcommand implementations

Each command takes the parsed argparse namespace and returns an exit code;
errors propagate to ``main`` which maps them to exit codes.
"""

import logging
import sys
from pathlib import Path
from typing import List, Optional

import numpy as np

from ..config import get_settings
from ..core.arrangement import enumerate_cells, solve_exact
from ..core.generators import clustered_positions, mixed_gap_positions, uniform_positions
from ..core.instance import (
    CorruptionSpec,
    Embedding,
    Instance,
    TieRule,
    corrupt,
    from_embedding,
    goodness_profile,
    violated_count,
)
from ..core.pipeline import build_retraction, solve
from ..core.warmup import LpMode, solve_zero
from ..core.wlloc import retraction
from ..errors import ConfigError, LengthMismatch, NoPerfectEmbedding
from ..formats.report import model_json, report_json
from ..formats.text import (
    dump_wlloc,
    read_embedding,
    read_instance,
    write_embedding,
    write_instance,
)
from ..models.schemas import (
    Distribution,
    EvalReport,
    GoodnessSummary,
    OracleReport,
    PipelineConfig,
    SelectionMode,
    ZeroReport,
)

logger = logging.getLogger(__name__)

EXIT_OK = 0

CELL_ENUMERATION_CAP = 4


def _emit(text: str, out: Optional[str]) -> None:
    if out:
        Path(out).write_text(text)
        logger.info(f"Wrote {out}")
    else:
        sys.stdout.write(text)


def mixed_gap_k(n: Optional[int], k: Optional[int]) -> int:
    """k of the mixed-gap family; n, when given, must equal 2k + 1"""
    if k is None:
        if n is None or n % 2 == 0:
            raise ConfigError("mixed_gap needs --k or an odd n")
        k = (n - 1) // 2
    if k < 2:
        raise ConfigError(f"mixed_gap needs k >= 2, got {k}")
    if n is not None and n != 2 * k + 1:
        raise ConfigError(f"mixed_gap with k={k} has n={2 * k + 1}, not {n}")
    return k


def generate_positions(dist: Distribution, n: Optional[int], seed: int, clusters: int = 5,
                       spread: float = 0.01, k: Optional[int] = None) -> np.ndarray:
    dist = Distribution(dist)
    if dist is Distribution.MIXED_GAP:
        return mixed_gap_positions(mixed_gap_k(n, k))
    if n is None or n < 3:
        raise ConfigError(f"n must be at least 3, got {n}")
    if dist is Distribution.CLUSTERED:
        if clusters < 1 or clusters > n:
            raise ConfigError(f"clusters must be in [1, n], got {clusters}")
        return clustered_positions(n, clusters, spread, seed)
    return uniform_positions(n, seed)


def generate_instance(positions: np.ndarray, dist: Distribution) -> Instance:
    rule = TieRule.LOWER_INDEX_CLOSER if Distribution(dist) is Distribution.MIXED_GAP else TieRule.REJECT
    return from_embedding(positions, tie_rule=rule)


def cmd_gen(args) -> int:
    positions = generate_positions(args.dist, args.n, args.seed, args.clusters, args.spread, args.k)
    inst = generate_instance(positions, args.dist)
    out = Path(args.out)
    write_instance(inst, out)
    write_embedding(Embedding(positions), out.with_suffix(".emb"))
    logger.info(f"Generated {args.dist} instance n={inst.n} -> {out}")
    return EXIT_OK


def cmd_corrupt(args) -> int:
    inst = read_instance(args.instance)
    try:
        spec = CorruptionSpec(fraction=args.fraction, seed=args.seed)
    except ValueError as e:
        raise ConfigError(str(e))
    corrupted = corrupt(inst, spec)
    write_instance(corrupted, args.out)
    logger.info(f"Flipped {spec.flips(inst.n)} constraints -> {args.out}")
    return EXIT_OK


def _pivot_list(text: Optional[str]) -> Optional[List[int]]:
    if not text:
        return None
    try:
        return [int(part) for part in text.split(",") if part.strip()]
    except ValueError:
        raise ConfigError(f"--pivots must be a comma separated list of integers, got {text!r}")


def build_config(args, n: int) -> PipelineConfig:
    settings = get_settings()
    selection = args.select
    if selection == "auto":
        selection = SelectionMode.ESTIMATE if n > settings.estimate_threshold else SelectionMode.EXACT
    return PipelineConfig(
        b=args.b,
        epsilon=args.eps,
        fas_method=args.fas,
        extension_mode=args.mode,
        selection=selection,
        samples=args.samples if args.samples is not None else settings.estimate_samples,
        exact_cap=args.exact_cap if args.exact_cap is not None else settings.exact_cap,
        heuristic_restarts=args.restarts if args.restarts is not None else settings.heuristic_restarts,
        retraction=args.retraction,
        convention=args.convention,
        pivot_set=_pivot_list(args.pivots),
        seed=args.seed,
    )


def cmd_solve(args) -> int:
    inst = read_instance(args.instance)
    cfg = build_config(args, inst.n)
    threads = args.threads if args.threads is not None else get_settings().worker_count
    report = solve(inst, cfg, threads=threads)

    text = report_json(report, include_timings=not args.no_timings)
    _emit(text, args.out)
    if args.out:
        write_embedding(Embedding(report.embedding), Path(args.out).with_suffix(".emb"))

    if args.dump_wlloc:
        directory = Path(args.dump_wlloc)
        directory.mkdir(parents=True, exist_ok=True)
        p = report.chosen_pivot
        built = build_retraction(inst, p, cfg)
        (directory / f"pivot_{p}.wlloc").write_text(dump_wlloc(built.wlloc))
    return EXIT_OK


def cmd_solve_zero(args) -> int:
    inst = read_instance(args.instance)
    try:
        embedding = solve_zero(inst, mode=LpMode(args.lp))
    except NoPerfectEmbedding as e:
        logger.info(str(e))
        report = ZeroReport(perfect=False, total_constraints=inst.total_constraints)
    else:
        report = ZeroReport(
            perfect=True,
            violated_count=violated_count(inst, embedding),
            total_constraints=inst.total_constraints,
            embedding=embedding.tolist(),
        )
        if args.out:
            write_embedding(embedding, Path(args.out).with_suffix(".emb"))
    _emit(model_json(report), args.out)
    return EXIT_OK


def goodness_summary(profile: np.ndarray) -> GoodnessSummary:
    q = np.quantile(profile, [0.0, 0.25, 0.5, 0.75, 1.0])
    return GoodnessSummary(
        min=float(q[0]),
        q1=float(q[1]),
        median=float(q[2]),
        q3=float(q[3]),
        max=float(q[4]),
        good_at_0_90=int(np.count_nonzero(profile >= 0.90)),
        good_at_0_99=int(np.count_nonzero(profile >= 0.99)),
    )


def cmd_eval(args) -> int:
    inst = read_instance(args.instance)
    embedding = read_embedding(args.embedding)
    if embedding.n != inst.n:
        raise LengthMismatch(inst.n, embedding.n)
    violated = violated_count(inst, embedding)
    report = EvalReport(
        violated_count=violated,
        satisfied_fraction=1.0 - violated / inst.total_constraints,
        total_constraints=inst.total_constraints,
        goodness=goodness_summary(goodness_profile(inst, embedding)),
    )
    sys.stdout.write(model_json(report))
    return EXIT_OK


def cmd_oracle(args) -> int:
    """Global optimum through the unit-weight retraction onto singleton buckets"""
    inst = read_instance(args.instance)
    exact_cap = args.exact_cap if args.exact_cap is not None else get_settings().exact_cap
    w = retraction(inst, [[i] for i in range(inst.n)])
    solution = solve_exact(w, exact_cap=exact_cap)
    realizable = None
    if args.cells:
        cells = list(enumerate_cells(w, exact_cap=min(exact_cap, CELL_ENUMERATION_CAP)))
        enumerated = min(cell.violated_weight for cell in cells)
        if enumerated != solution.violated_weight:
            raise RuntimeError(f"Cell enumeration found {enumerated}, branch and bound {solution.violated_weight}")
        realizable = len(cells)
    report = OracleReport(
        minimum_violated=solution.violated_weight,
        total_constraints=inst.total_constraints,
        cells_examined=solution.cells_examined,
        embedding=list(solution.positions),
        realizable_cells=realizable,
    )
    _emit(model_json(report), args.out)
    return EXIT_OK
