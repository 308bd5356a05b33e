# pipeline is not re-exported here: it depends on lloc.models, which imports this package
from .instance import (
    CorruptionSpec,
    Embedding,
    Instance,
    TieRule,
    corrupt,
    from_embedding,
    goodness_profile,
    mixed_gap_instance,
    pivot_goodness,
    satisfied_fraction,
    violated_count,
    violated_estimate,
)
from .tournament import (
    FasMethod,
    FasResult,
    Tournament,
    fas_exact,
    fas_indegree,
    fas_local,
    pivot_tournament,
    solve_fas,
    topological_order,
)
from .wlloc import CellSolution, RetractionConvention, WllocInstance, evaluate, retraction, solve_heuristic
from .arrangement import enumerate_cells, solve_exact
from .warmup import GapSystem, LpMode, build_gap_system, lp_feasible, order_by_pivot, solve_zero
