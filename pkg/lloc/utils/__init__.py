from .helpers import choose2, total_constraints, constraints_per_pivot, pivot_pairs, min_positive_gap
from .rng import make_rng, derive_seed
from .validators import validate_point, validate_positions, validate_partition, validate_ordering

__all__ = [
    "choose2",
    "total_constraints",
    "constraints_per_pivot",
    "pivot_pairs",
    "min_positive_gap",
    "make_rng",
    "derive_seed",
    "validate_point",
    "validate_positions",
    "validate_partition",
    "validate_ordering",
]
