"""
lloc - line embeddings from dense ordinal triple constraints
"""

__version__ = "0.1.0"

from .core.instance import Embedding, Instance, from_embedding, violated_count
from .core.pipeline import solve
from .core.warmup import solve_zero
from .errors import LlocError
from .models.schemas import PipelineConfig, SolveReport

__all__ = [
    "Embedding",
    "Instance",
    "from_embedding",
    "violated_count",
    "solve",
    "solve_zero",
    "LlocError",
    "PipelineConfig",
    "SolveReport",
]
