"""
Pydantic schemas for solver configuration, reports and benchmark grids
"""

import math
from enum import Enum
from typing import Dict, List, Optional, Union

from pydantic import BaseModel, Field, field_validator, model_validator

from ..config import EXACT_CAP_DEFAULT, EXACT_CAP_MAX
from ..core.tournament import FasMethod
from ..core.wlloc import RetractionConvention
from ..errors import ConfigError


class BaseSchema(BaseModel):
    """
    Base schema: unknown fields are rejected
    """

    class Config:
        extra = "forbid"


class ExtensionMode(str, Enum):
    COLLAPSE = "collapse"
    JITTER = "jitter"


class SelectionMode(str, Enum):
    EXACT = "exact"
    ESTIMATE = "estimate"


class RetractionMode(str, Enum):
    WEIGHTED = "weighted"
    REPRESENTATIVE = "representative"


class PipelineConfig(BaseSchema):
    """Options of the general approximation pipeline; give either b or epsilon"""
    b: Optional[int] = Field(default=None, ge=3)
    epsilon: Optional[float] = Field(default=None, gt=0.0, lt=1.0)
    fas_method: FasMethod = FasMethod.INDEGREE_LOCAL
    extension_mode: ExtensionMode = ExtensionMode.COLLAPSE
    selection: SelectionMode = SelectionMode.EXACT
    samples: int = Field(default=50_000, ge=1)
    exact_cap: int = Field(default=EXACT_CAP_DEFAULT, ge=1, le=EXACT_CAP_MAX)
    heuristic_restarts: int = Field(default=20, ge=1)
    local_max_rounds: int = Field(default=1000, ge=0)
    retraction: RetractionMode = RetractionMode.WEIGHTED
    convention: RetractionConvention = RetractionConvention.DIRECT
    pivot_set: Optional[List[int]] = None
    seed: int = Field(default=0, ge=0)

    @field_validator("fas_method")
    @classmethod
    def _constant_factor_only(cls, value: FasMethod) -> FasMethod:
        if value is FasMethod.EXACT:
            raise ValueError("fas_method must be 'indegree' or 'indegree_local'")
        return value

    @field_validator("pivot_set")
    @classmethod
    def _unique_pivots(cls, value: Optional[List[int]]) -> Optional[List[int]]:
        if value is None:
            return value
        if not value:
            raise ValueError("pivot_set must not be empty")
        if len(set(value)) != len(value):
            raise ValueError("pivot_set contains duplicates")
        return sorted(value)

    @model_validator(mode="after")
    def _one_of_b_or_epsilon(self) -> "PipelineConfig":
        if (self.b is None) == (self.epsilon is None):
            raise ValueError("exactly one of b and epsilon must be given")
        return self

    def resolved_b(self, n: int) -> int:
        """
        Bucket count for an instance on n points: b itself (must not exceed n)
        or max(3, ceil(epsilon^(-1/8))) capped at n
        """
        if self.b is not None:
            if self.b > n:
                raise ConfigError(f"b={self.b} exceeds the number of points n={n}")
            return self.b
        b = max(3, math.ceil(self.epsilon ** (-1.0 / 8.0)))
        return min(b, n)

    def pivots(self, n: int) -> List[int]:
        if self.pivot_set is None:
            return list(range(n))
        for p in self.pivot_set:
            if p < 0 or p >= n:
                raise ConfigError(f"Pivot {p} out of range for n={n}")
        return list(self.pivot_set)


class CandidateRecord(BaseSchema):
    """Per-pivot outcome"""
    pivot: int
    back_arcs: int
    retraction_weight: int
    solver: str
    violated: Union[int, float]
    estimated: bool = False


class SolveReport(BaseSchema):
    chosen_pivot: int
    satisfied_fraction: float = Field(ge=0.0, le=1.0)
    violated_count: int = Field(ge=0)
    total_constraints: int
    exact: bool
    config: Dict
    candidates: List[CandidateRecord]
    timings_ms: Dict[str, float] = Field(default_factory=dict)
    embedding: List[float] = Field(default_factory=list, exclude=True)


class ZeroReport(BaseSchema):
    perfect: bool
    violated_count: Optional[int] = None
    total_constraints: int
    embedding: Optional[List[float]] = None


class GoodnessSummary(BaseSchema):
    min: float
    q1: float
    median: float
    q3: float
    max: float
    good_at_0_90: int
    good_at_0_99: int


class EvalReport(BaseSchema):
    violated_count: int
    satisfied_fraction: float
    total_constraints: int
    goodness: GoodnessSummary


class OracleReport(BaseSchema):
    minimum_violated: int
    total_constraints: int
    cells_examined: int
    embedding: List[float]
    realizable_cells: Optional[int] = None


class Distribution(str, Enum):
    UNIFORM = "uniform"
    CLUSTERED = "clustered"
    MIXED_GAP = "mixed_gap"


class BenchCell(BaseSchema):
    """One grid cell; list fields are crossed"""
    n: int = Field(ge=3)
    dist: Distribution = Distribution.UNIFORM
    clusters: int = Field(default=5, ge=1)
    spread: float = Field(default=0.01, ge=0.0)
    k: Optional[int] = Field(default=None, ge=2)
    corruption: List[float] = Field(default_factory=lambda: [0.0])
    b: List[int] = Field(default_factory=lambda: [3])
    method: List[str] = Field(default_factory=lambda: ["collapse"])
    seeds: List[int] = Field(default_factory=lambda: [0])

    @field_validator("corruption")
    @classmethod
    def _fractions(cls, value: List[float]) -> List[float]:
        for fraction in value:
            if not 0.0 <= fraction <= 1.0:
                raise ValueError(f"corruption must be in [0, 1], got {fraction}")
        return value

    @field_validator("method")
    @classmethod
    def _known_methods(cls, value: List[str]) -> List[str]:
        known = {"collapse", "jitter", "zero"}
        for method in value:
            if method not in known:
                raise ValueError(f"Unknown method '{method}', expected one of {sorted(known)}")
        return value


class BenchGrid(BaseSchema):
    name: str = "bench"
    cells: List[BenchCell] = Field(default_factory=list)


class BenchRow(BaseSchema):
    instance_id: str
    n: int
    b: int
    corruption: float
    seed: int
    method: str
    satisfied_fraction: Optional[float] = Field(default=None, ge=0.0, le=1.0)
    wall_ms: float
    failed: str = ""
