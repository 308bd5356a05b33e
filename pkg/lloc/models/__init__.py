from .schemas import (
    BenchCell,
    BenchGrid,
    BenchRow,
    CandidateRecord,
    Distribution,
    EvalReport,
    ExtensionMode,
    OracleReport,
    PipelineConfig,
    RetractionMode,
    SelectionMode,
    SolveReport,
    ZeroReport,
)

__all__ = [
    "BenchCell",
    "BenchGrid",
    "BenchRow",
    "CandidateRecord",
    "Distribution",
    "EvalReport",
    "ExtensionMode",
    "OracleReport",
    "PipelineConfig",
    "RetractionMode",
    "SelectionMode",
    "SolveReport",
    "ZeroReport",
]
