import logging
import time
from contextlib import contextmanager
from typing import Dict, Iterator, Optional

LOG_FORMAT = "[lloc] %(asctime)s - %(name)s - %(levelname)s - %(message)s"


def setup_logging(level: str = "INFO") -> logging.Logger:
    """
    Configures the root handler once and returns the package logger
    """
    logging.basicConfig(level=getattr(logging, level.upper(), logging.INFO), format=LOG_FORMAT)
    logger = logging.getLogger("lloc")
    logger.setLevel(getattr(logging, level.upper(), logging.INFO))
    return logger


class StageTimer:
    """
    Accumulates wall time per named stage.

    Usage:
        timer = StageTimer("pivot 3")
        with timer.stage("fas"):
            ...
        timer.as_millis()  # {"fas": 1.23}
    """

    def __init__(self, label: str = "lloc", logger: Optional[logging.Logger] = None):
        self.label = label
        self.logger = logger or logging.getLogger(f"lloc.timing")
        self._seconds: Dict[str, float] = {}

    @contextmanager
    def stage(self, name: str) -> Iterator[None]:
        start_time = time.perf_counter()
        try:
            yield
        except Exception as e:
            process_time = time.perf_counter() - start_time
            self.logger.error(
                f"Stage failed: {self.label} {name} "
                f"Error: {str(e)} "
                f"Time: {process_time:.4f}s"
            )
            raise
        process_time = time.perf_counter() - start_time
        self._seconds[name] = self._seconds.get(name, 0.0) + process_time
        self.logger.debug(f"Stage completed: {self.label} {name} Time: {process_time:.4f}s")

    def merge(self, other: "StageTimer") -> None:
        for name, seconds in other._seconds.items():
            self._seconds[name] = self._seconds.get(name, 0.0) + seconds

    def as_millis(self) -> Dict[str, float]:
        return {name: round(seconds * 1000.0, 3) for name, seconds in self._seconds.items()}

    @property
    def total_seconds(self) -> float:
        return sum(self._seconds.values())
