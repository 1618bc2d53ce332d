from __future__ import annotations

from typing import Optional


class MeanFreeError(ValueError):
    """Raised when an operation needs an x-mean-free field and receives one with nonzero xi=0 modes."""

    def __init__(self, operation: str, residue: float):
        super().__init__(
            f"{operation} requires an x-mean-free field, found xi=0 coefficients up to {residue:.3e}. "
            "Apply project_xmean first."
        )
        self.operation = operation
        self.residue = residue


class SparseTrajectoryError(ValueError):
    """Raised when snapshots are too far apart in time to follow characteristics reliably."""

    def __init__(self, observed: float, required: float, at_time: Optional[float] = None):
        where = "" if at_time is None else f" (interval starting at t={at_time:.6g})"
        super().__init__(
            f"Snapshot cadence {observed:.6g} exceeds the characteristic limit {required:.6g}{where}. "
            f"Re-run with snapshots at least every {required:.6g} time units."
        )
        self.observed = observed
        self.required = required


class ConfigError(ValueError):
    def __init__(self, path: str, message: str):
        super().__init__(f"{path}: {message}")
        self.path = path


class RunDirectoryError(FileNotFoundError):
    pass
