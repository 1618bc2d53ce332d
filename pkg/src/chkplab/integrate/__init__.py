from chkplab.integrate.stepper import (
    IntegratingFactorRK4,
    RunResult,
    StepperConfig,
    StopKind,
    StopReason,
    run,
    step,
)
from chkplab.integrate.trajectory import Trajectory

__all__ = [
    "IntegratingFactorRK4",
    "RunResult",
    "StepperConfig",
    "StopKind",
    "StopReason",
    "Trajectory",
    "run",
    "step",
]
