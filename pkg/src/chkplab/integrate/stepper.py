from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Callable, List, Optional

import torch

from chkplab.integrate.trajectory import Trajectory
from chkplab.measure.diagnostics import DiagnosticRecord, record
from chkplab.model.chkp import ModelParams, explicit_rhs, linear_symbol
from chkplab.spectral.field import SpectralField
from chkplab.spectral.functional import require_x_mean_free
from chkplab.types import StrEnum

pylogger = logging.getLogger(__name__)

SUP_EPS = 1e-12


@dataclass(frozen=True)
class StepperConfig:
    dt0: float
    t_end: float
    cfl: float = 0.5
    grad_stop: float = 1e4
    dt_floor: float = 1e-9
    snapshot_every: int = 10
    record_every: int = 1
    c_grad: float = 0.5
    xs_s: float = 1.0

    def __post_init__(self):
        if not self.dt0 > self.dt_floor > 0:
            raise ValueError(f"Expected dt0 > dt_floor > 0, got dt0={self.dt0}, dt_floor={self.dt_floor}")
        if not (math.isfinite(self.t_end) and self.t_end >= 0):
            raise ValueError(f"t_end must be finite and non-negative, got {self.t_end}")
        if not 0 < self.cfl <= 1:
            raise ValueError(f"cfl must lie in (0, 1], got {self.cfl}")
        if not self.grad_stop > 0 or not self.c_grad > 0:
            raise ValueError("grad_stop and c_grad must be positive")
        if self.snapshot_every < 1 or self.record_every < 1:
            raise ValueError("snapshot_every and record_every must be positive integers")


class StopKind(StrEnum):
    HORIZON_REACHED = "horizon_reached"
    GRADIENT_THRESHOLD = "gradient_threshold"
    STEP_FLOOR = "step_floor"
    NON_FINITE = "non_finite"


@dataclass(frozen=True)
class StopReason:
    kind: StopKind
    t_stop: float
    steps: int

    def to_dict(self):
        return dict(kind=str(self.kind), t_stop=self.t_stop, steps=self.steps)

    @classmethod
    def from_dict(cls, data) -> StopReason:
        return cls(kind=StopKind(data["kind"]), t_stop=float(data["t_stop"]), steps=int(data["steps"]))


@dataclass
class RunResult:
    trajectory: Trajectory
    stop: StopReason
    records: List[DiagnosticRecord]


class IntegratingFactorRK4:
    """Classical RK4 on w = exp(-tL) u_hat, with L the diagonal symbol of the transverse term.

    L is purely imaginary, so the linear propagation is an exact isometry; only the remaining
    terms of the right-hand side are stepped explicitly.
    """

    def __init__(self, params: ModelParams):
        self.params = params

    def propagator(self, grid, dt: float) -> torch.Tensor:
        return torch.exp(dt * linear_symbol(grid))

    def _explicit(self, u: SpectralField, coefficients: torch.Tensor) -> torch.Tensor:
        state = u.with_coefficients(coefficients, x_mean_free=True)
        return explicit_rhs(state, self.params).coefficients

    def step(self, u: SpectralField, dt: float) -> SpectralField:
        grid = u.grid
        full = self.propagator(grid, dt)
        half = self.propagator(grid, 0.5 * dt)

        u0 = u.coefficients
        k1 = self._explicit(u, u0)
        k2 = self._explicit(u, half * (u0 + 0.5 * dt * k1))
        k3 = self._explicit(u, half * u0 + 0.5 * dt * k2)
        k4 = self._explicit(u, full * u0 + dt * half * k3)

        out = full * u0 + dt / 6.0 * (full * k1 + 2.0 * half * (k2 + k3) + k4)
        out = out * grid.dealias_mask
        out[:, 0] = 0.0
        return u.with_coefficients(out, x_mean_free=True)


def step(u: SpectralField, p: ModelParams, dt: float) -> SpectralField:
    """Advance `u` by one integrating-factor RK4 step of size `dt`.

    Non-finite values are propagated, not raised: `run` turns them into a `non_finite` stop.
    """
    require_x_mean_free(u, "step")
    return IntegratingFactorRK4(p).step(u, dt)


def _next_dt(cfg: StepperConfig, p: ModelParams, u: SpectralField, grad_inf: float) -> float:
    dt = cfg.dt0
    dt = min(dt, cfg.cfl * u.grid.dx / (p.gamma * u.sup() + SUP_EPS))
    if grad_inf > 0:
        dt = min(dt, cfg.c_grad / grad_inf)
    return dt


def run(
    u0: SpectralField,
    p: ModelParams,
    cfg: StepperConfig,
    on_record: Optional[Callable[[DiagnosticRecord], None]] = None,
    on_snapshot: Optional[Callable[[int, float, SpectralField], None]] = None,
) -> RunResult:
    """Integrate from t = 0 until the horizon or a blow-up/failure stop.

    Args:
        u0: finite, x-mean-free initial state.
        p: model parameters.
        cfg: step control and output cadence.
        on_record: called with every emitted diagnostic record.
        on_snapshot: called with (index, t, field) for every stored snapshot.

    Returns:
        The in-memory trajectory, the stop reason and the emitted records.
    """
    require_x_mean_free(u0, "run")
    if not u0.is_finite():
        raise ValueError("Initial data must be finite")

    stepper = IntegratingFactorRK4(p)
    trajectory = Trajectory(u0.grid)
    records: List[DiagnosticRecord] = []

    def emit(rec: DiagnosticRecord):
        records.append(rec)
        if on_record is not None:
            on_record(rec)

    def snapshot(t: float, u: SpectralField):
        index = len(trajectory)
        trajectory.append(t, u)
        if on_snapshot is not None:
            on_snapshot(index, t, u)

    t, n, u = 0.0, 0, u0
    current = record(u, t, dt=0.0, I=0.0, s=cfg.xs_s)
    emit(current)
    snapshot(t, u)

    pylogger.info(f"Starting run on {u0.grid} with {p.nonlinearity.name}, gamma={p.gamma}, t_end={cfg.t_end}")

    stop: Optional[StopReason] = None
    if cfg.t_end == 0:
        stop = StopReason(StopKind.HORIZON_REACHED, 0.0, 0)

    while stop is None:
        dt = _next_dt(cfg, p, u, current.grad_inf)
        if dt < cfg.dt_floor:
            pylogger.warning(f"Step {dt:.3e} fell below the floor {cfg.dt_floor:.3e} at t={t:.6g}")
            stop = StopReason(StopKind.STEP_FLOOR, t, n)
            break

        remaining = cfg.t_end - t
        # a leftover below the floor is folded into this step
        last = dt >= remaining - cfg.dt_floor
        if last:
            dt = remaining

        u = stepper.step(u, dt)
        n += 1
        t = cfg.t_end if last else t + dt

        previous = current
        current = record(u, t, dt=dt, I=previous.I, s=cfg.xs_s)
        if not current.finite:
            pylogger.warning(f"Non-finite state after step {n} at t={t:.6g}")
            emit(current)
            stop = StopReason(StopKind.NON_FINITE, t, n)
            break

        # streamed trapezoid of grad_inf^2
        current = current.with_integral(previous.I + 0.5 * dt * (previous.grad_inf**2 + current.grad_inf**2))

        if current.grad_inf >= cfg.grad_stop:
            stop = StopReason(StopKind.GRADIENT_THRESHOLD, t, n)
        elif last:
            stop = StopReason(StopKind.HORIZON_REACHED, t, n)

        if stop is not None or n % cfg.record_every == 0:
            emit(current)
        if stop is not None or n % cfg.snapshot_every == 0:
            snapshot(t, u)

    pylogger.info(f"Run stopped: {stop.kind} at t={stop.t_stop:.6g} after {stop.steps} steps")
    return RunResult(trajectory=trajectory, stop=stop, records=records)
