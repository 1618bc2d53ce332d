from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

import numpy as np
import torch
from scipy.integrate import solve_ivp

from chkplab.errors import SparseTrajectoryError
from chkplab.integrate.trajectory import Trajectory
from chkplab.model.chkp import ModelParams, residual_R
from chkplab.spectral.field import SpectralField
from chkplab.spectral.functional import ddx, eval_at, project_xmean
from chkplab.spectral.grid import REAL

pylogger = logging.getLogger(__name__)

# a characteristic may cross at most this many cells between consecutive snapshots
CHARACTERISTIC_CFL = 1.0
COMPARISON_LEVEL = 1e8


@dataclass(frozen=True)
class CharacteristicTrace:
    """Samples (t, q, w, r) along the characteristic through (x0, y0) at every snapshot time.

    q is the position reduced modulo lx, w = u_x(t, q, y0) and r = R(t, q, y0).
    """

    x0: float
    y0: float
    times: torch.Tensor
    q: torch.Tensor
    w: torch.Tensor
    r: torch.Tensor

    @property
    def samples(self) -> List[Tuple[float, float, float, float]]:
        return list(zip(self.times.tolist(), self.q.tolist(), self.w.tolist(), self.r.tolist()))

    def __len__(self) -> int:
        return int(self.times.numel())


@dataclass(frozen=True)
class FamilyTrace:
    """Characteristics seeded at (x0, y_k) for several k, integrated together."""

    times: torch.Tensor
    # (T, P)
    q: torch.Tensor
    w: torch.Tensor


@dataclass(frozen=True)
class OdeResidual:
    times: torch.Tensor
    residual: torch.Tensor
    max_abs: float
    # max(|gamma w^2|, |r|, 1), the natural size of each term
    scale: float

    def to_dict(self):
        return dict(max_abs=self.max_abs, scale=self.scale, relative=self.max_abs / self.scale)


@dataclass(frozen=True)
class ComparisonCheck:
    K: float
    max_excess: float
    holds: bool
    # time up to which the comparison solution stayed finite
    resolved_until: float

    def to_dict(self):
        return dict(K=self.K, max_excess=self.max_excess, holds=self.holds, resolved_until=self.resolved_until)


def check_cadence(trajectory: Trajectory, gamma: float) -> None:
    """Raise SparseTrajectoryError if a characteristic can cross more than one cell between snapshots."""
    if len(trajectory) < 2:
        raise SparseTrajectoryError(observed=float("inf"), required=0.0)
    dx = trajectory.grid.dx
    for i in range(len(trajectory) - 1):
        (t0, u0), (t1, u1) = trajectory[i], trajectory[i + 1]
        speed = gamma * max(u0.sup(), u1.sup())
        if speed == 0:
            continue
        required = CHARACTERISTIC_CFL * dx / speed
        if t1 - t0 > required:
            raise SparseTrajectoryError(observed=t1 - t0, required=required, at_time=t0)


def track_family(trajectory: Trajectory, x0: float, ys: torch.Tensor, gamma: float) -> FamilyTrace:
    """RK4 for dq/dt = gamma u(t, q, y) with u linear in t between snapshots, one step per interval.

    Returns the unreduced positions q and the slopes w = u_x(t, q, y) at every snapshot time.
    """
    check_cadence(trajectory, gamma)
    ys = torch.as_tensor(ys, dtype=REAL).reshape(-1)
    slopes: Dict[int, SpectralField] = {}

    def slope(i: int) -> SpectralField:
        if i not in slopes:
            slopes[i] = ddx(trajectory.field(i))
        return slopes[i]

    def velocity(i: int, theta: float, q: torch.Tensor) -> torch.Tensor:
        v = eval_at(trajectory.field(i), q, ys)
        if theta > 0:
            v = (1.0 - theta) * v + theta * eval_at(trajectory.field(i + 1), q, ys)
        return gamma * v

    times = trajectory.times
    q = torch.full_like(ys, float(x0))
    positions = [q]
    slopes_along = [eval_at(slope(0), q, ys)]

    for i in range(len(trajectory) - 1):
        h = float(times[i + 1] - times[i])
        k1 = velocity(i, 0.0, q)
        k2 = velocity(i, 0.5, q + 0.5 * h * k1)
        k3 = velocity(i, 0.5, q + 0.5 * h * k2)
        k4 = velocity(i, 1.0, q + h * k3)
        q = q + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        positions.append(q)
        slopes_along.append(eval_at(slope(i + 1), q, ys))
        # the slope field of snapshot i is no longer needed
        slopes.pop(i, None)

    return FamilyTrace(times=times, q=torch.stack(positions), w=torch.stack(slopes_along))


def track(trajectory: Trajectory, x0: float, y0: float, params: ModelParams) -> CharacteristicTrace:
    """Follow the characteristic dq/dt = gamma u(t, q, y0) from q(0) = x0.

    Raises:
        SparseTrajectoryError: if snapshots are too far apart for the characteristic CFL limit.
    """
    family = track_family(trajectory, x0, torch.tensor([y0], dtype=REAL), params.gamma)
    q = family.q[:, 0]
    w = family.w[:, 0]

    r = torch.empty_like(q)
    for i, (_, field) in enumerate(trajectory):
        r[i] = eval_at(residual_R(project_xmean(field), params), float(q[i]), y0)

    return CharacteristicTrace(
        x0=float(x0), y0=float(y0), times=family.times, q=q % trajectory.grid.lx, w=w, r=r
    )


def time_derivative(values: torch.Tensor, times: torch.Tensor) -> torch.Tensor:
    """Second-order finite differences on a non-uniform time grid, one-sided at both ends."""
    return torch.from_numpy(np.gradient(values.numpy(), times.numpy(), edge_order=2))


def verify_riccati_ode(trace: CharacteristicTrace, gamma: float) -> OdeResidual:
    """Residual of Dw/Dt = -gamma w^2 - R along a trace, with dw/dt by finite differences."""
    if len(trace) < 3:
        raise ValueError(f"At least 3 samples are needed, got {len(trace)}")
    dwdt = time_derivative(trace.w, trace.times)
    residual = dwdt + gamma * trace.w**2 + trace.r
    scale = max(float((gamma * trace.w**2).abs().max()), float(trace.r.abs().max()), 1.0)
    return OdeResidual(times=trace.times, residual=residual, max_abs=float(residual.abs().max()), scale=scale)


def empirical_K(
    trace: CharacteristicTrace, trajectory: Optional[Trajectory] = None, params: Optional[ModelParams] = None
) -> float:
    """sup |R| along the trace, or over every snapshot of the whole field when a trajectory is given."""
    if len(trace) == 0:
        raise ValueError("Empty trace")
    if trajectory is None:
        return float(trace.r.abs().max())
    if params is None:
        raise ValueError("The field-wide reading of K needs the model parameters")
    return field_sup_R(trajectory, params)


def field_sup_R(trajectory: Trajectory, params: ModelParams) -> float:
    return max(residual_R(project_xmean(field), params).sup() for _, field in trajectory)


def riccati_comparison(trace: CharacteristicTrace, gamma: float, K: float, tol: float = 1e-4) -> ComparisonCheck:
    """Check w(t) <= W(t) where dW/dt = -gamma W^2 + K, W(0) = w(0).

    W is integrated with scipy until it falls below -1e8; samples after that are not compared.
    """
    times = trace.times.numpy()

    def falls(t, y):
        return y[0] + COMPARISON_LEVEL

    falls.terminal = True

    solution = solve_ivp(
        lambda t, y: [-gamma * y[0] ** 2 + K],
        (float(times[0]), float(times[-1])),
        [float(trace.w[0])],
        method="DOP853",
        rtol=1e-10,
        atol=1e-12,
        dense_output=True,
        events=falls,
    )
    resolved_until = float(solution.t[-1])
    mask = times <= resolved_until
    comparison = solution.sol(times[mask])[0]
    w = trace.w.numpy()[mask]
    scale = np.maximum(1.0, np.abs(comparison))
    excess = float(np.max((w - comparison) / scale))
    return ComparisonCheck(K=K, max_excess=excess, holds=excess <= tol, resolved_until=resolved_until)
