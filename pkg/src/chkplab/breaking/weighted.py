from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Optional, Sequence

import torch

from chkplab.breaking.characteristics import time_derivative, track_family
from chkplab.breaking.riccati import t0_bound
from chkplab.integrate.trajectory import Trajectory
from chkplab.spectral.field import SpectralField
from chkplab.spectral.functional import ddx, eval_at, fixed_order_sum, hs_squared, xs_squared
from chkplab.spectral.grid import REAL, GridSpec
from chkplab.types import StrEnum

pylogger = logging.getLogger(__name__)

MAX_SIGMA_FRACTION = 1.0 / 12.0
IMAGES = 3


class WeightKind(StrEnum):
    GAUSSIAN = "gaussian"


@dataclass(frozen=True)
class WeightSpec:
    """A non-negative H^2 weight phi on the y-grid with discrete integral 1, plus phi''."""

    kind: WeightKind
    sigma: float
    center: float
    phi: torch.Tensor
    phi_dd: torch.Tensor
    phi_inf: float
    phi_dd_l2: float

    @classmethod
    def gaussian(cls, grid: GridSpec, sigma: float, center: Optional[float] = None) -> WeightSpec:
        """Periodized Gaussian of width sigma <= ly/12, renormalized so that sum(phi) dy = 1.

        phi'' is the analytic second derivative of the same periodized sum, scaled identically.
        """
        if not 0 < sigma <= MAX_SIGMA_FRACTION * grid.ly:
            raise ValueError(f"sigma must lie in (0, ly/12] = (0, {MAX_SIGMA_FRACTION * grid.ly:.6g}], got {sigma}")
        center = grid.ly / 2 if center is None else float(center) % grid.ly

        phi = torch.zeros(grid.ny, dtype=REAL)
        phi_dd = torch.zeros(grid.ny, dtype=REAL)
        for n in range(-IMAGES, IMAGES + 1):
            s = grid.y - center + n * grid.ly
            bump = torch.exp(-(s**2) / (2 * sigma**2))
            phi += bump
            phi_dd += (s**2 / sigma**4 - 1.0 / sigma**2) * bump

        total = grid.dy * fixed_order_sum(phi)
        phi, phi_dd = phi / total, phi_dd / total
        return cls(
            kind=WeightKind.GAUSSIAN,
            sigma=float(sigma),
            center=center,
            phi=phi,
            phi_dd=phi_dd,
            phi_inf=float(phi.max()),
            phi_dd_l2=math.sqrt(grid.dy * fixed_order_sum(phi_dd**2)),
        )

    def integrate(self, values: torch.Tensor, dy: float) -> float:
        """Trapezoid rule on the periodic y-grid."""
        return dy * fixed_order_sum(values * self.phi)

    def to_dict(self):
        return dict(
            kind=str(self.kind), sigma=self.sigma, center=self.center, phi_inf=self.phi_inf, phi_dd_l2=self.phi_dd_l2
        )


@dataclass(frozen=True)
class M1Series:
    times: torch.Tensor
    values: torch.Tensor

    def to_rows(self) -> Sequence[Sequence[float]]:
        return [[t, m] for t, m in zip(self.times.tolist(), self.values.tolist())]


@dataclass(frozen=True)
class WeightedBound:
    c3: float
    m1_0: float
    t0: Optional[float]
    energy_E: float
    xs_norm: float

    @property
    def applicable(self) -> bool:
        return self.t0 is not None

    def to_dict(self):
        return dict(c3=self.c3, m1_0=self.m1_0, t0=self.t0, energy_E=self.energy_E, xs_norm=self.xs_norm)


def initial_M1(u0: SpectralField, x0: float, weight: WeightSpec) -> float:
    grid = u0.grid
    slopes = eval_at(ddx(u0), torch.full((grid.ny,), float(x0), dtype=REAL), grid.y)
    return weight.integrate(slopes, grid.dy)


def weighted_M1(trajectory: Trajectory, x0: float, weight: WeightSpec, gamma: float) -> M1Series:
    """M1(t) = integral of u_x(t, q(t, x0, y), y) phi(y) dy, one characteristic per y-grid line."""
    grid = trajectory.grid
    family = track_family(trajectory, x0, grid.y, gamma)
    values = torch.tensor([weight.integrate(w, grid.dy) for w in family.w], dtype=REAL)
    return M1Series(times=family.times, values=values)


def c3_and_t0(
    u0: SpectralField, weight: WeightSpec, gamma: float, c_user: float, x0: float, s: float = 1.0
) -> WeightedBound:
    """C3^2 = c_user ||u0||_{X^s} + (3/2) gamma E(u0) ||phi||_inf + E(u0)^(1/2) ||phi''||_{L2} and the T0 bound.

    E(u0) = (||u0||^2 + ||u0_x||^2) / 2 over the whole box.
    """
    if not c_user >= 0:
        raise ValueError(f"c_user must be non-negative, got {c_user}")
    energy = 0.5 * (hs_squared(u0) + hs_squared(ddx(u0)))
    xs_norm = math.sqrt(xs_squared(u0, s))
    c3_squared = c_user * xs_norm + 1.5 * gamma * energy * weight.phi_inf + math.sqrt(energy) * weight.phi_dd_l2
    c3 = math.sqrt(c3_squared)
    m1_0 = initial_M1(u0, x0, weight)
    return WeightedBound(c3=c3, m1_0=m1_0, t0=t0_bound(m1_0, c3, gamma), energy_E=energy, xs_norm=xs_norm)


def empirical_D(times: torch.Tensor, m1: torch.Tensor, gamma: float) -> float:
    """sup of dM1/dt + (gamma/2) M1^2, the measurable stand-in for C3^2."""
    times = torch.as_tensor(times, dtype=REAL)
    m1 = torch.as_tensor(m1, dtype=REAL)
    if m1.numel() < 3:
        raise ValueError(f"At least 3 samples are needed, got {m1.numel()}")
    dm_dt = time_derivative(m1, times)
    return float((dm_dt + 0.5 * gamma * m1**2).max())
