from __future__ import annotations

import logging
from dataclasses import dataclass

import torch

from chkplab.model.nonlinearity import Nonlinearity
from chkplab.spectral.field import SpectralField
from chkplab.spectral.functional import (
    ddx,
    dealias,
    green_dx,
    inner,
    kp_nonlocal,
    kp_symbol,
    multiply,
    project_xmean,
    require_x_mean_free,
)
from chkplab.spectral.grid import GridSpec

pylogger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ModelParams:
    gamma: float
    nonlinearity: Nonlinearity

    def __post_init__(self):
        if not self.gamma > 0:
            raise ValueError(f"gamma must be positive, got {self.gamma}")


def flux(u: SpectralField, p: ModelParams, dealiased: bool = True) -> SpectralField:
    """F = g(u)/2 + gamma/2 u_x^2 - gamma/2 u^2, evaluated pointwise on the grid."""
    values = u.values
    ux = ddx(u).values
    f = 0.5 * p.nonlinearity.g(values) + 0.5 * p.gamma * (ux * ux - values * values)
    field = u.with_values(f)
    return dealias(field) if dealiased else field


def linear_symbol(grid: GridSpec) -> torch.Tensor:
    """Symbol L of the stiff transverse term, u_t = L u: -i eta^2 / (xi (1 + xi^2))."""
    return -kp_symbol(grid)


def explicit_rhs(u: SpectralField, p: ModelParams) -> SpectralField:
    """Everything in the right-hand side except the transverse term: -gamma u u_x - d_x G * F."""
    advection = multiply(u, ddx(u)) * p.gamma
    return project_xmean(-(advection + green_dx(flux(u, p))))


def rhs(u: SpectralField, p: ModelParams) -> SpectralField:
    """u_t = -gamma u u_x - d_x G * F - G * v_y, with v eliminated through v_y = d_x^{-1} u_yy.

    Raises:
        MeanFreeError: for inputs with nonzero x-mean.
    """
    require_x_mean_free(u, "rhs")
    return project_xmean(explicit_rhs(u, p) - kp_nonlocal(u))


def residual_R(u: SpectralField, p: ModelParams) -> SpectralField:
    """R = d_x(G * d_x F) + d_x(G * v_y), the forcing of the slope along characteristics."""
    require_x_mean_free(u, "residual_R")
    return ddx(green_dx(flux(u, p))) + ddx(kp_nonlocal(u))


def energy_rate(u: SpectralField, p: ModelParams) -> float:
    """Semi-discrete d/dt (||u||^2 + ||u_x||^2) = 2 <u, u_t> + 2 <u_x, d_x u_t>."""
    ut = rhs(u, p)
    return 2.0 * inner(u, ut) + 2.0 * inner(ddx(u), ddx(ut))


def dispersion_omega(xi: float, eta: float, kappa: float) -> float:
    """Frequency of exp(i(xi x + eta y - omega t)) for the system linearized with g'(0) = 2 kappa."""
    if xi == 0:
        raise ValueError("The linear dispersion relation is undefined on the xi=0 modes")
    return (kappa * xi + eta**2 / xi) / (1.0 + xi**2)
