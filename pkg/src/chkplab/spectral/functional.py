from __future__ import annotations

import logging
import math
from functools import lru_cache
from typing import Union

import torch

from chkplab.errors import MeanFreeError
from chkplab.spectral.field import SpectralField
from chkplab.spectral.grid import COMPLEX, REAL, GridSpec

pylogger = logging.getLogger(__name__)

# relative size of xi=0 coefficients still accepted as round-off
MEAN_FREE_TOL = 1e-10


def fixed_order_sum(t: torch.Tensor) -> float:
    """Correctly rounded sum, independent of the number of torch workers."""
    return math.fsum(t.reshape(-1).tolist())


# spectral symbols, cached per grid


@lru_cache(maxsize=None)
def ddx_symbol(grid: GridSpec) -> torch.Tensor:
    return (1j * grid.xi_odd).to(COMPLEX)


@lru_cache(maxsize=None)
def ddy_symbol(grid: GridSpec) -> torch.Tensor:
    return (1j * grid.eta_odd).to(COMPLEX)


@lru_cache(maxsize=None)
def inv_ddx_symbol(grid: GridSpec) -> torch.Tensor:
    xi = grid.xi_odd
    safe = torch.where(xi == 0, torch.ones_like(xi), xi)
    return torch.where(xi == 0, torch.zeros_like(xi), -1.0 / safe).to(COMPLEX) * 1j


@lru_cache(maxsize=None)
def green_symbol(grid: GridSpec) -> torch.Tensor:
    return (1.0 / (1.0 + grid.xi**2)).to(COMPLEX)


@lru_cache(maxsize=None)
def green_dx_symbol(grid: GridSpec) -> torch.Tensor:
    return (1j * grid.xi_odd / (1.0 + grid.xi**2)).to(COMPLEX)


@lru_cache(maxsize=None)
def kp_symbol(grid: GridSpec) -> torch.Tensor:
    """i eta^2 / (xi (1 + xi^2)), zero on the xi=0 and Nyquist columns. Shape (ny, nx // 2 + 1)."""
    xi = grid.xi_odd
    safe = torch.where(xi == 0, torch.ones_like(xi), xi)
    ratio = grid.eta**2 / (safe * (1.0 + xi**2))
    ratio = torch.where(xi == 0, torch.zeros_like(ratio), ratio)
    return (1j * ratio).to(COMPLEX)


def hs_weight(grid: GridSpec, s: float) -> torch.Tensor:
    return (1.0 + grid.xi**2 + grid.eta**2) ** s


# operators


def apply_symbol(f: SpectralField, symbol: torch.Tensor, x_mean_free: bool) -> SpectralField:
    return f.with_coefficients(f.coefficients * symbol, x_mean_free=x_mean_free)


def ddx(f: SpectralField) -> SpectralField:
    return apply_symbol(f, ddx_symbol(f.grid), x_mean_free=True)


def ddy(f: SpectralField) -> SpectralField:
    return apply_symbol(f, ddy_symbol(f.grid), x_mean_free=f.x_mean_free)


def inv_ddx(f: SpectralField) -> SpectralField:
    """Antiderivative in x with the zero-mode convention: every (xi=0, eta) mode is dropped."""
    return apply_symbol(f, inv_ddx_symbol(f.grid), x_mean_free=True)


def green(f: SpectralField) -> SpectralField:
    """(1 - d_x^2)^{-1} f, i.e. the line convolution with exp(-|x|)/2."""
    return apply_symbol(f, green_symbol(f.grid), x_mean_free=f.x_mean_free)


def green_dx(f: SpectralField) -> SpectralField:
    return apply_symbol(f, green_dx_symbol(f.grid), x_mean_free=True)


def kp_nonlocal(f: SpectralField) -> SpectralField:
    """G * d_x^{-1} d_y^2 f, the transverse term G * v_y written in u only."""
    return apply_symbol(f, kp_symbol(f.grid), x_mean_free=True)


def project_xmean(f: SpectralField) -> SpectralField:
    if f.x_mean_free:
        return f
    coefficients = f.coefficients.clone()
    coefficients[:, 0] = 0.0
    return f.with_coefficients(coefficients, x_mean_free=True)


def dealias(f: SpectralField) -> SpectralField:
    return apply_symbol(f, f.grid.dealias_mask.to(COMPLEX), x_mean_free=f.x_mean_free)


def multiply(a: SpectralField, b: SpectralField) -> SpectralField:
    """Pointwise product followed by the two-thirds truncation."""
    if a.grid != b.grid:
        raise ValueError(f"Grid mismatch: {a.grid} vs {b.grid}")
    return dealias(a.with_values(a.values * b.values))


def require_x_mean_free(f: SpectralField, operation: str) -> SpectralField:
    residue = f.x_mean_residue()
    if residue > MEAN_FREE_TOL:
        raise MeanFreeError(operation, residue)
    return f


# norms and reductions


def _weighted_square_sum(f: SpectralField, weight: Union[torch.Tensor, float]) -> float:
    grid = f.grid
    density = grid.mode_weights * weight * f.coefficients.abs() ** 2
    return grid.parseval_scale * fixed_order_sum(density)


def hs_squared(f: SpectralField, s: float = 0.0) -> float:
    if s < 0:
        raise ValueError(f"Sobolev index must be non-negative, got s={s}")
    return _weighted_square_sum(f, hs_weight(f.grid, s) if s != 0 else 1.0)


def norm_hs(f: SpectralField, s: float = 0.0) -> float:
    """H^s norm with continuum normalization: weight (1 + xi^2 + eta^2)^s on |F(u)|^2.

    Args:
        f: the field.
        s: Sobolev index, s >= 0.

    Returns:
        The norm, consistent with the integral definition on the lx x ly box.
    """
    return math.sqrt(hs_squared(f, s))


def xs_squared(f: SpectralField, s: float = 0.0) -> float:
    if s < 0:
        raise ValueError(f"Sobolev index must be non-negative, got s={s}")
    require_x_mean_free(f, "norm_xs")
    return hs_squared(f, s) + hs_squared(inv_ddx(f), s) + hs_squared(ddx(f), s)


def norm_xs(f: SpectralField, s: float = 0.0) -> float:
    """||u||_{H^s}^2 + ||d_x^{-1} u||_{H^s}^2 + ||d_x u||_{H^s}^2, square-rooted.

    Raises:
        MeanFreeError: if `f` carries x-mean, for which d_x^{-1} f is undefined.
    """
    return math.sqrt(xs_squared(f, s))


def inner(a: SpectralField, b: SpectralField) -> float:
    """Continuum L2 inner product, computed on the physical grid."""
    if a.grid != b.grid:
        raise ValueError(f"Grid mismatch: {a.grid} vs {b.grid}")
    return a.grid.cell_area * fixed_order_sum(a.values * b.values)


def quadrature_l2(f: SpectralField) -> float:
    return math.sqrt(f.grid.cell_area * fixed_order_sum(f.values**2))


# off-grid evaluation


def eval_at(
    f: SpectralField, x: Union[float, torch.Tensor], y: Union[float, torch.Tensor]
) -> Union[float, torch.Tensor]:
    """Evaluate the trigonometric interpolant of `f` at arbitrary points.

    Scalars in, float out; 1-d tensors of matching length in, tensor out.
    """
    grid = f.grid
    scalar = not torch.is_tensor(x) and not torch.is_tensor(y)
    px, py = grid.reduce(torch.as_tensor(x, dtype=REAL).reshape(-1), torch.as_tensor(y, dtype=REAL).reshape(-1))
    px, py = torch.broadcast_tensors(px, py)

    # (P, nx//2+1) and (P, ny)
    phase_x = torch.exp(1j * px.unsqueeze(1) * grid.xi.reshape(1, -1))
    phase_y = torch.exp(1j * py.unsqueeze(1) * grid.eta.reshape(1, -1))

    weighted = (grid.mode_weights * f.coefficients).to(COMPLEX)
    partial = phase_y @ weighted
    out = (partial * phase_x).sum(dim=1).real / grid.num_points

    if scalar:
        return float(out[0])
    return out
