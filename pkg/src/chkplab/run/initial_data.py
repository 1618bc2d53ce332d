from __future__ import annotations

import logging
import math
from typing import Dict

import torch

from chkplab.spectral.field import SpectralField
from chkplab.spectral.functional import ddx, dealias, project_xmean
from chkplab.spectral.grid import GridSpec
from chkplab.types import StrEnum

pylogger = logging.getLogger(__name__)


class InitialDataPreset(StrEnum):
    SMOOTH_SMALL = "smooth_small"
    STEEP_FRONT = "steep_front"
    LOCALIZED_BUMP = "localized_bump"
    Y_MODULATED = "y_modulated"


# `x_center` and `y_center` are also accepted by the localized presets and default to the box center
INITIAL_DATA_DEFAULTS: Dict[InitialDataPreset, Dict[str, float]] = {
    InitialDataPreset.SMOOTH_SMALL: dict(amplitude=1e-2, kx=1.0, ky=1.0),
    InitialDataPreset.STEEP_FRONT: dict(target_m0=-5.0, sigma=1.0, b=1.0),
    InitialDataPreset.LOCALIZED_BUMP: dict(amplitude=1.0, sigma=1.0),
    InitialDataPreset.Y_MODULATED: dict(amplitude=0.5, kx=1.0, ky=1.0, beta=1.0),
}


def _finish(u: SpectralField) -> SpectralField:
    return dealias(project_xmean(u))


def _centered(grid: GridSpec, params: Dict[str, float]):
    xx, yy = grid.mesh
    return xx - params.get("x_center", 0.5 * grid.lx), yy - params.get("y_center", 0.5 * grid.ly)


def _smooth_small(grid: GridSpec, amplitude: float, kx: float, ky: float, **_) -> SpectralField:
    wx, wy = 2 * math.pi * kx / grid.lx, 2 * math.pi * ky / grid.ly
    return SpectralField.from_function(grid, lambda x, y: amplitude * torch.cos(wx * x + wy * y))


def _front_profile(grid: GridSpec, sigma: float, b: float, params) -> SpectralField:
    xt, yt = _centered(grid, params)
    return SpectralField(grid, values=-torch.sin(xt) * torch.exp(-(xt**2 + b * yt**2) / sigma**2))


def _steep_front(grid: GridSpec, target_m0: float, sigma: float, b: float, **params) -> SpectralField:
    if target_m0 > 0:
        raise ValueError(f"target_m0 must be non-positive, got {target_m0}")
    if b < 0 or sigma <= 0:
        raise ValueError(f"Expected sigma > 0 and b >= 0, got sigma={sigma}, b={b}")

    unit = _finish(_front_profile(grid, sigma, b, params))
    # projection and dealiasing are linear, so the grid minimum of u_x scales with the amplitude
    m_unit = float(ddx(unit).values.min())
    if not m_unit < 0:
        raise ValueError("The front profile has no negative slope on this grid")
    amplitude = target_m0 / m_unit
    pylogger.debug(f"steep_front amplitude {amplitude:.6g} for target m0={target_m0}")
    return unit * amplitude


def _localized_bump(grid: GridSpec, amplitude: float, sigma: float, **params) -> SpectralField:
    xt, yt = _centered(grid, params)
    return SpectralField(grid, values=amplitude * xt * torch.exp(-(xt**2 + yt**2) / sigma**2))


def _y_modulated(grid: GridSpec, amplitude: float, kx: float, ky: float, beta: float, **_) -> SpectralField:
    wx, wy = 2 * math.pi * kx / grid.lx, 2 * math.pi * ky / grid.ly
    return SpectralField.from_function(grid, lambda x, y: amplitude * torch.sin(wx * x - beta * torch.cos(wy * y)))


_BUILDERS = {
    InitialDataPreset.SMOOTH_SMALL: _smooth_small,
    InitialDataPreset.STEEP_FRONT: _steep_front,
    InitialDataPreset.LOCALIZED_BUMP: _localized_bump,
    InitialDataPreset.Y_MODULATED: _y_modulated,
}


def initial_data(grid: GridSpec, preset: str, **params: float) -> SpectralField:
    """Build a preset initial state, projected to zero x-mean and dealiased.

    Args:
        grid: the grid to sample on.
        preset: one of `InitialDataPreset`.
        params: overrides of `INITIAL_DATA_DEFAULTS[preset]`, plus optional `x_center`/`y_center`.

    Returns:
        The x-mean-free initial field.
    """
    try:
        preset = InitialDataPreset(preset)
    except ValueError:
        raise ValueError(f"Unknown initial data preset {preset!r}, expected one of {[p.value for p in InitialDataPreset]}")

    defaults = INITIAL_DATA_DEFAULTS[preset]
    unknown = set(params) - set(defaults) - {"x_center", "y_center"}
    if unknown:
        raise ValueError(f"Unknown parameters for {preset}: {sorted(unknown)}")

    merged = {**defaults, **params}
    u = _finish(_BUILDERS[preset](grid, **merged))
    pylogger.info(f"Initial data {preset} on {grid}: sup={u.sup():.4g}")
    return u
