from __future__ import annotations

import math
from typing import List, Optional

import torch

from chkplab.spectral.field import SpectralField
from chkplab.spectral.grid import REAL, GridSpec


def random_band_limited(
    grid: GridSpec,
    max_jx: int = 4,
    max_ky: int = 4,
    amplitude: float = 1.0,
    decay: float = 1.0,
    seed: Optional[int] = None,
    generator: Optional[torch.Generator] = None,
) -> SpectralField:
    """Random x-mean-free trigonometric polynomial with x modes 1..max_jx and y modes -max_ky..max_ky.

    Mode (j, k) has a random phase and a random amplitude scaled by (1 + j^2 + k^2)^(-decay/2),
    so the field is smooth and exactly representable on any grid resolving those modes.
    """
    if 3 * max_jx > grid.nx or 3 * max_ky > grid.ny:
        raise ValueError(f"Modes up to ({max_jx}, {max_ky}) are not resolved below the dealiasing cut of {grid}")
    if generator is None:
        generator = torch.Generator().manual_seed(0 if seed is None else seed)

    xx, yy = grid.mesh
    values = torch.zeros(grid.shape, dtype=REAL)
    for j in range(1, max_jx + 1):
        for k in range(-max_ky, max_ky + 1):
            a, phase = torch.rand(2, generator=generator, dtype=REAL)
            scale = (1.0 + j**2 + k**2) ** (-decay / 2)
            xi, eta = 2 * math.pi * j / grid.lx, 2 * math.pi * k / grid.ly
            values += float(a) * scale * torch.cos(xi * xx + eta * yy + 2 * math.pi * float(phase))

    values = values * (amplitude / float(values.abs().max()))
    return SpectralField(grid, values=values, x_mean_free=True)


def random_corpus(grid: GridSpec, size: int, seed: int = 0, **kwargs) -> List[SpectralField]:
    generator = torch.Generator().manual_seed(seed)
    return [random_band_limited(grid, generator=generator, **kwargs) for _ in range(size)]
