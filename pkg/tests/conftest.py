from __future__ import annotations

import math

import pytest
import torch

from chkplab.model.chkp import ModelParams
from chkplab.model.nonlinearity import Nonlinearity
from chkplab.spectral.field import SpectralField
from chkplab.spectral.grid import GridSpec


class GridParams(object):
    instances = [
        GridSpec(nx=16, ny=16),
        GridSpec(nx=32, ny=16),
        GridSpec(nx=16, ny=32, lx=4 * math.pi, ly=2 * math.pi),
        GridSpec(nx=24, ny=12, lx=10.0, ly=6.0),
    ]


@pytest.fixture(params=GridParams().instances, ids=lambda g: f"{g.nx}x{g.ny}", scope="session")
def grid(request) -> GridSpec:
    return request.param


@pytest.fixture(scope="session")
def square_grid() -> GridSpec:
    return GridSpec(nx=32, ny=32)


class ModelInstances(object):
    instances = [
        ModelParams(gamma=1.0, nonlinearity=Nonlinearity.classical(kappa=1.0)),
        ModelParams(gamma=1.0, nonlinearity=Nonlinearity.polynomial((0.0, 3.0))),
        ModelParams(gamma=0.5, nonlinearity=Nonlinearity.polynomial((0.0, 1.0))),
    ]


@pytest.fixture(params=ModelInstances().instances, ids=lambda p: f"{p.nonlinearity.name}-{p.gamma}", scope="session")
def params(request) -> ModelParams:
    return request.param


@pytest.fixture(scope="session")
def quadratic_params() -> ModelParams:
    return ModelParams(gamma=1.0, nonlinearity=Nonlinearity.polynomial((0.0, 3.0)))


def wavy(grid: GridSpec, amplitude: float = 0.1) -> SpectralField:
    """An x-mean-free trigonometric polynomial well inside the dealiasing cut."""
    wx, wy = 2 * math.pi / grid.lx, 2 * math.pi / grid.ly
    return SpectralField.from_function(
        grid,
        lambda x, y: amplitude * (torch.sin(wx * x) * torch.cos(wy * y) + 0.5 * torch.cos(2 * wx * x + wy * y)),
        x_mean_free=True,
    )


@pytest.fixture
def wavy_field(grid) -> SpectralField:
    return wavy(grid)

