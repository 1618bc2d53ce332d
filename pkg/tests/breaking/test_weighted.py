from __future__ import annotations

import math

import pytest
import torch

from chkplab.breaking import WeightSpec, c3_and_t0, empirical_D, t0_bound, weighted_M1
from chkplab.breaking.riccati import riccati_lower_envelope
from chkplab.breaking.weighted import initial_M1
from chkplab.integrate.trajectory import Trajectory
from chkplab.spectral.field import SpectralField
from chkplab.spectral.functional import fixed_order_sum
from chkplab.spectral.grid import GridSpec


@pytest.fixture(scope="module")
def tall_grid() -> GridSpec:
    return GridSpec(nx=16, ny=64)


@pytest.fixture(scope="module")
def weight(tall_grid) -> WeightSpec:
    return WeightSpec.gaussian(tall_grid, sigma=0.4)


@pytest.fixture(scope="module")
def sine(tall_grid) -> SpectralField:
    return SpectralField.from_function(tall_grid, lambda x, y: torch.sin(x), x_mean_free=True)


def test_gaussian_weight(tall_grid, weight):
    sigma = 0.4
    assert tall_grid.dy * fixed_order_sum(weight.phi) == pytest.approx(1.0, abs=1e-12)
    assert weight.center == pytest.approx(math.pi)
    assert int(weight.phi.argmax()) == 32
    assert weight.phi_inf == pytest.approx(1 / (sigma * math.sqrt(2 * math.pi)), rel=1e-8)
    assert weight.phi_dd_l2 == pytest.approx(math.sqrt(3 / (8 * math.sqrt(math.pi) * sigma**5)), rel=1e-8)
    assert tall_grid.dy * fixed_order_sum(weight.phi_dd) == pytest.approx(0.0, abs=1e-8)
    assert bool((weight.phi >= 0).all())


@pytest.mark.parametrize("sigma", [0.0, -0.1, 0.6])
def test_gaussian_width_limits(tall_grid, sigma):
    with pytest.raises(ValueError):
        WeightSpec.gaussian(tall_grid, sigma=sigma)


def test_center_wraps(tall_grid):
    shifted = WeightSpec.gaussian(tall_grid, sigma=0.4, center=2 * math.pi + 1.0)
    assert shifted.center == pytest.approx(1.0)


def test_initial_M1(sine, weight):
    assert initial_M1(sine, math.pi, weight) == pytest.approx(-1.0, abs=1e-12)


def test_c3_and_t0(sine, weight):
    bound = c3_and_t0(sine, weight, gamma=1.0, c_user=0.0, x0=math.pi)
    energy = 2 * math.pi**2
    assert bound.energy_E == pytest.approx(energy, rel=1e-12)
    assert bound.c3**2 == pytest.approx(1.5 * energy * weight.phi_inf + math.sqrt(energy) * weight.phi_dd_l2)
    assert bound.m1_0 == pytest.approx(-1.0, abs=1e-12)
    assert bound.t0 == t0_bound(bound.m1_0, bound.c3, 1.0)
    assert not bound.applicable

    larger = c3_and_t0(sine, weight, gamma=1.0, c_user=2.0, x0=math.pi)
    assert larger.c3 > bound.c3
    with pytest.raises(ValueError):
        c3_and_t0(sine, weight, gamma=1.0, c_user=-1.0, x0=math.pi)


def test_empirical_D():
    times = torch.linspace(0, 1, 201, dtype=torch.float64)

    # exact solution of dM/dt = -(gamma/2) M^2
    assert empirical_D(times, -1.0 / (1.0 - 0.5 * times), gamma=1.0) == pytest.approx(0.0, abs=1e-3)
    assert empirical_D(times, times, gamma=1.0) == pytest.approx(1.5, abs=1e-10)
    with pytest.raises(ValueError):
        empirical_D(times[:2], times[:2], gamma=1.0)


def test_empirical_D_recovers_C3():
    # M = -psi with d psi/dt = psi^2 - 1: equality in dM/dt <= -(gamma/2) M^2 + C3^2 for gamma = 2, C3 = 1
    times = torch.linspace(0, 0.3, 601, dtype=torch.float64)
    m1 = torch.tensor([-riccati_lower_envelope(2.0, 1.0, 1.0, float(t)) for t in times], dtype=torch.float64)
    assert empirical_D(times, m1, gamma=2.0) == pytest.approx(1.0, abs=1e-3)
    assert t0_bound(float(m1[0]), 1.0, 2.0) == pytest.approx(0.5 * math.log(3.0), rel=1e-12)


def test_weighted_M1_frozen(tall_grid, sine, weight):
    trajectory = Trajectory(tall_grid, times=torch.linspace(0, 1, 11).tolist(), fields=[sine] * 11)
    series = weighted_M1(trajectory, math.pi, weight, gamma=1.0)
    assert series.values.tolist() == pytest.approx([-1.0] * 11, abs=1e-10)
    assert series.to_rows()[-1] == pytest.approx([1.0, -1.0], abs=1e-10)


def test_weighted_M1_moving(tall_grid, sine, weight):
    # dq/dt = sin q from pi/2 gives q = 2 atan(e^t), so u_x(q) = cos q = -tanh t on every line
    times = torch.linspace(0, 1, 101, dtype=torch.float64)
    trajectory = Trajectory(tall_grid, times=times.tolist(), fields=[sine] * len(times))
    series = weighted_M1(trajectory, math.pi / 2, weight, gamma=1.0)
    assert torch.allclose(series.times, times)
    assert series.values.tolist() == pytest.approx((-torch.tanh(times)).tolist(), abs=1e-6)
    assert empirical_D(series.times, series.values, gamma=1.0) == pytest.approx(-1.0 + 1.5 * math.tanh(1.0) ** 2, abs=5e-3)
