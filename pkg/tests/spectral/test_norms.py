from __future__ import annotations

import math

import pytest
import torch

from chkplab.errors import MeanFreeError
from chkplab.spectral import SpectralField, inner, norm_hs, norm_xs, random_band_limited, random_corpus
from chkplab.spectral.functional import hs_squared, quadrature_l2
from chkplab.spectral.grid import GridSpec


def test_norm_of_sine():
    grid = GridSpec(nx=16, ny=16)
    f = SpectralField.from_function(grid, lambda x, y: torch.sin(x))
    assert norm_hs(f) == pytest.approx(math.pi * math.sqrt(2.0), rel=1e-13)
    assert norm_hs(f, s=1.0) == pytest.approx(2.0 * math.pi, rel=1e-13)


def test_norm_xs_of_sine():
    grid = GridSpec(nx=32, ny=16)
    f = SpectralField.from_function(grid, lambda x, y: torch.sin(2 * x), x_mean_free=True)
    expected = math.sqrt((1.0 + 0.25 + 4.0) * 5.0) * math.pi * math.sqrt(2.0)
    assert norm_xs(f, s=1.0) == pytest.approx(expected, rel=1e-12)


def test_norm_errors(grid: GridSpec):
    wy = 2 * math.pi / grid.ly
    f = SpectralField.from_function(grid, lambda x, y: torch.sin(wy * y))
    with pytest.raises(ValueError):
        norm_hs(f, s=-0.5)
    with pytest.raises(MeanFreeError):
        norm_xs(f, s=1.0)


def test_parseval(wavy_field: SpectralField):
    assert norm_hs(wavy_field) == pytest.approx(quadrature_l2(wavy_field), rel=1e-12)
    assert hs_squared(wavy_field) == pytest.approx(inner(wavy_field, wavy_field), rel=1e-12)


def test_sobolev_monotone(wavy_field: SpectralField):
    assert norm_hs(wavy_field, 0.0) < norm_hs(wavy_field, 1.0) < norm_hs(wavy_field, 2.0)


def test_random_band_limited(grid: GridSpec):
    f = random_band_limited(grid, max_jx=2, max_ky=2, amplitude=0.5, seed=3)
    g = random_band_limited(grid, max_jx=2, max_ky=2, amplitude=0.5, seed=3)
    h = random_band_limited(grid, max_jx=2, max_ky=2, amplitude=0.5, seed=4)

    assert f.x_mean_free
    assert f.sup() == pytest.approx(0.5)
    assert torch.equal(f.values, g.values)
    assert not torch.equal(f.values, h.values)
    assert SpectralField(grid, values=f.values).x_mean_residue() < 1e-12


def test_random_band_limited_unresolved():
    with pytest.raises(ValueError):
        random_band_limited(GridSpec(nx=8, ny=8), max_jx=3)


def test_random_corpus():
    grid = GridSpec(nx=32, ny=32)
    corpus = random_corpus(grid, size=5, seed=1)
    again = random_corpus(grid, size=5, seed=1)
    assert len(corpus) == 5
    assert all(torch.equal(a.values, b.values) for a, b in zip(corpus, again))
    assert not torch.equal(corpus[0].values, corpus[1].values)
