from __future__ import annotations

import math

import pytest
import torch

from chkplab.measure.inequalities import inequality_report
from chkplab.spectral import SpectralField, random_corpus
from chkplab.spectral.grid import GridSpec


def test_zero_field_skipped():
    report = inequality_report(SpectralField.zeros(GridSpec(nx=16, ny=16)))
    assert report.skipped
    assert report.to_dict() == dict(ratio_product=None, ratio_cubic=None, ratio_sum=None, skipped=True)


def test_y_independent_field():
    grid = GridSpec(nx=16, ny=16)
    report = inequality_report(SpectralField.from_function(grid, lambda x, y: torch.sin(x), x_mean_free=True))
    # u_y vanishes identically, so the product and cubic ratios are undefined
    assert report.ratio_sum == pytest.approx(1.0 / (2.0 * math.pi * math.sqrt(2.0)), rel=1e-9)


def test_ratios_stable_under_refinement():
    coarse_grid, fine_grid = GridSpec(nx=128, ny=128), GridSpec(nx=256, ny=256)
    coarse = random_corpus(coarse_grid, size=20, seed=7)
    fine = random_corpus(fine_grid, size=20, seed=7)

    for u_coarse, u_fine in zip(coarse, fine):
        a, b = inequality_report(u_coarse), inequality_report(u_fine)
        for name in ("ratio_product", "ratio_cubic", "ratio_sum"):
            ra, rb = getattr(a, name), getattr(b, name)
            assert ra is not None and math.isfinite(ra)
            assert abs(ra - rb) / rb < 0.1
