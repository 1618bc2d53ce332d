from __future__ import annotations

import pytest

from chkplab.run.config import RunConfig
from chkplab.run.pipeline import simulate

SMOOTH = dict(
    grid=dict(nx=16, ny=16),
    model=dict(preset="classical", gamma=1.0, kappa=1.0),
    stepper=dict(dt0=0.01, t_end=0.2, snapshot_every=5),
    initial_data=dict(preset="smooth_small"),
    analysis=dict(seeds=[[1.0, 1.0]], weight_sigma=0.4, p_interval=[1.0, 2.0]),
)


@pytest.fixture(scope="session")
def smooth_config() -> RunConfig:
    return RunConfig.from_dict(SMOOTH)


@pytest.fixture(scope="session")
def smooth_run(tmp_path_factory, smooth_config):
    return simulate(smooth_config, tmp_path_factory.mktemp("smooth"))
