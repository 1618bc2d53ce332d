from __future__ import annotations

import json

import pytest
import torch

from chkplab.integrate.trajectory import SNAPSHOT_DIR, Trajectory, read_snapshot, write_snapshot
from chkplab.spectral.field import SpectralField
from chkplab.spectral.grid import GridSpec


@pytest.fixture
def trajectory(wavy_field: SpectralField) -> Trajectory:
    return Trajectory(wavy_field.grid, times=[0.0, 0.5, 1.5], fields=[wavy_field, wavy_field * 2.0, wavy_field * 4.0])


def test_append_rules(trajectory: Trajectory, wavy_field: SpectralField):
    with pytest.raises(ValueError):
        trajectory.append(1.5, wavy_field)
    with pytest.raises(ValueError):
        trajectory.append(2.0, SpectralField.zeros(GridSpec(nx=8, ny=8)))
    trajectory.append(2.0, wavy_field)
    assert len(trajectory) == 4


def test_access(trajectory: Trajectory, wavy_field: SpectralField):
    assert len(trajectory) == 3
    assert torch.equal(trajectory.times, torch.tensor([0.0, 0.5, 1.5], dtype=torch.float64))
    t, field = trajectory[1]
    assert t == 0.5
    assert torch.equal(field.values, (wavy_field * 2.0).values)
    assert [t for t, _ in trajectory] == [0.0, 0.5, 1.5]


def test_snapshot_files(tmp_path, wavy_field: SpectralField):
    path = write_snapshot(tmp_path, 7, 0.125, wavy_field)
    assert path.name == "snap_00007.bin"
    assert path.stat().st_size == 8 * wavy_field.grid.num_points

    meta = json.loads((tmp_path / "snap_00007.json").read_text())
    assert meta["dtype"] == "<f8"
    assert meta["t"] == 0.125
    assert (meta["nx"], meta["ny"]) == (wavy_field.grid.nx, wavy_field.grid.ny)

    t, field = read_snapshot(tmp_path, 7)
    assert t == 0.125
    assert field.grid == wavy_field.grid
    assert torch.equal(field.values, wavy_field.values)


def test_save_and_load(tmp_path, trajectory: Trajectory):
    trajectory.save_to_disk(tmp_path)
    assert len(list((tmp_path / SNAPSHOT_DIR).glob("*.bin"))) == 3

    loaded = Trajectory.load_from_disk(tmp_path)
    assert loaded.grid == trajectory.grid
    assert torch.equal(loaded.times, trajectory.times)
    for (_, a), (_, b) in zip(loaded, trajectory):
        assert torch.equal(a.values, b.values)


def test_load_missing(tmp_path):
    with pytest.raises(FileNotFoundError):
        Trajectory.load_from_disk(tmp_path)
