from __future__ import annotations

import logging
from pathlib import Path
from typing import Iterator, List, Sequence, Tuple

import numpy as np
import torch

from chkplab.serialize.io_utils import SerializableMixin, load_json, save_json
from chkplab.spectral.field import SpectralField
from chkplab.spectral.grid import REAL, GridSpec

pylogger = logging.getLogger(__name__)

SNAPSHOT_DIR = "snapshots"
SNAPSHOT_DTYPE = "<f8"
SNAPSHOT_LAYOUT = "row-major, y outer (shape ny x nx)"


def snapshot_stem(index: int) -> str:
    return f"snap_{index:05d}"


def write_snapshot(directory: Path, index: int, t: float, field: SpectralField) -> Path:
    """Raw little-endian float64 values plus a JSON sidecar describing grid, time and layout."""
    directory.mkdir(parents=True, exist_ok=True)
    stem = snapshot_stem(index)
    data_path = directory / f"{stem}.bin"
    data_path.write_bytes(field.values.numpy().astype(SNAPSHOT_DTYPE).tobytes(order="C"))
    save_json(
        dict(**field.grid.to_dict(), t=t, dtype=SNAPSHOT_DTYPE, layout=SNAPSHOT_LAYOUT),
        directory / f"{stem}.json",
    )
    return data_path


def read_snapshot(directory: Path, index: int) -> Tuple[float, SpectralField]:
    stem = snapshot_stem(index)
    meta = load_json(directory / f"{stem}.json")
    grid = GridSpec.from_dict(meta)
    raw = np.frombuffer((directory / f"{stem}.bin").read_bytes(), dtype=meta["dtype"])
    values = torch.from_numpy(raw.astype(np.float64).reshape(grid.shape))
    return float(meta["t"]), SpectralField(grid, values=values)


class Trajectory(SerializableMixin):
    """Time-ordered snapshots of a run."""

    def __init__(self, grid: GridSpec, times: Sequence[float] = (), fields: Sequence[SpectralField] = ()):
        self.grid = grid
        self._times: List[float] = []
        self._fields: List[SpectralField] = []
        for t, field in zip(times, fields):
            self.append(t, field)

    def append(self, t: float, field: SpectralField) -> None:
        if field.grid != self.grid:
            raise ValueError(f"Snapshot grid {field.grid} does not match trajectory grid {self.grid}")
        if self._times and not t > self._times[-1]:
            raise ValueError(f"Snapshot times must be strictly increasing, got {t} after {self._times[-1]}")
        self._times.append(float(t))
        self._fields.append(field)

    def __len__(self) -> int:
        return len(self._times)

    def __getitem__(self, index: int) -> Tuple[float, SpectralField]:
        return self._times[index], self._fields[index]

    def __iter__(self) -> Iterator[Tuple[float, SpectralField]]:
        return iter(zip(self._times, self._fields))

    @property
    def times(self) -> torch.Tensor:
        return torch.tensor(self._times, dtype=REAL)

    def field(self, index: int) -> SpectralField:
        return self._fields[index]

    def save_to_disk(self, parent_dir: Path) -> None:
        directory = Path(parent_dir) / SNAPSHOT_DIR
        for index, (t, field) in enumerate(self):
            write_snapshot(directory, index, t, field)

    @classmethod
    def load_from_disk(cls, path: Path) -> Trajectory:
        directory = Path(path) / SNAPSHOT_DIR
        stems = sorted(p.stem for p in directory.glob("snap_*.json"))
        if not stems:
            raise FileNotFoundError(f"No snapshots found in {directory}")
        trajectory = None
        for index in range(len(stems)):
            t, field = read_snapshot(directory, index)
            if trajectory is None:
                trajectory = cls(field.grid)
            trajectory.append(t, field)
        pylogger.debug(f"Loaded {len(trajectory)} snapshots from {directory}")
        return trajectory

    @property
    def version(self) -> int:
        return 1
