from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from functools import cached_property
from typing import Any, Dict, Tuple

import torch

pylogger = logging.getLogger(__name__)

REAL = torch.float64
COMPLEX = torch.complex128

MIN_POINTS = 8


@dataclass(frozen=True)
class GridSpec:
    """Geometry of a doubly periodic box of size lx x ly sampled on nx x ny points.

    Fields live on tensors of shape (ny, nx): y is the outer (row) index, x the inner one.
    Spectral coefficients use the real-to-complex layout of `torch.fft.rfft2`, i.e. shape
    (ny, nx // 2 + 1) with the y wavenumbers in FFT order and the x wavenumbers non-negative.
    """

    nx: int
    ny: int
    lx: float = 2 * math.pi
    ly: float = 2 * math.pi

    def __post_init__(self):
        for name in ("nx", "ny"):
            n = getattr(self, name)
            if not isinstance(n, int) or isinstance(n, bool):
                raise ValueError(f"{name} must be an integer, got {n!r}")
            if n < MIN_POINTS or n % 2 != 0:
                raise ValueError(f"{name} must be even and >= {MIN_POINTS}, got {n}")
        for name in ("lx", "ly"):
            length = getattr(self, name)
            if not (math.isfinite(length) and length > 0):
                raise ValueError(f"{name} must be a positive finite length, got {length}")

    @property
    def shape(self) -> Tuple[int, int]:
        return (self.ny, self.nx)

    @property
    def spectral_shape(self) -> Tuple[int, int]:
        return (self.ny, self.nx // 2 + 1)

    @property
    def dx(self) -> float:
        return self.lx / self.nx

    @property
    def dy(self) -> float:
        return self.ly / self.ny

    @property
    def cell_area(self) -> float:
        return self.dx * self.dy

    @property
    def num_points(self) -> int:
        return self.nx * self.ny

    # physical coordinates

    @cached_property
    def x(self) -> torch.Tensor:
        return torch.arange(self.nx, dtype=REAL) * self.dx

    @cached_property
    def y(self) -> torch.Tensor:
        return torch.arange(self.ny, dtype=REAL) * self.dy

    @cached_property
    def mesh(self) -> Tuple[torch.Tensor, torch.Tensor]:
        """Coordinate arrays (X, Y), both of shape (ny, nx)."""
        yy, xx = torch.meshgrid(self.y, self.x, indexing="ij")
        return xx, yy

    # wavenumber indices and tables

    @cached_property
    def j_index(self) -> torch.Tensor:
        return torch.arange(self.nx // 2 + 1)

    @cached_property
    def k_index(self) -> torch.Tensor:
        return torch.fft.fftfreq(self.ny, d=1.0 / self.ny).round().to(torch.long)

    @cached_property
    def xi(self) -> torch.Tensor:
        """x wavenumbers 2*pi*j/lx, shape (1, nx // 2 + 1)."""
        return (2 * math.pi / self.lx * self.j_index.to(REAL)).unsqueeze(0)

    @cached_property
    def eta(self) -> torch.Tensor:
        """y wavenumbers 2*pi*k/ly in FFT order, shape (ny, 1)."""
        return (2 * math.pi / self.ly * self.k_index.to(REAL)).unsqueeze(1)

    @cached_property
    def xi_odd(self) -> torch.Tensor:
        """Like `xi` with the Nyquist column zeroed, for symbols odd in xi."""
        xi = self.xi.clone()
        xi[0, self.nx // 2] = 0.0
        return xi

    @cached_property
    def eta_odd(self) -> torch.Tensor:
        eta = self.eta.clone()
        eta[self.ny // 2, 0] = 0.0
        return eta

    @cached_property
    def dealias_mask(self) -> torch.Tensor:
        """Two-thirds rule: keep |j| <= nx/3 and |k| <= ny/3."""
        keep_j = 3 * self.j_index <= self.nx
        keep_k = 3 * self.k_index.abs() <= self.ny
        return keep_k.unsqueeze(1) & keep_j.unsqueeze(0)

    @cached_property
    def mode_weights(self) -> torch.Tensor:
        """Multiplicity of each half-spectrum column in the full spectrum (2 for 0 < j < nx/2)."""
        weights = torch.full((1, self.nx // 2 + 1), 2.0, dtype=REAL)
        weights[0, 0] = 1.0
        weights[0, self.nx // 2] = 1.0
        return weights

    @cached_property
    def parseval_scale(self) -> float:
        """Factor turning half-spectrum sums of |F|^2 into continuum L2 integrals."""
        return self.lx * self.ly / float(self.num_points) ** 2

    def reduce(self, x: Any, y: Any) -> Tuple[Any, Any]:
        """Reduce coordinates modulo the periods."""
        return x % self.lx, y % self.ly

    def to_dict(self) -> Dict[str, Any]:
        return dict(nx=self.nx, ny=self.ny, lx=self.lx, ly=self.ly)

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> GridSpec:
        return cls(nx=int(data["nx"]), ny=int(data["ny"]), lx=float(data["lx"]), ly=float(data["ly"]))
