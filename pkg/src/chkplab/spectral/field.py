from __future__ import annotations

import logging
from typing import Callable, Optional, Union

import torch

from chkplab.spectral.grid import COMPLEX, REAL, GridSpec

pylogger = logging.getLogger(__name__)


class SpectralField:
    """A real scalar field on a periodic grid, held in physical space, spectral space, or both.

    Either representation is computed lazily from the other and cached. Instances are treated as
    immutable: operations always return new fields.

    Args:
        grid: the grid the field lives on.
        values: physical values, shape (ny, nx).
        coefficients: unnormalized `rfft2` coefficients, shape (ny, nx // 2 + 1).
        x_mean_free: whether every (xi=0, eta) coefficient is known to be zero.
    """

    __slots__ = ("grid", "_values", "_coefficients", "x_mean_free")

    def __init__(
        self,
        grid: GridSpec,
        values: Optional[torch.Tensor] = None,
        coefficients: Optional[torch.Tensor] = None,
        x_mean_free: bool = False,
    ):
        if values is None and coefficients is None:
            raise ValueError("A SpectralField needs physical values or spectral coefficients")

        if values is not None:
            values = torch.as_tensor(values, dtype=REAL)
            if tuple(values.shape) != grid.shape:
                raise ValueError(f"Expected values of shape {grid.shape}, got {tuple(values.shape)}")
        if coefficients is not None:
            coefficients = torch.as_tensor(coefficients, dtype=COMPLEX)
            if tuple(coefficients.shape) != grid.spectral_shape:
                raise ValueError(
                    f"Expected coefficients of shape {grid.spectral_shape}, got {tuple(coefficients.shape)}"
                )

        self.grid = grid
        self._values = values
        self._coefficients = coefficients
        self.x_mean_free = x_mean_free

    @classmethod
    def zeros(cls, grid: GridSpec) -> SpectralField:
        return cls(grid, values=torch.zeros(grid.shape, dtype=REAL), x_mean_free=True)

    @classmethod
    def from_function(
        cls, grid: GridSpec, fn: Callable[[torch.Tensor, torch.Tensor], torch.Tensor], x_mean_free: bool = False
    ) -> SpectralField:
        """Sample `fn(X, Y)` on the grid nodes."""
        xx, yy = grid.mesh
        values = torch.as_tensor(fn(xx, yy), dtype=REAL)
        if values.dim() == 0:
            values = values.expand(grid.shape)
        return cls(grid, values=values.expand(grid.shape).clone(), x_mean_free=x_mean_free)

    @property
    def values(self) -> torch.Tensor:
        if self._values is None:
            self._values = torch.fft.irfft2(self._coefficients, s=self.grid.shape)
        return self._values

    @property
    def coefficients(self) -> torch.Tensor:
        if self._coefficients is None:
            self._coefficients = torch.fft.rfft2(self._values)
        return self._coefficients

    def is_finite(self) -> bool:
        return bool(torch.isfinite(self.values).all())

    def x_mean_residue(self) -> float:
        """Largest |coefficient| on the xi=0 column, relative to the largest coefficient overall."""
        if self.x_mean_free:
            return 0.0
        coefficients = self.coefficients
        scale = float(coefficients.abs().max())
        if scale == 0.0:
            return 0.0
        return float(coefficients[:, 0].abs().max()) / scale

    def sup(self) -> float:
        return float(self.values.abs().max())

    def with_values(self, values: torch.Tensor, x_mean_free: bool = False) -> SpectralField:
        return SpectralField(self.grid, values=values, x_mean_free=x_mean_free)

    def with_coefficients(self, coefficients: torch.Tensor, x_mean_free: bool = False) -> SpectralField:
        return SpectralField(self.grid, coefficients=coefficients, x_mean_free=x_mean_free)

    def _check_grid(self, other: SpectralField):
        if other.grid != self.grid:
            raise ValueError(f"Grid mismatch: {self.grid} vs {other.grid}")

    def __add__(self, other: Union[SpectralField, float]) -> SpectralField:
        if isinstance(other, SpectralField):
            self._check_grid(other)
            return self.with_values(self.values + other.values, self.x_mean_free and other.x_mean_free)
        return self.with_values(self.values + other, self.x_mean_free and other == 0)

    def __sub__(self, other: Union[SpectralField, float]) -> SpectralField:
        if isinstance(other, SpectralField):
            self._check_grid(other)
            return self.with_values(self.values - other.values, self.x_mean_free and other.x_mean_free)
        return self.with_values(self.values - other, self.x_mean_free and other == 0)

    def __mul__(self, scalar: float) -> SpectralField:
        if isinstance(scalar, SpectralField):
            raise TypeError("Use chkplab.spectral.multiply for dealiased field products")
        if self._coefficients is not None:
            return self.with_coefficients(self._coefficients * scalar, self.x_mean_free)
        return self.with_values(self.values * scalar, self.x_mean_free)

    __rmul__ = __mul__

    def __neg__(self) -> SpectralField:
        return self * -1.0

    def __repr__(self) -> str:
        return f"SpectralField(grid={self.grid}, x_mean_free={self.x_mean_free})"
