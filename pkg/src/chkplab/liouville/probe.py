from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import List

import numpy as np
import torch

from chkplab.integrate.trajectory import Trajectory
from chkplab.model.chkp import ModelParams, flux
from chkplab.model.conditions import LiouvilleVerdict, check_liouville_condition
from chkplab.spectral.field import SpectralField
from chkplab.spectral.functional import ddx
from chkplab.spectral.grid import GridSpec
from chkplab.types import StrEnum

pylogger = logging.getLogger(__name__)

KERNEL_TAIL = 1e-14
MONOTONE_TOL = 1e-10
Q_VANISH_RTOL = 1e-12
Q_ZERO_RTOL = 1e-10
U_ZERO_RTOL = 1e-8


@dataclass(frozen=True)
class Window:
    """A maximal (t x x) rectangle of grid cells on which sup_y |u| < tol, with inclusive indices."""

    i0: int
    i1: int
    j0: int
    j1: int
    t_start: float
    t_end: float
    x_start: float
    x_end: float

    @property
    def area(self) -> int:
        return (self.i1 - self.i0 + 1) * (self.j1 - self.j0 + 1)

    @property
    def width(self) -> int:
        return self.j1 - self.j0 + 1


@dataclass(frozen=True)
class VanishReport:
    tol: float
    windows: List[Window] = field(default_factory=list)

    @property
    def largest_area(self) -> int:
        return max((w.area for w in self.windows), default=0)

    @property
    def largest_width(self) -> int:
        return max((w.width for w in self.windows), default=0)

    def to_dict(self):
        return dict(
            tol=self.tol,
            n_windows=len(self.windows),
            largest_area=self.largest_area,
            largest_width=self.largest_width,
        )


def _maximal_rectangles(mask: np.ndarray) -> List[tuple]:
    """All maximal all-True rectangles of a 2-d boolean mask, as inclusive (i0, i1, j0, j1)."""
    n_rows, n_cols = mask.shape
    found = []
    for i0 in range(n_rows):
        column_and = np.ones(n_cols, dtype=bool)
        for i1 in range(i0, n_rows):
            column_and &= mask[i1]
            if not column_and.any():
                break
            padded = np.concatenate(([False], column_and, [False]))
            edges = np.flatnonzero(padded[1:] != padded[:-1])
            for j0, j_end in zip(edges[::2], edges[1::2]):
                j1 = j_end - 1
                up = i0 > 0 and mask[i0 - 1, j0 : j1 + 1].all()
                down = i1 + 1 < n_rows and mask[i1 + 1, j0 : j1 + 1].all()
                if not up and not down:
                    found.append((i0, i1, int(j0), int(j1)))
    return found


def vanish_scan(trajectory: Trajectory, tol: float) -> VanishReport:
    """Find the maximal (t, x) windows where the field vanishes for every y, up to `tol`.

    x-intervals are taken inside one period; the scan is evidence, not a proof of absence.
    """
    if len(trajectory) < 2:
        raise ValueError("The vanishing scan needs at least 2 snapshots")

    grid = trajectory.grid
    sup_y = torch.stack([f.values.abs().amax(dim=0) for _, f in trajectory]).numpy()
    mask = sup_y < tol

    times = trajectory.times.tolist()
    xs = grid.x.tolist()
    windows = [
        Window(i0, i1, j0, j1, times[i0], times[i1], xs[j0], xs[j1])
        for i0, i1, j0, j1 in _maximal_rectangles(mask)
    ]
    report = VanishReport(tol=tol, windows=windows)
    pylogger.info(f"Vanishing scan at tol={tol:g}: {len(windows)} windows, largest area {report.largest_area}")
    return report


def q_functional(u: SpectralField, p: ModelParams) -> SpectralField:
    """q = g(u)/2 + gamma/2 u_x^2 - gamma/2 u^2, pointwise (no truncation)."""
    check = check_liouville_condition(p)
    if check.verdict != LiouvilleVerdict.HOLDS_STRICT:
        pylogger.warning(f"q is not guaranteed non-negative: the Liouville condition is {check.verdict}")
    return flux(u, p, dealiased=False)


def q_zero_consistent(u: SpectralField, q: SpectralField) -> bool:
    """Wherever q < 1e-10 max q, also u^2 + u_x^2 < 1e-8 max(u^2 + u_x^2)."""
    energy = u.values**2 + ddx(u).values ** 2
    q_max = float(q.values.max())
    e_max = float(energy.max())
    if q_max <= 0:
        return e_max == 0.0
    small = q.values < Q_ZERO_RTOL * q_max
    return bool((energy[small] < U_ZERO_RTOL * e_max).all())


def periodized_kernel(s: torch.Tensor, period: float) -> torch.Tensor:
    """Sum over images of -sgn(s) exp(-|s|) / 2, truncated once the next images fall below 1e-14."""
    s = torch.remainder(s + period / 2, period) - period / 2
    total = -0.5 * torch.sign(s) * torch.exp(-s.abs())
    n = 1
    while True:
        terms = 0.0
        for shifted in (s + n * period, s - n * period):
            image = -0.5 * torch.sign(shifted) * torch.exp(-shifted.abs())
            total = total + image
            terms = max(terms, float(image.abs().max()))
        if terms < KERNEL_TAIL:
            break
        n += 1
    return total


class PVerdict(StrEnum):
    MONOTONE = "monotone"
    VIOLATED = "violated"
    DESCRIPTIVE = "descriptive"


@dataclass(frozen=True)
class PFunctional:
    c: float
    d: float
    p_c: torch.Tensor
    p_d: torch.Tensor
    verdict: PVerdict
    # min over y of p(d, y) - p(c, y)
    min_gap: float

    def to_dict(self):
        return dict(c=self.c, d=self.d, verdict=str(self.verdict), min_gap=self.min_gap)


def _line_convolution(q: SpectralField, x: float) -> torch.Tensor:
    grid: GridSpec = q.grid
    kernel = periodized_kernel(x - grid.x, grid.lx)
    return grid.dx * (q.values * kernel.unsqueeze(0)).sum(dim=1)


def p_profile(q: SpectralField, c: float, d: float) -> PFunctional:
    """p(x, y) = -1/2 integral of sgn(x - z) exp(-|x - z|) q(z, y) dz at x = c and x = d.

    The monotonicity p(d, .) >= p(c, .) is asserted only when q vanishes on [c, d]; otherwise
    the values are reported with a descriptive verdict.
    """
    if not c < d:
        raise ValueError(f"Expected c < d, got c={c}, d={d}")
    grid = q.grid
    p_c = _line_convolution(q, c)
    p_d = _line_convolution(q, d)
    gap = float((p_d - p_c).min())

    inside = (grid.x >= c) & (grid.x <= d)
    scale = max(1.0, float(q.values.abs().max()))
    vanishes = bool(inside.any()) and float(q.values[:, inside].abs().max()) <= Q_VANISH_RTOL * scale

    if not vanishes:
        verdict = PVerdict.DESCRIPTIVE
    elif gap >= -MONOTONE_TOL:
        verdict = PVerdict.MONOTONE
    else:
        verdict = PVerdict.VIOLATED
    return PFunctional(c=float(c), d=float(d), p_c=p_c, p_d=p_d, verdict=verdict, min_gap=gap)


def p_functional(u: SpectralField, p: ModelParams, c: float, d: float) -> PFunctional:
    q = q_functional(u, p)
    q_min = float(q.values.min())
    if q_min < -Q_VANISH_RTOL * max(1.0, float(q.values.abs().max())):
        pylogger.warning(f"q takes negative values (min {q_min:.3e}); the monotonicity argument does not apply")
    return p_profile(q, c, d)


def q_min(u: SpectralField, p: ModelParams) -> float:
    return float(q_functional(u, p).values.min())
