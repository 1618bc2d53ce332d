from __future__ import annotations

import dataclasses
import logging
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, List, Optional, Sequence

import numpy as np
import pandas as pd

from chkplab.errors import MeanFreeError
from chkplab.spectral.field import SpectralField
from chkplab.spectral.functional import ddx, ddy, hs_squared, xs_squared

pylogger = logging.getLogger(__name__)

COLUMNS = ("t", "dt", "conserved", "energy_E", "xs_norm", "grad_inf", "min_ux", "I")

# fraction of the resolved interval used at each end by the blow-up signature
SIGNATURE_WINDOW = 0.1
BREAKING_RATE_RATIO = 10.0


@dataclass(frozen=True)
class DiagnosticRecord:
    t: float
    dt: float
    conserved: float
    energy_E: float
    xs_norm: float
    grad_inf: float
    min_ux: float
    I: float  # noqa: E741
    finite: bool = True

    def with_integral(self, value: float) -> DiagnosticRecord:
        return dataclasses.replace(self, I=value)

    def as_row(self) -> List[float]:
        return [getattr(self, column) for column in COLUMNS]


def record(u: SpectralField, t: float, dt: float = 0.0, I: float = 0.0, s: float = 1.0) -> DiagnosticRecord:  # noqa: E741
    """All tracked functionals of one state.

    `conserved` is ||u||^2 + ||u_x||^2, `energy_E` half of it, `xs_norm` the X^s norm,
    `grad_inf` the grid max of |grad u| and `min_ux` the grid min of u_x.
    A non-finite state gives a record flagged `finite=False` with NaN functionals.
    """
    if not u.is_finite():
        nan = math.nan
        return DiagnosticRecord(t, dt, nan, nan, nan, nan, nan, I, finite=False)

    ux = ddx(u)
    uy = ddy(u)
    try:
        xs_norm = math.sqrt(xs_squared(u, s))
    except MeanFreeError:
        pylogger.debug(f"X^s norm undefined at t={t}: the state carries x-mean")
        xs_norm = math.nan
    conserved = hs_squared(u) + hs_squared(ux)
    grad_inf = float((ux.values**2 + uy.values**2).sqrt().max())
    min_ux = float(ux.values.min())
    assert -min_ux <= grad_inf * (1 + 1e-12), f"|min u_x|={-min_ux} exceeds max |grad u|={grad_inf}"

    return DiagnosticRecord(
        t=t,
        dt=dt,
        conserved=conserved,
        energy_E=0.5 * conserved,
        xs_norm=xs_norm,
        grad_inf=grad_inf,
        min_ux=min_ux,
        I=I,
    )


def blowup_integral(records: Sequence[DiagnosticRecord]) -> np.ndarray:
    """Cumulative trapezoid of grad_inf^2 over the recorded times, starting from 0."""
    if not records:
        raise ValueError("The diagnostics stream is empty")
    integral = np.zeros(len(records))
    acc = 0.0
    for i in range(1, len(records)):
        prev, cur = records[i - 1], records[i]
        acc += 0.5 * (cur.t - prev.t) * (prev.grad_inf**2 + cur.grad_inf**2)
        integral[i] = acc
    return integral


@dataclass(frozen=True)
class BlowupSignature:
    head_rate: float
    tail_rate: float
    ratio: float
    # sup of I(t)/t, the constant of a linear bound
    linear_constant: float

    @property
    def breaking(self) -> bool:
        return self.ratio >= BREAKING_RATE_RATIO

    def to_dict(self):
        return dict(
            head_rate=self.head_rate,
            tail_rate=self.tail_rate,
            ratio=self.ratio,
            linear_constant=self.linear_constant,
            breaking=self.breaking,
        )


def blowup_signature(times: Sequence[float], integral: Sequence[float]) -> BlowupSignature:
    """Compare the growth of I over the last tenth of the interval with the first tenth.

    Bounded gradients keep the two rates comparable; a blow-up makes the final rate dominate.
    """
    times = np.asarray(times, dtype=np.float64)
    integral = np.asarray(integral, dtype=np.float64)
    if times.size < 2 or not times[-1] > times[0]:
        raise ValueError("The blow-up signature needs at least two distinct times")

    t0, t1 = times[0], times[-1]
    width = SIGNATURE_WINDOW * (t1 - t0)
    head = (np.interp(t0 + width, times, integral) - integral[0]) / width
    tail = (integral[-1] - np.interp(t1 - width, times, integral)) / width
    ratio = tail / head if head > 0 else (math.inf if tail > 0 else 1.0)

    positive = times > t0
    linear_constant = float(np.max((integral[positive] - integral[0]) / (times[positive] - t0)))
    return BlowupSignature(float(head), float(tail), float(ratio), linear_constant)


def write_diagnostics(records: Iterable[DiagnosticRecord], path: Path) -> None:
    frame = pd.DataFrame([r.as_row() for r in records], columns=list(COLUMNS))
    frame.to_csv(path, index=False, float_format="%.17g")


def read_diagnostics(path: Path) -> List[DiagnosticRecord]:
    frame = pd.read_csv(path, float_precision="round_trip")
    missing = [c for c in COLUMNS if c not in frame.columns]
    if missing:
        raise ValueError(f"{path} lacks diagnostics columns {missing}")
    rows = frame[list(COLUMNS)].to_numpy(dtype=np.float64)
    # xs_norm is NaN for states with x-mean, which are still finite
    finite_columns = [i for i, c in enumerate(COLUMNS) if c != "xs_norm"]
    return [
        DiagnosticRecord(*(float(v) for v in row), finite=bool(np.isfinite(row[finite_columns]).all()))  # type: ignore[arg-type]
        for row in rows
    ]


def records_frame(records: Sequence[DiagnosticRecord], columns: Optional[Sequence[str]] = None) -> pd.DataFrame:
    return pd.DataFrame([r.as_row() for r in records], columns=list(COLUMNS))[list(columns or COLUMNS)]
