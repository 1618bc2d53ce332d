"""Run a configured simulation into a directory and derive its verification report.

A run directory holds:

- `config.json` and `schema.json`: the validated configuration and the schema it was checked against;
- `diagnostics.csv`: one row per emitted record;
- `snapshots/`: raw little-endian float64 fields with JSON sidecars;
- `stop.json`: the stop reason;
- `report.json`: written by `verify`, from the files above only.
"""
from __future__ import annotations

import enum
import logging
import math
import shutil
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Sequence, Union

import numpy as np
import scipy
import torch

import chkplab
from chkplab.breaking.characteristics import (
    empirical_K,
    field_sup_R,
    riccati_comparison,
    track,
    verify_riccati_ode,
)
from chkplab.breaking.riccati import t0_bound, t_star
from chkplab.breaking.weighted import WeightSpec, c3_and_t0, empirical_D, weighted_M1
from chkplab.errors import RunDirectoryError, SparseTrajectoryError
from chkplab.integrate.stepper import StopKind, StopReason, run
from chkplab.integrate.trajectory import SNAPSHOT_DIR, Trajectory, write_snapshot
from chkplab.liouville.probe import p_functional, q_zero_consistent, vanish_scan
from chkplab.measure.diagnostics import (
    DiagnosticRecord,
    blowup_integral,
    blowup_signature,
    read_diagnostics,
    write_diagnostics,
)
from chkplab.measure.inequalities import inequality_report
from chkplab.model.chkp import ModelParams, flux, residual_R
from chkplab.model.conditions import check_growth, check_liouville_condition
from chkplab.run.config import RunConfig, schema
from chkplab.run.initial_data import initial_data
from chkplab.serialize.io_utils import atomic_write_bytes, dumps_json, finite_or_none, load_json, save_json
from chkplab.spectral.field import SpectralField
from chkplab.spectral.functional import ddx, project_xmean
from chkplab.types import StrEnum

pylogger = logging.getLogger(__name__)

CONFIG_FILE = "config.json"
SCHEMA_FILE = "schema.json"
DIAGNOSTICS_FILE = "diagnostics.csv"
STOP_FILE = "stop.json"
REPORT_FILE = "report.json"

# a bound is confirmed when the observed event happens within this factor of it
BOUND_SLACK = 1.10
# slope and weighted-slope crossings are measured at this multiple of the initial value
CROSSING_FACTOR = 10.0


class Verdict(StrEnum):
    YES = "yes"
    NO = "no"
    NOT_APPLICABLE = "n/a"


@dataclass(frozen=True)
class RunOutcome:
    run_dir: Path
    stop: StopReason
    report: Dict[str, Any]


def simulate(config: RunConfig, out_dir: Optional[Union[str, Path]] = None) -> RunOutcome:
    """Integrate the configured run, persist every artifact into `out_dir` and verify it.

    Args:
        config: a validated run configuration.
        out_dir: the run directory; defaults to `config.output_dir`.

    Returns:
        The run directory, the stop reason and the verification report.
    """
    target = out_dir if out_dir is not None else config.output_dir
    if target is None:
        raise ValueError("No output directory: pass one or set `output_dir` in the configuration")
    run_dir = Path(target)
    run_dir.mkdir(parents=True, exist_ok=True)

    snapshot_dir = run_dir / SNAPSHOT_DIR
    if snapshot_dir.exists():
        pylogger.warning(f"Replacing the snapshots already in {snapshot_dir}")
        shutil.rmtree(snapshot_dir)

    save_json(config.to_dict(), run_dir / CONFIG_FILE)
    save_json(schema(), run_dir / SCHEMA_FILE)

    grid = config.grid.build()
    params = config.model.build()
    u0 = initial_data(grid, config.initial_data.preset, **config.initial_data.params)
    stepper = config.stepper.build(record_every=config.diagnostics_every, xs_s=config.analysis.xs_s)

    result = run(
        u0,
        params,
        stepper,
        on_snapshot=lambda index, t, field: write_snapshot(snapshot_dir, index, t, field),
    )
    write_diagnostics(result.records, run_dir / DIAGNOSTICS_FILE)
    save_json(result.stop.to_dict(), run_dir / STOP_FILE)

    report = verify(run_dir)
    return RunOutcome(run_dir=run_dir, stop=result.stop, report=report)


def verify(run_dir: Union[str, Path]) -> Dict[str, Any]:
    """Recompute the report of a run directory from its persisted artifacts and write `report.json`.

    Only `report.json` is written; repeated calls produce byte-identical files.

    Raises:
        RunDirectoryError: if the directory or one of its artifacts is missing.
    """
    run_dir = Path(run_dir)
    _require_artifacts(run_dir, (CONFIG_FILE, DIAGNOSTICS_FILE, STOP_FILE))

    config = RunConfig.from_dict(load_json(run_dir / CONFIG_FILE))
    params = config.model.build()
    records = read_diagnostics(run_dir / DIAGNOSTICS_FILE)
    if not records:
        raise RunDirectoryError(f"{run_dir / DIAGNOSTICS_FILE} holds no records")
    stop = StopReason.from_dict(load_json(run_dir / STOP_FILE))
    try:
        trajectory = Trajectory.load_from_disk(run_dir)
    except FileNotFoundError as exc:
        raise RunDirectoryError(str(exc)) from exc

    report = build_report(config, params, records, stop, trajectory)
    atomic_write_bytes(run_dir / REPORT_FILE, dumps_json(report).encode("utf-8"))
    pylogger.info(f"Report written to {run_dir / REPORT_FILE}")
    return report


def _require_artifacts(run_dir: Path, names: Sequence[str]) -> None:
    if not run_dir.is_dir():
        raise RunDirectoryError(f"Run directory {run_dir} does not exist")
    missing = [name for name in names if not (run_dir / name).is_file()]
    if missing:
        raise RunDirectoryError(f"Run directory {run_dir} is missing {', '.join(missing)}")


def build_report(
    config: RunConfig,
    params: ModelParams,
    records: List[DiagnosticRecord],
    stop: StopReason,
    trajectory: Trajectory,
) -> Dict[str, Any]:
    finite = [r for r in records if r.finite]
    u0 = trajectory.field(0)

    report = dict(
        schema_version=config.schema_version,
        config_hash=config.config_hash,
        versions=dict(
            chkplab=chkplab.__version__,
            torch=torch.__version__,
            numpy=np.__version__,
            scipy=scipy.__version__,
        ),
        nonlinearity=params.nonlinearity.name,
        gamma=params.gamma,
        stop=stop.to_dict(),
        n_records=len(records),
        n_snapshots=len(trajectory),
        energy=_energy_section(finite),
        blowup=_blowup_section(finite),
        riccati=_riccati_section(finite, stop, trajectory, params),
        characteristics=[_characteristic_section(trajectory, x0, y0, params) for x0, y0 in config.analysis.seeds],
        weighted=_weighted_section(config, u0, trajectory, params),
        liouville=_liouville_section(config, trajectory, params),
        growth=_optional(lambda: check_growth(params).to_dict()),
        inequalities=inequality_report(u0).to_dict(),
    )
    return _clean(report)


# sections


def _first_time(times: Sequence[float], values: Sequence[float], below: float) -> Optional[float]:
    for t, v in zip(times, values):
        if v <= below:
            return float(t)
    return None


def _bound_verdict(bound: Optional[float], *observed: Optional[float]) -> Verdict:
    if bound is None:
        return Verdict.NOT_APPLICABLE
    if all(t is not None and t <= BOUND_SLACK * bound for t in observed):
        return Verdict.YES
    return Verdict.NO


def _energy_section(records: List[DiagnosticRecord]) -> Dict[str, Any]:
    initial, final = records[0].conserved, records[-1].conserved
    drift = abs(final - initial) / initial if initial > 0 else None
    return dict(conserved_initial=initial, conserved_final=final, t_final=records[-1].t, relative_drift=drift)


def _blowup_section(records: List[DiagnosticRecord]) -> Dict[str, Any]:
    integral = blowup_integral(records)
    section = dict(
        I_final=float(integral[-1]),
        # the streamed integral in the CSV against the trapezoid recomputed from its rows
        I_mismatch=float(np.max(np.abs(integral - np.array([r.I for r in records])))),
        max_grad_inf=max(r.grad_inf for r in records),
        signature=None,
    )
    times = [r.t for r in records]
    if len(times) >= 2 and times[-1] > times[0]:
        section["signature"] = blowup_signature(times, integral).to_dict()
    return section


def _riccati_section(
    records: List[DiagnosticRecord], stop: StopReason, trajectory: Trajectory, params: ModelParams
) -> Dict[str, Any]:
    m0 = records[0].min_ux
    # K bounds R over the whole run, the t=0 value is informative only
    k_emp = field_sup_R(trajectory, params)
    k_initial = residual_R(project_xmean(trajectory.field(0)), params).sup()
    bound = t_star(m0, k_emp, params.gamma)

    t_cross = _first_time([r.t for r in records], [r.min_ux for r in records], CROSSING_FACTOR * m0) if m0 < 0 else None
    t_grad = stop.t_stop if stop.kind == StopKind.GRADIENT_THRESHOLD else None
    verdict = _bound_verdict(bound.t_star, t_cross, t_grad)

    return dict(
        m0=m0,
        K_emp=k_emp,
        K_initial=k_initial,
        threshold=bound.threshold,
        t_star=bound.t_star,
        t_cross=t_cross,
        t_grad=t_grad,
        min_ux_final=records[-1].min_ux,
        verdict=verdict.value,
    )


def _characteristic_section(trajectory: Trajectory, x0: float, y0: float, params: ModelParams) -> Dict[str, Any]:
    section: Dict[str, Any] = dict(x0=x0, y0=y0)
    try:
        trace = track(trajectory, x0, y0, params)
    except SparseTrajectoryError as exc:
        pylogger.warning(f"Characteristic from ({x0}, {y0}) not tracked: {exc}")
        section["error"] = str(exc)
        return section

    k_trace = empirical_K(trace)
    section.update(
        w0=float(trace.w[0]),
        w_final=float(trace.w[-1]),
        q_final=float(trace.q[-1]),
        K_trace=k_trace,
        comparison=riccati_comparison(trace, params.gamma, k_trace).to_dict(),
        ode_residual=verify_riccati_ode(trace, params.gamma).to_dict() if len(trace) >= 3 else None,
    )
    return section


def _weighted_section(
    config: RunConfig, u0: SpectralField, trajectory: Trajectory, params: ModelParams
) -> Optional[Dict[str, Any]]:
    analysis = config.analysis
    if analysis.weight_sigma is None:
        return None

    grid = trajectory.grid
    try:
        weight = WeightSpec.gaussian(grid, analysis.weight_sigma)
    except ValueError as exc:
        pylogger.warning(f"Weighted analysis skipped: {exc}")
        return dict(error=str(exc))

    x0 = analysis.weight_x0
    if x0 is None:
        # steepest point of u0_x on the grid line nearest to the weight center
        row = int(torch.argmin((grid.y - weight.center).abs()))
        x0 = float(grid.x[int(torch.argmin(ddx(u0).values[row]))])

    bound = c3_and_t0(u0, weight, params.gamma, analysis.c_user, x0, s=analysis.xs_s)
    section: Dict[str, Any] = dict(x0=x0, weight=weight.to_dict(), bound=bound.to_dict())

    try:
        series = weighted_M1(trajectory, x0, weight, params.gamma)
    except SparseTrajectoryError as exc:
        pylogger.warning(f"M1 not tracked: {exc}")
        section["error"] = str(exc)
        return section

    m1_0 = float(series.values[0])
    d_max = empirical_D(series.times, series.values, params.gamma) if len(series.values) >= 3 else None
    c3_emp = math.sqrt(max(d_max, 0.0)) if d_max is not None else None
    t0_emp = t0_bound(m1_0, c3_emp, params.gamma) if c3_emp is not None else None
    t_fall = (
        _first_time(series.times.tolist(), series.values.tolist(), -CROSSING_FACTOR * abs(m1_0)) if m1_0 < 0 else None
    )

    section.update(
        M1_0=m1_0,
        D_max=d_max,
        C3_emp=c3_emp,
        T0_emp=t0_emp,
        T0_user=bound.t0,
        t_fall=t_fall,
        verdict=_bound_verdict(t0_emp, t_fall).value,
        verdict_user=_bound_verdict(bound.t0, t_fall).value,
        series=series.to_rows(),
    )
    return section


def _liouville_section(config: RunConfig, trajectory: Trajectory, params: ModelParams) -> Dict[str, Any]:
    condition = check_liouville_condition(params)

    q_min, consistent = math.inf, True
    for _, field in trajectory:
        # the pointwise q of q_functional, without re-checking the condition per snapshot
        q = flux(field, params, dealiased=False)
        q_min = min(q_min, float(q.values.min()))
        consistent = consistent and q_zero_consistent(field, q)

    section = dict(
        condition=condition.to_dict(),
        q_min=q_min,
        q_zero_consistent=consistent,
        vanish=vanish_scan(trajectory, config.analysis.liouville_tol).to_dict() if len(trajectory) >= 2 else None,
        p=None,
    )
    if config.analysis.p_interval is not None:
        c, d = config.analysis.p_interval
        section["p"] = p_functional(trajectory.field(len(trajectory) - 1), params, c, d).to_dict()
    return section


def _optional(fn: Callable[[], Any]) -> Any:
    try:
        return fn()
    except ValueError as exc:
        pylogger.debug(f"Report entry skipped: {exc}")
        return None


def _clean(obj: Any) -> Any:
    """JSON-ready copy: tensors to lists, enums to values, non-finite floats to null."""
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, torch.Tensor):
        return _clean(obj.tolist())
    if isinstance(obj, enum.Enum):
        return obj.value
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        return finite_or_none(obj)
    return obj
