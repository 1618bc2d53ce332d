from __future__ import annotations

import math

import pytest

from chkplab.errors import RunDirectoryError
from chkplab.integrate.stepper import StopKind
from chkplab.integrate.trajectory import SNAPSHOT_DIR
from chkplab.measure.diagnostics import read_diagnostics
from chkplab.run.config import RunConfig
from chkplab.run.pipeline import (
    CONFIG_FILE,
    DIAGNOSTICS_FILE,
    REPORT_FILE,
    SCHEMA_FILE,
    STOP_FILE,
    Verdict,
    simulate,
    verify,
)
from tests.run.conftest import SMOOTH

BREAKING = dict(
    grid=dict(nx=2048, ny=8, lx=4 * math.pi),
    model=dict(coefficients=[0.0, 3.0], gamma=1.0),
    stepper=dict(dt0=0.005, t_end=1.2, grad_stop=25.0, snapshot_every=1),
    initial_data=dict(preset="steep_front", params=dict(target_m0=-2.0, sigma=1.0, b=0.0)),
    analysis=dict(weight_sigma=0.5),
)


def test_smooth_run_artifacts(smooth_run):
    run_dir = smooth_run.run_dir
    for name in (CONFIG_FILE, SCHEMA_FILE, DIAGNOSTICS_FILE, STOP_FILE, REPORT_FILE):
        assert (run_dir / name).is_file()
    assert len(list((run_dir / SNAPSHOT_DIR).glob("snap_*.bin"))) == 5

    assert smooth_run.stop.kind == StopKind.HORIZON_REACHED
    assert smooth_run.stop.steps == 20
    assert smooth_run.stop.t_stop == 0.2


def test_smooth_run_report(smooth_run, smooth_config):
    report = smooth_run.report
    assert report["schema_version"] == 1
    assert report["config_hash"] == smooth_config.config_hash
    assert report["stop"]["kind"] == "horizon_reached"
    assert report["n_records"] == 21
    assert report["n_snapshots"] == 5
    assert set(report["versions"]) == {"chkplab", "torch", "numpy", "scipy"}

    assert report["energy"]["relative_drift"] < 1e-8
    assert report["blowup"]["I_mismatch"] < 1e-12
    assert report["blowup"]["signature"]["ratio"] < 2
    assert not report["blowup"]["signature"]["breaking"]
    assert report["riccati"]["verdict"] == Verdict.NOT_APPLICABLE
    assert report["riccati"]["t_star"] is None

    (characteristic,) = report["characteristics"]
    assert "error" not in characteristic
    assert characteristic["comparison"]["holds"]

    weighted = report["weighted"]
    assert "error" not in weighted
    assert len(weighted["series"]) == 5
    assert weighted["M1_0"] < 0
    assert weighted["bound"]["c3"] > 0
    assert weighted["verdict"] in {v.value for v in Verdict}

    liouville = report["liouville"]
    assert liouville["condition"]["verdict"] == "fails"
    assert liouville["vanish"]["n_windows"] == 0
    assert liouville["p"]["verdict"] == "descriptive"


def test_recorded_slope_within_gradient(smooth_run):
    records = read_diagnostics(smooth_run.run_dir / DIAGNOSTICS_FILE)
    assert len(records) == 21
    assert all(-r.min_ux <= r.grad_inf * (1 + 1e-12) for r in records)


def test_verify_is_idempotent(smooth_run):
    report_path = smooth_run.run_dir / REPORT_FILE
    first = report_path.read_bytes()
    assert verify(smooth_run.run_dir) == smooth_run.report
    assert report_path.read_bytes() == first


def test_runs_are_reproducible(tmp_path, smooth_config, smooth_run):
    again = simulate(smooth_config, tmp_path / "again")
    for name in (DIAGNOSTICS_FILE, REPORT_FILE):
        assert (again.run_dir / name).read_bytes() == (smooth_run.run_dir / name).read_bytes()
    for path in sorted((smooth_run.run_dir / SNAPSHOT_DIR).iterdir()):
        assert (again.run_dir / SNAPSHOT_DIR / path.name).read_bytes() == path.read_bytes()


def test_rerun_replaces_snapshots(tmp_path):
    sparse = RunConfig.from_dict({**SMOOTH, "stepper": dict(dt0=0.01, t_end=0.2, snapshot_every=10)})
    simulate(RunConfig.from_dict(SMOOTH), tmp_path)
    outcome = simulate(sparse, tmp_path)
    assert len(list((tmp_path / SNAPSHOT_DIR).glob("snap_*.json"))) == 3
    assert outcome.report["n_snapshots"] == 3


def test_output_directory_is_required(smooth_config):
    with pytest.raises(ValueError):
        simulate(smooth_config)


def test_verify_missing_artifacts(tmp_path, smooth_run):
    with pytest.raises(RunDirectoryError):
        verify(tmp_path / "nowhere")

    partial = tmp_path / "partial"
    partial.mkdir()
    (partial / CONFIG_FILE).write_bytes((smooth_run.run_dir / CONFIG_FILE).read_bytes())
    with pytest.raises(RunDirectoryError):
        verify(partial)
    assert not (partial / REPORT_FILE).exists()


@pytest.mark.slow
def test_steep_front_breaks(tmp_path):
    outcome = simulate(RunConfig.from_dict(BREAKING), tmp_path)
    report = outcome.report
    assert outcome.stop.kind == StopKind.GRADIENT_THRESHOLD

    records = read_diagnostics(tmp_path / DIAGNOSTICS_FILE)
    assert min(r.min_ux for r in records) <= -20.0
    assert all(-r.min_ux <= r.grad_inf * (1 + 1e-12) for r in records)

    # sup|R| grows with the front, so the hypothesis m0 < -sqrt(K/gamma) fails
    riccati = report["riccati"]
    assert riccati["m0"] == pytest.approx(-2.0, rel=1e-9)
    assert riccati["K_initial"] < riccati["K_emp"]
    assert riccati["K_emp"] > 4.0
    assert riccati["threshold"] == pytest.approx(-math.sqrt(riccati["K_emp"]))
    assert riccati["m0"] > riccati["threshold"]
    assert riccati["t_star"] is None
    assert riccati["verdict"] == Verdict.NOT_APPLICABLE
    assert riccati["t_grad"] == outcome.stop.t_stop
    assert riccati["t_cross"] is not None
    assert riccati["t_cross"] <= riccati["t_grad"]

    weighted = report["weighted"]
    assert weighted["M1_0"] == pytest.approx(-2.0, rel=1e-6)
    assert weighted["D_max"] > 2.0
    assert weighted["C3_emp"] == pytest.approx(math.sqrt(weighted["D_max"]))
    assert weighted["T0_emp"] is None
    assert weighted["verdict"] == Verdict.NOT_APPLICABLE
    assert weighted["verdict_user"] == Verdict.NOT_APPLICABLE

    assert report["blowup"]["signature"]["ratio"] >= 10
    assert report["blowup"]["signature"]["breaking"]
    assert report["liouville"]["condition"]["verdict"] == "holds_strict"
    assert report["liouville"]["q_min"] >= -1e-12
