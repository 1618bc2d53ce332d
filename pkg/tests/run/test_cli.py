from __future__ import annotations

import json

from chkplab.cli import main
from chkplab.run.pipeline import REPORT_FILE
from tests.run.conftest import SMOOTH


def test_presets(capsys):
    assert main(["presets"]) == 0
    listing = json.loads(capsys.readouterr().out)
    assert listing["initial_data"]["steep_front"]["target_m0"] == -5.0
    assert "classical" in listing["nonlinearity"]
    assert listing["dispersion_omega_1_1"] > 0


def test_run_verify_plot(tmp_path):
    config = tmp_path / "config.json"
    config.write_text(json.dumps(SMOOTH))
    run_dir = tmp_path / "run"

    assert main(["run", str(config), "--out", str(run_dir)]) == 0
    report = (run_dir / REPORT_FILE).read_bytes()
    assert main(["verify", str(run_dir)]) == 0
    assert (run_dir / REPORT_FILE).read_bytes() == report
    assert main(["plot", str(run_dir), str(tmp_path / "run.svg")]) == 0
    assert (tmp_path / "run.svg").is_file()


def test_failures_exit_nonzero(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"grid": {"nz": 4}}))
    assert main(["run", str(bad), "--out", str(tmp_path / "run")]) != 0
    assert main(["verify", str(tmp_path / "nowhere")]) != 0
    assert main(["plot", str(tmp_path), str(tmp_path / "x.svg")]) != 0
    assert main(["explode"]) != 0
