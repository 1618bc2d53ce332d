from __future__ import annotations

import io
import logging
from pathlib import Path
from typing import Any, Dict, Optional, Union

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from chkplab.breaking.riccati import riccati_lower_envelope  # noqa: E402
from chkplab.errors import RunDirectoryError  # noqa: E402
from chkplab.measure.diagnostics import read_diagnostics, records_frame  # noqa: E402
from chkplab.run.pipeline import DIAGNOSTICS_FILE, REPORT_FILE  # noqa: E402
from chkplab.serialize.io_utils import atomic_write_bytes, load_json  # noqa: E402

pylogger = logging.getLogger(__name__)

ENVELOPE_SAMPLES = 200
# the envelopes are drawn up to this fraction of their divergence time
ENVELOPE_CUTOFF = 0.98
SVG_HASH_SALT = "chkplab"


def _envelope(psi0: float, K: float, gamma: float, t_end: float, t_blowup: Optional[float]) -> np.ndarray:
    """Samples (t, -psi(t)) of the Riccati comparison solution, stopped short of its divergence."""
    horizon = t_end if t_blowup is None else min(t_end, ENVELOPE_CUTOFF * t_blowup)
    ts = np.linspace(0.0, horizon, ENVELOPE_SAMPLES)
    return np.array([[t, -riccati_lower_envelope(psi0, K, gamma, float(t))] for t in ts])


def _diagnostics_panel(ax, frame):
    for column in ("conserved", "grad_inf", "I"):
        values = frame[column].to_numpy()
        mask = np.isfinite(values) & (values > 0)
        ax.semilogy(frame["t"].to_numpy()[mask], values[mask], label=column)
    ax.set_xlabel("t")
    ax.set_title("diagnostics")
    ax.legend()


def _weighted_panel(ax, weighted: Optional[Dict[str, Any]], gamma: float):
    ax.set_title("weighted slope M1")
    ax.set_xlabel("t")
    if not weighted or not weighted.get("series"):
        ax.text(0.5, 0.5, "no weighted analysis", ha="center", va="center", transform=ax.transAxes)
        return
    series = np.asarray(weighted["series"], dtype=np.float64)
    ax.plot(series[:, 0], series[:, 1], label="M1")

    # dM1/dt <= -(gamma/2) M1^2 + C3^2 is the Riccati comparison with gamma/2 and K = C3^2
    if weighted.get("T0_emp") is not None:
        env = _envelope(-weighted["M1_0"], weighted["C3_emp"] ** 2, 0.5 * gamma, series[-1, 0], weighted["T0_emp"])
        ax.plot(env[:, 0], env[:, 1], "--", label="Riccati envelope")
    ax.legend()


def _slope_panel(ax, frame, riccati: Dict[str, Any], gamma: float):
    t = frame["t"].to_numpy()
    ax.plot(t, frame["min_ux"].to_numpy(), label="min u_x")
    if riccati.get("t_star") is not None:
        env = _envelope(-riccati["m0"], riccati["K_emp"], gamma, float(t[-1]), riccati["t_star"])
        ax.plot(env[:, 0], env[:, 1], "--", label="breaking envelope")
    ax.set_xlabel("t")
    ax.set_title("minimal slope")
    ax.legend()


def plot_run(run_dir: Union[str, Path], out_file: Union[str, Path]) -> Path:
    """Render the three line charts of a verified run as one SVG.

    Nothing is written unless the run directory holds diagnostics and a report.

    Raises:
        RunDirectoryError: if the run directory is missing, empty or not verified.
    """
    run_dir, out_file = Path(run_dir), Path(out_file)
    for name in (DIAGNOSTICS_FILE, REPORT_FILE):
        if not (run_dir / name).is_file():
            raise RunDirectoryError(f"Cannot plot {run_dir}: {name} is missing")

    records = read_diagnostics(run_dir / DIAGNOSTICS_FILE)
    if not records:
        raise RunDirectoryError(f"Cannot plot {run_dir}: no diagnostics records")
    frame = records_frame(records)
    report = load_json(run_dir / REPORT_FILE)
    gamma = report["gamma"]

    # a fixed salt keeps the generated SVG ids stable across calls
    with plt.rc_context({"svg.hashsalt": SVG_HASH_SALT}):
        fig, axes = plt.subplots(3, 1, figsize=(7, 11))
        try:
            _diagnostics_panel(axes[0], frame)
            _weighted_panel(axes[1], report.get("weighted"), gamma)
            _slope_panel(axes[2], frame, report["riccati"], gamma)
            fig.tight_layout()

            buffer = io.BytesIO()
            fig.savefig(buffer, format="svg", metadata={"Date": None})
        finally:
            plt.close(fig)

    out_file.parent.mkdir(parents=True, exist_ok=True)
    atomic_write_bytes(out_file, buffer.getvalue())
    pylogger.info(f"Plot written to {out_file}")
    return out_file
