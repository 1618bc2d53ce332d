"""Command line interface: `chkplab run | verify | plot | presets`."""
from __future__ import annotations

import logging
import sys
from typing import Optional, Sequence

import fire

from chkplab.model.chkp import dispersion_omega
from chkplab.model.nonlinearity import NonlinearityPreset
from chkplab.run.config import RunConfig
from chkplab.run.initial_data import INITIAL_DATA_DEFAULTS
from chkplab.run.pipeline import simulate
from chkplab.run.pipeline import verify as verify_run
from chkplab.run.plot import plot_run
from chkplab.serialize.io_utils import dumps_json
from chkplab.utils import get_env

pylogger = logging.getLogger(__name__)

LOG_LEVEL_ENV = "CHKP_LOG_LEVEL"


class ChkpLab:
    """Simulate the CH-KP equation and check runs against the wave-breaking and Liouville bounds."""

    def run(self, config: str, out: Optional[str] = None) -> None:
        """Run the simulation described by the JSON file `config` into the directory `out`."""
        outcome = simulate(RunConfig.from_file(config), out)
        pylogger.info(f"{outcome.run_dir}: {outcome.stop.kind} at t={outcome.stop.t_stop:.6g}")

    def verify(self, run: str) -> None:
        """Recompute `report.json` of the run directory `run`."""
        report = verify_run(run)
        pylogger.info(f"{run}: riccati verdict {report['riccati']['verdict']}")

    def plot(self, run: str, out: str) -> None:
        """Write the SVG charts of the verified run directory `run` to `out`."""
        plot_run(run, out)

    def presets(self) -> None:
        """Print the initial-data and nonlinearity presets with their defaults."""
        listing = dict(
            initial_data={str(preset): defaults for preset, defaults in INITIAL_DATA_DEFAULTS.items()},
            nonlinearity=[str(preset) for preset in NonlinearityPreset],
            # linear frequency of the (1, 1) mode for kappa = 1
            dispersion_omega_1_1=dispersion_omega(1.0, 1.0, 1.0),
        )
        print(dumps_json(listing), end="")


def main(argv: Optional[Sequence[str]] = None) -> int:
    logging.basicConfig(
        level=get_env(LOG_LEVEL_ENV, default="INFO").upper(),
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )
    command = list(argv) if argv is not None else None
    try:
        fire.Fire(ChkpLab, command=command, name="chkplab")
    except fire.core.FireExit as exc:
        return int(exc.code or 0)
    except (ValueError, OSError) as exc:
        pylogger.error(f"{type(exc).__name__}: {exc}")
        return 1
    return 0


def entrypoint() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entrypoint()
