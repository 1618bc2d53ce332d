from chkplab.run.config import RunConfig, schema
from chkplab.run.initial_data import INITIAL_DATA_DEFAULTS, InitialDataPreset, initial_data
from chkplab.run.pipeline import RunOutcome, simulate, verify

__all__ = [
    "INITIAL_DATA_DEFAULTS",
    "InitialDataPreset",
    "RunConfig",
    "RunOutcome",
    "initial_data",
    "schema",
    "simulate",
    "verify",
]
