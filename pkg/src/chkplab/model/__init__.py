from chkplab.model.chkp import ModelParams, dispersion_omega, energy_rate, flux, residual_R, rhs
from chkplab.model.conditions import LiouvilleVerdict, check_growth, check_liouville_condition
from chkplab.model.nonlinearity import Growth, Nonlinearity, NonlinearityPreset

__all__ = [
    "Growth",
    "LiouvilleVerdict",
    "ModelParams",
    "Nonlinearity",
    "NonlinearityPreset",
    "check_growth",
    "check_liouville_condition",
    "dispersion_omega",
    "energy_rate",
    "flux",
    "residual_R",
    "rhs",
]
