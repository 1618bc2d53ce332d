from chkplab.spectral.field import SpectralField
from chkplab.spectral.functional import (
    dealias,
    ddx,
    ddy,
    eval_at,
    fixed_order_sum,
    green,
    green_dx,
    inner,
    inv_ddx,
    kp_nonlocal,
    multiply,
    norm_hs,
    norm_xs,
    project_xmean,
)
from chkplab.spectral.grid import GridSpec
from chkplab.spectral.sampling import random_band_limited, random_corpus

__all__ = [
    "GridSpec",
    "SpectralField",
    "ddx",
    "ddy",
    "dealias",
    "eval_at",
    "fixed_order_sum",
    "green",
    "green_dx",
    "inner",
    "inv_ddx",
    "kp_nonlocal",
    "multiply",
    "norm_hs",
    "norm_xs",
    "project_xmean",
    "random_band_limited",
    "random_corpus",
]
