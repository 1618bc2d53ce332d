from chkplab.breaking.characteristics import (
    CharacteristicTrace,
    empirical_K,
    riccati_comparison,
    track,
    verify_riccati_ode,
)
from chkplab.breaking.riccati import (
    RiccatiBound,
    riccati_blowup_time,
    riccati_lower_envelope,
    t0_bound,
    t_star,
)
from chkplab.breaking.weighted import WeightSpec, c3_and_t0, empirical_D, weighted_M1

__all__ = [
    "CharacteristicTrace",
    "RiccatiBound",
    "WeightSpec",
    "c3_and_t0",
    "empirical_D",
    "empirical_K",
    "riccati_blowup_time",
    "riccati_comparison",
    "riccati_lower_envelope",
    "t0_bound",
    "t_star",
    "track",
    "verify_riccati_ode",
    "weighted_M1",
]
