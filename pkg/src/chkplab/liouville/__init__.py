from chkplab.liouville.probe import (
    PFunctional,
    PVerdict,
    VanishReport,
    Window,
    p_functional,
    p_profile,
    q_functional,
    q_zero_consistent,
    vanish_scan,
)

__all__ = [
    "PFunctional",
    "PVerdict",
    "VanishReport",
    "Window",
    "p_functional",
    "p_profile",
    "q_functional",
    "q_zero_consistent",
    "vanish_scan",
]
