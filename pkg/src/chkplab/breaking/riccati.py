"""Closed-form Riccati comparison data: the guaranteed breaking times and the lower envelope.

All formulas use the exponent 2 sqrt(K gamma) t, the only choice consistent with
d psi / dt = gamma psi^2 - K (checked against numeric integration in the tests).
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Optional

from scipy.integrate import solve_ivp

pylogger = logging.getLogger(__name__)

DIVERGENCE_LEVEL = 1e6


@dataclass(frozen=True)
class RiccatiBound:
    gamma: float
    K: float
    m0: float
    # None when m0 >= -sqrt(K / gamma): no breaking is guaranteed
    t_star: Optional[float]

    @property
    def threshold(self) -> float:
        return -math.sqrt(self.K / self.gamma)

    @property
    def applicable(self) -> bool:
        return self.t_star is not None

    def to_dict(self):
        return dict(gamma=self.gamma, K=self.K, m0=self.m0, t_star=self.t_star, threshold=self.threshold)


def _check_constants(K: float, gamma: float):
    if not gamma > 0:
        raise ValueError(f"gamma must be positive, got {gamma}")
    if not K >= 0:
        raise ValueError(f"K must be non-negative, got {K}")


def t_star(m0: float, K: float, gamma: float) -> RiccatiBound:
    """Time by which a slope starting at m0 and obeying Dw/Dt <= -gamma w^2 + K must reach -inf.

    Equal to ln((sqrt(gamma) m0 - sqrt(K)) / (sqrt(gamma) m0 + sqrt(K))) / (2 sqrt(K gamma)),
    and to 1 / (gamma |m0|) for K = 0.
    """
    _check_constants(K, gamma)
    a = math.sqrt(K / gamma)
    if not m0 < -a:
        pylogger.debug(f"No guaranteed breaking: m0={m0} >= {-a}")
        return RiccatiBound(gamma=gamma, K=K, m0=m0, t_star=None)

    psi0 = -m0
    if K == 0:
        value = 1.0 / (gamma * psi0)
    else:
        value = math.log1p(2.0 * a / (psi0 - a)) / (2.0 * math.sqrt(K * gamma))
    return RiccatiBound(gamma=gamma, K=K, m0=m0, t_star=value)


def riccati_lower_envelope(psi0: float, K: float, gamma: float, t: float) -> float:
    """Solution at time t of d psi / dt = gamma psi^2 - K, psi(0) = psi0 > sqrt(K / gamma).

    Any psi with d psi / dt >= gamma psi^2 - K stays above it.

    Raises:
        OverflowError: if t is at or past the divergence time.
    """
    _check_constants(K, gamma)
    a = math.sqrt(K / gamma)
    if not psi0 > a:
        raise ValueError(f"psi0 must exceed sqrt(K/gamma)={a}, got {psi0}")
    if t == 0:
        return psi0

    blowup = t_star(-psi0, K, gamma).t_star
    if t >= blowup:
        raise OverflowError(f"The envelope diverges at t*={blowup:.12g}, requested t={t}")

    if K == 0:
        return psi0 / (1.0 - gamma * psi0 * t)
    c = 2.0 * math.sqrt(K * gamma)
    tau = c * (t - blowup)
    return a * (1.0 + math.exp(tau)) / -math.expm1(tau)


def riccati_blowup_time(
    psi0: float, K: float, gamma: float, level: float = DIVERGENCE_LEVEL, t_max: float = 100.0
) -> Optional[float]:
    """First time the numeric solution of d psi / dt = gamma psi^2 - K exceeds `level`.

    Integrated with scipy's DOP853 and a terminal event; None if the level is not reached before t_max.
    """
    _check_constants(K, gamma)

    def crossing(t, y):
        return y[0] - level

    crossing.terminal = True
    crossing.direction = 1

    solution = solve_ivp(
        lambda t, y: [gamma * y[0] ** 2 - K],
        (0.0, t_max),
        [psi0],
        method="DOP853",
        rtol=1e-12,
        atol=1e-12,
        events=crossing,
    )
    events = solution.t_events[0]
    return float(events[0]) if len(events) else None


def t0_bound(m1_0: float, c3: float, gamma: float) -> Optional[float]:
    """Breaking-time bound for the weighted slope M1 with dM1/dt <= -(gamma/2) M1^2 + C3^2.

    Finite iff M1(0) < -sqrt(2 / gamma) C3; equals
    ln((M1(0) - sqrt(2/gamma) C3) / (M1(0) + sqrt(2/gamma) C3)) / (sqrt(2 gamma) C3),
    and 2 / (gamma |M1(0)|) when C3 = 0.
    """
    if not c3 >= 0:
        raise ValueError(f"C3 must be non-negative, got {c3}")
    _check_constants(c3 * c3, gamma)
    threshold = math.sqrt(2.0 / gamma) * c3
    if not m1_0 < -threshold:
        return None
    magnitude = -m1_0
    if c3 == 0:
        return 2.0 / (gamma * magnitude)
    return math.log1p(2.0 * threshold / (magnitude - threshold)) / (math.sqrt(2.0 * gamma) * c3)
