from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Optional

import torch

from chkplab.model.chkp import ModelParams
from chkplab.types import StrEnum

pylogger = logging.getLogger(__name__)

ZERO_TOL = 1e-14
GROWTH_RTOL = 1e-12


class LiouvilleVerdict(StrEnum):
    HOLDS_STRICT = "holds_strict"
    HOLDS_WEAK = "holds_weak"
    FAILS = "fails"


@dataclass(frozen=True)
class LiouvilleCheck:
    verdict: LiouvilleVerdict
    min_margin: float
    # sample where g(u) - gamma u^2 is smallest, reported when the condition fails
    at: Optional[float] = None

    def to_dict(self):
        return dict(verdict=str(self.verdict), min_margin=self.min_margin, at=self.at)


@dataclass(frozen=True)
class GrowthCheck:
    holds: bool
    max_ratio: float
    worst_u: float

    def to_dict(self):
        return dict(holds=self.holds, max_ratio=self.max_ratio, worst_u=self.worst_u)


def _samples(umin: float, umax: float, n_samples: int) -> torch.Tensor:
    if not umin < umax:
        raise ValueError(f"Empty sampling range [{umin}, {umax}]")
    if n_samples < 3:
        raise ValueError(f"At least 3 samples are needed, got {n_samples}")
    u = torch.linspace(umin, umax, n_samples, dtype=torch.float64)
    return u


def check_liouville_condition(
    p: ModelParams, umin: float = -10.0, umax: float = 10.0, n_samples: int = 2001
) -> LiouvilleCheck:
    """Sample g(u) >= gamma u^2 on [umin, umax], including u = 0.

    Strict means g(u) - gamma u^2 > 0 at every nonzero sample and vanishes (to 1e-14) at 0.
    """
    if not umin < 0 < umax:
        raise ValueError(f"The sampling range must straddle zero, got [{umin}, {umax}]")
    u = torch.cat([_samples(umin, umax, n_samples), torch.zeros(1, dtype=torch.float64)])
    margin = p.nonlinearity.g(u) - p.gamma * u * u

    at_zero = float(margin[-1])
    worst = int(margin.argmin())
    min_margin = float(margin[worst])
    scale = max(1.0, float(p.nonlinearity.g(u).abs().max()))

    nonzero = u != 0
    if abs(at_zero) <= ZERO_TOL and bool((margin[nonzero] > 0).all()):
        verdict = LiouvilleVerdict.HOLDS_STRICT
    elif abs(at_zero) <= ZERO_TOL and min_margin >= -ZERO_TOL * scale:
        verdict = LiouvilleVerdict.HOLDS_WEAK
    else:
        verdict = LiouvilleVerdict.FAILS

    check = LiouvilleCheck(
        verdict=verdict,
        min_margin=min_margin,
        at=float(u[worst]) if verdict == LiouvilleVerdict.FAILS else None,
    )
    pylogger.debug(f"Liouville condition for {p.nonlinearity.name}: {check}")
    return check


def check_growth(p: ModelParams, umin: float = -10.0, umax: float = 10.0, n_samples: int = 2001) -> GrowthCheck:
    """Sample |g'(u)| <= c1 |u|^alpha + c2 and report the largest ratio of the two sides."""
    growth = p.nonlinearity.growth
    if growth is None:
        raise ValueError(f"Nonlinearity {p.nonlinearity.name!r} carries no growth metadata")

    u = _samples(umin, umax, n_samples)
    lhs = p.nonlinearity.g_prime(u).abs()
    rhs = growth.bound(u)

    ratio = torch.where(rhs > 0, lhs / torch.where(rhs > 0, rhs, torch.ones_like(rhs)), torch.zeros_like(lhs))
    ratio = torch.where((rhs == 0) & (lhs > 0), torch.full_like(lhs, math.inf), ratio)
    worst = int(ratio.argmax())
    max_ratio = float(ratio[worst])

    return GrowthCheck(holds=max_ratio <= 1.0 + GROWTH_RTOL, max_ratio=max_ratio, worst_u=float(u[worst]))
