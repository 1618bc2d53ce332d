from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence, Tuple, Union

import torch

from chkplab.types import Scalar, StrEnum

pylogger = logging.getLogger(__name__)

G_ZERO_TOL = 1e-14
DERIVATIVE_RTOL = 1e-6
CHECK_RANGE = (-10.0, 10.0)
CHECK_SAMPLES = 201
FD_STEP = 1e-5


class NonlinearityPreset(StrEnum):
    CLASSICAL = "classical"
    QUADRATIC_PURE = "quadratic_pure"
    CUBIC = "cubic"
    QUARTIC = "quartic"


@dataclass(frozen=True)
class Growth:
    """Constants of |g'(u)| <= c1 |u|^alpha + c2."""

    alpha: float
    c1: float
    c2: float

    def __post_init__(self):
        if min(self.alpha, self.c1, self.c2) < 0:
            raise ValueError(f"Growth constants must be non-negative, got {self}")

    def bound(self, u: torch.Tensor) -> torch.Tensor:
        return self.c1 * u.abs() ** self.alpha + self.c2


def _horner(coefficients: Sequence[float], u: Scalar) -> Scalar:
    # coefficients[i] multiplies u^(i + 1)
    acc = 0.0
    for c in reversed(coefficients):
        acc = (acc + c) * u
    return acc


@dataclass(frozen=True)
class Nonlinearity:
    """The smooth nonlinearity g of the model, with its derivative and optional growth metadata.

    On construction g(0) = 0 is enforced and g' is compared against centered differences of g,
    unless `check=False`.
    """

    name: str
    g: Callable[[Scalar], Scalar]
    g_prime: Callable[[Scalar], Scalar]
    growth: Optional[Growth] = None
    coefficients: Optional[Tuple[float, ...]] = field(default=None, compare=False)
    check: bool = field(default=True, compare=False, repr=False)

    def __post_init__(self):
        if self.check:
            self.validate()

    def validate(self) -> None:
        g0 = float(self.g(torch.zeros((), dtype=torch.float64)))
        if abs(g0) > G_ZERO_TOL:
            raise ValueError(f"Nonlinearity {self.name!r} must satisfy g(0) = 0, got g(0) = {g0:.3e}")

        u = torch.linspace(*CHECK_RANGE, CHECK_SAMPLES, dtype=torch.float64)
        centered = (self.g(u + FD_STEP) - self.g(u - FD_STEP)) / (2 * FD_STEP)
        exact = self.g_prime(u)
        error = (centered - exact).abs() / exact.abs().clamp(min=1.0)
        worst = int(error.argmax())
        if float(error[worst]) > DERIVATIVE_RTOL:
            raise ValueError(
                f"g_prime of {self.name!r} disagrees with finite differences of g at u={float(u[worst]):.4g} "
                f"(relative error {float(error[worst]):.3e})"
            )

    @property
    def is_polynomial(self) -> bool:
        return self.coefficients is not None

    @classmethod
    def polynomial(cls, coefficients: Sequence[float], name: Optional[str] = None) -> Nonlinearity:
        """g(u) = sum_k c_k u^k for k = 1..d, with `coefficients = (c_1, ..., c_d)`.

        Growth metadata follows from |u|^(k-1) <= |u|^(d-1) + 1 for 1 <= k-1 < d-1:
        alpha = d - 1, c1 = sum_{k>=2} k |c_k|, c2 = |c_1| + sum_{2<=k<d} k |c_k|.
        """
        coefficients = tuple(float(c) for c in coefficients)
        while coefficients and coefficients[-1] == 0.0:
            coefficients = coefficients[:-1]
        if not coefficients:
            raise ValueError("A polynomial nonlinearity needs at least one nonzero coefficient")

        degree = len(coefficients)
        derivative = tuple((k + 2) * c for k, c in enumerate(coefficients[1:]))
        linear = coefficients[0]

        def g(u: Scalar) -> Scalar:
            return _horner(coefficients, u)

        def g_prime(u: Scalar) -> Scalar:
            return linear + _horner(derivative, u) if derivative else linear + 0.0 * u

        if degree == 1:
            growth = Growth(alpha=0.0, c1=0.0, c2=abs(linear))
        else:
            growth = Growth(
                alpha=float(degree - 1),
                c1=sum(k * abs(c) for k, c in enumerate(coefficients, start=1) if k >= 2),
                c2=abs(linear) + sum(k * abs(c) for k, c in enumerate(coefficients, start=1) if 2 <= k < degree),
            )

        if name is None:
            name = "poly(" + ", ".join(f"{c:g}" for c in coefficients) + ")"
        return cls(name=name, g=g, g_prime=g_prime, growth=growth, coefficients=coefficients)

    @classmethod
    def classical(cls, kappa: float = 1.0) -> Nonlinearity:
        """g(u) = 2 kappa u + 3 u^2, the nonlinearity of the shallow-water CH-KP equation."""
        return cls.polynomial((2.0 * kappa, 3.0), name=NonlinearityPreset.CLASSICAL)

    @classmethod
    def from_preset(cls, preset: Union[str, NonlinearityPreset], kappa: float = 1.0) -> Nonlinearity:
        try:
            preset = NonlinearityPreset(preset)
        except ValueError:
            raise ValueError(
                f"Unknown nonlinearity preset {preset!r}, expected one of {[p.value for p in NonlinearityPreset]}"
            ) from None

        if preset == NonlinearityPreset.CLASSICAL:
            return cls.classical(kappa)
        if preset == NonlinearityPreset.QUADRATIC_PURE:
            return cls.polynomial((0.0, 3.0), name=preset)
        if preset == NonlinearityPreset.CUBIC:
            return cls.polynomial((0.0, 0.0, 1.0), name=preset)
        return cls.polynomial((0.0, 0.0, 0.0, 1.0), name=preset)
