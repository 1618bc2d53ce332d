from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Dict, Optional

from chkplab.spectral.field import SpectralField
from chkplab.spectral.functional import ddx, ddy, norm_hs

pylogger = logging.getLogger(__name__)


@dataclass(frozen=True)
class InequalityReport:
    """Empirical constants of the three anisotropic sup-norm inequalities, i.e. LHS / RHS without C.

    - ratio_product: ||u||_inf^2 / (||u|| ||u_x|| ||u_y|| ||u_xy||)^(1/2)
    - ratio_cubic: ||u||_inf^3 / (||u|| ||u_x|| ||u_y||_inf)
    - ratio_sum: ||u||_inf / (||u|| + ||u_x|| + ||u_y||_inf)

    L2 norms are unsubscripted. A ratio whose right side vanishes is None.
    """

    ratio_product: Optional[float]
    ratio_cubic: Optional[float]
    ratio_sum: Optional[float]
    skipped: bool = False

    def to_dict(self) -> Dict[str, Optional[float]]:
        return dict(
            ratio_product=self.ratio_product,
            ratio_cubic=self.ratio_cubic,
            ratio_sum=self.ratio_sum,
            skipped=self.skipped,
        )


def _ratio(name: str, lhs: float, rhs: float) -> Optional[float]:
    if rhs == 0.0:
        pylogger.warning(f"Skipping {name}: degenerate right-hand side")
        return None
    return lhs / rhs


def inequality_report(u: SpectralField) -> InequalityReport:
    ux, uy = ddx(u), ddy(u)
    uxy = ddy(ux)

    sup = u.sup()
    if sup == 0.0:
        pylogger.warning("Skipping inequality report: zero field")
        return InequalityReport(None, None, None, skipped=True)

    l2, l2_x, l2_y, l2_xy = (norm_hs(f) for f in (u, ux, uy, uxy))
    uy_sup = uy.sup()

    return InequalityReport(
        ratio_product=_ratio("product inequality", sup**2, math.sqrt(l2 * l2_x * l2_y * l2_xy)),
        ratio_cubic=_ratio("cubic inequality", sup**3, l2 * l2_x * uy_sup),
        ratio_sum=_ratio("sum inequality", sup, l2 + l2_x + uy_sup),
    )
