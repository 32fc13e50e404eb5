"""C^r transition eta used to blend barriers in and out of the buffer.

On [0, 1/lam] eta is the smoothstep polynomial

    (lam t)^(r+1) * sum_j C(r+j, j) C(2r+1, r-j) (-lam t)^j

and it is held at 0 before and at 1 after. Derivatives 1..r vanish at both
knots, so eta is r-times continuously differentiable everywhere.
"""
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from numpy.polynomial import polynomial as poly

from cbf_errors import InvalidArgumentError

MAX_ORDER = 8


@dataclass(frozen=True)
class HomotopyParams:
    r: int = 2
    lam: float = 1.0

    def __post_init__(self):
        if int(self.r) != self.r or not 1 <= self.r <= MAX_ORDER:
            raise InvalidArgumentError(f"smoothness order r must be in 1..{MAX_ORDER}, got {self.r}")
        if not (math.isfinite(self.lam) and self.lam >= 1.0):
            raise InvalidArgumentError(f"compression lam must be >= 1, got {self.lam}")


@lru_cache(maxsize=None)
def _coefficients(r, order):
    """Ascending coefficients of d^order/dy^order of the smoothstep in y = lam t"""
    # integer arithmetic first, floats only at the end
    exact = [0] * (2 * r + 2)
    for j in range(r + 1):
        exact[r + 1 + j] = math.comb(r + j, j) * math.comb(2 * r + 1, r - j) * (-1) ** j
    coeffs = np.array(exact, dtype=float)
    if order:
        coeffs = poly.polyder(coeffs, order)
    return coeffs


def eta(params, t):
    """Value of the transition at t, clamped to [0, 1]"""
    return eta_derivatives(params, t, 0)


def eta_derivatives(params, t, order):
    """order-th derivative of eta at t (order 0 is eta itself)"""
    if int(order) != order or order < 0:
        raise InvalidArgumentError(f"derivative order must be a non-negative integer, got {order}")
    if order > params.r:
        raise InvalidArgumentError(
            f"derivative order {order} exceeds smoothness r={params.r}; it is not continuous")
    if not math.isfinite(t):
        raise InvalidArgumentError(f"eta needs a finite argument, got {t}")

    y = params.lam * t
    if y <= 0.0 or y >= 1.0:
        if order:
            return 0.0
        return 0.0 if y <= 0.0 else 1.0

    value = float(poly.polyval(y, _coefficients(params.r, order))) * params.lam ** order
    if order == 0:
        value = min(1.0, max(0.0, value))
    return value
