"""Higher-order CBF cascade and the closed-form single-constraint QP.

    psi_0 = h
    psi_1 = dh/dt + L_f h + alpha_1(h)
    constraint:  dpsi_{r-1}/dt + L_f psi_{r-1} + L_g psi_{r-1} u + alpha_r(psi_{r-1}) >= 0

With a single affine constraint a.u + b >= 0 the QP min ||u - u_d||^2 is a
half-space projection, solved exactly.
"""
import enum
import logging
from dataclasses import dataclass

import numpy as np

from cbf_errors import InfeasibleQPError, InvalidArgumentError, NumericalError

logger = logging.getLogger("SafetyFilter")

EPS_A = 1e-10


@dataclass(frozen=True)
class ClassKLinear:
    """Extended class-K function alpha(s) = gain * s"""
    gain: float

    def __post_init__(self):
        if not self.gain > 0:
            raise InvalidArgumentError(f"class-K gain must be positive, got {self.gain}")

    def __call__(self, s):
        return self.gain * s

    def derivative(self, s=0.0):
        return self.gain


@dataclass(frozen=True)
class CascadeConfig:
    r: int
    alphas: tuple

    def __post_init__(self):
        if self.r not in (1, 2):
            raise InvalidArgumentError(f"relative degree must be 1 or 2, got {self.r}")
        alphas = tuple(self.alphas)
        if len(alphas) != self.r:
            raise InvalidArgumentError(f"need {self.r} class-K functions, got {len(alphas)}")
        object.__setattr__(self, "alphas", alphas)

    @classmethod
    def linear(cls, r, *gains):
        return cls(r, tuple(ClassKLinear(g) for g in gains[:r]))


@dataclass(frozen=True)
class ConstraintRow:
    """a.u + b >= 0"""
    a: np.ndarray
    b: float

    def residual(self, u):
        return float(self.a @ np.asarray(u, dtype=float) + self.b)


@dataclass(frozen=True)
class Psi1:
    value: float
    grad_x: np.ndarray
    dt: float


class QPStatus(str, enum.Enum):
    INACTIVE = "inactive"
    ACTIVE = "active"
    INFEASIBLE = "infeasible"


def _check_finite(name, fields, **values):
    for key, value in values.items():
        if not np.all(np.isfinite(value)):
            diagnostics = {k: np.asarray(v).tolist() for k, v in values.items()}
            diagnostics["f"] = np.asarray(fields.f).tolist()
            raise NumericalError(f"non-finite {key} while building {name}", diagnostics)


def psi1(h_jet, fields, alpha1):
    """psi_1 together with its state gradient and time derivative"""
    f = np.asarray(fields.f, dtype=float)
    dfdx = np.asarray(fields.dfdx, dtype=float)
    slope = alpha1.derivative(h_jet.value)

    value = h_jet.dt + h_jet.grad_x @ f + alpha1(h_jet.value)
    grad_x = h_jet.dxdt + h_jet.hess_xx @ f + dfdx.T @ h_jet.grad_x + slope * h_jet.grad_x
    dt = h_jet.dtt + h_jet.dxdt @ f + slope * h_jet.dt
    _check_finite("psi1", fields, psi1=value, grad_psi1=grad_x, dpsi1_dt=dt)
    return Psi1(float(value), grad_x, float(dt))


def evaluate_cascade(h_jet, fields, config):
    """Constraint row and psi_1 (None when r = 1) in one pass"""
    f = np.asarray(fields.f, dtype=float)
    g = np.asarray(fields.g, dtype=float)
    if config.r == 1:
        alpha = config.alphas[0]
        a = h_jet.grad_x @ g
        b = h_jet.dt + h_jet.grad_x @ f + alpha(h_jet.value)
        _check_finite("constraint row", fields, h=h_jet.value, a=a, b=b)
        return ConstraintRow(a, float(b)), None

    p1 = psi1(h_jet, fields, config.alphas[0])
    a = p1.grad_x @ g
    b = p1.dt + p1.grad_x @ f + config.alphas[1](p1.value)
    _check_finite("constraint row", fields, h=h_jet.value, psi1=p1.value, a=a, b=b)
    return ConstraintRow(a, float(b)), p1


def constraint_row(h_jet, fields, config):
    """The affine safety constraint on u"""
    row, _ = evaluate_cascade(h_jet, fields, config)
    return row


def solve_qp(row, u_d, strict=True, eps_a=EPS_A):
    """argmin ||u - u_d||^2 subject to a.u + b >= 0

    Returns:
        (u, QPStatus). Infeasible rows raise in strict mode; in lenient mode
        u_d is passed through and the step is flagged.
    """
    u_d = np.asarray(u_d, dtype=float)
    a = np.asarray(row.a, dtype=float)
    if not (np.all(np.isfinite(u_d)) and np.all(np.isfinite(a)) and np.isfinite(row.b)):
        raise InvalidArgumentError("solve_qp needs finite inputs")

    slack = float(a @ u_d + row.b)
    if slack >= 0.0:
        return u_d.copy(), QPStatus.INACTIVE

    norm_sq = float(a @ a)
    if norm_sq > eps_a ** 2:
        return u_d - (slack / norm_sq) * a, QPStatus.ACTIVE

    if strict:
        raise InfeasibleQPError(f"safety constraint is unsatisfiable: |a|={norm_sq ** 0.5:.3e}, b={row.b:.6g}",
                                row=row)
    logger.warning(f"约束不可行, 保留期望控制: |a|={norm_sq ** 0.5:.3e}, b={row.b:.6g}")
    return u_d.copy(), QPStatus.INFEASIBLE
