"""Second-order jets of scalar fields over (state, time).

A Jet2 stores the value, the dense gradient and the dense symmetric Hessian
of a scalar field with respect to the stacked vector (x_1, ..., x_n, t).
The time coordinate is always the last one.
"""
from dataclasses import dataclass

import numpy as np

from cbf_errors import InvalidArgumentError


@dataclass(frozen=True)
class Jet2:
    value: float
    grad: np.ndarray
    hess: np.ndarray

    def __post_init__(self):
        grad = np.asarray(self.grad, dtype=float)
        hess = np.asarray(self.hess, dtype=float)
        if grad.ndim != 1 or hess.shape != (grad.size, grad.size):
            raise InvalidArgumentError(
                f"jet shapes do not match: grad {grad.shape}, hess {hess.shape}")
        object.__setattr__(self, "value", float(self.value))
        object.__setattr__(self, "grad", grad)
        object.__setattr__(self, "hess", hess)

    @classmethod
    def constant(cls, value, state_dim):
        """Jet of a field that does not depend on x or t"""
        size = state_dim + 1
        return cls(value, np.zeros(size), np.zeros((size, size)))

    @classmethod
    def from_position(cls, value, grad_q, hess_q, state_dim):
        """Embed a time-invariant jet over the leading position coordinates

        Args:
            value: field value
            grad_q: gradient over the first d state coordinates
            hess_q: Hessian over the first d state coordinates
            state_dim: n, the full state dimension
        """
        grad_q = np.asarray(grad_q, dtype=float)
        d = grad_q.size
        if d > state_dim:
            raise InvalidArgumentError(f"position dimension {d} exceeds state dimension {state_dim}")
        grad = np.zeros(state_dim + 1)
        hess = np.zeros((state_dim + 1, state_dim + 1))
        grad[:d] = grad_q
        hess[:d, :d] = hess_q
        return cls(value, grad, hess)

    @property
    def state_dim(self):
        return self.grad.size - 1

    @property
    def grad_x(self):
        return self.grad[:-1]

    @property
    def dt(self):
        return self.grad[-1]

    @property
    def hess_xx(self):
        return self.hess[:-1, :-1]

    @property
    def dxdt(self):
        """Mixed derivative, i.e. the gradient in x of dh/dt"""
        return self.hess[:-1, -1]

    @property
    def dtt(self):
        return self.hess[-1, -1]
