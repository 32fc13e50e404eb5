"""Soft minimum / soft maximum with exact first and second derivatives.

    softmin_k(z) = -(1/k) log sum exp(-k z_i)
    softmax_k(z) =  (1/k) log sum exp( k z_i) - (log N)/k

Values come from scipy.special.logsumexp and the chain-rule weights from
scipy.special.softmax, both of which shift by the extreme argument.
"""
import math
from dataclasses import dataclass

import numpy as np
from scipy.special import logsumexp, softmax as softmax_weights

from cbf_errors import InvalidArgumentError
from jets import Jet2


@dataclass(frozen=True)
class SoftParams:
    kappa: float
    n_args: int

    def __post_init__(self):
        if not (math.isfinite(self.kappa) and self.kappa > 0):
            raise InvalidArgumentError(f"kappa must be positive, got {self.kappa}")
        if int(self.n_args) != self.n_args or self.n_args < 1:
            raise InvalidArgumentError(f"n_args must be a positive integer, got {self.n_args}")


def _check_args(params, z):
    z = np.asarray(z, dtype=float).reshape(-1)
    if z.size == 0:
        raise InvalidArgumentError("soft composition needs at least one argument")
    if z.size != params.n_args:
        raise InvalidArgumentError(f"expected {params.n_args} arguments, got {z.size}")
    if not np.all(np.isfinite(z)):
        raise InvalidArgumentError("soft composition arguments must be finite")
    return z


def _softmin_weights(kappa, z):
    scaled = -kappa * z
    return -float(logsumexp(scaled)) / kappa, softmax_weights(scaled)


def _softmax_weights(kappa, z):
    scaled = kappa * z
    return (float(logsumexp(scaled)) - math.log(z.size)) / kappa, softmax_weights(scaled)


def softmin(params, z):
    """Soft minimum of z, bounded by min(z) - log(N)/kappa <= . <= min(z)"""
    z = _check_args(params, z)
    value, _ = _softmin_weights(params.kappa, z)
    return value


def softmax(params, z):
    """Soft maximum of z, bounded by max(z) - log(N)/kappa <= . <= max(z)"""
    z = _check_args(params, z)
    value, _ = _softmax_weights(params.kappa, z)
    return value


def compose_arrays(kappa, values, grads, hessians, mode):
    """Soft composition of stacked jets.

    Args:
        kappa: sharpness
        values: (N,) argument values
        grads: (N, d) argument gradients
        hessians: (N, d, d) argument Hessians
        mode: "min" or "max"

    Returns:
        (value, grad (d,), hess (d, d))
    """
    values = np.asarray(values, dtype=float)
    if mode == "min":
        value, weights = _softmin_weights(kappa, values)
        curvature = -kappa
    elif mode == "max":
        value, weights = _softmax_weights(kappa, values)
        curvature = kappa
    else:
        raise InvalidArgumentError(f"unknown composition mode {mode!r}")

    grad = weights @ grads
    weighted = grads * weights[:, None]
    # weight covariance term of the log-sum-exp Hessian
    covariance = grads.T @ weighted - np.outer(grad, grad)
    hess = np.einsum("i,ijk->jk", weights, hessians) + curvature * covariance
    return value, grad, 0.5 * (hess + hess.T)


def _compose_jets(params, jets, mode):
    jets = list(jets)
    if len(jets) != params.n_args:
        raise InvalidArgumentError(f"expected {params.n_args} jets, got {len(jets)}")
    dims = {jet.grad.size for jet in jets}
    if len(dims) != 1:
        raise InvalidArgumentError(f"jets disagree on dimension: {sorted(dims)}")
    if len(jets) == 1:
        return jets[0]
    values = _check_args(params, [jet.value for jet in jets])
    grads = np.stack([jet.grad for jet in jets])
    hessians = np.stack([jet.hess for jet in jets])
    value, grad, hess = compose_arrays(params.kappa, values, grads, hessians, mode)
    return Jet2(value, grad, hess)


def softmin_jet(params, jets):
    """Soft minimum of argument jets, propagated through the chain rule"""
    return _compose_jets(params, jets, "min")


def softmax_jet(params, jets):
    """Soft maximum of argument jets, propagated through the chain rule"""
    return _compose_jets(params, jets, "max")
