"""Local barriers from scans and the time-varying soft-maximum composite.

Each detection becomes an ellipse (ellipsoid in 3D) that starts just before
the detected point and reaches past the sensor radius:

    sigma(x) = (chi(x) - c)^T R P R^T (chi(x) - c) - 1
    c = origin + (r_bar + r)/2 * dir,   a = (r_bar - r)/2 + d_s

A local barrier b_k is the soft minimum of its sigmas. In limited-FOV mode the
sector boundary adds its own ellipses, and a ring of discs around the scan
origin closes the apex on the unsensed side. The composite h keeps the N+1
most recent local barriers and blends the newest in while the oldest fades
out.
"""
import logging
import math
from dataclasses import dataclass

import numpy as np

from cbf_errors import InvalidArgumentError, StaleBufferError
from homotopy import HomotopyParams, eta_derivatives
from jets import Jet2
from soft_compose import SoftParams, compose_arrays, softmax_jet

logger = logging.getLogger("BarrierSynthesis")

ORTHONORMAL_TOL = 1e-6
EPOCH_EPS = 1e-9


@dataclass(frozen=True)
class BarrierGeometry:
    d_w: float
    d_s: float
    r_bar: float
    apex_clearance: float = 0.8

    def __post_init__(self):
        if not self.d_w > 0:
            raise InvalidArgumentError(f"semi-minor axis d_w must be positive, got {self.d_w}")
        if not self.d_s >= 0:
            raise InvalidArgumentError(f"safety margin d_s must be non-negative, got {self.d_s}")
        if not self.r_bar > 0:
            raise InvalidArgumentError(f"sensor radius must be positive, got {self.r_bar}")
        if not self.apex_clearance > 0:
            raise InvalidArgumentError(f"apex clearance must be positive, got {self.apex_clearance}")


@dataclass(frozen=True)
class EllipsoidBarrier:
    center: np.ndarray
    rotation: np.ndarray
    inv_sq_axes: np.ndarray

    def __post_init__(self):
        center = np.asarray(self.center, dtype=float)
        rotation = np.asarray(self.rotation, dtype=float)
        inv_sq_axes = np.asarray(self.inv_sq_axes, dtype=float)
        d = center.size
        if rotation.shape != (d, d) or inv_sq_axes.shape != (d,):
            raise InvalidArgumentError("ellipsoid center, rotation and axes disagree on dimension")
        error = np.abs(rotation @ rotation.T - np.eye(d)).max()
        if error > ORTHONORMAL_TOL:
            raise InvalidArgumentError(f"ellipsoid rotation is not orthonormal (error {error:.3e})")
        if np.any(inv_sq_axes <= 0):
            raise InvalidArgumentError("ellipsoid axis lengths must be positive")
        object.__setattr__(self, "center", center)
        object.__setattr__(self, "rotation", rotation)
        object.__setattr__(self, "inv_sq_axes", inv_sq_axes)

    @property
    def semi_major(self):
        return 1.0 / math.sqrt(self.inv_sq_axes[0])

    @property
    def shape(self):
        """R P R^T"""
        return (self.rotation * self.inv_sq_axes) @ self.rotation.T

    def evaluate(self, position):
        """sigma, its gradient and its (constant) Hessian at a position"""
        diff = np.asarray(position, dtype=float) - self.center
        m = self.shape
        md = m @ diff
        return float(diff @ md) - 1.0, 2.0 * md, 2.0 * m


def _ray_frame(direction):
    """Orthonormal frame whose first column is the ray direction"""
    if direction.size == 2:
        c, s = direction
        return np.array([[c, -s], [s, c]])
    azimuth = math.atan2(direction[1], direction[0])
    elevation = math.asin(max(-1.0, min(1.0, direction[2])))
    ca, sa = math.cos(azimuth), math.sin(azimuth)
    ce, se = math.cos(elevation), math.sin(elevation)
    return np.array([[ce * ca, -sa, -se * ca],
                     [ce * sa, ca, -se * sa],
                     [se, 0.0, ce]])


def detection_primitive(origin, direction, detected_range, geom):
    """Ellipse/ellipsoid for one ray that detected something at detected_range"""
    direction = np.asarray(direction, dtype=float)
    direction = direction / np.linalg.norm(direction)
    a = (geom.r_bar - detected_range) / 2.0 + geom.d_s
    center = np.asarray(origin, dtype=float) + (geom.r_bar + detected_range) / 2.0 * direction
    inv_sq_axes = np.full(direction.size, geom.d_w ** -2)
    inv_sq_axes[0] = a ** -2
    return EllipsoidBarrier(center, _ray_frame(direction), inv_sq_axes)


@dataclass(frozen=True)
class LocalBarrier:
    epoch: int
    primitives: tuple
    kappa1: float

    def __post_init__(self):
        primitives = tuple(self.primitives)
        if not primitives:
            raise InvalidArgumentError("a local barrier needs at least one primitive")
        if not self.kappa1 > 0:
            raise InvalidArgumentError(f"kappa1 must be positive, got {self.kappa1}")
        object.__setattr__(self, "primitives", primitives)
        # stacked copies for vectorised evaluation
        object.__setattr__(self, "_centers", np.stack([p.center for p in primitives]))
        object.__setattr__(self, "_shapes", np.stack([p.shape for p in primitives]))

    @property
    def dimension(self):
        return self._centers.shape[1]

    def __len__(self):
        return len(self.primitives)


def apex_seal(origin, heading, fov, clearance):
    """Discs that close the sector apex on the unsensed side.

    Discs of radius clearance/2 sit on the circle of radius clearance around
    the origin, at bearings from the left sector edge round the back to the
    right one. Neighbours are at most one radius apart, so the ring is
    unbroken and meets the edge ellipses; the origin keeps sigma = 3.
    """
    origin = np.asarray(origin, dtype=float)
    if origin.size != 2:
        raise InvalidArgumentError("the apex seal is only defined for planar scans")
    if not 0 < fov < 2.0 * math.pi:
        raise InvalidArgumentError(f"a sector needs 0 < fov < 2*pi, got {fov}")
    radius = clearance / 2.0
    unsensed = 2.0 * math.pi - fov
    count = math.ceil(2.0 * unsensed) + 1
    bearings = heading + fov / 2.0 + unsensed * np.arange(count) / (count - 1)
    inv_sq_axes = np.full(2, radius ** -2)
    return [EllipsoidBarrier(origin + clearance * np.array([math.cos(b), math.sin(b)]), np.eye(2), inv_sq_axes)
            for b in bearings]


def build_local_barrier(scan, fov_samples, geom, kappa1):
    """b_k from one scan (plus the field-of-view boundary in limited-FOV mode)"""
    if scan.ranges.size == 0:
        raise InvalidArgumentError("cannot build a barrier from an empty scan")
    if not math.isclose(scan.r_bar, geom.r_bar):
        raise InvalidArgumentError(f"scan radius {scan.r_bar} differs from geometry radius {geom.r_bar}")

    primitives = [detection_primitive(scan.origin, d, r, geom)
                  for d, r in zip(scan.directions, scan.ranges)]

    if fov_samples is not None:
        skipped = 0
        for point in fov_samples.points:
            offset = point - scan.origin
            rho = float(np.linalg.norm(offset))
            # edge ellipses this close would swallow the vehicle; the seal covers them
            if rho < geom.apex_clearance:
                skipped += 1
                continue
            primitives.append(detection_primitive(scan.origin, offset / rho, min(rho, geom.r_bar), geom))
        seal = apex_seal(scan.origin, scan.heading, scan.fov, geom.apex_clearance)
        primitives.extend(seal)
        logger.debug(f"epoch {scan.epoch}: {len(fov_samples.points) - skipped} boundary primitives, "
                     f"{skipped} inside apex clearance, {len(seal)} seal discs")

    return LocalBarrier(epoch=scan.epoch, primitives=tuple(primitives), kappa1=kappa1)


def eval_local_barrier(b, x):
    """Jet of b_k at state x; only the leading position coordinates matter"""
    x = np.asarray(x, dtype=float)
    d = b.dimension
    if x.size < d:
        raise InvalidArgumentError(f"state of size {x.size} has no {d}D position")
    diff = x[:d] - b._centers
    md = np.einsum("pij,pj->pi", b._shapes, diff)
    sigmas = np.einsum("pi,pi->p", diff, md) - 1.0
    value, grad, hess = compose_arrays(b.kappa1, sigmas, 2.0 * md, 2.0 * b._shapes, "min")
    return Jet2.from_position(value, grad, hess, x.size)


def local_barrier_value(b, position):
    """Value of b_k at a position, without derivatives"""
    return eval_local_barrier(b, np.asarray(position, dtype=float)[:b.dimension]).value


@dataclass(frozen=True)
class BarrierBuffer:
    """history[j] is b_{k-j}; j = 0..N"""
    history: tuple
    N: int
    T_s: float
    kappa: float
    k: int
    homotopy: HomotopyParams = HomotopyParams()

    def __post_init__(self):
        if int(self.N) != self.N or self.N < 1:
            raise InvalidArgumentError(f"window size N must be >= 1, got {self.N}")
        if not self.T_s > 0:
            raise InvalidArgumentError(f"sample period must be positive, got {self.T_s}")
        if not self.kappa > 0:
            raise InvalidArgumentError(f"kappa must be positive, got {self.kappa}")
        history = tuple(self.history)
        if len(history) != self.N + 1:
            raise InvalidArgumentError(f"buffer needs N+1={self.N + 1} barriers, got {len(history)}")
        object.__setattr__(self, "history", history)

    @classmethod
    def warm_start(cls, b0, N, T_s, kappa, homotopy=HomotopyParams()):
        """Buffer at epoch b0.epoch filled with N+1 copies of b0"""
        return cls(history=(b0,) * (N + 1), N=N, T_s=T_s, kappa=kappa, k=b0.epoch, homotopy=homotopy)

    def epoch_interval(self):
        return self.k * self.T_s, (self.k + 1) * self.T_s


def advance_epoch(buffer, new_barrier):
    """Shift the newest barrier in and drop the oldest"""
    if new_barrier.epoch != buffer.k + 1:
        raise InvalidArgumentError(
            f"barrier for epoch {new_barrier.epoch} cannot follow buffer epoch {buffer.k}")
    return BarrierBuffer(history=(new_barrier,) + buffer.history[:-1], N=buffer.N, T_s=buffer.T_s,
                         kappa=buffer.kappa, k=new_barrier.epoch, homotopy=buffer.homotopy)


def _blend(newest, oldest, s, T_s, homotopy):
    """eta(s) * newest + (1 - eta(s)) * oldest with the chain rule through s = t/T_s - k"""
    e0 = eta_derivatives(homotopy, s, 0)
    e1 = eta_derivatives(homotopy, s, 1) / T_s
    # with r = 1 the second time derivative is never consumed by the cascade
    e2 = eta_derivatives(homotopy, s, 2) / T_s ** 2 if homotopy.r >= 2 else 0.0

    gap = newest.value - oldest.value
    grad_gap = newest.grad_x - oldest.grad_x
    grad = e0 * newest.grad + (1.0 - e0) * oldest.grad
    hess = e0 * newest.hess + (1.0 - e0) * oldest.hess
    grad[-1] = e1 * gap
    hess[:-1, -1] = e1 * grad_gap
    hess[-1, :-1] = e1 * grad_gap
    hess[-1, -1] = e2 * gap
    return Jet2(e0 * newest.value + (1.0 - e0) * oldest.value, grad, hess)


def composite_h(buffer, x, t):
    """2-jet of h(x, t) for t in the buffer's epoch [k T_s, (k+1) T_s]"""
    s = t / buffer.T_s - buffer.k
    # the epoch is closed on the right: integrators evaluate at the switch time
    if s < -EPOCH_EPS or s > 1.0 + EPOCH_EPS:
        start, end = buffer.epoch_interval()
        raise StaleBufferError(f"t={t} is outside epoch {buffer.k} [{start}, {end}]",
                               epoch=buffer.k, t=t)
    s = min(max(s, 0.0), 1.0)

    jets = [eval_local_barrier(b, x) for b in buffer.history]
    blended = _blend(jets[0], jets[buffer.N], s, buffer.T_s, buffer.homotopy)
    arguments = jets[1:buffer.N] + [blended]
    return softmax_jet(SoftParams(buffer.kappa, len(arguments)), arguments)


def snapshot(barrier):
    """Plain-data description of a local barrier for the epoch dump"""
    return {
        "epoch": barrier.epoch,
        "kappa1": barrier.kappa1,
        "centers": [p.center.tolist() for p in barrier.primitives],
        "rotations": [p.rotation.tolist() for p in barrier.primitives],
        "inv_sq_axes": [p.inv_sq_axes.tolist() for p in barrier.primitives],
    }
