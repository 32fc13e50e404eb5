"""Ground-truth worlds made of convex primitives and a simulated range sensor.

Every primitive answers two questions exactly: the parameter interval in
which a ray is inside it, and whether a point is strictly inside it. The
scanner turns those intervals into ranges clipped at the sensor radius.
"""
import logging
import math
from dataclasses import dataclass, field

import numpy as np

from cbf_errors import InvalidArgumentError, ScenarioError

logger = logging.getLogger("Perception")

FULL_CIRCLE = 2.0 * math.pi
_PARALLEL_EPS = 1e-15


def _slab_interval(origin, direction, lo, hi):
    """Ray interval inside the axis-aligned box [lo, hi]; touching counts as a hit"""
    t_enter, t_exit = -math.inf, math.inf
    for o, d, a, b in zip(origin, direction, lo, hi):
        if abs(d) < _PARALLEL_EPS:
            if o < a or o > b:
                return None
            continue
        ta, tb = (a - o) / d, (b - o) / d
        if ta > tb:
            ta, tb = tb, ta
        t_enter = max(t_enter, ta)
        t_exit = min(t_exit, tb)
        if t_enter > t_exit:
            return None
    return t_enter, t_exit


def _ball_interval(origin, direction, center, radius):
    offset = origin - center
    b = float(direction @ offset)
    c = float(offset @ offset) - radius * radius
    disc = b * b - c
    if disc < 0.0:
        return None
    root = math.sqrt(disc)
    return -b - root, -b + root


def _rotation_2d(angle):
    c, s = math.cos(angle), math.sin(angle)
    return np.array([[c, -s], [s, c]])


@dataclass(frozen=True)
class Circle:
    center: tuple
    radius: float
    dimension = 2

    def ray_interval(self, origin, direction):
        return _ball_interval(origin, direction, np.asarray(self.center, dtype=float), self.radius)

    def contains(self, point):
        offset = np.asarray(point[:2], dtype=float) - np.asarray(self.center, dtype=float)
        return float(offset @ offset) < self.radius ** 2

    def bounding_box(self):
        c = np.asarray(self.center, dtype=float)
        return c - self.radius, c + self.radius

    def to_dict(self):
        return {"type": "circle", "center": list(self.center), "radius": self.radius}


@dataclass(frozen=True)
class Rectangle:
    """Rectangle rotated by angle (radians) about its center; angle 0 is axis-aligned"""
    center: tuple
    half_extents: tuple
    angle: float = 0.0
    dimension = 2

    def _to_local(self, vector):
        return _rotation_2d(self.angle).T @ vector

    def ray_interval(self, origin, direction):
        local_origin = self._to_local(np.asarray(origin, dtype=float) - np.asarray(self.center, dtype=float))
        local_direction = self._to_local(np.asarray(direction, dtype=float))
        half = np.asarray(self.half_extents, dtype=float)
        return _slab_interval(local_origin, local_direction, -half, half)

    def contains(self, point):
        local = self._to_local(np.asarray(point[:2], dtype=float) - np.asarray(self.center, dtype=float))
        return bool(np.all(np.abs(local) < np.asarray(self.half_extents, dtype=float)))

    def bounding_box(self):
        half = np.asarray(self.half_extents, dtype=float)
        corners = np.array([[sx * half[0], sy * half[1]] for sx in (-1, 1) for sy in (-1, 1)])
        world = corners @ _rotation_2d(self.angle).T + np.asarray(self.center, dtype=float)
        return world.min(axis=0), world.max(axis=0)

    def to_dict(self):
        return {"type": "rectangle", "center": list(self.center),
                "half_extents": list(self.half_extents), "angle_deg": math.degrees(self.angle)}


@dataclass(frozen=True)
class Sphere:
    center: tuple
    radius: float
    dimension = 3

    def ray_interval(self, origin, direction):
        return _ball_interval(origin, direction, np.asarray(self.center, dtype=float), self.radius)

    def contains(self, point):
        offset = np.asarray(point[:3], dtype=float) - np.asarray(self.center, dtype=float)
        return float(offset @ offset) < self.radius ** 2

    def bounding_box(self):
        c = np.asarray(self.center, dtype=float)
        return c - self.radius, c + self.radius

    def to_dict(self):
        return {"type": "sphere", "center": list(self.center), "radius": self.radius}


@dataclass(frozen=True)
class Box:
    """Axis-aligned box"""
    center: tuple
    half_extents: tuple
    dimension = 3

    def ray_interval(self, origin, direction):
        c = np.asarray(self.center, dtype=float)
        half = np.asarray(self.half_extents, dtype=float)
        return _slab_interval(origin, direction, c - half, c + half)

    def contains(self, point):
        offset = np.asarray(point[:3], dtype=float) - np.asarray(self.center, dtype=float)
        return bool(np.all(np.abs(offset) < np.asarray(self.half_extents, dtype=float)))

    def bounding_box(self):
        c = np.asarray(self.center, dtype=float)
        half = np.asarray(self.half_extents, dtype=float)
        return c - half, c + half

    def to_dict(self):
        return {"type": "box", "center": list(self.center), "half_extents": list(self.half_extents)}


@dataclass(frozen=True)
class Cylinder:
    """Vertical cylinder with its axis through center_xy, spanning [z_min, z_max]"""
    center_xy: tuple
    radius: float
    z_min: float
    z_max: float
    dimension = 3

    def ray_interval(self, origin, direction):
        c = np.asarray(self.center_xy, dtype=float)
        offset = origin[:2] - c
        d_xy = direction[:2]
        a = float(d_xy @ d_xy)
        c_term = float(offset @ offset) - self.radius ** 2
        if a < _PARALLEL_EPS:
            if c_term > 0.0:
                return None
            radial = (-math.inf, math.inf)
        else:
            b = float(d_xy @ offset)
            disc = b * b - a * c_term
            if disc < 0.0:
                return None
            root = math.sqrt(disc)
            radial = ((-b - root) / a, (-b + root) / a)
        vertical = _slab_interval(origin[2:3], direction[2:3], [self.z_min], [self.z_max])
        if vertical is None:
            return None
        t_enter = max(radial[0], vertical[0])
        t_exit = min(radial[1], vertical[1])
        if t_enter > t_exit:
            return None
        return t_enter, t_exit

    def contains(self, point):
        offset = np.asarray(point[:2], dtype=float) - np.asarray(self.center_xy, dtype=float)
        return float(offset @ offset) < self.radius ** 2 and self.z_min < point[2] < self.z_max

    def bounding_box(self):
        c = np.asarray(self.center_xy, dtype=float)
        lo = np.array([c[0] - self.radius, c[1] - self.radius, self.z_min])
        hi = np.array([c[0] + self.radius, c[1] + self.radius, self.z_max])
        return lo, hi

    def to_dict(self):
        return {"type": "cylinder", "center_xy": list(self.center_xy), "radius": self.radius,
                "z_min": self.z_min, "z_max": self.z_max}


_PRIMITIVE_KEYS = {
    "circle": ("center", "radius"),
    "rectangle": ("center", "half_extents", "angle_deg"),
    "sphere": ("center", "radius"),
    "box": ("center", "half_extents"),
    "cylinder": ("center_xy", "radius", "z_min", "z_max"),
}


def primitive_from_dict(data):
    """Build an obstacle primitive from its scenario-file description"""
    data = dict(data)
    kind = data.pop("type", None)
    if kind not in _PRIMITIVE_KEYS:
        raise ScenarioError(f"unknown obstacle type {kind!r}")
    unknown = set(data) - set(_PRIMITIVE_KEYS[kind])
    if unknown:
        raise ScenarioError(f"unknown keys for {kind}: {sorted(unknown)}")
    try:
        if kind == "circle":
            return Circle(tuple(data["center"]), float(data["radius"]))
        if kind == "rectangle":
            angle = math.radians(float(data.get("angle_deg", 0.0)))
            return Rectangle(tuple(data["center"]), tuple(data["half_extents"]), angle)
        if kind == "sphere":
            return Sphere(tuple(data["center"]), float(data["radius"]))
        if kind == "box":
            return Box(tuple(data["center"]), tuple(data["half_extents"]))
        return Cylinder(tuple(data["center_xy"]), float(data["radius"]),
                        float(data["z_min"]), float(data["z_max"]))
    except KeyError as e:
        raise ScenarioError(f"obstacle of type {kind!r} is missing {e}") from e
    except (TypeError, ValueError) as e:
        raise ScenarioError(f"bad {kind} obstacle: {e}") from e


@dataclass(frozen=True)
class World:
    dimension: int
    obstacles: tuple = ()
    bounds: np.ndarray = None

    def __post_init__(self):
        if self.dimension not in (2, 3):
            raise InvalidArgumentError(f"world dimension must be 2 or 3, got {self.dimension}")
        object.__setattr__(self, "obstacles", tuple(self.obstacles))
        if self.bounds is None:
            bounds = np.tile([-math.inf, math.inf], (self.dimension, 1))
        else:
            bounds = np.asarray(self.bounds, dtype=float).reshape(self.dimension, 2)
        object.__setattr__(self, "bounds", bounds)
        for obstacle in self.obstacles:
            if obstacle.dimension != self.dimension:
                raise InvalidArgumentError(
                    f"{type(obstacle).__name__} is {obstacle.dimension}D in a {self.dimension}D world")
            lo, hi = obstacle.bounding_box()
            if np.any(lo < bounds[:, 0] - 1e-9) or np.any(hi > bounds[:, 1] + 1e-9):
                raise InvalidArgumentError(f"{obstacle} extends beyond the world bounds")

    def penetrates(self, position):
        """Exact ground-truth check: is the position strictly inside any obstacle"""
        return any(obstacle.contains(position) for obstacle in self.obstacles)

    def to_dict(self):
        return {"dimension": self.dimension,
                "bounds": self.bounds.tolist() if np.all(np.isfinite(self.bounds)) else None,
                "obstacles": [obstacle.to_dict() for obstacle in self.obstacles]}

    @classmethod
    def from_dict(cls, data):
        data = dict(data)
        unknown = set(data) - {"dimension", "bounds", "obstacles"}
        if unknown:
            raise ScenarioError(f"unknown world keys: {sorted(unknown)}")
        if "dimension" not in data:
            raise ScenarioError("world needs a dimension")
        obstacles = tuple(primitive_from_dict(item) for item in data.get("obstacles", []))
        try:
            return cls(int(data["dimension"]), obstacles, data.get("bounds"))
        except InvalidArgumentError as e:
            raise ScenarioError(str(e)) from e


@dataclass(frozen=True)
class ScanParams:
    P: int
    r_bar: float
    fov: float = FULL_CIRCLE

    def __post_init__(self):
        if int(self.P) != self.P or self.P < 1:
            raise InvalidArgumentError(f"ray count P must be >= 1, got {self.P}")
        if not self.r_bar > 0:
            raise InvalidArgumentError(f"sensor radius must be positive, got {self.r_bar}")
        if not 0 < self.fov <= FULL_CIRCLE + 1e-12:
            raise InvalidArgumentError(f"field of view must be in (0, 2*pi], got {self.fov}")

    @property
    def full_circle(self):
        return self.fov >= FULL_CIRCLE - 1e-12


@dataclass(frozen=True)
class Scan:
    origin: np.ndarray
    directions: np.ndarray
    ranges: np.ndarray
    r_bar: float
    fov: float
    epoch: int
    azimuths: np.ndarray
    elevations: np.ndarray = None
    heading: float = 0.0

    @property
    def dimension(self):
        return self.origin.size

    @property
    def points(self):
        """Detected points (or range-limit points) in world coordinates"""
        return self.origin + self.ranges[:, None] * self.directions


@dataclass(frozen=True)
class FovBoundarySamples:
    origin: np.ndarray
    points: np.ndarray = field(default_factory=lambda: np.zeros((0, 2)))


def raycast(world, origin, direction, r_bar):
    """Distance to the first obstacle surface along the ray, capped at r_bar.

    An origin inside (or on) an obstacle reports 0.
    """
    if not r_bar > 0:
        raise InvalidArgumentError(f"sensor radius must be positive, got {r_bar}")
    origin = np.asarray(origin, dtype=float)
    direction = np.asarray(direction, dtype=float)
    nearest = r_bar
    for obstacle in world.obstacles:
        interval = obstacle.ray_interval(origin, direction)
        if interval is None:
            continue
        t_enter, t_exit = interval
        if t_exit < 0.0:
            continue
        if t_enter <= 0.0:
            return 0.0
        nearest = min(nearest, t_enter)
    return float(nearest)


def _elevation_rows(P):
    """Number of elevation rings: the divisor of P closest to sqrt(P/2)"""
    target = math.sqrt(P / 2.0)
    divisors = [n for n in range(1, P + 1) if P % n == 0]
    return min(divisors, key=lambda n: (abs(n - target), n))


def ray_directions(dimension, params, heading=0.0):
    """Unit ray directions plus their azimuths (and elevations in 3D)"""
    if dimension == 2:
        if params.full_circle:
            azimuths = FULL_CIRCLE * np.arange(params.P) / params.P
        elif params.P == 1:
            azimuths = np.array([heading])
        else:
            azimuths = heading - params.fov / 2.0 + params.fov * np.arange(params.P) / (params.P - 1)
        directions = np.column_stack([np.cos(azimuths), np.sin(azimuths)])
        return directions, azimuths, None

    if not params.full_circle:
        raise InvalidArgumentError("limited field of view is only modelled for planar scans")
    n_el = _elevation_rows(params.P)
    n_az = params.P // n_el
    # midpoint rings keep the poles from collapsing a whole ring onto one ray
    elevation_grid = -math.pi / 2.0 + math.pi * (np.arange(n_el) + 0.5) / n_el
    azimuth_grid = FULL_CIRCLE * np.arange(n_az) / n_az
    elevations, azimuths = np.meshgrid(elevation_grid, azimuth_grid, indexing="ij")
    elevations, azimuths = elevations.ravel(), azimuths.ravel()
    directions = np.column_stack([np.cos(elevations) * np.cos(azimuths),
                                  np.cos(elevations) * np.sin(azimuths),
                                  np.sin(elevations)])
    return directions, azimuths, elevations


def scan(world, origin, params, heading=0.0, epoch=0):
    """Simulated LiDAR sweep from origin.

    360 degree scans use world-frame azimuths 2*pi*i/P. Limited scans spread
    P rays over the sector centered on heading.
    """
    origin = np.asarray(origin, dtype=float)
    if origin.size != world.dimension:
        raise InvalidArgumentError(f"{origin.size}D origin in a {world.dimension}D world")
    directions, azimuths, elevations = ray_directions(world.dimension, params, heading)
    ranges = np.array([raycast(world, origin, d, params.r_bar) for d in directions])
    if np.any(ranges == 0.0):
        logger.warning(f"扫描原点位于障碍物内部: epoch {epoch}, origin {origin.tolist()}")
    return Scan(origin=origin, directions=directions, ranges=ranges, r_bar=params.r_bar,
                fov=params.fov, epoch=epoch, azimuths=azimuths, elevations=elevations,
                heading=heading)


def fov_boundary(origin, heading, fov, r_bar, L):
    """L points along the boundary of the sensed sector, evenly spaced in arc length.

    The path runs out along the right edge, across the arc, and back in along
    the left edge; samples sit at the midpoints of L equal pieces of it.
    """
    if fov >= FULL_CIRCLE - 1e-12:
        raise InvalidArgumentError("a full-circle field of view has no boundary")
    if not fov > 0:
        raise InvalidArgumentError(f"field of view must be positive, got {fov}")
    if L < 2:
        raise InvalidArgumentError(f"need at least 2 boundary samples, got {L}")
    if not r_bar > 0:
        raise InvalidArgumentError(f"sensor radius must be positive, got {r_bar}")

    origin = np.asarray(origin, dtype=float)
    start = heading - fov / 2.0
    arc = r_bar * fov
    total = 2.0 * r_bar + arc
    s = total * (np.arange(L) + 0.5) / L

    points = np.empty((L, 2))
    for i, si in enumerate(s):
        if si <= r_bar:
            rho, bearing = si, start
        elif si <= r_bar + arc:
            rho, bearing = r_bar, start + (si - r_bar) / r_bar
        else:
            rho, bearing = total - si, start + fov
        points[i] = origin + rho * np.array([math.cos(bearing), math.sin(bearing)])
    return FovBoundarySamples(origin=origin, points=points)
