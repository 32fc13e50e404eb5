"""Control-affine plant models, their desired controllers, and the quadrotor
inner loop.

Three plants are exposed to the simulator through the same small interface
(UnicyclePlant, DoubleIntegratorPlant, QuadrotorPlant). The safety filter
only ever sees PlantFields of a control-affine model; for the full quadrotor
that model is the double-integrator approximation.

The control-affine plants are integrated in closed loop: the filtered control
is a function of (x, t) and is recomputed at every stage of an adaptive
RK45 step. The full quadrotor receives attitude commands once per step and
integrates its stiff inner loop with fixed RK4 substeps.
"""
import logging
import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import solve_ivp

from cbf_errors import IntegrationError, InvalidArgumentError, SingularCommandError

logger = logging.getLogger("Plants")

E3 = np.array([0.0, 0.0, 1.0])
GOAL_SINGULARITY = 1e-6
SINGULAR_EPS = 1e-6
COMMAND_CLAMP_MARGIN = 0.5
CLOSED_LOOP_RTOL = 1e-8
CLOSED_LOOP_ATOL = 1e-8


@dataclass(frozen=True)
class PlantFields:
    f: np.ndarray
    g: np.ndarray
    dfdx: np.ndarray


def rk4_step(fn, x, u, dt):
    """One classical Runge-Kutta step of x' = fn(x, u) with u held over dt"""
    k1 = fn(x, u)
    k2 = fn(x + 0.5 * dt * k1, u)
    k3 = fn(x + 0.5 * dt * k2, u)
    k4 = fn(x + dt * k3, u)
    return x + dt * (k1 + 2.0 * k2 + 2.0 * k3 + k4) / 6.0


def closed_loop_step(rhs, x, control, t, t_end):
    """Integrate x' = rhs(x, control(x, s)) from t to t_end.

    The control is re-evaluated at every stage, so a state-feedback law acts
    continuously inside the step. Exceptions raised by control propagate.
    """
    span = t_end - t
    if not span > 0:
        raise InvalidArgumentError(f"time step must be positive, got {span}")
    x = np.asarray(x, dtype=float)
    solution = solve_ivp(lambda s, y: rhs(y, control(y, s)), (t, t_end), x, method="RK45",
                         first_step=span, max_step=span, rtol=CLOSED_LOOP_RTOL, atol=CLOSED_LOOP_ATOL)
    if not solution.success:
        raise IntegrationError(f"closed-loop integration failed: {solution.message}", t=t, state=x)
    y = solution.y[:, -1]
    if not np.all(np.isfinite(y)):
        raise IntegrationError("closed-loop state became non-finite", t=t, state=x)
    return y


def wrap_angle(angle):
    """Wrap to (-pi, pi]"""
    wrapped = math.remainder(angle, 2.0 * math.pi)
    return math.pi if wrapped == -math.pi else wrapped


# ---------------------------------------------------------------------------
# Unicycle
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class UnicycleState:
    q_x: float
    q_y: float
    v: float
    theta: float

    @property
    def vector(self):
        return np.array([self.q_x, self.q_y, self.v, self.theta], dtype=float)

    @classmethod
    def from_vector(cls, x):
        return cls(*(float(value) for value in x))


@dataclass(frozen=True)
class UnicycleGains:
    k1: float = 0.5
    k2: float = 3.0
    k3: float = 3.0


def _as_vector(x):
    return x.vector if hasattr(x, "vector") else np.asarray(x, dtype=float)


def unicycle_fields(x):
    """f, g and df/dx of (q_x, q_y, v, theta)' = f(x) + g u"""
    _, _, v, theta = _as_vector(x)
    c, s = math.cos(theta), math.sin(theta)
    f = np.array([v * c, v * s, 0.0, 0.0])
    g = np.array([[0.0, 0.0], [0.0, 0.0], [1.0, 0.0], [0.0, 1.0]])
    dfdx = np.zeros((4, 4))
    dfdx[0, 2], dfdx[0, 3] = c, -v * s
    dfdx[1, 2], dfdx[1, 3] = s, v * c
    return PlantFields(f, g, dfdx)


def unicycle_desired(x, q_g, gains=UnicycleGains()):
    """Nominal goal-seeking control (acceleration, turn rate)"""
    q_x, q_y, v, theta = _as_vector(x)
    dx, dy = q_x - q_g[0], q_y - q_g[1]
    rho = math.hypot(dx, dy)
    if rho < GOAL_SINGULARITY:
        # the bearing to the goal is undefined here: brake
        logger.debug(f"goal reached within {rho:.2e} m, braking")
        return np.array([-(gains.k1 + gains.k3) * v, 0.0])
    delta = math.atan2(dy, dx) - theta + math.pi
    cos_d, sin_d = math.cos(delta), math.sin(delta)
    u1 = (-(gains.k1 + gains.k3) * v + (1.0 + gains.k1 * gains.k3) * rho * cos_d
          + gains.k1 * (rho * gains.k2 + v) * sin_d ** 2)
    u2 = (gains.k2 + v / rho) * sin_d
    return np.array([u1, u2])


def _unicycle_rhs(x, u):
    _, _, v, theta = x
    return np.array([v * math.cos(theta), v * math.sin(theta), u[0], u[1]])


# ---------------------------------------------------------------------------
# Quadrotor
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class QuadrotorParams:
    mass: float = 0.1
    gravity: float = 9.81
    k1: float = 3.4e3
    k2: float = 116.67
    k3: float = 1950.0
    k4: float = 3.9e3
    # thrust (k4) and yaw-rate (k3) loops are stiff; RK4 needs steps well under 1/k4
    max_substep: float = 5e-4


@dataclass(frozen=True)
class QuadrotorState:
    q: np.ndarray
    p: np.ndarray
    R: np.ndarray
    omega: np.ndarray
    F: float

    def __post_init__(self):
        for name, shape in (("q", (3,)), ("p", (3,)), ("R", (3, 3)), ("omega", (3,))):
            value = np.asarray(getattr(self, name), dtype=float)
            if value.shape != shape:
                raise InvalidArgumentError(f"quadrotor {name} must have shape {shape}, got {value.shape}")
            object.__setattr__(self, name, value)
        object.__setattr__(self, "F", float(self.F))

    @classmethod
    def hover(cls, q, p=(0.0, 0.0, 0.0), params=QuadrotorParams()):
        return cls(np.asarray(q, dtype=float), np.asarray(p, dtype=float), np.eye(3), np.zeros(3),
                   params.mass * params.gravity)

    def pack(self):
        return np.concatenate([self.q, self.p, self.R.ravel(), self.omega, [self.F]])

    @classmethod
    def unpack(cls, y):
        return cls(y[0:3], y[3:6], y[6:15].reshape(3, 3), y[15:18], y[18])


@dataclass(frozen=True)
class AttitudeCommands:
    yaw: float
    pitch: float
    roll: float
    thrust: float
    clamped: bool = False


def euler_321(R):
    """(yaw psi, pitch theta, roll phi) of R = Rz(psi) Ry(theta) Rx(phi)"""
    pitch = -math.asin(max(-1.0, min(1.0, R[2, 0])))
    roll = math.atan2(R[2, 1], R[2, 2])
    yaw = math.atan2(R[1, 0], R[0, 0])
    return yaw, pitch, roll


def euler_rates(R, omega):
    """(roll rate, pitch rate, yaw rate) from body angular velocity"""
    _, pitch, roll = euler_321(R)
    wx, wy, wz = omega
    sr, cr = math.sin(roll), math.cos(roll)
    cp = math.cos(pitch)
    roll_rate = wx + (wy * sr + wz * cr) * math.tan(pitch)
    pitch_rate = wy * cr - wz * sr
    yaw_rate = (wy * sr + wz * cr) / cp
    return roll_rate, pitch_rate, yaw_rate


def _skew(w):
    return np.array([[0.0, -w[2], w[1]], [w[2], 0.0, -w[0]], [-w[1], w[0], 0.0]])


def _orthonormalize(R):
    u, _, vt = np.linalg.svd(R)
    return u @ vt


def _quad_rhs(y, commands, params):
    R = y[6:15].reshape(3, 3)
    p, omega, F = y[3:6], y[15:18], y[18]
    _, pitch, roll = euler_321(R)
    roll_rate, pitch_rate, yaw_rate = euler_rates(R, omega)
    sr, cr = math.sin(roll), math.cos(roll)
    sp, cp = math.sin(pitch), math.cos(pitch)
    rates_to_body = np.array([[1.0, 0.0, -sp],
                              [0.0, cr, sr * cp],
                              [0.0, -sr, cr * cp]])
    # commanded yaw is identically zero, so is its rate
    attitude_law = np.array([params.k1 * (commands.roll - roll) - params.k2 * roll_rate,
                             params.k1 * (commands.pitch - pitch) - params.k2 * pitch_rate,
                             params.k3 * (0.0 - yaw_rate)])
    dy = np.empty(19)
    dy[0:3] = p
    dy[3:6] = F / params.mass * (R @ E3) - params.gravity * E3
    dy[6:15] = (R @ _skew(omega)).ravel()
    dy[15:18] = rates_to_body @ attitude_law
    dy[18] = params.k4 * (commands.thrust - F)
    return dy


def quad_full_step(state, commands, dt, params=QuadrotorParams()):
    """Advance the attitude-stabilized quadrotor by dt under constant commands"""
    if not dt > 0:
        raise InvalidArgumentError(f"time step must be positive, got {dt}")
    n_sub = max(1, math.ceil(dt / params.max_substep - 1e-9))
    h = dt / n_sub
    y = state.pack()
    for _ in range(n_sub):
        lag = abs(y[18] - commands.thrust)
        y = rk4_step(lambda z, c: _quad_rhs(z, c, params), y, commands, h)
        if not np.all(np.isfinite(y)):
            raise IntegrationError("quadrotor state became non-finite", state=state)
        # the thrust lag is a stable first-order filter: a growing gap means RK4 left its stability region
        if abs(y[18] - commands.thrust) > lag + 1e-9 * max(1.0, abs(commands.thrust)):
            raise IntegrationError(f"thrust integration diverged (k4*h={params.k4 * h:.3g})", state=state)
        y[6:15] = _orthonormalize(y[6:15].reshape(3, 3)).ravel()
        y[18] = max(y[18], 0.0)
    return QuadrotorState.unpack(y)


def quad_command_map(u, m, g, clamp=True):
    """Yaw/pitch/roll/thrust commands that realise the translational acceleration u"""
    u_x, u_y, u_z = (float(value) for value in u)
    clamped = False
    if u_z + g <= SINGULAR_EPS:
        if not clamp:
            raise SingularCommandError(f"vertical command u_z={u_z:.4g} cancels gravity")
        logger.warning(f"推力指令奇异, u_z={u_z:.4g} 被限制为 {-g + COMMAND_CLAMP_MARGIN:.4g}")
        u_z = -g + COMMAND_CLAMP_MARGIN
        clamped = True
    lift = u_z + g
    pitch = math.atan(u_x / lift)
    roll = math.atan(-u_y * math.cos(pitch) / lift)
    thrust = lift * m / (math.cos(roll) * math.cos(pitch))
    return AttitudeCommands(yaw=0.0, pitch=pitch, roll=roll, thrust=thrust, clamped=clamped)


def reconstruct_acceleration(commands, m, g):
    """Inertial acceleration produced by the commanded attitude and thrust"""
    cy, sy = math.cos(commands.yaw), math.sin(commands.yaw)
    cp, sp = math.cos(commands.pitch), math.sin(commands.pitch)
    cr, sr = math.cos(commands.roll), math.sin(commands.roll)
    body_z = np.array([cy * sp * cr + sy * sr,
                       sy * sp * cr - cy * sr,
                       cp * cr])
    return commands.thrust / m * body_z - g * E3


def quad_approx_fields(x):
    """Double integrator x = (q, p):  q' = p, p' = u"""
    x = np.asarray(x, dtype=float)
    dfdx = np.zeros((6, 6))
    dfdx[0:3, 3:6] = np.eye(3)
    g = np.zeros((6, 3))
    g[3:6, :] = np.eye(3)
    return PlantFields(dfdx @ x, g, dfdx)


def quad_desired(q, p, q_g, position_gain=3.0, velocity_gain=2.0):
    """u_d = 3 tanh(q_g - q) - 2 p"""
    q, p, q_g = (np.asarray(v, dtype=float) for v in (q, p, q_g))
    return position_gain * np.tanh(q_g - q) - velocity_gain * p


def _double_integrator_rhs(x, u):
    return np.concatenate([x[3:6], u])


# ---------------------------------------------------------------------------
# Plant adapters used by the simulator
# ---------------------------------------------------------------------------

class UnicyclePlant:
    kind = "unicycle"
    dimension = 2
    relative_degree = 2
    continuous = True
    state_labels = ("q_x", "q_y", "v", "theta")
    control_labels = ("u_1", "u_2")

    def __init__(self, gains=UnicycleGains()):
        self.gains = gains

    def initial_state(self, x0):
        x0 = np.asarray(x0, dtype=float)
        if x0.shape != (4,):
            raise InvalidArgumentError(f"unicycle x0 needs (q_x, q_y, v, theta), got {x0.tolist()}")
        return x0.copy()

    def position(self, state):
        return state[:2]

    def heading(self, state):
        return wrap_angle(state[3])

    def filter_state(self, state):
        return state

    def fields(self, x):
        return unicycle_fields(x)

    def desired(self, state, goal):
        return unicycle_desired(state, goal, self.gains)

    def rhs(self, state, u):
        return _unicycle_rhs(state, u)

    def step(self, state, u, dt):
        return rk4_step(_unicycle_rhs, state, np.asarray(u, dtype=float), dt)

    def log_vector(self, state):
        logged = state.copy()
        logged[3] = wrap_angle(state[3])
        return logged


class DoubleIntegratorPlant:
    """The quadrotor's translational approximation, also simulated on its own"""
    kind = "quad_approx"
    dimension = 3
    relative_degree = 2
    continuous = True
    state_labels = ("q_x", "q_y", "q_z", "p_x", "p_y", "p_z")
    control_labels = ("u_x", "u_y", "u_z")

    def __init__(self, position_gain=3.0, velocity_gain=2.0):
        self.position_gain = position_gain
        self.velocity_gain = velocity_gain

    def initial_state(self, x0):
        x0 = np.asarray(x0, dtype=float)
        if x0.shape != (6,):
            raise InvalidArgumentError(f"double integrator x0 needs (q, p), got {x0.tolist()}")
        return x0.copy()

    def position(self, state):
        return state[:3]

    def heading(self, state):
        return 0.0

    def filter_state(self, state):
        return state

    def fields(self, x):
        return quad_approx_fields(x)

    def desired(self, state, goal):
        return quad_desired(state[:3], state[3:6], goal, self.position_gain, self.velocity_gain)

    def rhs(self, state, u):
        return _double_integrator_rhs(state, u)

    def step(self, state, u, dt):
        return rk4_step(_double_integrator_rhs, state, np.asarray(u, dtype=float), dt)

    def log_vector(self, state):
        return state.copy()


class QuadrotorPlant(DoubleIntegratorPlant):
    """Full attitude-stabilized quadrotor; the filter runs on (q, p)"""
    kind = "quad_full"
    continuous = False
    state_labels = ("q_x", "q_y", "q_z", "p_x", "p_y", "p_z", "yaw", "pitch", "roll",
                    "w_x", "w_y", "w_z", "F")

    def __init__(self, position_gain=3.0, velocity_gain=2.0, params=QuadrotorParams()):
        super().__init__(position_gain, velocity_gain)
        self.params = params
        self.clamped_commands = 0

    def initial_state(self, x0):
        x0 = np.asarray(x0, dtype=float)
        if x0.shape != (6,):
            raise InvalidArgumentError(f"quadrotor x0 needs (q, p), got {x0.tolist()}")
        return QuadrotorState.hover(x0[:3], x0[3:6], self.params)

    def position(self, state):
        return state.q

    def heading(self, state):
        return euler_321(state.R)[0]

    def filter_state(self, state):
        return np.concatenate([state.q, state.p])

    def desired(self, state, goal):
        return quad_desired(state.q, state.p, goal, self.position_gain, self.velocity_gain)

    def step(self, state, u, dt):
        commands = quad_command_map(u, self.params.mass, self.params.gravity)
        if commands.clamped:
            self.clamped_commands += 1
        return quad_full_step(state, commands, dt, self.params)

    def log_vector(self, state):
        yaw, pitch, roll = euler_321(state.R)
        return np.concatenate([state.q, state.p, [yaw, pitch, roll], state.omega, [state.F]])


PLANT_KINDS = ("unicycle", "quad_full", "quad_approx")


def make_plant(kind, gains=None):
    """Plant adapter for a scenario's plant kind and gains dict"""
    gains = dict(gains or {})
    if kind == "unicycle":
        return UnicyclePlant(UnicycleGains(**gains))
    if kind in ("quad_full", "quad_approx"):
        position_gain = gains.pop("position_gain", 3.0)
        velocity_gain = gains.pop("velocity_gain", 2.0)
        if kind == "quad_approx":
            if gains:
                raise InvalidArgumentError(f"unused double-integrator gains: {sorted(gains)}")
            return DoubleIntegratorPlant(position_gain, velocity_gain)
        params = QuadrotorParams(**gains)
        return QuadrotorPlant(position_gain, velocity_gain, params)
    raise InvalidArgumentError(f"unknown plant kind {kind!r}; expected one of {PLANT_KINDS}")
