"""Closed-loop simulation: perception every T_s, safety filter every dt.

At each epoch start t = k T_s the vehicle scans the world, the scan becomes
the local barrier b_k and is shifted into the buffer. Between epochs the
control-affine plants are integrated in closed loop: the composite barrier and
the QP are evaluated at every integrator stage, so the filtered control is a
function of the state rather than a value held over dt. The full quadrotor
samples its attitude commands once per dt.
"""
import copy
import csv
import json
import logging
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np

from barrier_synthesis import (BarrierBuffer, BarrierGeometry, advance_epoch, build_local_barrier,
                               composite_h, snapshot)
from cbf_errors import (CBFError, InfeasibleQPError, IntegrationError, NumericalError,
                        ScenarioError)
from homotopy import HomotopyParams
from perception_sim import FULL_CIRCLE, ScanParams, World, fov_boundary, scan
from plants import closed_loop_step, make_plant
from presets import DEFAULT_CBF_PRESET, get_cbf_preset, get_preset
from safety_filter import CascadeConfig, QPStatus, evaluate_cascade, solve_qp

logger = logging.getLogger("SimEngine")

SAFETY_TOLERANCE = 1e-6
FILTER_MODES = ("strict", "lenient")

EXIT_OK = 0
EXIT_INTEGRATION_FAILURE = 1
EXIT_SAFETY_VIOLATION = 2
EXIT_INFEASIBLE = 3

DEFAULT_SCENARIO = {
    "name": "scenario",
    "plant": "unicycle",
    "cbf_preset": None,
    "world": {"dimension": 2, "obstacles": []},
    "x0": [0.0, 0.0, 0.0, 0.0],
    "goals": [[1.0, 0.0]],
    "cbf": {},
    "gains": {},
    "run": {"duration": 60.0, "dt": 0.005, "seed": 0, "goal_tolerance": 0.3, "log_every_epochs": 25},
    "filter_mode": "strict",
}

GAIN_KEYS = {
    "unicycle": ("k1", "k2", "k3"),
    "quad_full": ("position_gain", "velocity_gain", "mass", "gravity"),
    "quad_approx": ("position_gain", "velocity_gain"),
}


@dataclass(frozen=True)
class CbfParams:
    kappa1: float
    kappa: float
    N: int
    P: int
    L: int
    T_s: float
    lam: float
    r: int
    alpha1: float
    alpha2: float
    d_w: float
    d_s: float
    r_bar: float
    fov_deg: float
    apex_clearance: float

    @property
    def fov(self):
        return math.radians(self.fov_deg)

    @property
    def full_circle(self):
        return self.fov >= FULL_CIRCLE - 1e-12

    def geometry(self):
        return BarrierGeometry(self.d_w, self.d_s, self.r_bar, self.apex_clearance)

    def scan_params(self):
        return ScanParams(self.P, self.r_bar, min(self.fov, FULL_CIRCLE))

    def homotopy(self):
        return HomotopyParams(self.r, self.lam)

    def cascade(self):
        return CascadeConfig.linear(self.r, self.alpha1, self.alpha2)


@dataclass(frozen=True)
class RunParams:
    duration: float
    dt: float
    seed: int
    goal_tolerance: float
    log_every_epochs: int


@dataclass(frozen=True)
class Scenario:
    name: str
    plant: str
    world: World
    x0: tuple
    goals: tuple
    cbf: CbfParams
    gains: dict
    run: RunParams
    filter_mode: str = "strict"
    cbf_preset: str = None

    @property
    def strict(self):
        return self.filter_mode == "strict"


@dataclass
class StepRecord:
    t: float
    state: np.ndarray
    u_d: np.ndarray
    u: np.ndarray
    h: float
    psi1: float
    status: str
    a: np.ndarray
    b: float
    goal_index: int


@dataclass
class EpochRecord:
    k: int
    t: float
    origin: np.ndarray
    ranges: np.ndarray
    barrier: object

    def to_dict(self):
        return {"k": self.k, "t": self.t, "origin": self.origin.tolist(),
                "ranges": self.ranges.tolist(), "barrier": snapshot(self.barrier)}


@dataclass
class RunSummary:
    name: str
    plant: str
    status: str = "completed"
    exit_code: int = EXIT_OK
    message: str = ""
    steps: int = 0
    epochs: int = 0
    simulated_time: float = 0.0
    min_h: float = math.inf
    min_psi1: float = None
    final_goal_distance: float = math.inf
    goals_reached: int = 0
    active_steps: int = 0
    infeasible_steps: int = 0
    penetrations: int = 0
    clamped_commands: int = 0

    def to_dict(self):
        data = asdict(self)
        for key in ("min_h", "min_psi1", "final_goal_distance"):
            if data[key] is not None and not math.isfinite(data[key]):
                data[key] = None
        return data


@dataclass
class RunLog:
    scenario: Scenario
    state_labels: tuple
    control_labels: tuple
    steps: list = field(default_factory=list)
    epochs: list = field(default_factory=list)
    summary: RunSummary = None


# ---------------------------------------------------------------------------
# Scenario files
# ---------------------------------------------------------------------------

def _reject_unknown(section, data, allowed):
    unknown = set(data) - set(allowed)
    if unknown:
        raise ScenarioError(f"unknown {section} keys: {sorted(unknown)}")


def _overlay(section, defaults, data):
    if not isinstance(data, dict):
        raise ScenarioError(f"{section} must be an object, got {type(data).__name__}")
    _reject_unknown(section, data, defaults)
    merged = dict(defaults)
    merged.update(data)
    return merged


def _vector_list(name, values):
    try:
        return tuple(tuple(float(v) for v in item) for item in values)
    except (TypeError, ValueError) as e:
        raise ScenarioError(f"{name} must be a list of coordinate lists") from e


def scenario_from_dict(data):
    """Scenario from a parsed scenario file: defaults overlaid, unknown keys rejected"""
    merged = _overlay("scenario", DEFAULT_SCENARIO, data)

    preset = merged["cbf_preset"] or DEFAULT_CBF_PRESET
    cbf_defaults = get_cbf_preset(preset)
    cbf = _overlay("cbf", cbf_defaults, merged["cbf"])
    run = _overlay("run", DEFAULT_SCENARIO["run"], merged["run"])

    plant = merged["plant"]
    if plant not in GAIN_KEYS:
        raise ScenarioError(f"unknown plant {plant!r}; expected one of {sorted(GAIN_KEYS)}")
    if not isinstance(merged["gains"], dict):
        raise ScenarioError(f"gains must be an object, got {type(merged['gains']).__name__}")
    gains = dict(merged["gains"])
    _reject_unknown(f"{plant} gains", gains, GAIN_KEYS[plant])
    if merged["filter_mode"] not in FILTER_MODES:
        raise ScenarioError(f"filter_mode must be one of {FILTER_MODES}, got {merged['filter_mode']!r}")

    try:
        cbf_params = CbfParams(
            kappa1=float(cbf["kappa1"]), kappa=float(cbf["kappa"]), N=int(cbf["N"]), P=int(cbf["P"]),
            L=int(cbf["L"]), T_s=float(cbf["T_s"]), lam=float(cbf["lam"]), r=int(cbf["r"]),
            alpha1=float(cbf["alpha1"]), alpha2=float(cbf["alpha2"]), d_w=float(cbf["d_w"]),
            d_s=float(cbf["d_s"]), r_bar=float(cbf["r_bar"]), fov_deg=float(cbf["fov_deg"]),
            apex_clearance=float(cbf["apex_clearance"]))
        run_params = RunParams(duration=float(run["duration"]), dt=float(run["dt"]), seed=int(run["seed"]),
                               goal_tolerance=float(run["goal_tolerance"]),
                               log_every_epochs=int(run["log_every_epochs"]))
        gains = {key: float(value) for key, value in gains.items()}
    except (TypeError, ValueError) as e:
        raise ScenarioError(f"bad numeric value in scenario: {e}") from e

    x0 = _vector_list("x0", [merged["x0"]])[0]
    goals = _vector_list("goals", merged["goals"])
    if not goals:
        raise ScenarioError("a scenario needs at least one goal")

    return Scenario(name=str(merged["name"]), plant=plant, world=World.from_dict(merged["world"]),
                    x0=x0, goals=goals, cbf=cbf_params, gains=gains, run=run_params,
                    filter_mode=merged["filter_mode"], cbf_preset=merged["cbf_preset"])


def scenario_to_dict(scenario):
    return {
        "name": scenario.name,
        "plant": scenario.plant,
        "cbf_preset": scenario.cbf_preset,
        "world": scenario.world.to_dict(),
        "x0": list(scenario.x0),
        "goals": [list(goal) for goal in scenario.goals],
        "cbf": asdict(scenario.cbf),
        "gains": dict(scenario.gains),
        "run": asdict(scenario.run),
        "filter_mode": scenario.filter_mode,
    }


def load_scenario(path):
    """Read a scenario JSON file"""
    try:
        with open(path, 'r', encoding='utf-8') as f:
            data = json.load(f)
    except OSError as e:
        raise ScenarioError(f"cannot read scenario {path}: {e}") from e
    except json.JSONDecodeError as e:
        raise ScenarioError(f"scenario {path} is not valid JSON: {e}") from e
    return scenario_from_dict(data)


def preset_scenario(name):
    return scenario_from_dict(get_preset(name))


def with_overrides(scenario, seed=None, filter_mode=None):
    """Copy of a scenario with CLI overrides applied"""
    data = scenario_to_dict(scenario)
    if seed is not None:
        data["run"]["seed"] = int(seed)
    if filter_mode is not None:
        data["filter_mode"] = filter_mode
    return scenario_from_dict(data)


# ---------------------------------------------------------------------------
# Validation
# ---------------------------------------------------------------------------

def _steps_per_epoch(T_s, dt):
    ratio = T_s / dt
    steps = round(ratio)
    if steps < 1 or abs(ratio - steps) > 1e-9 * max(1.0, ratio):
        return None
    return steps


def validate(scenario):
    """Human-readable problems with a scenario; an empty list means it can run"""
    diagnostics = []
    cbf, run = scenario.cbf, scenario.run

    for name in ("alpha1",) if cbf.r == 1 else ("alpha1", "alpha2"):
        if not getattr(cbf, name) > 0:
            diagnostics.append(f"class-K gain must be positive: {name}={getattr(cbf, name)}")
    for name in ("kappa1", "kappa", "T_s", "d_w", "r_bar", "apex_clearance"):
        if not getattr(cbf, name) > 0:
            diagnostics.append(f"{name} must be positive, got {getattr(cbf, name)}")
    if cbf.d_s < 0:
        diagnostics.append(f"d_s must be non-negative, got {cbf.d_s}")
    if cbf.N < 1:
        diagnostics.append(f"window size N must be >= 1, got {cbf.N}")
    if cbf.P < 1:
        diagnostics.append(f"ray count P must be >= 1, got {cbf.P}")
    if cbf.lam < 1:
        diagnostics.append(f"homotopy compression lam must be >= 1, got {cbf.lam}")
    if not 0 < cbf.fov_deg <= 360:
        diagnostics.append(f"fov_deg must be in (0, 360], got {cbf.fov_deg}")
    elif not cbf.full_circle:
        if scenario.world.dimension == 3:
            diagnostics.append("limited field of view is only supported for 2D worlds")
        if cbf.L < 2:
            diagnostics.append(f"limited field of view needs L >= 2 boundary samples, got {cbf.L}")

    if not run.dt > 0:
        diagnostics.append(f"dt must be positive, got {run.dt}")
    elif cbf.T_s > 0 and _steps_per_epoch(cbf.T_s, run.dt) is None:
        diagnostics.append(f"T_s={cbf.T_s} must be a whole multiple of dt={run.dt}")
    if run.duration < 0:
        diagnostics.append(f"duration must be non-negative, got {run.duration}")

    plant = None
    try:
        plant = make_plant(scenario.plant, scenario.gains)
    except (CBFError, TypeError) as e:
        diagnostics.append(f"cannot build plant: {e}")
    if plant is None:
        return diagnostics

    if cbf.r not in (1, 2):
        diagnostics.append(f"relative degree r={cbf.r} is not supported (1 or 2)")
    elif cbf.r != plant.relative_degree:
        diagnostics.append(
            f"relative degree mismatch: r={cbf.r} but {scenario.plant} has relative degree {plant.relative_degree}")
    if scenario.world.dimension != plant.dimension:
        diagnostics.append(f"{scenario.plant} needs a {plant.dimension}D world, got {scenario.world.dimension}D")
        return diagnostics
    try:
        state = plant.initial_state(scenario.x0)
    except CBFError as e:
        diagnostics.append(str(e))
        return diagnostics
    for i, goal in enumerate(scenario.goals):
        if len(goal) != plant.dimension:
            diagnostics.append(f"goal {i} must have {plant.dimension} coordinates, got {len(goal)}")
        elif scenario.world.penetrates(np.asarray(goal)):
            diagnostics.append(f"goal {i} {list(goal)} lies inside an obstacle")

    if scenario.world.penetrates(plant.position(state)):
        diagnostics.append("initial state unsafe: start position is inside an obstacle")
        return diagnostics
    if diagnostics:
        return diagnostics

    # x0 must lie in Gamma(0) of the barrier built from the first scan
    try:
        barrier, _ = _perceive(scenario, plant, state, 0)
        buffer = BarrierBuffer.warm_start(barrier, cbf.N, cbf.T_s, cbf.kappa, cbf.homotopy())
        xf = plant.filter_state(state)
        h_jet = composite_h(buffer, xf, 0.0)
        _, p1 = evaluate_cascade(h_jet, plant.fields(xf), cbf.cascade())
    except CBFError as e:
        diagnostics.append(f"cannot evaluate the initial barrier: {e}")
        return diagnostics
    if h_jet.value < 0:
        diagnostics.append(f"initial state unsafe: h(x0, 0) = {h_jet.value:.6g} < 0")
    if p1 is not None and p1.value < 0:
        diagnostics.append(f"initial state unsafe: psi1(x0, 0) = {p1.value:.6g} < 0")
    return diagnostics


# ---------------------------------------------------------------------------
# Closed loop
# ---------------------------------------------------------------------------

def _perceive(scenario, plant, state, k):
    cbf = scenario.cbf
    origin = np.asarray(plant.position(state), dtype=float).copy()
    heading = plant.heading(state)
    sc = scan(scenario.world, origin, cbf.scan_params(), heading=heading, epoch=k)
    samples = None
    if not cbf.full_circle:
        samples = fov_boundary(origin, heading, cbf.fov, cbf.r_bar, cbf.L)
    return build_local_barrier(sc, samples, cbf.geometry(), cbf.kappa1), sc


def _finish(log, summary):
    steps = log.steps
    summary.steps = len(steps)
    summary.epochs = len(log.epochs)
    if steps:
        summary.simulated_time = steps[-1].t
        summary.min_h = min(record.h for record in steps)
        if log.scenario.cbf.r == 2:
            summary.min_psi1 = min(record.psi1 for record in steps)
        summary.active_steps = sum(record.status == QPStatus.ACTIVE.value for record in steps)
        summary.infeasible_steps = sum(record.status == QPStatus.INFEASIBLE.value for record in steps)

    if summary.status == "completed":
        violated = (summary.min_h < -SAFETY_TOLERANCE
                    or (summary.min_psi1 is not None and summary.min_psi1 < -SAFETY_TOLERANCE)
                    or summary.penetrations > 0)
        if violated:
            summary.status = "safety_violation"
            summary.exit_code = EXIT_SAFETY_VIOLATION
            summary.message = (f"min h={summary.min_h:.3g}, min psi1={summary.min_psi1}, "
                               f"penetrations={summary.penetrations}")
            logger.error(f"{summary.name}: 安全约束被违反, {summary.message}")
    log.summary = summary
    logger.info(f"{summary.name}: {summary.status} after {summary.simulated_time:.2f} s, "
                f"min h={summary.min_h:.4g}, goal distance={summary.final_goal_distance:.3f}")
    return log


def _filtered_control(plant, buffer, cascade, goal, strict, state, t):
    """Desired control, filtered control and the cascade pieces at (state, t)"""
    xf = plant.filter_state(state)
    h_jet = composite_h(buffer, xf, t)
    row, p1 = evaluate_cascade(h_jet, plant.fields(xf), cascade)
    u_d = plant.desired(state, goal)
    u, status = solve_qp(row, u_d, strict=strict)
    return u_d, u, status, row, h_jet, p1


def _abort(summary, name, error, t, step=None):
    if isinstance(error, InfeasibleQPError):
        error.t = t if error.t is None else error.t
        summary.status, summary.exit_code = "infeasible_abort", EXIT_INFEASIBLE
        summary.message = f"t={error.t:.4f}: {error}"
        logger.error(f"{name}: QP 不可行, 中止运行 ({summary.message})")
    elif isinstance(error, IntegrationError):
        error.step, error.t = step, t
        summary.status, summary.exit_code = "integration_failure", EXIT_INTEGRATION_FAILURE
        summary.message = f"step {step}, t={t:.4f}: {error}"
        logger.error(f"{name}: 积分失败 ({summary.message})")
    else:
        summary.status, summary.exit_code = "integration_failure", EXIT_INTEGRATION_FAILURE
        summary.message = f"t={t:.4f}: {error}"
        logger.error(f"{name}: 数值错误, 中止运行 ({summary.message})")


def run(scenario):
    """Simulate a scenario and return its RunLog.

    Records are taken on the dt grid. Between grid points the control-affine
    plants are integrated in closed loop with the filter re-evaluated at every
    integrator stage; the full quadrotor holds its attitude commands for dt.
    Strict-mode infeasibility and integration failures end the run early; the
    log up to the failure is returned with the summary status set.
    """
    cbf, run_params = scenario.cbf, scenario.run
    plant = make_plant(scenario.plant, scenario.gains)
    cascade = cbf.cascade()
    homotopy = cbf.homotopy()
    spe = _steps_per_epoch(cbf.T_s, run_params.dt)
    if spe is None:
        raise ScenarioError(f"T_s={cbf.T_s} must be a whole multiple of dt={run_params.dt}")
    n_steps = int(round(run_params.duration / run_params.dt))
    goals = [np.asarray(goal, dtype=float) for goal in scenario.goals]

    log = RunLog(scenario=scenario, state_labels=plant.state_labels, control_labels=plant.control_labels)
    summary = RunSummary(name=scenario.name, plant=scenario.plant)
    state = plant.initial_state(scenario.x0)
    buffer = None
    goal_index = 0
    logger.info(f"{scenario.name}: {scenario.plant} for {run_params.duration} s, "
                f"{n_steps} steps, T_s={cbf.T_s}, seed={run_params.seed}, {scenario.filter_mode}")

    for i in range(n_steps + 1):
        t = i * run_params.dt
        position = np.asarray(plant.position(state), dtype=float)
        try:
            if i % spe == 0:
                k = i // spe
                barrier, sc = _perceive(scenario, plant, state, k)
                if buffer is None:
                    buffer = BarrierBuffer.warm_start(barrier, cbf.N, cbf.T_s, cbf.kappa, homotopy)
                else:
                    buffer = advance_epoch(buffer, barrier)
                log.epochs.append(EpochRecord(k, t, sc.origin, sc.ranges, barrier))
                message = (f"epoch {k} t={t:.2f} position={np.round(position, 3).tolist()} "
                           f"{len(barrier)} primitives, nearest {sc.ranges.min():.3f} m")
                if run_params.log_every_epochs > 0 and k % run_params.log_every_epochs == 0:
                    logger.info(message)
                else:
                    logger.debug(message)

            while goal_index < len(goals) - 1 and \
                    np.linalg.norm(position - goals[goal_index]) < run_params.goal_tolerance:
                goal_index += 1
                logger.info(f"t={t:.2f}: waypoint {goal_index - 1} reached, heading to {goals[goal_index].tolist()}")

            u_d, u, status, row, h_jet, p1 = _filtered_control(plant, buffer, cascade, goals[goal_index],
                                                               scenario.strict, state, t)
        except (InfeasibleQPError, NumericalError) as e:
            _abort(summary, scenario.name, e, t)
            break

        if scenario.world.penetrates(position):
            summary.penetrations += 1
        log.steps.append(StepRecord(t=t, state=plant.log_vector(state), u_d=u_d, u=u, h=h_jet.value,
                                    psi1=p1.value if p1 is not None else math.nan,
                                    status=status.value, a=row.a, b=row.b, goal_index=goal_index))
        if i == n_steps:
            break

        try:
            if plant.continuous:
                goal = goals[goal_index]

                def control(y, s):
                    return _filtered_control(plant, buffer, cascade, goal, scenario.strict, y, s)[1]

                state = closed_loop_step(plant.rhs, state, control, t, (i + 1) * run_params.dt)
            else:
                state = plant.step(state, u, run_params.dt)
            if not np.all(np.isfinite(plant.log_vector(state))):
                raise IntegrationError("plant state became non-finite")
        except (InfeasibleQPError, NumericalError, IntegrationError) as e:
            _abort(summary, scenario.name, e, t, step=i)
            break

    summary.final_goal_distance = float(np.linalg.norm(np.asarray(plant.position(state)) - goals[-1]))
    summary.goals_reached = goal_index + int(summary.final_goal_distance < run_params.goal_tolerance)
    summary.clamped_commands = getattr(plant, "clamped_commands", 0)
    return _finish(log, summary)


# ---------------------------------------------------------------------------
# Output files
# ---------------------------------------------------------------------------

def _fmt(value):
    value = float(value)
    if math.isnan(value):
        return ""
    return format(value, ".12g")


def steps_header(log):
    return (["t"] + list(log.state_labels)
            + [f"u_d_{label}" for label in log.control_labels]
            + [f"u_{label}" for label in log.control_labels]
            + ["h", "psi1", "qp_status"])


def write_steps_csv(log, path):
    with open(path, 'w', newline='', encoding='utf-8') as f:
        writer = csv.writer(f)
        writer.writerow(steps_header(log))
        for record in log.steps:
            writer.writerow([_fmt(record.t)] + [_fmt(v) for v in record.state]
                            + [_fmt(v) for v in record.u_d] + [_fmt(v) for v in record.u]
                            + [_fmt(record.h), _fmt(record.psi1), record.status])


def write_constraints_csv(log, path):
    with open(path, 'w', newline='', encoding='utf-8') as f:
        writer = csv.writer(f)
        writer.writerow(["t"] + [f"a_{label}" for label in log.control_labels]
                        + ["b", "qp_status", "correction"])
        for record in log.steps:
            correction = float(np.linalg.norm(record.u - record.u_d))
            writer.writerow([_fmt(record.t)] + [_fmt(v) for v in record.a]
                            + [_fmt(record.b), record.status, _fmt(correction)])


def write_summary(log, path):
    data = {"summary": log.summary.to_dict(), "scenario": scenario_to_dict(log.scenario)}
    with open(path, 'w', encoding='utf-8') as f:
        json.dump(data, f, indent=4)


def write_epochs(log, path):
    with open(path, 'w', encoding='utf-8') as f:
        for epoch in log.epochs:
            f.write(json.dumps(epoch.to_dict()) + "\n")


def write_outputs(log, out_dir, dump_epochs=False):
    os.makedirs(out_dir, exist_ok=True)
    write_steps_csv(log, os.path.join(out_dir, "steps.csv"))
    write_constraints_csv(log, os.path.join(out_dir, "constraints.csv"))
    write_summary(log, os.path.join(out_dir, "summary.json"))
    if dump_epochs:
        write_epochs(log, os.path.join(out_dir, "epochs.jsonl"))


def run_to_directory(scenario, out_dir, dump_epochs=False):
    """Run a scenario with run.log captured in out_dir, then write every output file"""
    os.makedirs(out_dir, exist_ok=True)
    handler = logging.FileHandler(os.path.join(out_dir, "run.log"), mode='w', encoding='utf-8')
    handler.setFormatter(logging.Formatter('%(asctime)s - %(name)s - %(levelname)s - %(message)s'))
    root = logging.getLogger()
    root.addHandler(handler)
    try:
        log = run(scenario)
        write_outputs(log, out_dir, dump_epochs)
    finally:
        root.removeHandler(handler)
        handler.close()
    return log


def _batch_worker(scenario, out_dir, dump_epochs):
    return run_to_directory(scenario, out_dir, dump_epochs).summary


def run_batch(scenarios, out_dir, workers=None, dump_epochs=False):
    """Run independent scenarios in a process pool; summaries come back in input order"""
    names = [scenario.name for scenario in scenarios]
    if len(set(names)) != len(names):
        raise ScenarioError(f"batch scenario names must be unique: {names}")
    with ProcessPoolExecutor(max_workers=workers) as pool:
        futures = [pool.submit(_batch_worker, copy.deepcopy(scenario), os.path.join(out_dir, scenario.name),
                               dump_epochs)
                   for scenario in scenarios]
        return [future.result() for future in futures]
