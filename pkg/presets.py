"""Named CBF parameter sets and ready-to-run scenarios.

The maps are hand-built convex-primitive worlds: a walled 2D room with a few
blocks for the ground robot and a field of pillars over a ground slab for
the quadrotor.
"""
import copy
import json

from cbf_errors import ScenarioError

CBF_PRESETS = {
    "ground-360": {
        "kappa1": 20.0, "kappa": 20.0, "N": 2, "P": 100, "L": 400, "T_s": 0.2,
        "lam": 1.0, "r": 2, "alpha1": 20.0, "alpha2": 20.0,
        "d_w": 0.3, "d_s": 0.3, "r_bar": 5.0, "fov_deg": 360.0, "apex_clearance": 0.8,
    },
    "ground-fov": {
        "kappa1": 30.0, "kappa": 30.0, "N": 6, "P": 100, "L": 400, "T_s": 0.2,
        "lam": 1.0, "r": 2, "alpha1": 30.0, "alpha2": 30.0,
        "d_w": 0.3, "d_s": 0.3, "r_bar": 5.0, "fov_deg": 100.0, "apex_clearance": 0.8,
    },
    "quadrotor": {
        "kappa1": 20.0, "kappa": 20.0, "N": 3, "P": 300, "L": 400, "T_s": 0.2,
        "lam": 1.0, "r": 2, "alpha1": 40.0, "alpha2": 2.5,
        "d_w": 1.4, "d_s": 0.1, "r_bar": 10.0, "fov_deg": 360.0, "apex_clearance": 0.8,
    },
}

DEFAULT_CBF_PRESET = "ground-360"

GROUND_ROOM = {
    "dimension": 2,
    "bounds": [[-2.0, 17.0], [-2.0, 16.0]],
    "obstacles": [
        # walls, inner faces at x = -1, x = 16, y = -0.5, y = 15
        {"type": "rectangle", "center": [-1.5, 7.5], "half_extents": [0.5, 8.0], "angle_deg": 0.0},
        {"type": "rectangle", "center": [16.5, 7.5], "half_extents": [0.5, 8.0], "angle_deg": 0.0},
        {"type": "rectangle", "center": [7.5, -1.0], "half_extents": [9.5, 0.5], "angle_deg": 0.0},
        {"type": "rectangle", "center": [7.5, 15.5], "half_extents": [9.5, 0.5], "angle_deg": 0.0},
        {"type": "circle", "center": [9.0, 1.7], "radius": 0.8},
        {"type": "rectangle", "center": [14.0, 8.5], "half_extents": [1.2, 0.5], "angle_deg": 0.0},
        {"type": "rectangle", "center": [4.5, 7.5], "half_extents": [0.8, 0.4], "angle_deg": 30.0},
        {"type": "circle", "center": [3.5, 13.4], "radius": 0.6},
        {"type": "circle", "center": [13.5, 12.0], "radius": 1.0},
        {"type": "rectangle", "center": [1.5, 4.5], "half_extents": [0.5, 1.0], "angle_deg": 0.0},
    ],
}

PILLAR_FIELD = {
    "dimension": 3,
    "bounds": [[-15.0, 15.0], [-15.0, 15.0], [-1.0, 15.0]],
    "obstacles": [
        {"type": "box", "center": [0.0, 0.0, -0.5], "half_extents": [15.0, 15.0, 0.5]},
        {"type": "cylinder", "center_xy": [4.5, 0.5], "radius": 0.8, "z_min": 0.0, "z_max": 12.0},
        {"type": "cylinder", "center_xy": [-2.17, -1.91], "radius": 0.8, "z_min": 0.0, "z_max": 12.0},
        {"type": "cylinder", "center_xy": [7.5, -3.0], "radius": 1.0, "z_min": 0.0, "z_max": 12.0},
        {"type": "cylinder", "center_xy": [-1.66, -7.41], "radius": 1.0, "z_min": 0.0, "z_max": 12.0},
        {"type": "cylinder", "center_xy": [-6.0, 8.0], "radius": 0.8, "z_min": 0.0, "z_max": 12.0},
        {"type": "cylinder", "center_xy": [-5.0, 10.4], "radius": 0.7, "z_min": 0.0, "z_max": 12.0},
        {"type": "cylinder", "center_xy": [-9.6, 5.0], "radius": 0.8, "z_min": 0.0, "z_max": 12.0},
    ],
}

GROUND_RUN = {"duration": 60.0, "dt": 0.005, "seed": 0, "goal_tolerance": 0.3, "log_every_epochs": 25}
QUAD_RUN = {"duration": 60.0, "dt": 0.005, "seed": 0, "goal_tolerance": 0.5, "log_every_epochs": 25}

SCENARIO_PRESETS = {
    "ground-360": {
        "name": "ground-360",
        "plant": "unicycle",
        "cbf_preset": "ground-360",
        "world": GROUND_ROOM,
        "x0": [5.0, 2.0, 0.0, 0.0],
        "goals": [[13.0, 5.0], [10.0, 13.0], [1.0, 11.0]],
        "run": GROUND_RUN,
        "filter_mode": "strict",
    },
    "ground-360-single": {
        "name": "ground-360-single",
        "plant": "unicycle",
        "cbf_preset": "ground-360",
        "world": GROUND_ROOM,
        "x0": [5.0, 2.0, 0.0, 0.0],
        "goals": [[13.0, 5.0]],
        "run": dict(GROUND_RUN, duration=30.0),
        "filter_mode": "strict",
    },
    "ground-fov": {
        "name": "ground-fov",
        "plant": "unicycle",
        "cbf_preset": "ground-fov",
        "world": GROUND_ROOM,
        "x0": [5.0, 2.0, 0.0, 0.0],
        "goals": [[13.0, 5.0], [11.0, 2.0], [10.0, 13.0], [1.0, 11.0]],
        "run": GROUND_RUN,
        "filter_mode": "strict",
    },
    "quadrotor": {
        "name": "quadrotor",
        "plant": "quad_full",
        "cbf_preset": "quadrotor",
        "world": PILLAR_FIELD,
        "x0": [8.0, -10.0, 5.0, 0.0, 0.0, 0.0],
        "goals": [[0.0, 10.0, 5.0], [-10.0, 10.0, 8.0], [-10.0, 0.0, 3.0]],
        "run": QUAD_RUN,
        "filter_mode": "strict",
    },
    "double-integrator": {
        "name": "double-integrator",
        "plant": "quad_approx",
        "cbf_preset": "quadrotor",
        "world": PILLAR_FIELD,
        "x0": [8.0, -10.0, 5.0, 0.0, 0.0, 0.0],
        "goals": [[0.0, 10.0, 5.0]],
        "run": dict(QUAD_RUN, duration=30.0),
        "filter_mode": "strict",
    },
    "empty-ground": {
        "name": "empty-ground",
        "plant": "unicycle",
        "cbf_preset": "ground-360",
        "world": {"dimension": 2, "obstacles": []},
        "x0": [5.0, 2.0, 0.0, 0.0],
        "goals": [[8.0, 2.0]],
        "run": dict(GROUND_RUN, duration=10.0),
        "filter_mode": "strict",
    },
}


def list_presets():
    return sorted(SCENARIO_PRESETS)


def get_preset(name):
    """Scenario dict of a named preset (a fresh copy, safe to modify)"""
    if name not in SCENARIO_PRESETS:
        raise ScenarioError(f"unknown preset {name!r}; available: {', '.join(list_presets())}")
    return copy.deepcopy(SCENARIO_PRESETS[name])


def get_cbf_preset(name):
    if name not in CBF_PRESETS:
        raise ScenarioError(f"unknown CBF preset {name!r}; available: {', '.join(sorted(CBF_PRESETS))}")
    return dict(CBF_PRESETS[name])


def export_preset(name, path):
    """Write a preset as an editable scenario file"""
    with open(path, 'w', encoding='utf-8') as f:
        json.dump(get_preset(name), f, indent=4)
