"""Hierarchical navigation: behavior coordination and mission execution.

The high level evaluates three predicates every step - heading misaligned,
depth off target, corner contour detected - and maps them to the active
behavior set through a fixed table:

    depth behavior     active whenever the depth predicate holds
    corner-turn        active whenever a corner is detected (latched)
    heading behavior   active when misaligned and no corner is latched
    edge-distance      active whenever no corner is latched

Corner detection latches after ``corner_streak`` consecutive smoothed
scores at or above the class threshold and releases after the same number
of consecutive sub-threshold scores once the commanded rotation is done.
The maneuver rotates the heading setpoint 90 degrees toward the next
wall; if the contour still reads as a corner well after the rotation
completed, another 90 degrees is chained so the vehicle can round deep
corner regions without ever driving at a wall.

Wall handoffs re-seed the edge-distance target at the currently measured
beam range and slew it toward the configured per-wall target, so the edge
error always measures the regulation quality rather than the geometry of
the previous wall.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path

from .control import (
    FPDConfig,
    FPDState,
    behavior_error,
    controller_step,
    heading_reference,
    shortest_arc_deg,
    wrap_deg,
)
from .inference import ScoreWindow, TSKIT2Model
from .reduction import NoRuleFiredError
from .seeding import named_stream
from .tank import BEAM_OFFSETS_DEG, TankGeometry, simulate_sonar, wall_parallel_heading
from .vehicle import Commands, KinematicsConfig, VehicleState, step_vehicle

__all__ = [
    "BehaviorSet",
    "coordinate_behaviors",
    "MissionConfig",
    "MissionLog",
    "run_mission",
    "write_mission_csv",
    "write_mission_summary",
]

MISSION_CONFIG_FORMAT = "mission-config"
MISSION_CONFIG_VERSION = 1


@dataclass(frozen=True)
class BehaviorSet:
    """Low-level behaviors active for one step."""

    heading: bool
    depth: bool
    edge: bool
    corner_turn: bool

    def names(self) -> tuple[str, ...]:
        out = []
        if self.corner_turn:
            out.append("corner_turn")
        if self.heading:
            out.append("heading")
        if self.depth:
            out.append("depth")
        if self.edge:
            out.append("edge")
        return tuple(out)


def coordinate_behaviors(
    heading_error: float,
    depth_error: float,
    corner_detected: bool,
    heading_tolerance: float = 5.0,
    depth_tolerance: float = 0.05,
) -> BehaviorSet:
    """Map the three predicates onto the active behavior set.

    Total over all eight predicate combinations and never empty: with no
    predicate raised the vehicle still cruises under edge-distance
    control.
    """
    if not (math.isfinite(heading_error) and math.isfinite(depth_error)):
        raise ValueError("predicate inputs must be finite")
    p_heading = abs(heading_error) >= heading_tolerance
    p_depth = abs(depth_error) >= depth_tolerance
    p_corner = bool(corner_detected)
    return BehaviorSet(
        heading=p_heading and not p_corner,
        depth=p_depth,
        edge=not p_corner,
        corner_turn=p_corner,
    )


def _default_gains() -> dict:
    return {
        "heading": {"gain_error": 1.0 / 40.0, "gain_delta": 0.1, "gain_output": 0.12},
        "depth": {"gain_error": 1.0 / 1.0, "gain_delta": 4.0, "gain_output": 0.08},
        "edge": {"gain_error": 1.0 / 0.8, "gain_delta": 4.0, "gain_output": 0.05},
    }


@dataclass
class MissionConfig:
    """Everything a mission run needs besides the classifier itself."""

    circuits: int = 2                      # per depth setpoint
    depth_setpoints: tuple[float, ...] = (0.0, 2.0)
    edge_target: float = 0.65
    edge_overrides: dict[int, float] = field(default_factory=lambda: {4: 1.5})
    direction: str = "anticlockwise"
    sigma_sonar: float = 0.02
    sigma_compass: float = 0.5
    sigma_depth: float = 0.01
    dt: float = 0.1
    seed: int = 0
    max_sim_time: float = 5400.0
    depth_tolerance: float = 0.05
    heading_tolerance: float = 5.0
    corner_streak: int = 3
    smoothing_window: int = 4
    target_slew_rate: float = 0.03         # m/s for edge-target ramping
    chain_patience: float = 3.0            # s of sustained corner before chaining +90
    range_filter_alpha: float = 0.4        # low-pass factor for control-side ranges
    gains: dict = field(default_factory=_default_gains)

    def validate(self, tank: TankGeometry) -> None:
        if self.circuits < 1:
            raise ValueError("need at least one circuit per depth")
        if not self.depth_setpoints:
            raise ValueError("need at least one depth setpoint")
        for d in self.depth_setpoints:
            if not (0.0 <= d <= tank.depth):
                raise ValueError(f"depth setpoint {d} outside [0, {tank.depth}]")
        if not (0.0 < self.edge_target < min(tank.width, tank.length) / 2):
            raise ValueError("edge target must be below half the tank width")
        for wall, target in self.edge_overrides.items():
            if wall not in (1, 2, 3, 4):
                raise ValueError(f"unknown wall {wall} in edge overrides")
            if not (0.0 < target < min(tank.width, tank.length) - 0.5):
                raise ValueError(f"edge override {target} does not fit the tank")
        if self.direction not in ("anticlockwise", "clockwise"):
            raise ValueError(f"unknown direction {self.direction!r}")
        if self.dt <= 0 or self.max_sim_time <= 0:
            raise ValueError("dt and max_sim_time must be positive")
        if min(self.sigma_sonar, self.sigma_compass, self.sigma_depth) < 0:
            raise ValueError("noise levels must be >= 0")
        if self.corner_streak < 1 or self.smoothing_window < 1:
            raise ValueError("streak and window lengths must be >= 1")

    def wall_target(self, wall: int) -> float:
        return float(self.edge_overrides.get(wall, self.edge_target))

    def to_dict(self) -> dict:
        return {
            "format": MISSION_CONFIG_FORMAT,
            "version": MISSION_CONFIG_VERSION,
            "circuits": self.circuits,
            "depth_setpoints": list(self.depth_setpoints),
            "edge_target": self.edge_target,
            "edge_overrides": {str(k): v for k, v in self.edge_overrides.items()},
            "direction": self.direction,
            "sigma_sonar": self.sigma_sonar,
            "sigma_compass": self.sigma_compass,
            "sigma_depth": self.sigma_depth,
            "dt": self.dt,
            "seed": self.seed,
            "max_sim_time": self.max_sim_time,
            "depth_tolerance": self.depth_tolerance,
            "heading_tolerance": self.heading_tolerance,
            "corner_streak": self.corner_streak,
            "smoothing_window": self.smoothing_window,
            "target_slew_rate": self.target_slew_rate,
            "chain_patience": self.chain_patience,
            "range_filter_alpha": self.range_filter_alpha,
            "gains": self.gains,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "MissionConfig":
        if data.get("format", MISSION_CONFIG_FORMAT) != MISSION_CONFIG_FORMAT:
            raise ValueError(f"not a {MISSION_CONFIG_FORMAT} document")
        version = data.get("version", MISSION_CONFIG_VERSION)
        if version != MISSION_CONFIG_VERSION:
            raise ValueError(f"unsupported mission config version {version!r}")
        kwargs = {k: v for k, v in data.items() if k not in ("format", "version")}
        if "depth_setpoints" in kwargs:
            kwargs["depth_setpoints"] = tuple(kwargs["depth_setpoints"])
        if "edge_overrides" in kwargs:
            kwargs["edge_overrides"] = {
                int(k): float(v) for k, v in kwargs["edge_overrides"].items()
            }
        return cls(**kwargs)


@dataclass
class MissionLog:
    """Per-step records plus the aggregate outcome."""

    rows: list[dict] = field(default_factory=list)
    completed: bool = False
    circuits_completed: int = 0
    collisions: int = 0
    no_fire_events: int = 0
    classified_steps: int = 0
    correct_steps: int = 0
    confusion: dict = field(default_factory=lambda: {"tp": 0, "fp": 0, "fn": 0, "tn": 0})
    edge_abs_error_sum: float = 0.0
    edge_steps: int = 0
    sim_time: float = 0.0

    @property
    def classification_accuracy(self) -> float:
        return self.correct_steps / self.classified_steps if self.classified_steps else 0.0

    @property
    def mean_abs_edge_error(self) -> float:
        return self.edge_abs_error_sum / self.edge_steps if self.edge_steps else 0.0

    def summary(self) -> dict:
        return {
            "completed": self.completed,
            "circuits_completed": self.circuits_completed,
            "collisions": self.collisions,
            "steps": len(self.rows),
            "sim_time_s": self.sim_time,
            "mean_abs_edge_error_m": self.mean_abs_edge_error,
            "edge_steps": self.edge_steps,
            "classification_accuracy": self.classification_accuracy,
            "confusion": dict(self.confusion),
            "no_fire_events": self.no_fire_events,
        }


CSV_COLUMNS = (
    "t,x,y,depth,heading,r180,r172,r164,r156,r148,"
    "raw_score,smoothed_score,predicted_class,true_class,behaviors,"
    "u_yaw,u_surge,u_heave"
)


def write_mission_csv(log: MissionLog, path) -> None:
    lines = [CSV_COLUMNS]
    for row in log.rows:
        lines.append(
            ",".join(
                [
                    repr(row["t"]),
                    repr(row["x"]),
                    repr(row["y"]),
                    repr(row["depth"]),
                    repr(row["heading"]),
                    *[repr(v) for v in row["ranges"]],
                    repr(row["raw_score"]),
                    repr(row["smoothed_score"]),
                    str(row["predicted_class"]),
                    str(row["true_class"]),
                    "|".join(row["behaviors"]) or "none",
                    repr(row["u_yaw"]),
                    repr(row["u_surge"]),
                    repr(row["u_heave"]),
                ]
            )
        )
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def write_mission_summary(log: MissionLog, path) -> None:
    doc = {"format": "mission-summary", "version": 1, **log.summary()}
    Path(path).write_text(
        json.dumps(doc, indent=2, sort_keys=True) + "\n", encoding="utf-8"
    )


def _advance_wall(wall: int, turns: int, direction: str) -> int:
    step = 1 if direction == "anticlockwise" else -1
    return (wall - 1 + step * turns) % 4 + 1


class _Controller:
    """Owns one FPD behavior's config/state; resets on re-activation."""

    def __init__(self, cfg: FPDConfig):
        self.cfg = cfg
        self.state = FPDState()
        self.was_active = False

    def step(self, reference: float, measurement: float) -> float:
        if not self.was_active:
            self.state = FPDState()
            self.was_active = True
        u, self.state = controller_step(self.cfg, self.state, reference, measurement)
        return u

    def deactivate(self) -> None:
        self.was_active = False


def run_mission(
    cfg: MissionConfig,
    model: TSKIT2Model,
    tank: TankGeometry | None = None,
    kinematics: KinematicsConfig | None = None,
) -> MissionLog:
    """Execute the full multi-circuit mission; deterministic per seed."""
    tank = tank or TankGeometry()
    kin = kinematics or KinematicsConfig()
    cfg.validate(tank)

    rng_start = named_stream(cfg.seed, "start-pose")
    rng_sonar = named_stream(cfg.seed, "sonar-noise")
    rng_compass = named_stream(cfg.seed, "compass-noise")
    rng_depth = named_stream(cfg.seed, "depth-noise")

    side = "starboard" if cfg.direction == "anticlockwise" else "port"
    turn_sign = 1.0 if cfg.direction == "anticlockwise" else -1.0
    # steering toward the followed wall is clockwise when it lies to starboard
    edge_yaw_sign = 1.0 if side == "starboard" else -1.0

    margin = kin.hull_radius + 0.2
    state = VehicleState(
        x=float(rng_start.uniform(margin, tank.width - margin)),
        y=float(rng_start.uniform(margin, tank.length - margin)),
        depth=float(cfg.depth_setpoints[0]),
        heading=float(rng_start.uniform(0.0, 360.0)),
    )

    heading_ctl = _Controller(FPDConfig(**cfg.gains["heading"]))
    depth_ctl = _Controller(FPDConfig(**cfg.gains["depth"]))
    edge_ctl = _Controller(FPDConfig(**cfg.gains["edge"]))

    window = ScoreWindow(cfg.smoothing_window)
    log = MissionLog()

    wall = tank.nearest_wall(state.x, state.y)
    phase = "align"
    align_target = wall_parallel_heading(wall, cfg.direction)
    turn_target = 0.0
    turns_pending = 0
    rotation_done = False
    clear_wait_steps = 0
    chain_patience_steps = max(1, int(round(cfg.chain_patience / cfg.dt)))
    high_streak = 0
    low_streak = 0
    total_turns = 0
    depth_idx = 0
    depth_settle = 0
    active_edge_target = None
    filtered_ranges = None
    prev_raw = 0.0
    max_steps = int(cfg.max_sim_time / cfg.dt)

    circuits_needed = cfg.circuits * len(cfg.depth_setpoints)

    for _ in range(max_steps):
        scan = simulate_sonar(
            tank,
            state.x,
            state.y,
            state.heading,
            sigma=cfg.sigma_sonar,
            rng=rng_sonar,
            side=side,
            t=state.t,
        )
        try:
            raw = model.predict(scan.ranges)
            prev_raw = raw
        except NoRuleFiredError:
            raw = prev_raw
            log.no_fire_events += 1
        smoothed = window.push(raw)
        predicted = 1 if smoothed >= model.threshold else 0

        if smoothed >= model.threshold:
            high_streak += 1
            low_streak = 0
        else:
            low_streak += 1
            high_streak = 0

        # control-side sensor conditioning
        if filtered_ranges is None:
            filtered_ranges = list(scan.ranges)
        else:
            a = cfg.range_filter_alpha
            filtered_ranges = [
                a * r + (1.0 - a) * f for r, f in zip(scan.ranges, filtered_ranges)
            ]
        d_c = filtered_ranges[0]
        idx_min = min(range(len(filtered_ranges)), key=filtered_ranges.__getitem__)
        theta_m = (180.0 - BEAM_OFFSETS_DEG[idx_min]) * (
            1.0 if side == "starboard" else -1.0
        )
        compass = wrap_deg(
            state.heading
            + (float(rng_compass.normal(0.0, cfg.sigma_compass)) if cfg.sigma_compass else 0.0)
        )
        depth_meas = state.depth + (
            float(rng_depth.normal(0.0, cfg.sigma_depth)) if cfg.sigma_depth else 0.0
        )

        d_ref = cfg.depth_setpoints[depth_idx]
        depth_err = behavior_error("depth", {"d_rov": depth_meas}, {"d_ref": d_ref})

        u_yaw = 0.0
        u_surge = 0.0
        u_heave = 0.0
        behaviors: tuple[str, ...] = ()
        edge_err = None

        if phase == "align":
            err = shortest_arc_deg(align_target - compass)
            u_yaw = heading_ctl.step(err, 0.0)
            if abs(depth_err) >= cfg.depth_tolerance:
                u_heave = depth_ctl.step(d_ref, depth_meas)
            else:
                depth_ctl.deactivate()
            behaviors = ("align",)
            if abs(err) <= cfg.heading_tolerance:
                phase = "follow"
                heading_ctl.deactivate()
                edge_ctl.deactivate()
                active_edge_target = d_c
        elif phase == "depth_change":
            err = shortest_arc_deg(align_target - compass)
            u_yaw = heading_ctl.step(err, 0.0)
            u_heave = depth_ctl.step(d_ref, depth_meas)
            behaviors = ("depth",)
            if abs(depth_err) <= cfg.depth_tolerance:
                depth_settle += 1
            else:
                depth_settle = 0
            if depth_settle >= 20:
                phase = "follow"
                heading_ctl.deactivate()
                depth_ctl.deactivate()
                edge_ctl.deactivate()
                active_edge_target = d_c
        else:
            corner_latched = phase == "corner"
            if phase == "follow" and high_streak >= cfg.corner_streak:
                phase = "corner"
                corner_latched = True
                turn_target = wrap_deg(compass + 90.0 * turn_sign)
                turns_pending = 1
                rotation_done = False
                clear_wait_steps = 0
                heading_ctl.deactivate()

            beta_ref = heading_reference(compass, theta_m)
            heading_err = behavior_error(
                "heading", {"beta_cp": compass}, {"beta_ref": beta_ref}
            )
            active = coordinate_behaviors(
                heading_err,
                depth_err,
                corner_latched,
                heading_tolerance=cfg.heading_tolerance,
                depth_tolerance=cfg.depth_tolerance,
            )
            behaviors = active.names()
            u_surge = 1.0

            if active.corner_turn:
                turn_err = shortest_arc_deg(turn_target - compass)
                u_yaw += heading_ctl.step(turn_err, 0.0)
                if not rotation_done and abs(turn_err) <= cfg.heading_tolerance:
                    rotation_done = True
                    clear_wait_steps = 0
                if rotation_done:
                    if high_streak > 0:
                        clear_wait_steps += 1
                        if clear_wait_steps >= chain_patience_steps:
                            turn_target = wrap_deg(turn_target + 90.0 * turn_sign)
                            turns_pending += 1
                            rotation_done = False
                            clear_wait_steps = 0
                    if low_streak >= cfg.corner_streak:
                        # hand off to the next wall
                        wall = _advance_wall(wall, turns_pending, cfg.direction)
                        total_turns += turns_pending
                        turns_pending = 0
                        phase = "follow"
                        heading_ctl.deactivate()
                        edge_ctl.deactivate()
                        active_edge_target = d_c
                        align_target = wall_parallel_heading(wall, cfg.direction)
                        log.circuits_completed = total_turns // 4
                        if (
                            log.circuits_completed
                            >= (depth_idx + 1) * cfg.circuits
                            and depth_idx + 1 < len(cfg.depth_setpoints)
                        ):
                            depth_idx += 1
                            depth_settle = 0
                            phase = "depth_change"
            else:
                if active.heading:
                    u_yaw += heading_ctl.step(heading_err, 0.0)
                else:
                    heading_ctl.deactivate()
                if active.edge:
                    goal = cfg.wall_target(wall)
                    slew = cfg.target_slew_rate * cfg.dt
                    delta = goal - active_edge_target
                    active_edge_target += min(max(delta, -slew), slew)
                    edge_err = behavior_error(
                        "edge", {"d_c": d_c}, {"d_w": active_edge_target}
                    )
                    u_yaw += edge_yaw_sign * edge_ctl.step(edge_err, 0.0)
                    log.edge_abs_error_sum += abs(edge_err)
                    log.edge_steps += 1
                else:
                    edge_ctl.deactivate()

            if active.depth:
                u_heave = depth_ctl.step(d_ref, depth_meas)
            else:
                depth_ctl.deactivate()

        u_yaw = min(max(u_yaw, -1.0), 1.0)

        log.classified_steps += 1
        if predicted == scan.label:
            log.correct_steps += 1
        key = ("tn", "fp", "fn", "tp")[scan.label * 2 + predicted]
        log.confusion[key] += 1

        log.rows.append(
            {
                "t": state.t,
                "x": state.x,
                "y": state.y,
                "depth": state.depth,
                "heading": state.heading,
                "ranges": scan.ranges,
                "raw_score": raw,
                "smoothed_score": smoothed,
                "predicted_class": predicted,
                "true_class": scan.label,
                "behaviors": behaviors,
                "u_yaw": u_yaw,
                "u_surge": u_surge,
                "u_heave": u_heave,
                "wall": wall,
                "phase": phase,
                "edge_error": edge_err,
            }
        )

        state, collided = step_vehicle(
            state, Commands(yaw=u_yaw, surge=u_surge, heave=u_heave), kin, tank, cfg.dt
        )
        if collided:
            log.collisions += 1

        if log.circuits_completed >= circuits_needed and phase == "follow":
            log.completed = True
            break

    log.sim_time = state.t
    return log
