"""Decoupled kinematic vehicle model with first-order actuator lag.

Vertical and planar motion are independent; each normalised command in
[-1, 1] pulls the corresponding rate toward command * max_rate with a
fixed time constant, after which the pose integrates by explicit Euler.
Hitting a wall clamps the position and reports a collision instead of
raising.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .tank import TankGeometry

__all__ = ["VehicleState", "KinematicsConfig", "Commands", "step_vehicle"]


@dataclass(frozen=True)
class VehicleState:
    """Pose, rates and clock; heading in degrees [0, 360)."""

    x: float
    y: float
    depth: float
    heading: float
    surge_speed: float = 0.0
    heave_speed: float = 0.0
    yaw_rate: float = 0.0  # deg/s
    t: float = 0.0


@dataclass(frozen=True)
class KinematicsConfig:
    max_surge: float = 0.03       # m/s, cruise speed
    max_heave: float = 0.06       # m/s
    max_yaw_rate: float = 25.0    # deg/s
    tau: float = 0.5              # actuator lag time constant, s
    hull_radius: float = 0.2      # m, collision margin against the walls

    def __post_init__(self):
        if min(self.max_surge, self.max_heave, self.max_yaw_rate, self.tau) <= 0:
            raise ValueError("kinematic limits must be positive")


@dataclass(frozen=True)
class Commands:
    """Normalised actuator commands; values are clipped to [-1, 1]."""

    yaw: float = 0.0
    surge: float = 0.0
    heave: float = 0.0

    def clipped(self) -> "Commands":
        clip = lambda v: min(max(float(v), -1.0), 1.0)  # noqa: E731
        return Commands(clip(self.yaw), clip(self.surge), clip(self.heave))


def step_vehicle(
    state: VehicleState,
    commands: Commands,
    kin: KinematicsConfig,
    tank: TankGeometry,
    dt: float,
) -> tuple[VehicleState, bool]:
    """Advance one step; returns (new state, collided_with_wall)."""
    if dt <= 0:
        raise ValueError("dt must be positive")
    cmd = commands.clipped()
    alpha = dt / kin.tau
    surge = state.surge_speed + alpha * (cmd.surge * kin.max_surge - state.surge_speed)
    heave = state.heave_speed + alpha * (cmd.heave * kin.max_heave - state.heave_speed)
    yaw = state.yaw_rate + alpha * (cmd.yaw * kin.max_yaw_rate - state.yaw_rate)

    heading = (state.heading + yaw * dt) % 360.0
    rad = math.radians(heading)
    x = state.x + surge * math.cos(rad) * dt
    y = state.y + surge * math.sin(rad) * dt
    depth = min(max(state.depth + heave * dt, 0.0), tank.depth)

    lo = kin.hull_radius
    collided = not (lo <= x <= tank.width - lo and lo <= y <= tank.length - lo)
    x = min(max(x, lo), tank.width - lo)
    y = min(max(y, lo), tank.length - lo)

    new_state = VehicleState(
        x=x,
        y=y,
        depth=depth,
        heading=heading,
        surge_speed=surge,
        heave_speed=heave,
        yaw_rate=yaw,
        t=state.t + dt,
    )
    return new_state, collided
