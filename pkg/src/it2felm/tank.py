"""Rectangular tank geometry and the ray-cast scanning sonar.

The tank is axis aligned with its south-west corner at the origin; walls
are numbered counterclockwise 1 south (y=0), 2 east, 3 north, 4 west.
The sonar fans five beams from the hull, nominally spanning from abeam of
the followed wall toward the bow, and reports the exact ray-rectangle
intersection distance per beam plus Gaussian range noise.

Ground-truth contour labels come from the noise-free beam hits: a scan is
a *corner* when some beam lands within ``corner_radius`` of a tank
corner, otherwise a *wall*.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "BEAM_OFFSETS_DEG",
    "TankGeometry",
    "SonarScan",
    "cast_ray",
    "simulate_sonar",
    "wall_parallel_heading",
]

# Beam offsets relative to the scan datum; 180 deg looks at the followed wall.
BEAM_OFFSETS_DEG = (180.0, 172.0, 164.0, 156.0, 148.0)

LABEL_WALL = 0
LABEL_CORNER = 1


@dataclass(frozen=True)
class TankGeometry:
    """Axis-aligned water container; distances in metres."""

    width: float = 2.5   # x extent, walls 2/4
    length: float = 2.5  # y extent, walls 1/3
    depth: float = 3.5
    corner_radius: float = 0.45

    def __post_init__(self):
        if min(self.width, self.length, self.depth) <= 0:
            raise ValueError("tank dimensions must be positive")
        if not (0 < self.corner_radius < min(self.width, self.length) / 2):
            raise ValueError("corner radius must fit inside the tank")

    @property
    def corners(self) -> tuple[tuple[float, float], ...]:
        return (
            (0.0, 0.0),
            (self.width, 0.0),
            (self.width, self.length),
            (0.0, self.length),
        )

    @property
    def diagonal(self) -> float:
        return math.hypot(self.width, self.length)

    def contains(self, x: float, y: float, margin: float = 0.0) -> bool:
        return (
            margin <= x <= self.width - margin
            and margin <= y <= self.length - margin
        )

    def nearest_wall(self, x: float, y: float) -> int:
        distances = {1: y, 2: self.width - x, 3: self.length - y, 4: x}
        return min(distances, key=distances.get)

    def wall_distance(self, x: float, y: float, wall: int) -> float:
        if wall == 1:
            return y
        if wall == 2:
            return self.width - x
        if wall == 3:
            return self.length - y
        if wall == 4:
            return x
        raise ValueError(f"unknown wall {wall}")


def wall_parallel_heading(wall: int, direction: str = "anticlockwise") -> float:
    """Travel heading that keeps `wall` on the scanned side.

    Anticlockwise circuits visit walls 1-2-3-4 with the wall to starboard;
    clockwise circuits reverse both.
    """
    if direction == "anticlockwise":
        headings = {1: 0.0, 2: 90.0, 3: 180.0, 4: 270.0}
    elif direction == "clockwise":
        headings = {1: 180.0, 2: 270.0, 3: 0.0, 4: 90.0}
    else:
        raise ValueError(f"unknown direction {direction!r}")
    try:
        return headings[wall]
    except KeyError:
        raise ValueError(f"unknown wall {wall}") from None


def cast_ray(tank: TankGeometry, x: float, y: float, angle_deg: float) -> float:
    """Exact distance from (x, y) to the tank boundary along a direction."""
    if not tank.contains(x, y):
        raise ValueError(f"ray origin ({x}, {y}) outside the tank")
    rad = math.radians(angle_deg)
    dx = math.cos(rad)
    dy = math.sin(rad)
    t_x = math.inf
    t_y = math.inf
    if dx > 0.0:
        t_x = (tank.width - x) / dx
    elif dx < 0.0:
        t_x = -x / dx
    if dy > 0.0:
        t_y = (tank.length - y) / dy
    elif dy < 0.0:
        t_y = -y / dy
    return min(t_x, t_y)


@dataclass(frozen=True)
class SonarScan:
    """One five-beam sweep: noisy ranges plus ground-truth annotations."""

    ranges: tuple[float, ...]            # noisy, metres, BEAM_OFFSETS_DEG order
    true_ranges: tuple[float, ...]       # noise-free
    hit_points: tuple[tuple[float, float], ...]
    label: int                           # LABEL_WALL / LABEL_CORNER
    min_beam_bearing: float              # degrees toward the bow, from noisy ranges
    t: float = 0.0

    def __post_init__(self):
        if len(self.ranges) != len(BEAM_OFFSETS_DEG):
            raise ValueError("scan must carry one range per beam")
        if any(r <= 0 for r in self.ranges):
            raise ValueError("ranges must be positive")


def _beam_world_angles(heading_deg: float, side: str) -> list[float]:
    if side == "starboard":
        return [heading_deg + 90.0 - off for off in BEAM_OFFSETS_DEG]
    if side == "port":
        return [heading_deg - 90.0 + off for off in BEAM_OFFSETS_DEG]
    raise ValueError(f"unknown scan side {side!r}")


def simulate_sonar(
    tank: TankGeometry,
    x: float,
    y: float,
    heading_deg: float,
    sigma: float = 0.0,
    rng: np.random.Generator | None = None,
    side: str = "starboard",
    t: float = 0.0,
) -> SonarScan:
    """Scan from a pose; deterministic given the generator state.

    The ground-truth label and hit points ignore the range noise.  The
    minimum-range bearing uses the noisy ranges (it is what the vehicle
    would act on) and is signed so that a positive value always means
    "turn away from the scanned wall, toward the bow".
    """
    if sigma < 0:
        raise ValueError("noise sigma must be >= 0")
    if sigma > 0 and rng is None:
        raise ValueError("need a generator when sigma > 0")
    angles = _beam_world_angles(heading_deg, side)
    true_ranges = []
    hits = []
    for ang in angles:
        dist = cast_ray(tank, x, y, ang)
        rad = math.radians(ang)
        true_ranges.append(dist)
        hits.append((x + dist * math.cos(rad), y + dist * math.sin(rad)))
    if sigma > 0:
        noise = rng.normal(0.0, sigma, size=len(true_ranges))
        ranges = [
            min(max(r + float(n), 1e-6), tank.diagonal)
            for r, n in zip(true_ranges, noise)
        ]
    else:
        ranges = list(true_ranges)
    label = LABEL_WALL
    for hx, hy in hits:
        if any(math.hypot(hx - cx, hy - cy) <= tank.corner_radius for cx, cy in tank.corners):
            label = LABEL_CORNER
            break
    min_idx = min(range(len(ranges)), key=ranges.__getitem__)
    bearing = 180.0 - BEAM_OFFSETS_DEG[min_idx]
    if side == "port":
        bearing = -bearing
    return SonarScan(
        ranges=tuple(ranges),
        true_ranges=tuple(true_ranges),
        hit_points=tuple(hits),
        label=label,
        min_beam_bearing=bearing,
        t=t,
    )
