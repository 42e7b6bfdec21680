"""Synthetic labeled sonar datasets from wall-following poses.

Samples poses scattered along the four walls at varying offsets, along-
track positions and small yaw misalignments, scans each pose with the
noisy sonar and keeps drawing until the requested per-class counts are
met exactly.  Labels come from the same ground-truth rule the simulator
uses, so training data and in-mission truth agree by construction.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .seeding import named_stream
from .tank import BEAM_OFFSETS_DEG, TankGeometry, simulate_sonar, wall_parallel_heading

__all__ = ["FEATURE_NAMES", "Dataset", "generate_dataset", "save_dataset_csv", "load_dataset_csv"]

FEATURE_NAMES = tuple(f"r{int(off)}" for off in BEAM_OFFSETS_DEG)
CSV_HEADER = ",".join(FEATURE_NAMES) + ",label"


@dataclass
class Dataset:
    """Feature matrix (metres) plus 0/1 contour labels."""

    X: np.ndarray
    y: np.ndarray
    feature_names: tuple[str, ...] = FEATURE_NAMES

    def __post_init__(self):
        self.X = np.asarray(self.X, dtype=float)
        self.y = np.asarray(self.y, dtype=int)
        if self.X.ndim != 2 or self.X.shape[0] != self.y.shape[0]:
            raise ValueError("feature/label row mismatch")
        if self.X.shape[0] < 2:
            raise ValueError("dataset needs at least two rows")
        if not np.isfinite(self.X).all():
            raise ValueError("non-finite features")
        if not np.isin(self.y, (0, 1)).all():
            raise ValueError("labels must be 0/1")

    @property
    def n_samples(self) -> int:
        return self.X.shape[0]

    def class_counts(self) -> tuple[int, int]:
        return int((self.y == 0).sum()), int((self.y == 1).sum())


def _pose_on_wall(tank, wall, along, offset, jitter, direction):
    heading = (wall_parallel_heading(wall, direction) + jitter) % 360.0
    if wall == 1:
        x, y = along, offset
    elif wall == 2:
        x, y = tank.width - offset, along
    elif wall == 3:
        x, y = tank.width - along, tank.length - offset
    else:
        x, y = offset, tank.length - along
    return x, y, heading


def generate_dataset(
    tank: TankGeometry | None = None,
    n_wall: int = 400,
    n_corner: int = 388,
    sigma: float = 0.02,
    seed: int = 0,
    offset_range: tuple[float, float] = (0.35, 1.7),
    yaw_jitter: float = 10.0,
    direction: str = "anticlockwise",
) -> Dataset:
    """Draw scans until both class buckets are full; deterministic per seed."""
    tank = tank or TankGeometry()
    if n_wall < 1 or n_corner < 1:
        raise ValueError("need at least one sample per class")
    lo, hi = offset_range
    if not (0.05 < lo < hi < min(tank.width, tank.length) - 0.05):
        raise ValueError(f"offset range {offset_range} does not fit the tank")
    rng = named_stream(seed, "dataset")
    side = "starboard" if direction == "anticlockwise" else "port"
    rows: list[tuple[float, ...]] = []
    labels: list[int] = []
    need = {0: n_wall, 1: n_corner}
    budget = 200 * (n_wall + n_corner)
    for _ in range(budget):
        if need[0] == 0 and need[1] == 0:
            break
        wall = int(rng.integers(1, 5))
        span = tank.width if wall in (1, 3) else tank.length
        along = rng.uniform(0.1, span - 0.1)
        offset = rng.uniform(lo, hi)
        jitter = rng.uniform(-yaw_jitter, yaw_jitter)
        x, y, heading = _pose_on_wall(tank, wall, along, offset, jitter, direction)
        scan = simulate_sonar(tank, x, y, heading, sigma=sigma, rng=rng, side=side)
        if need[scan.label] == 0:
            continue
        need[scan.label] -= 1
        rows.append(scan.ranges)
        labels.append(scan.label)
    else:
        raise RuntimeError(
            f"could not reach class counts ({n_wall}, {n_corner}) within the draw budget"
        )
    return Dataset(np.array(rows), np.array(labels))


def save_dataset_csv(dataset: Dataset, path) -> None:
    """Write `r180,...,r148,label` rows with round-trip-exact floats."""
    lines = [CSV_HEADER]
    for row, label in zip(dataset.X, dataset.y):
        lines.append(",".join(repr(float(v)) for v in row) + f",{int(label)}")
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def load_dataset_csv(path) -> Dataset:
    text = Path(path).read_text(encoding="utf-8")
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines or lines[0] != CSV_HEADER:
        raise ValueError(
            f"line 1: expected header {CSV_HEADER!r}, got {lines[0] if lines else ''!r}"
        )
    rows = []
    labels = []
    for lineno, line in enumerate(lines[1:], start=2):
        parts = line.split(",")
        if len(parts) != len(FEATURE_NAMES) + 1:
            raise ValueError(f"line {lineno}: expected {len(FEATURE_NAMES) + 1} fields")
        try:
            rows.append([float(v) for v in parts[:-1]])
            label = int(parts[-1])
        except ValueError:
            raise ValueError(f"line {lineno}: malformed number") from None
        if label not in (0, 1):
            raise ValueError(f"line {lineno}: label must be 0 or 1")
        labels.append(label)
    return Dataset(np.array(rows), np.array(labels))
