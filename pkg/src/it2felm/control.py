"""Incremental interval type-2 fuzzy PD controllers.

Each controller scales the error and its first difference into [-1, 1],
fires a 3x3 rule base of triangular IT2 sets against them, reduces the
rule outputs with the closed-form Wu-Mendel bounds and integrates the
scaled correction onto the previous command.  The incremental form gives
implicit integral action, so a persistent error keeps nudging the output.

The default rule table is antisymmetric, which makes the fuzzy mapping an
odd function: negating both inputs negates the output exactly (the rule
sums use exact accumulation, so the symmetry survives floating point).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Mapping

from .membership import TriangularMF, eval_triangular
from .reduction import wu_mendel_bounds

__all__ = [
    "wrap_deg",
    "shortest_arc_deg",
    "heading_reference",
    "behavior_error",
    "IT2Triangular",
    "FPDConfig",
    "FPDState",
    "controller_step",
    "fuzzy_correction",
]


def wrap_deg(angle: float) -> float:
    """Wrap an angle to [0, 360)."""
    return angle % 360.0


def shortest_arc_deg(delta: float) -> float:
    """Reduce an angle difference to the shortest arc in (-180, 180]."""
    d = (delta + 180.0) % 360.0 - 180.0
    return 180.0 if d == -180.0 else d


def heading_reference(beta_cp: float, theta_m: float) -> float:
    """Target heading: current heading plus the sonar bearing correction."""
    if not (math.isfinite(beta_cp) and math.isfinite(theta_m)):
        raise ValueError("angles must be finite")
    return wrap_deg(beta_cp + theta_m)


def behavior_error(kind: str, sensors: Mapping[str, float], targets: Mapping[str, float]) -> float:
    """Error signal for one behavior from a sensor/target snapshot.

    heading -> shortest-arc difference beta_ref - beta_cp (degrees)
    depth   -> d_ref - d_rov (metres)
    edge    -> d_w - d_c (metres, d_c the wall-facing beam range)
    """
    try:
        if kind == "heading":
            return shortest_arc_deg(targets["beta_ref"] - sensors["beta_cp"])
        if kind == "depth":
            return targets["d_ref"] - sensors["d_rov"]
        if kind == "edge":
            return targets["d_w"] - sensors["d_c"]
    except KeyError as exc:
        raise ValueError(f"missing reading {exc} for {kind} behavior") from None
    raise ValueError(f"unknown behavior kind {kind!r}")


@dataclass(frozen=True)
class IT2Triangular:
    """Triangle with a footprint of uncertainty.

    The lower curve is the base triangle scaled by (1 - spread), the upper
    one by (1 + spread) capped at 1; spread 0 collapses to type 1.
    """

    shape: TriangularMF
    spread: float = 0.0

    def __post_init__(self):
        if not (0.0 <= self.spread < 1.0):
            raise ValueError("spread must be in [0, 1)")

    def membership(self, x: float) -> tuple[float, float]:
        grade = eval_triangular(self.shape, x)
        return (1.0 - self.spread) * grade, min(1.0, (1.0 + self.spread) * grade)


def _standard_sets(spread: float) -> tuple[IT2Triangular, IT2Triangular, IT2Triangular]:
    return (
        IT2Triangular(TriangularMF(-2.0, -1.0, 0.0), spread),
        IT2Triangular(TriangularMF(-1.0, 0.0, 1.0), spread),
        IT2Triangular(TriangularMF(0.0, 1.0, 2.0), spread),
    )


# consequent singletons per (error term, delta-error term), N/Z/P indexed
_DEFAULT_TABLE = (
    (-1.0, -0.5, 0.0),
    (-0.5, 0.0, 0.5),
    (0.0, 0.5, 1.0),
)


@dataclass(frozen=True)
class FPDConfig:
    """Gains, saturation and rule base of one fuzzy PD behavior.

    ``gain_error`` and ``gain_delta`` normalise the raw error/difference
    into the [-1, 1] universe of the input sets (values beyond it are
    clipped); ``gain_output`` scales the fuzzy correction added to the
    previous command, which saturates at [u_min, u_max].
    """

    gain_error: float
    gain_delta: float
    gain_output: float
    u_min: float = -1.0
    u_max: float = 1.0
    fou_spread: float = 0.15
    rule_table: tuple[tuple[float, float, float], ...] = _DEFAULT_TABLE

    def __post_init__(self):
        values = (self.gain_error, self.gain_delta, self.gain_output, self.u_min, self.u_max)
        if not all(map(math.isfinite, values)):
            raise ValueError("gains and limits must be finite")
        if not self.u_min < self.u_max:
            raise ValueError("u_min must be below u_max")
        if len(self.rule_table) != 3 or any(len(r) != 3 for r in self.rule_table):
            raise ValueError("rule table must be 3x3")


@dataclass(frozen=True)
class FPDState:
    """Controller memory: previous error and output, sample index."""

    prev_error: float = 0.0
    prev_output: float = 0.0
    step: int = 0


def _clip_unit(x: float) -> float:
    return -1.0 if x < -1.0 else (1.0 if x > 1.0 else x)


def fuzzy_correction(cfg: FPDConfig, e_scaled: float, de_scaled: float) -> float:
    """Normalised correction from the 9-rule IT2 base at (E, dE) in [-1,1]^2."""
    sets = _standard_sets(cfg.fou_spread)
    grades_e = [s.membership(e_scaled) for s in sets]
    grades_de = [s.membership(de_scaled) for s in sets]
    f_lower = []
    f_upper = []
    w = []
    for i in range(3):
        for j in range(3):
            f_lower.append(grades_e[i][0] * grades_de[j][0])
            f_upper.append(grades_e[i][1] * grades_de[j][1])
            w.append(cfg.rule_table[i][j])
    y_l, y_r = wu_mendel_bounds(f_lower, f_upper, w)
    return 0.5 * (y_l + y_r)


def controller_step(
    cfg: FPDConfig, state: FPDState, y_ref: float, y_meas: float
) -> tuple[float, FPDState]:
    """One control update; returns the saturated command and the new state."""
    if not (math.isfinite(y_ref) and math.isfinite(y_meas)):
        raise ValueError("reference and measurement must be finite")
    e = y_ref - y_meas
    de = e - state.prev_error
    e_scaled = _clip_unit(cfg.gain_error * e)
    de_scaled = _clip_unit(cfg.gain_delta * de)
    correction = fuzzy_correction(cfg, e_scaled, de_scaled)
    u = state.prev_output + cfg.gain_output * correction
    u = min(max(u, cfg.u_min), cfg.u_max)
    return u, FPDState(prev_error=e, prev_output=u, step=state.step + 1)
