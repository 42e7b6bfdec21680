"""Interval type-2 Gaussian membership functions and firing intervals.

An IT2 Gaussian set has a fixed mean and an uncertain width: the narrow
width gives the lower membership curve, the wide width the upper one, so
the membership grade at any point is an interval [lower, upper] with
lower <= upper and both equal to 1 at the mean.  Rule activation combines
the per-input grades with an algebraic product, yielding a firing
interval per rule.

Triangular sets (used by the fuzzy PD controllers) live here too, along
with the seeded random initialisation of an antecedent grid.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

__all__ = [
    "FiringInterval",
    "IT2GaussianMF",
    "TriangularMF",
    "AntecedentGrid",
    "eval_it2_gaussian",
    "firing_interval",
    "eval_triangular",
    "random_init_antecedents",
]


@dataclass(frozen=True)
class FiringInterval:
    """Rule activation bounds, 0 <= lower <= upper <= 1."""

    lower: float
    upper: float

    def __post_init__(self):
        if not (math.isfinite(self.lower) and math.isfinite(self.upper)):
            raise ValueError("firing bounds must be finite")
        if not (0.0 <= self.lower <= self.upper <= 1.0):
            raise ValueError(
                f"invalid firing interval [{self.lower}, {self.upper}]"
            )


@dataclass(frozen=True)
class IT2GaussianMF:
    """Gaussian set with fixed mean and uncertain width [sigma_lo, sigma_hi].

    The narrow width produces the lower membership curve and the wide one
    the upper curve.  Widths supplied out of order are swapped rather than
    rejected, so random draws need no rejection step.
    """

    mean: float
    sigma_lo: float
    sigma_hi: float

    def __post_init__(self):
        if not all(map(math.isfinite, (self.mean, self.sigma_lo, self.sigma_hi))):
            raise ValueError("MF parameters must be finite")
        if self.sigma_lo <= 0.0 or self.sigma_hi <= 0.0:
            raise ValueError("widths must be positive")
        if self.sigma_lo > self.sigma_hi:
            lo, hi = self.sigma_hi, self.sigma_lo
            object.__setattr__(self, "sigma_lo", lo)
            object.__setattr__(self, "sigma_hi", hi)


@dataclass(frozen=True)
class TriangularMF:
    """Type-1 triangle: 0 outside [a, c], 1 at b, linear in between."""

    a: float
    b: float
    c: float

    def __post_init__(self):
        if not all(map(math.isfinite, (self.a, self.b, self.c))):
            raise ValueError("triangle breakpoints must be finite")
        if not (self.a <= self.b <= self.c):
            raise ValueError(f"breakpoints not ordered: {self.a}, {self.b}, {self.c}")


def eval_it2_gaussian(mf: IT2GaussianMF, x: float) -> FiringInterval:
    """Membership interval of an IT2 Gaussian set at x.

    lower = exp(-((x - m) / sigma_lo)^2 / 2) and the upper bound uses
    sigma_hi; the narrow width decays faster, so lower <= upper with
    equality everywhere iff the widths coincide.
    """
    if not math.isfinite(x):
        raise ValueError(f"non-finite input {x!r}")
    d = x - mf.mean
    lower = math.exp(-0.5 * (d / mf.sigma_lo) ** 2)
    upper = math.exp(-0.5 * (d / mf.sigma_hi) ** 2)
    # Guard against ulp-level inversion when widths are equal.
    if lower > upper:
        lower = upper
    return FiringInterval(max(lower, 0.0), max(upper, 0.0))


def firing_interval(mfs: Sequence[IT2GaussianMF], x: Sequence[float]) -> FiringInterval:
    """Rule firing interval: algebraic product of per-input memberships."""
    if len(mfs) != len(x):
        raise ValueError(f"rule has {len(mfs)} antecedents but input has {len(x)}")
    lower = 1.0
    upper = 1.0
    for mf, xk in zip(mfs, x):
        grade = eval_it2_gaussian(mf, float(xk))
        lower *= grade.lower
        upper *= grade.upper
    return FiringInterval(max(lower, 0.0), max(upper, 0.0))


def eval_triangular(mf: TriangularMF, x: float) -> float:
    """Triangle membership grade in [0, 1]."""
    if not math.isfinite(x):
        raise ValueError(f"non-finite input {x!r}")
    if x < mf.a or x > mf.c:
        return 0.0
    if x == mf.b:
        return 1.0
    if x < mf.b:
        # a < b here, otherwise x == b was caught above
        return (x - mf.a) / (mf.b - mf.a)
    return (mf.c - x) / (mf.c - mf.b)


class AntecedentGrid:
    """Rectangular grid of IT2 Gaussian antecedents: n_rules x n_inputs.

    Stored as three (M, N) arrays (means, narrow widths, wide widths) so
    that firing bounds can be evaluated for whole sample batches at once.
    """

    def __init__(self, means, sigma_lo, sigma_hi):
        means = np.asarray(means, dtype=float)
        sigma_lo = np.asarray(sigma_lo, dtype=float)
        sigma_hi = np.asarray(sigma_hi, dtype=float)
        if means.ndim != 2 or means.shape[0] < 1 or means.shape[1] < 1:
            raise ValueError("antecedent grid must be a non-empty 2-D array")
        if means.shape != sigma_lo.shape or means.shape != sigma_hi.shape:
            raise ValueError("mean/width arrays must share one shape")
        if not (
            np.isfinite(means).all()
            and np.isfinite(sigma_lo).all()
            and np.isfinite(sigma_hi).all()
        ):
            raise ValueError("antecedent parameters must be finite")
        if (sigma_lo <= 0).any() or (sigma_hi <= 0).any():
            raise ValueError("antecedent widths must be positive")
        swap = sigma_lo > sigma_hi
        if swap.any():
            sigma_lo = sigma_lo.copy()
            sigma_hi = sigma_hi.copy()
            sigma_lo[swap], sigma_hi[swap] = sigma_hi[swap], sigma_lo[swap]
        self.means = means
        self.sigma_lo = sigma_lo
        self.sigma_hi = sigma_hi
        self.means.setflags(write=False)
        self.sigma_lo.setflags(write=False)
        self.sigma_hi.setflags(write=False)

    @property
    def n_rules(self) -> int:
        return self.means.shape[0]

    @property
    def n_inputs(self) -> int:
        return self.means.shape[1]

    def mf(self, rule: int, feature: int) -> IT2GaussianMF:
        return IT2GaussianMF(
            float(self.means[rule, feature]),
            float(self.sigma_lo[rule, feature]),
            float(self.sigma_hi[rule, feature]),
        )

    def rule(self, rule: int) -> list[IT2GaussianMF]:
        return [self.mf(rule, k) for k in range(self.n_inputs)]

    def firing_bounds(self, X) -> tuple[np.ndarray, np.ndarray]:
        """Lower/upper firing arrays of shape (P, M) for inputs X (P, N)."""
        X = np.asarray(X, dtype=float)
        if X.ndim == 1:
            X = X[None, :]
        if X.shape[1] != self.n_inputs:
            raise ValueError(
                f"expected {self.n_inputs} features, got {X.shape[1]}"
            )
        if not np.isfinite(X).all():
            raise ValueError("inputs must be finite")
        d = X[:, None, :] - self.means[None, :, :]
        lo = np.exp(-0.5 * (d / self.sigma_lo[None, :, :]) ** 2).prod(axis=2)
        hi = np.exp(-0.5 * (d / self.sigma_hi[None, :, :]) ** 2).prod(axis=2)
        return np.minimum(lo, hi), hi

    def __eq__(self, other):
        if not isinstance(other, AntecedentGrid):
            return NotImplemented
        return (
            np.array_equal(self.means, other.means)
            and np.array_equal(self.sigma_lo, other.sigma_lo)
            and np.array_equal(self.sigma_hi, other.sigma_hi)
        )


def random_init_antecedents(
    n_rules: int,
    feature_ranges: Sequence[tuple[float, float]],
    seed: int | np.random.Generator,
    width_range: tuple[float, float] = (0.1, 1.0),
    spread_range: tuple[float, float] = (0.1, 0.3),
) -> AntecedentGrid:
    """Draw a random antecedent grid, deterministic for a fixed seed.

    Means are uniform over each feature range.  Widths start from a base
    scale uniform in `width_range` times the range width, then split into
    a narrow/wide pair via a relative spread uniform in `spread_range`, so
    the footprint of uncertainty is never degenerate nor saturating.
    """
    if n_rules < 1:
        raise ValueError("need at least one rule")
    ranges = [(float(lo), float(hi)) for lo, hi in feature_ranges]
    if not ranges:
        raise ValueError("need at least one feature range")
    for lo, hi in ranges:
        if not (lo < hi):
            raise ValueError(f"degenerate feature range ({lo}, {hi})")
    if isinstance(seed, np.random.Generator):
        rng = seed
    else:
        rng = np.random.default_rng(seed)
    n_inputs = len(ranges)
    lows = np.array([lo for lo, _ in ranges])
    widths = np.array([hi - lo for lo, hi in ranges])
    means = lows + widths * rng.uniform(size=(n_rules, n_inputs))
    base = widths * rng.uniform(*width_range, size=(n_rules, n_inputs))
    spread = rng.uniform(*spread_range, size=(n_rules, n_inputs))
    return AntecedentGrid(means, base * (1.0 - spread), base * (1.0 + spread))
