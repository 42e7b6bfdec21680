"""TSK interval type-2 inference: rule evaluation, prediction, scoring.

A model couples an antecedent grid with a consequent coefficient matrix.
Each rule's output is a linear function of the inputs; the rule firing
intervals feed the switch-indicator reducer and the crisp prediction is
the midpoint of the reduced interval.

``effective_rule_weights`` and ``design_row`` expose the linearisation
used by training: the prediction equals the dot product of the design row
with the flattened consequent matrix, exactly.
"""

from __future__ import annotations

import json
import math
from collections import deque
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .membership import AntecedentGrid
from .reduction import (
    TypeReducedSet,
    defuzz,
    km_reduce_batch,
    sc_reduce,
    sc_reduce_batch,
)

__all__ = [
    "TSKIT2Model",
    "ScoreWindow",
    "effective_rule_weights",
    "design_row",
    "design_matrix",
    "load_model",
    "save_model",
]

MODEL_FORMAT = "tsk-it2-model"
MODEL_VERSION = 1


def effective_rule_weights(f_lower, f_upper, z_l, z_r) -> np.ndarray:
    """Per-rule weights of the defuzzified output.

    For each endpoint the indicator picks the lower or upper firing; the
    weight of rule j is its picked firing over the left-endpoint firing
    sum plus the same for the right endpoint.  The weights always sum to
    exactly 2, so half of them form a convex combination of the rule
    outputs.
    """
    fl = np.asarray(f_lower, dtype=float)
    fu = np.asarray(f_upper, dtype=float)
    zl = np.asarray(z_l, dtype=bool)
    zr = np.asarray(z_r, dtype=bool)
    u_l = np.where(zl, fu, fl)
    u_r = np.where(zr, fu, fl)
    d_l = u_l.sum()
    d_r = u_r.sum()
    if d_l <= 0.0 or d_r <= 0.0:
        raise ValueError("zero reduction denominator: no rule fires")
    return u_l / d_l + u_r / d_r


def design_row(x, weights, use_bias: bool = False) -> np.ndarray:
    """Training-linearisation row: half of each rule weight times the input.

    Blocks are laid out rule-major: [w_1*x_1 .. w_1*x_N, ..., w_M*x_N],
    each block gaining a trailing w_j entry when the bias is enabled.
    """
    x = np.asarray(x, dtype=float)
    weights = np.asarray(weights, dtype=float)
    if x.ndim != 1 or weights.ndim != 1:
        raise ValueError("expected 1-D input and weight vectors")
    xb = np.append(x, 1.0) if use_bias else x
    return 0.5 * (weights[:, None] * xb[None, :]).ravel()


def design_matrix(X, weights, use_bias: bool = False) -> np.ndarray:
    """Stack of design rows for a whole sample batch (weights per row)."""
    X = np.asarray(X, dtype=float)
    weights = np.asarray(weights, dtype=float)
    if use_bias:
        X = np.hstack([X, np.ones((X.shape[0], 1))])
    p, m = weights.shape
    return 0.5 * (weights[:, :, None] * X[:, None, :]).reshape(p, m * X.shape[1])


class ScoreWindow:
    """Running mean over the most recent raw scores.

    Scores older than the window length stop contributing; during warm-up
    the mean covers whatever has been pushed.
    """

    def __init__(self, length: int = 4):
        if length < 1:
            raise ValueError("window length must be >= 1")
        self._scores: deque[float] = deque(maxlen=length)

    @property
    def length(self) -> int:
        return self._scores.maxlen

    def push(self, score: float) -> float:
        score = float(score)
        if not math.isfinite(score):
            raise ValueError("scores must be finite")
        self._scores.append(score)
        return math.fsum(self._scores) / len(self._scores)

    def last_mean(self) -> float | None:
        if not self._scores:
            return None
        return math.fsum(self._scores) / len(self._scores)


@dataclass
class TSKIT2Model:
    """Fitted rule base: IT2 Gaussian antecedents + linear consequents.

    ``consequents`` has one row per rule with N coefficients, plus a
    trailing intercept column when ``use_bias`` is set.  Instances are
    immutable in practice: nothing mutates them after construction, so
    prediction is safe to call concurrently.
    """

    antecedents: AntecedentGrid
    consequents: np.ndarray
    use_bias: bool = False
    threshold: float = 0.5
    feature_names: tuple[str, ...] | None = None
    reducer: str = "sc"

    def __post_init__(self):
        self.consequents = np.asarray(self.consequents, dtype=float)
        m = self.antecedents.n_rules
        n = self.antecedents.n_inputs + (1 if self.use_bias else 0)
        if self.consequents.shape != (m, n):
            raise ValueError(
                f"consequent matrix must be {(m, n)}, got {self.consequents.shape}"
            )
        if not np.isfinite(self.consequents).all():
            raise ValueError("consequents must be finite")
        if self.reducer not in ("sc", "km"):
            raise ValueError(f"unknown reducer {self.reducer!r}")

    @property
    def n_rules(self) -> int:
        return self.antecedents.n_rules

    @property
    def n_inputs(self) -> int:
        return self.antecedents.n_inputs

    def consequent_values(self, x) -> np.ndarray:
        """Rule outputs w_j = c_j . x (+ intercept if enabled)."""
        x = np.asarray(x, dtype=float)
        if x.shape != (self.n_inputs,):
            raise ValueError(f"expected input of length {self.n_inputs}")
        if self.use_bias:
            x = np.append(x, 1.0)
        return self.consequents @ x

    def reduce(self, x) -> tuple[TypeReducedSet, np.ndarray]:
        """Reduced set and rule outputs at a single point."""
        x = np.asarray(x, dtype=float)
        fl, fu = self.antecedents.firing_bounds(x)
        w = self.consequent_values(x)
        return sc_reduce(fl[0], fu[0], w), w

    def predict(self, x) -> float:
        """Crisp output: midpoint of the reduced interval."""
        reduced, _ = self.reduce(x)
        return defuzz(reduced)

    def predict_batch(self, X) -> np.ndarray:
        X = np.asarray(X, dtype=float)
        fl, fu = self.antecedents.firing_bounds(X)
        xb = np.hstack([X, np.ones((X.shape[0], 1))]) if self.use_bias else X
        w = xb @ self.consequents.T
        reduce_batch = sc_reduce_batch if self.reducer == "sc" else km_reduce_batch
        y_l, y_r, _, _ = reduce_batch(fl, fu, w)
        return 0.5 * (y_l + y_r)

    def classify(self, x) -> tuple[int, float]:
        """Binary decision (1 iff score >= threshold) plus the raw score."""
        score = self.predict(x)
        return (1 if score >= self.threshold else 0), score

    def to_dict(self) -> dict:
        rules = []
        for j in range(self.n_rules):
            rules.append(
                {
                    "means": self.antecedents.means[j].tolist(),
                    "sigma_lo": self.antecedents.sigma_lo[j].tolist(),
                    "sigma_hi": self.antecedents.sigma_hi[j].tolist(),
                    "consequents": self.consequents[j].tolist(),
                }
            )
        out = {
            "format": MODEL_FORMAT,
            "version": MODEL_VERSION,
            "n_rules": self.n_rules,
            "n_inputs": self.n_inputs,
            "use_bias": self.use_bias,
            "threshold": self.threshold,
            "reducer": self.reducer,
            "rules": rules,
        }
        if self.feature_names is not None:
            out["feature_names"] = list(self.feature_names)
        return out

    @classmethod
    def from_dict(cls, data: dict) -> "TSKIT2Model":
        if data.get("format") != MODEL_FORMAT:
            raise ValueError(f"not a {MODEL_FORMAT} document")
        version = data.get("version")
        if version != MODEL_VERSION:
            raise ValueError(
                f"unsupported model version {version!r}; this build reads "
                f"version {MODEL_VERSION}"
            )
        rules = data["rules"]
        means = np.array([r["means"] for r in rules], dtype=float)
        sigma_lo = np.array([r["sigma_lo"] for r in rules], dtype=float)
        sigma_hi = np.array([r["sigma_hi"] for r in rules], dtype=float)
        consequents = np.array([r["consequents"] for r in rules], dtype=float)
        names = data.get("feature_names")
        return cls(
            antecedents=AntecedentGrid(means, sigma_lo, sigma_hi),
            consequents=consequents,
            use_bias=bool(data["use_bias"]),
            threshold=float(data.get("threshold", 0.5)),
            feature_names=tuple(names) if names else None,
            reducer=data.get("reducer", "sc"),
        )


def save_model(model: TSKIT2Model, path) -> None:
    """Write the model as JSON; float round-trip is bit-exact."""
    Path(path).write_text(
        json.dumps(model.to_dict(), indent=2, sort_keys=True) + "\n",
        encoding="utf-8",
    )


def load_model(path) -> TSKIT2Model:
    return TSKIT2Model.from_dict(json.loads(Path(path).read_text(encoding="utf-8")))
