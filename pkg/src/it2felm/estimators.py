"""Extreme-learning-machine trainers with a scikit-learn estimator API.

All four classifiers share the same recipe: freeze a randomly initialised
hidden layer, turn the training set into a linear system through it, and
solve the output coefficients in one shot by minimum-norm least squares.
They differ only in the hidden layer:

* ``IT2FELMClassifier`` - IT2 Gaussian fuzzy rules; the design matrix is
  built from the reducer's switch indicators (sorting-free by default,
  Karnik-Mendel as the baseline variant).
* ``T1FELMClassifier``  - type-1 fuzzy rules (collapsed uncertainty
  footprint); design rows are normalised firings times the inputs.
* ``ELMClassifier``     - plain sigmoid random-feature network.

Binary targets are 0/1 regression targets; ``decision_function`` returns
the raw regression score and ``predict`` thresholds it at 0.5 (score
exactly at the threshold classifies as 1).
"""

from __future__ import annotations

import time
import warnings

import numpy as np
from sklearn.base import BaseEstimator, ClassifierMixin
from sklearn.utils.validation import check_array, check_is_fitted
from sklearn.utils.validation import check_X_y as _check_X_y

from .inference import TSKIT2Model, design_matrix
from .membership import AntecedentGrid, random_init_antecedents
from .reduction import km_reduce_batch, sc_reduce_batch

__all__ = [
    "pseudoinverse_solve",
    "IT2FELMClassifier",
    "T1FELMClassifier",
    "ELMClassifier",
]


def pseudoinverse_solve(H, T, ridge: float = 0.0) -> np.ndarray:
    """Solve H q = T for the output coefficients.

    With ``ridge == 0`` this is the minimum-norm least-squares solution:
    singular values below eps * max(P, D) relative to the largest one are
    treated as zero.  A positive ridge solves the regularised normal
    equations instead.
    """
    H = np.asarray(H, dtype=float)
    T = np.asarray(T, dtype=float)
    if H.ndim != 2:
        raise ValueError("H must be 2-D")
    if not (np.isfinite(H).all() and np.isfinite(T).all()):
        raise ValueError("non-finite entries in the linear system")
    if T.shape[0] != H.shape[0]:
        raise ValueError("row count mismatch between H and T")
    if ridge < 0.0:
        raise ValueError("ridge must be >= 0")
    if ridge == 0.0:
        rcond = np.finfo(H.dtype).eps * max(H.shape)
        q, *_ = np.linalg.lstsq(H, T, rcond=rcond)
        return q
    gram = H.T @ H + ridge * np.eye(H.shape[1])
    return np.linalg.solve(gram, H.T @ T)


def _validate_binary(estimator, X, y):
    X, y = _check_X_y(X, y, dtype=float, ensure_min_samples=2)
    estimator.n_features_in_ = X.shape[1]
    classes = np.unique(y)
    if not np.isin(classes, (0, 1)).all():
        raise ValueError(f"targets must be 0/1 labels, got classes {classes}")
    if classes.size < 2:
        raise ValueError("training data contains a single class")
    return X, y.astype(float)


def _feature_ranges(X) -> list[tuple[float, float]]:
    ranges = []
    for k in range(X.shape[1]):
        lo = float(X[:, k].min())
        hi = float(X[:, k].max())
        if hi - lo < 1e-12:
            warnings.warn(
                f"feature {k} is constant in the training data; widening its "
                "range artificially",
                RuntimeWarning,
                stacklevel=3,
            )
            lo, hi = lo - 0.5, hi + 0.5
        ranges.append((lo, hi))
    return ranges


class _FuzzyELMBase(BaseEstimator, ClassifierMixin):
    """Shared fit plumbing for the fuzzy trainers."""

    def decision_function(self, X) -> np.ndarray:
        check_is_fitted(self, "model_")
        X = check_array(X, dtype=float)
        if X.shape[1] != self.n_features_in_:
            raise ValueError(
                f"expected {self.n_features_in_} features, got {X.shape[1]}"
            )
        return self._raw_scores(X)

    def predict(self, X) -> np.ndarray:
        scores = self.decision_function(X)
        return (scores >= 0.5).astype(int)

    def _raw_scores(self, X) -> np.ndarray:
        raise NotImplementedError


class IT2FELMClassifier(_FuzzyELMBase):
    """Interval type-2 fuzzy classifier trained in closed form.

    Parameters
    ----------
    n_rules : int, default=6
        Number of fuzzy rules.
    type_reducer : {'sc', 'km'}, default='sc'
        Switch-indicator route used to obtain the reduction indicators
        during training and prediction.  Both produce the same endpoints;
        'km' sorts consequents on every call, 'sc' does not.
    max_passes : int, default=2
        Total coefficient solves.  The first pass assumes all indicators
        on; later passes recompute indicators from the current model and
        re-solve, stopping early once the indicators are stable and
        rolling back a pass that worsens the training residual.
    use_bias : bool, default=False
        Append an intercept term to every rule consequent.
    ridge : float, default=0.0
        Ridge regularisation for the coefficient solve; 0 selects the
        pure minimum-norm pseudoinverse solution.
    width_range, spread_range : pairs of float
        Random-initialisation ranges for the antecedent widths and their
        relative uncertainty spread (see ``random_init_antecedents``).
    random_state : int, default=0
        Seed for the antecedent draw; fits are deterministic given
        (data, params).

    Attributes
    ----------
    model_ : TSKIT2Model
        The fitted rule base.
    fit_time_ : float
        Wall-clock seconds spent in the coefficient-solve phase
        (antecedent initialisation excluded).
    n_passes_ : int
        Solve passes actually performed.
    """

    def __init__(
        self,
        n_rules: int = 6,
        type_reducer: str = "sc",
        max_passes: int = 2,
        use_bias: bool = False,
        ridge: float = 0.0,
        width_range: tuple[float, float] = (0.1, 1.0),
        spread_range: tuple[float, float] = (0.1, 0.3),
        random_state: int = 0,
    ):
        self.n_rules = n_rules
        self.type_reducer = type_reducer
        self.max_passes = max_passes
        self.use_bias = use_bias
        self.ridge = ridge
        self.width_range = width_range
        self.spread_range = spread_range
        self.random_state = random_state

    def fit(self, X, y):
        X, t = _validate_binary(self, X, y)
        if self.n_rules < 1:
            raise ValueError("n_rules must be >= 1")
        if self.max_passes < 1:
            raise ValueError("max_passes must be >= 1")
        if self.type_reducer not in ("sc", "km"):
            raise ValueError(f"unknown type_reducer {self.type_reducer!r}")
        self.classes_ = np.array([0, 1])

        grid = random_init_antecedents(
            self.n_rules,
            _feature_ranges(X),
            seed=self.random_state,
            width_range=self.width_range,
            spread_range=self.spread_range,
        )
        reduce_batch = sc_reduce_batch if self.type_reducer == "sc" else km_reduce_batch

        start = time.perf_counter()
        fl, fu = grid.firing_bounds(X)
        xb = np.hstack([X, np.ones((X.shape[0], 1))]) if self.use_bias else X
        n_coef = xb.shape[1]

        # Pass 0: all indicators on, i.e. weights proportional to the upper
        # firings.  The indicator/consequent recursion has to start somewhere.
        ones = np.ones_like(fl, dtype=np.uint8)
        weights = _rule_weights_batch(fl, fu, ones, ones)
        H = design_matrix(X, weights, use_bias=self.use_bias)
        q = pseudoinverse_solve(H, t, ridge=self.ridge)
        w_rules = xb @ q.reshape(self.n_rules, n_coef).T
        y_l, y_r, z_l, z_r = reduce_batch(fl, fu, w_rules)
        best_q, best_mse = q, float(np.mean((0.5 * (y_l + y_r) - t) ** 2))
        passes = 1

        for _ in range(1, self.max_passes):
            weights = _rule_weights_batch(fl, fu, z_l, z_r)
            H = design_matrix(X, weights, use_bias=self.use_bias)
            q = pseudoinverse_solve(H, t, ridge=self.ridge)
            w_rules = xb @ q.reshape(self.n_rules, n_coef).T
            y_l, y_r, z_l_new, z_r_new = reduce_batch(fl, fu, w_rules)
            mse = float(np.mean((0.5 * (y_l + y_r) - t) ** 2))
            passes += 1
            if mse > best_mse:
                break  # keep the previous coefficients
            best_q, best_mse = q, mse
            if np.array_equal(z_l_new, z_l) and np.array_equal(z_r_new, z_r):
                break
            z_l, z_r = z_l_new, z_r_new
        self.fit_time_ = time.perf_counter() - start

        self.model_ = TSKIT2Model(
            antecedents=grid,
            consequents=best_q.reshape(self.n_rules, n_coef),
            use_bias=self.use_bias,
            reducer=self.type_reducer,
        )
        self.train_mse_ = best_mse
        self.n_passes_ = passes
        return self

    def _raw_scores(self, X) -> np.ndarray:
        return self.model_.predict_batch(X)


def _rule_weights_batch(fl, fu, z_l, z_r) -> np.ndarray:
    u_l = np.where(z_l, fu, fl)
    u_r = np.where(z_r, fu, fl)
    return u_l / u_l.sum(axis=1, keepdims=True) + u_r / u_r.sum(axis=1, keepdims=True)


class T1FELMClassifier(_FuzzyELMBase):
    """Type-1 fuzzy ELM baseline: crisp Gaussian rules, single solve.

    Uses the same random antecedent draw as the IT2 trainer with the
    uncertainty spread forced to zero, so collapsing an IT2 model's
    footprint reproduces this classifier exactly.
    """

    def __init__(
        self,
        n_rules: int = 6,
        use_bias: bool = False,
        ridge: float = 0.0,
        width_range: tuple[float, float] = (0.1, 1.0),
        random_state: int = 0,
    ):
        self.n_rules = n_rules
        self.use_bias = use_bias
        self.ridge = ridge
        self.width_range = width_range
        self.random_state = random_state

    def fit(self, X, y):
        X, t = _validate_binary(self, X, y)
        if self.n_rules < 1:
            raise ValueError("n_rules must be >= 1")
        self.classes_ = np.array([0, 1])
        grid = random_init_antecedents(
            self.n_rules,
            _feature_ranges(X),
            seed=self.random_state,
            width_range=self.width_range,
            spread_range=(0.0, 0.0),
        )
        start = time.perf_counter()
        H = self._design(grid, X)
        q = pseudoinverse_solve(H, t, ridge=self.ridge)
        self.fit_time_ = time.perf_counter() - start
        n_coef = X.shape[1] + (1 if self.use_bias else 0)
        self.model_ = TSKIT2Model(
            antecedents=grid,
            consequents=q.reshape(self.n_rules, n_coef),
            use_bias=self.use_bias,
        )
        return self

    def _design(self, grid: AntecedentGrid, X) -> np.ndarray:
        _, firing = grid.firing_bounds(X)  # lower == upper here
        norm = firing / firing.sum(axis=1, keepdims=True)
        xb = np.hstack([X, np.ones((X.shape[0], 1))]) if self.use_bias else X
        p, m = norm.shape
        return (norm[:, :, None] * xb[:, None, :]).reshape(p, m * xb.shape[1])

    def _raw_scores(self, X) -> np.ndarray:
        X = np.asarray(X, dtype=float)
        grid = self.model_.antecedents
        _, firing = grid.firing_bounds(X)
        norm = firing / firing.sum(axis=1, keepdims=True)
        xb = np.hstack([X, np.ones((X.shape[0], 1))]) if self.model_.use_bias else X
        w = xb @ self.model_.consequents.T
        return (norm * w).sum(axis=1)


class ELMClassifier(_FuzzyELMBase):
    """Plain extreme learning machine: random sigmoid features + solve.

    ``hidden_units=None`` picks 6 * n_features at fit time for parameter
    parity with the default fuzzy trainers.
    """

    def __init__(
        self,
        hidden_units: int | None = None,
        ridge: float = 0.0,
        random_state: int = 0,
    ):
        self.hidden_units = hidden_units
        self.ridge = ridge
        self.random_state = random_state

    def fit(self, X, y):
        X, t = _validate_binary(self, X, y)
        self.classes_ = np.array([0, 1])
        k = self.hidden_units if self.hidden_units is not None else 6 * X.shape[1]
        if k < 1:
            raise ValueError("hidden_units must be >= 1")
        rng = np.random.default_rng(self.random_state)
        self.weights_ = rng.uniform(-1.0, 1.0, size=(X.shape[1], k))
        self.biases_ = rng.uniform(-1.0, 1.0, size=k)
        start = time.perf_counter()
        H = self._hidden(X)
        self.coef_ = pseudoinverse_solve(H, t, ridge=self.ridge)
        self.fit_time_ = time.perf_counter() - start
        self.model_ = None  # no fuzzy rule base; kept for a uniform surface
        return self

    def _hidden(self, X) -> np.ndarray:
        z = np.clip(X @ self.weights_ + self.biases_, -500.0, 500.0)
        return 1.0 / (1.0 + np.exp(-z))

    def decision_function(self, X) -> np.ndarray:
        check_is_fitted(self, "coef_")
        X = check_array(X, dtype=float)
        if X.shape[1] != self.n_features_in_:
            raise ValueError(
                f"expected {self.n_features_in_} features, got {X.shape[1]}"
            )
        return self._hidden(X) @ self.coef_
