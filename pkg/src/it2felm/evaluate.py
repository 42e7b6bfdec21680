"""Cross-validation and classification metrics.

Fold construction is stratified and permutation invariant: each class's
rows are first put into a canonical order (sorted by feature values), so
shuffling the dataset rows changes nothing about which samples share a
fold.  A seeded permutation of the canonical order then spreads samples
round-robin over the folds.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np
from sklearn.base import clone

from .seeding import named_stream

__all__ = ["ConfusionMatrix", "confusion_matrix", "stratified_folds", "cross_validate", "CrossValReport"]


@dataclass(frozen=True)
class ConfusionMatrix:
    """2x2 counts with class 1 (corner) as the positive class."""

    tp: int
    fp: int
    fn: int
    tn: int

    @property
    def total(self) -> int:
        return self.tp + self.fp + self.fn + self.tn

    @property
    def accuracy(self) -> float:
        return (self.tp + self.tn) / self.total

    def as_dict(self) -> dict:
        return {
            "tp": self.tp,
            "fp": self.fp,
            "fn": self.fn,
            "tn": self.tn,
            "accuracy": self.accuracy,
        }

    def __add__(self, other: "ConfusionMatrix") -> "ConfusionMatrix":
        return ConfusionMatrix(
            self.tp + other.tp,
            self.fp + other.fp,
            self.fn + other.fn,
            self.tn + other.tn,
        )


def confusion_matrix(y_true, y_pred) -> ConfusionMatrix:
    y_true = np.asarray(y_true).astype(int)
    y_pred = np.asarray(y_pred).astype(int)
    if y_true.shape != y_pred.shape:
        raise ValueError("prediction/label length mismatch")
    return ConfusionMatrix(
        tp=int(((y_true == 1) & (y_pred == 1)).sum()),
        fp=int(((y_true == 0) & (y_pred == 1)).sum()),
        fn=int(((y_true == 1) & (y_pred == 0)).sum()),
        tn=int(((y_true == 0) & (y_pred == 0)).sum()),
    )


def stratified_folds(X, y, n_folds: int, seed: int = 0) -> list[np.ndarray]:
    """Test-index arrays per fold, stratified by class.

    Deterministic for a fixed seed and invariant to row permutations of
    (X, y): fold membership is decided on the class-wise canonically
    sorted samples, not on their positions in the input.
    """
    X = np.asarray(X, dtype=float)
    y = np.asarray(y).astype(int)
    if n_folds < 2:
        raise ValueError("need at least 2 folds")
    rng = named_stream(seed, "folds")
    fold_members: list[list[int]] = [[] for _ in range(n_folds)]
    for cls in np.unique(y):
        idx = np.flatnonzero(y == cls)
        if idx.size < n_folds:
            raise ValueError(
                f"class {cls} has {idx.size} samples, fewer than {n_folds} folds"
            )
        canon = idx[np.lexsort(X[idx].T[::-1])]
        perm = canon[rng.permutation(idx.size)]
        for pos, sample in enumerate(perm):
            fold_members[pos % n_folds].append(int(sample))
    return [np.array(sorted(members)) for members in fold_members]


@dataclass
class CrossValReport:
    """Per-fold and aggregated accuracy/time figures."""

    folds: list[dict] = field(default_factory=list)
    mean_train_accuracy: float = 0.0
    mean_test_accuracy: float = 0.0
    std_test_accuracy: float = 0.0
    mean_fit_time: float = 0.0
    pooled_confusion: ConfusionMatrix | None = None

    def as_dict(self) -> dict:
        return {
            "folds": self.folds,
            "mean_train_accuracy": self.mean_train_accuracy,
            "mean_test_accuracy": self.mean_test_accuracy,
            "std_test_accuracy": self.std_test_accuracy,
            "mean_fit_time_s": self.mean_fit_time,
            "pooled_confusion": self.pooled_confusion.as_dict()
            if self.pooled_confusion
            else None,
        }


def cross_validate(estimator, X, y, n_folds: int = 5, seed: int = 0) -> CrossValReport:
    """Stratified k-fold evaluation of a cloneable classifier.

    Every fold trains a fresh clone; fit times come from the estimator's
    own ``fit_time_`` when present (solve-phase timing) and fall back to
    wall clock around ``fit``.
    """
    X = np.asarray(X, dtype=float)
    y = np.asarray(y).astype(int)
    report = CrossValReport()
    test_accs = []
    pooled = ConfusionMatrix(0, 0, 0, 0)
    for fold_id, test_idx in enumerate(stratified_folds(X, y, n_folds, seed)):
        mask = np.zeros(len(y), dtype=bool)
        mask[test_idx] = True
        model = clone(estimator)
        t0 = time.perf_counter()
        model.fit(X[~mask], y[~mask])
        wall = time.perf_counter() - t0
        fit_time = float(getattr(model, "fit_time_", wall))
        train_cm = confusion_matrix(y[~mask], model.predict(X[~mask]))
        test_cm = confusion_matrix(y[mask], model.predict(X[mask]))
        pooled = pooled + test_cm
        test_accs.append(test_cm.accuracy)
        report.folds.append(
            {
                "fold": fold_id,
                "train_accuracy": train_cm.accuracy,
                "test_accuracy": test_cm.accuracy,
                "fit_time_s": fit_time,
                "test_confusion": test_cm.as_dict(),
            }
        )
    report.mean_train_accuracy = float(
        np.mean([f["train_accuracy"] for f in report.folds])
    )
    report.mean_test_accuracy = float(np.mean(test_accs))
    report.std_test_accuracy = float(np.std(test_accs))
    report.mean_fit_time = float(np.mean([f["fit_time_s"] for f in report.folds]))
    report.pooled_confusion = pooled
    return report
