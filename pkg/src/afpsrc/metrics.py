"""Binary evaluation statistics with class 1 (AFP) as the positive class."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

POSITIVE, NEGATIVE = 1, 2

# column order of the report CSV
REPORT_COLUMNS = ["PCs", "youden", "balanced_accuracy", "mcc", "sensitivity",
                  "specificity", "accuracy", "f1"]
_PERCENT = {"balanced_accuracy", "sensitivity", "specificity", "accuracy"}


@dataclass(frozen=True)
class ConfusionMatrix:
    tp: int
    tn: int
    fp: int
    fn: int

    def __post_init__(self):
        for name in ("tp", "tn", "fp", "fn"):
            v = getattr(self, name)
            if int(v) != v or v < 0:
                raise ValueError(f"{name} must be a nonnegative integer, got {v!r}")

    @property
    def total(self) -> int:
        return self.tp + self.tn + self.fp + self.fn

    def swapped(self) -> "ConfusionMatrix":
        """Same predictions with the roles of the two classes exchanged."""
        return ConfusionMatrix(tp=self.tn, tn=self.tp, fp=self.fn, fn=self.fp)


@dataclass(frozen=True)
class MetricsReport:
    sensitivity: float
    specificity: float
    accuracy: float
    mcc: float
    balanced_accuracy: float
    youden: float
    f1: float
    precision: float

    def csv_row(self, pcs) -> list[str]:
        """Table-style row: rates as percentages, all rounded to 2 decimals."""
        row = [str(pcs)]
        for name in REPORT_COLUMNS[1:]:
            v = getattr(self, name)
            row.append(f"{100 * v:.2f}" if name in _PERCENT else f"{v:.2f}")
        return row


def _ratio(num, den) -> float:
    return num / den if den else 0.0


def confusion(true_labels, predicted_labels) -> ConfusionMatrix:
    y = np.asarray(true_labels)
    yhat = np.asarray(predicted_labels)
    if y.shape != yhat.shape or y.ndim != 1:
        raise ValueError("label sequences must be one-dimensional and of equal length")
    if y.size == 0:
        raise ValueError("no labels given")
    for arr in (y, yhat):
        if not np.all(np.isin(arr, (POSITIVE, NEGATIVE))):
            raise ValueError("labels must be 1 or 2")
    pos, pred_pos = y == POSITIVE, yhat == POSITIVE
    return ConfusionMatrix(
        tp=int(np.sum(pos & pred_pos)),
        tn=int(np.sum(~pos & ~pred_pos)),
        fp=int(np.sum(~pos & pred_pos)),
        fn=int(np.sum(pos & ~pred_pos)),
    )


def compute_metrics(cm: ConfusionMatrix) -> MetricsReport:
    """All rates from one confusion matrix.

    Undefined ratios (empty denominators) are reported as 0, which includes
    MCC whenever any marginal of the table is empty.
    """
    if cm.total < 1:
        raise ValueError("confusion matrix is empty")
    tp, tn, fp, fn = cm.tp, cm.tn, cm.fp, cm.fn
    sens = _ratio(tp, tp + fn)
    spec = _ratio(tn, tn + fp)
    prec = _ratio(tp, tp + fp)
    delta = (tp + fp) * (tn + fn) * (tp + fn) * (tn + fp)
    # integer numerator and delta keep this exact until the final division
    mcc = (tp * tn - fp * fn) / math.sqrt(delta) if delta else 0.0
    mcc = min(1.0, max(-1.0, mcc))
    return MetricsReport(
        sensitivity=sens,
        specificity=spec,
        accuracy=(tp + tn) / cm.total,
        mcc=mcc,
        balanced_accuracy=(sens + spec) / 2,
        youden=sens + spec - 1,
        f1=_ratio(2 * prec * sens, prec + sens),
        precision=prec,
    )


def evaluate_labels(true_labels, predicted_labels) -> MetricsReport:
    return compute_metrics(confusion(true_labels, predicted_labels))
