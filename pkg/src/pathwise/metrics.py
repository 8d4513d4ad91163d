"""Precision/recall/F1 with fixed empty-denominator conventions."""

from __future__ import annotations

from dataclasses import dataclass

__all__ = ["Metrics", "prf"]


@dataclass(frozen=True)
class Metrics:
    precision: float
    recall: float
    f1: float


def prf(tp: int, pred_total: int, gold_total: int) -> Metrics:
    """Build metrics from counts.

    Conventions: precision is 1 when nothing was predicted, recall is 1
    when there was nothing to find, and F1 is 0 when precision and recall
    are both 0.
    """
    precision = tp / pred_total if pred_total else 1.0
    recall = tp / gold_total if gold_total else 1.0
    f1 = 0.0 if precision + recall == 0 else 2 * precision * recall / (precision + recall)
    return Metrics(precision=precision, recall=recall, f1=f1)
