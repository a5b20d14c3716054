"""Error measures between ground truth and predicted frame blocks.

A collection of ``K`` pairs is scored by averaging per-pair values, each pair
being two ``m x p`` arrays (observables x frames).
"""

from dataclasses import dataclass
from typing import Iterable, Sequence, Tuple

import numpy as np

from .errors import DimensionMismatch, EmptyCollection

KL_EPS = 1e-9


@dataclass(frozen=True)
class PredictionPair:
    ground_truth: np.ndarray
    prediction: np.ndarray

    def __post_init__(self):
        gt = np.atleast_2d(np.asarray(self.ground_truth, dtype=float))
        pr = np.atleast_2d(np.asarray(self.prediction, dtype=float))
        if gt.shape != pr.shape:
            raise DimensionMismatch(
                f"ground truth {gt.shape} and prediction {pr.shape} differ in shape"
            )
        if gt.ndim != 2 or gt.shape[1] < 1:
            raise DimensionMismatch(f"pairs must be m x p with p >= 1, got {gt.shape}")
        object.__setattr__(self, "ground_truth", gt)
        object.__setattr__(self, "prediction", pr)


@dataclass(frozen=True)
class ErrorSummary:
    mse: float
    kl: float
    per_frame_mse: Tuple[float, ...]
    count: int

    def to_dict(self) -> dict:
        return {
            "count_K": self.count,
            "kl": self.kl,
            "mse": self.mse,
            "per_frame_mse": list(self.per_frame_mse),
        }


def _pairs(pairs) -> Sequence[PredictionPair]:
    out = [p if isinstance(p, PredictionPair) else PredictionPair(*p) for p in pairs]
    if not out:
        raise EmptyCollection("no prediction pairs to score")
    return out


def per_frame_errors(pairs: Iterable) -> np.ndarray:
    """Squared error per frame, averaged over observables and pairs."""
    pairs = _pairs(pairs)
    p = pairs[0].ground_truth.shape[1]
    if any(q.ground_truth.shape[1] != p for q in pairs):
        raise DimensionMismatch("per-frame errors need the same frame count in every pair")
    sq = [np.mean((q.ground_truth - q.prediction) ** 2, axis=0) for q in pairs]
    return np.mean(sq, axis=0)


def mse(pairs: Iterable) -> float:
    """Mean over pairs of the mean squared entry-wise deviation."""
    pairs = _pairs(pairs)
    return float(np.mean([np.mean((q.ground_truth - q.prediction) ** 2) for q in pairs]))


def _to_distribution(M: np.ndarray, floor: float) -> np.ndarray:
    w = M - floor + KL_EPS
    return w / w.sum()


def kl_divergence(pairs: Iterable) -> float:
    """Mean KL(GT || P) after turning each matrix into a distribution.

    Both matrices of a pair are shifted by their joint minimum, offset by
    ``KL_EPS`` and normalised to sum to one over all entries.
    """
    pairs = _pairs(pairs)
    vals = []
    for q in pairs:
        floor = min(q.ground_truth.min(), q.prediction.min())
        p_ = _to_distribution(q.ground_truth, floor)
        q_ = _to_distribution(q.prediction, floor)
        vals.append(np.sum(p_ * np.log(p_ / q_)))
    return float(np.mean(vals))


def summarize(pairs: Iterable) -> ErrorSummary:
    pairs = _pairs(pairs)
    return ErrorSummary(
        mse(pairs),
        kl_divergence(pairs),
        tuple(float(v) for v in per_frame_errors(pairs)),
        len(pairs),
    )
