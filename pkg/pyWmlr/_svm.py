"""
Copyright 2026 pyWmlr contributors

WMLR library - Linear one-vs-rest SVM baseline
"""


import logging
import math
from dataclasses import dataclass
from typing import Optional, Sequence
import numpy as np
from ._dataset import DEFAULT_SEED
from ._mlr import TrainingData, as_labeled_set
from ._preprocess import apply_scaler
from .data_types import QuantizationScheme, Scaler
from .errors import DegenerateData, DimensionMismatch, LabelOutOfRange

logger = logging.getLogger(__name__)

DEFAULT_C = 1.0
DEFAULT_EPOCHS = 20


@dataclass(frozen=True, eq=False)
class LinearSVMModel:
    """K one-vs-rest hyperplanes: class k scores w_k . x + b_k"""
    weights: np.ndarray
    bias: np.ndarray
    c: float
    scheme: Optional[QuantizationScheme] = None
    scaler: Optional[Scaler] = None

    def __post_init__(self):
        weights = np.atleast_2d(np.asarray(self.weights, dtype=np.float64))
        bias = np.asarray(self.bias, dtype=np.float64).reshape(-1)
        object.__setattr__(self, "weights", weights)
        object.__setattr__(self, "bias", bias)
        if len(bias) != weights.shape[0]:
            raise ValueError(f"{len(bias)} biases for {weights.shape[0]} classes")
        if not (np.all(np.isfinite(weights)) and np.all(np.isfinite(bias))):
            raise ValueError("SVM parameters must be finite")
        if not self.c > 0.0:
            raise ValueError(f"C must be positive, got {self.c}")

    @property
    def num_classes(self) -> int:
        return self.weights.shape[0]

    @property
    def dimension(self) -> int:
        return self.weights.shape[1]

    def transform(self, x: np.ndarray) -> np.ndarray:
        """Apply the model's scaler, if any, to raw features"""
        x = np.asarray(x, dtype=np.float64)
        return apply_scaler(self.scaler, x) if self.scaler is not None else x


def train_svm_ovr(train_set: TrainingData, c: float = DEFAULT_C, epochs: int = DEFAULT_EPOCHS,
                  seed: int = DEFAULT_SEED, scheme: Optional[QuantizationScheme] = None,
                  scaler: Optional[Scaler] = None, num_classes: Optional[int] = None,
                  project: bool = True) -> LinearSVMModel:
    """
    Stochastic subgradient training of K binary hinge-loss classifiers on scaled data

    Each classifier minimizes (C/2) |w|^2 + mean hinge loss with steps 1/(C t); the bias
    is an extra, equally regularized coordinate. All classes are updated together, one
    sample at a time, in a seeded per-epoch shuffle. With `project` the iterates are kept
    inside the ball of radius 1/sqrt(C), which holds the optimum.
    """
    labeled = as_labeled_set(train_set)
    if not c > 0.0:
        raise ValueError(f"C must be positive, got {c}")
    if epochs < 1:
        raise ValueError(f"epochs must be at least 1, got {epochs}")
    if scheme is not None:
        num_classes = scheme.num_classes
    elif num_classes is None:
        num_classes = int(labeled.labels.max()) if len(labeled) else 0
    if len(labeled) and (labeled.labels.min() < 1 or labeled.labels.max() > num_classes):
        raise LabelOutOfRange(f"labels outside 1..{num_classes}")
    if len(labeled) < num_classes or num_classes < 1:
        raise DegenerateData(f"{len(labeled)} training points for {num_classes} classes")

    count = len(labeled)
    augmented = np.hstack([labeled.features, np.ones((count, 1))])
    targets = np.where(labeled.labels[:, None] == np.arange(1, num_classes + 1)[None, :], 1.0, -1.0)
    planes = np.zeros((num_classes, augmented.shape[1]))
    radius = 1.0 / math.sqrt(c)
    rng = np.random.default_rng(seed)

    step_count = 0
    for _ in range(epochs):
        for n in rng.permutation(count):
            step_count += 1
            eta = 1.0 / (c * step_count)
            x, y = augmented[n], targets[n]
            active = y * (planes @ x) < 1.0
            planes *= 1.0 - eta * c
            planes[active] += eta * y[active, None] * x[None, :]
            if project:
                norms = np.linalg.norm(planes, axis=1)
                over = norms > radius
                planes[over] *= (radius / norms[over])[:, None]

    logger.debug("Trained %d one-vs-rest SVMs on %d points, %d epochs", num_classes, count, epochs)
    return LinearSVMModel(planes[:, :-1].copy(), planes[:, -1].copy(), c, scheme, scaler)


def decision_values(model: LinearSVMModel, x: np.ndarray) -> np.ndarray:
    """w_k . x + b_k for one scaled vector or the rows of a matrix"""
    x = np.asarray(x, dtype=np.float64)
    if x.shape[-1] != model.dimension:
        raise DimensionMismatch(f"expected {model.dimension} features, got {x.shape[-1]}")
    return x @ model.weights.T + model.bias


def predict_svm(model: LinearSVMModel, x: Sequence[float]) -> int:
    """1-based class with the largest decision value, lowest class on ties"""
    return int(np.argmax(decision_values(model, np.asarray(x, dtype=np.float64).reshape(-1)))) + 1


def predict_svm_batch(model: LinearSVMModel, features: np.ndarray) -> np.ndarray:
    """predict_svm for every row of a scaled feature matrix"""
    return np.argmax(decision_values(model, np.atleast_2d(features)), axis=1).astype(np.int64) + 1
