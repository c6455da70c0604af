"""
Copyright 2026 pyWmlr contributors

WMLR library - Multinomial logistic regression with a group-l1 penalty

The training objective is f(W) + lambda * sum_{i in S} sum_k |W[k, i]| where f is the
negative log-likelihood of the softmax model. It is minimized by proximal gradient
descent (optionally accelerated, monotone variant with momentum restarts) with backtracking
on the step size.
Parameters are stored as a K x I matrix, one row per class and one column per feature;
columns outside the feature subset S stay exactly zero.
"""


import logging
import math
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple, Union
import numpy as np
from scipy.special import logsumexp, softmax
from ._preprocess import apply_scaler
from .data_types import LabeledPoint, LabeledSet, QuantizationScheme, Scaler
from .errors import DegenerateData, DidNotConverge, DimensionMismatch, LabelOutOfRange

logger = logging.getLogger(__name__)

DEFAULT_LAMBDA = 1e-3
# Step sizes below this are treated as a stalled line search
MIN_STEP = 1e-30
# Each iteration first retries a step this much longer than the last accepted one
STEP_GROWTH = 1.2

TrainingData = Union[LabeledSet, Sequence[LabeledPoint]]


@dataclass(frozen=True)
class SolverOptions:
    """Proximal gradient settings"""
    # Stop when the gradient-mapping norm divided by the sample count N falls below this
    tol_per_sample: float = 1e-6
    max_iters: int = 5000
    # Monotone accelerated steps instead of plain proximal gradient steps
    accelerate: bool = True
    # Raise DidNotConverge instead of returning a report with converged=False
    strict: bool = False
    initial_step: float = 1.0

    def __post_init__(self):
        if not self.tol_per_sample > 0.0:
            raise ValueError(f"tol_per_sample must be positive, got {self.tol_per_sample}")
        if self.max_iters < 1:
            raise ValueError(f"max_iters must be at least 1, got {self.max_iters}")
        if not self.initial_step > 0.0:
            raise ValueError(f"initial_step must be positive, got {self.initial_step}")


@dataclass(frozen=True)
class TrainReport:
    """Outcome of one training run"""
    final_objective: float
    iterations: int
    converged: bool
    objective_trace: Tuple[float, ...] = field(default=())
    gradient_mapping_norm: float = math.inf
    step: float = 1.0


@dataclass(frozen=True, eq=False)
class MLRModel:
    """Trained softmax classifier restricted to a feature subset"""
    params: np.ndarray
    subset: Tuple[int, ...]
    lam: float
    scheme: Optional[QuantizationScheme] = None
    scaler: Optional[Scaler] = None
    intercept: Optional[np.ndarray] = None

    def __post_init__(self):
        params = np.atleast_2d(np.asarray(self.params, dtype=np.float64))
        object.__setattr__(self, "params", params)
        object.__setattr__(self, "subset", tuple(int(i) for i in self.subset))
        if self.intercept is not None:
            object.__setattr__(self, "intercept", np.asarray(self.intercept, dtype=np.float64).reshape(-1))
            if len(self.intercept) != params.shape[0]:
                raise ValueError("intercept length differs from the class count")
        _check_subset(self.subset, params.shape[1])
        if not np.all(np.isfinite(params)):
            raise ValueError("Parameter matrix has non-finite entries")
        if self.scheme is not None and self.scheme.num_classes != params.shape[0]:
            raise ValueError(f"{params.shape[0]} parameter rows for a {self.scheme.num_classes}-class scheme")

    @property
    def num_classes(self) -> int:
        """K"""
        return self.params.shape[0]

    @property
    def dimension(self) -> int:
        """Full feature dimension I"""
        return self.params.shape[1]

    def transform(self, x: np.ndarray) -> np.ndarray:
        """Apply the model's scaler, if any, to raw features"""
        x = np.asarray(x, dtype=np.float64)
        return apply_scaler(self.scaler, x) if self.scaler is not None else x

    def __repr__(self):
        return f"MLRModel (K: {self.num_classes}, I: {self.dimension}, subset: {list(self.subset)}, lambda: {self.lam})"


def _check_subset(subset: Sequence[int], dimension: int) -> None:
    if not subset:
        raise ValueError("Feature subset is empty")
    if len(set(subset)) != len(subset):
        raise ValueError(f"Feature subset {list(subset)} has duplicates")
    if min(subset) < 0 or max(subset) >= dimension:
        raise ValueError(f"Feature subset {list(subset)} outside 0..{dimension - 1}")


def as_labeled_set(data: TrainingData) -> LabeledSet:
    """LabeledSet view of labeled training data"""
    return data if isinstance(data, LabeledSet) else LabeledSet.from_points(list(data))


def _check_labels(labels: np.ndarray, num_classes: int) -> None:
    if labels.size and (labels.min() < 1 or labels.max() > num_classes):
        raise LabelOutOfRange(f"labels span [{labels.min()}, {labels.max()}], classes are 1..{num_classes}")


def linear_scores(model: MLRModel, x: np.ndarray) -> np.ndarray:
    """
    Class scores w_k . x over the subset coordinates of a scaled feature vector

    Accepts a single vector (K scores) or an N x I matrix (N x K scores).
    """
    x = np.asarray(x, dtype=np.float64)
    if x.shape[-1] != model.dimension:
        raise DimensionMismatch(f"expected {model.dimension} features, got {x.shape[-1]}")
    subset = list(model.subset)
    scores = x[..., subset] @ model.params[:, subset].T
    if model.intercept is not None:
        scores = scores + model.intercept
    return scores


def softmax_probabilities(scores: np.ndarray) -> np.ndarray:
    """Softmax over the last axis, shifted by the maximum score"""
    return softmax(np.asarray(scores, dtype=np.float64), axis=-1)


def predict_class(model: MLRModel, x: np.ndarray) -> int:
    """1-based class with the largest score, lowest class on ties"""
    return int(np.argmax(linear_scores(model, np.asarray(x).reshape(-1)))) + 1


def predict_classes(model: MLRModel, features: np.ndarray) -> np.ndarray:
    """predict_class for every row of a scaled feature matrix"""
    scores = linear_scores(model, np.atleast_2d(features))
    return np.argmax(scores, axis=1).astype(np.int64) + 1


def _scores_and_labels(params: np.ndarray, data: TrainingData, intercept: Optional[np.ndarray],
                       subset: Optional[Sequence[int]]) -> Tuple[LabeledSet, np.ndarray, List[int]]:
    labeled = as_labeled_set(data)
    params = np.atleast_2d(np.asarray(params, dtype=np.float64))
    if labeled.dimension != params.shape[1]:
        raise DimensionMismatch(f"parameters for {params.shape[1]} features, data has {labeled.dimension}")
    _check_labels(labeled.labels, params.shape[0])
    columns = list(range(params.shape[1])) if subset is None else list(subset)
    scores = labeled.features[:, columns] @ params[:, columns].T
    if intercept is not None:
        scores = scores + np.asarray(intercept, dtype=np.float64)
    return labeled, scores, columns


def nll_objective(params: np.ndarray, data: TrainingData, intercept: Optional[np.ndarray] = None,
                  subset: Optional[Sequence[int]] = None) -> float:
    """Negative log-likelihood sum_n (log sum_k exp(w_k . x_n) - w_{y_n} . x_n)"""
    labeled, scores, _ = _scores_and_labels(params, data, intercept, subset)
    rows = np.arange(len(labeled))
    return float(np.sum(logsumexp(scores, axis=1) - scores[rows, labeled.labels - 1]))


def nll_gradient(params: np.ndarray, data: TrainingData, intercept: Optional[np.ndarray] = None,
                 subset: Optional[Sequence[int]] = None) -> np.ndarray:
    """
    Gradient of nll_objective with respect to the K x I parameter matrix

    Row k is sum_n (P(k | x_n) - [y_n = k]) x_n on the subset columns, zero elsewhere.
    """
    labeled, scores, columns = _scores_and_labels(params, data, intercept, subset)
    residual = softmax(scores, axis=1)
    residual[np.arange(len(labeled)), labeled.labels - 1] -= 1.0
    gradient = np.zeros_like(np.atleast_2d(np.asarray(params, dtype=np.float64)))
    gradient[:, columns] = residual.T @ labeled.features[:, columns]
    return gradient


def group_l1_penalty(params: np.ndarray, subset: Optional[Sequence[int]] = None) -> float:
    """sum over the subset features of the l1 norm of that feature's coefficients across classes"""
    params = np.atleast_2d(np.asarray(params, dtype=np.float64))
    columns = list(range(params.shape[1])) if subset is None else list(subset)
    return float(np.abs(params[:, columns]).sum())


def class_accuracy(predicted: Sequence[int], labels: Sequence[int]) -> float:
    """Fraction of matching class indices"""
    predicted = np.asarray(predicted).reshape(-1)
    labels = np.asarray(labels).reshape(-1)
    if len(predicted) != len(labels):
        raise ValueError(f"{len(predicted)} predictions for {len(labels)} labels")
    if not len(labels):
        return 0.0
    return float(np.mean(predicted == labels))


class _SmoothPart:
    """Negative log-likelihood on the subset columns, returning what the gradient needs"""
    def __init__(self, features: np.ndarray, labels: np.ndarray, num_classes: int, fit_intercept: bool):
        self.x = features
        self.rows = np.arange(len(labels))
        self.cols = labels - 1
        self.num_classes = num_classes
        self.fit_intercept = fit_intercept

    def evaluate(self, w: np.ndarray, b: Optional[np.ndarray]) -> Tuple[float, np.ndarray]:
        """Objective value and the class probabilities, one exp pass over the shifted scores"""
        scores = self.x @ w.T
        if b is not None:
            scores += b
        scores -= scores.max(axis=1, keepdims=True)
        expd = np.exp(scores)
        totals = expd.sum(axis=1)
        value = float(np.sum(np.log(totals) - scores[self.rows, self.cols]))
        expd /= totals[:, None]
        return value, expd

    def gradient(self, probs: np.ndarray) -> Tuple[np.ndarray, Optional[np.ndarray]]:
        residual = probs.copy()
        residual[self.rows, self.cols] -= 1.0
        grad_b = residual.sum(axis=0) if self.fit_intercept else None
        return residual.T @ self.x, grad_b


def _soft_threshold(values: np.ndarray, threshold: float) -> np.ndarray:
    return np.sign(values) * np.maximum(np.abs(values) - threshold, 0.0)


def _inner(a_w, a_b, c_w, c_b) -> float:
    total = float(np.sum(a_w * c_w))
    if a_b is not None:
        total += float(np.dot(a_b, c_b))
    return total


def _minus(a, c):
    return None if a is None else a - c


def _solve(smooth: _SmoothPart, lam: float, opts: SolverOptions):
    num_samples, width = smooth.x.shape
    x_w = np.zeros((smooth.num_classes, width))
    x_b = np.zeros(smooth.num_classes) if smooth.fit_intercept else None
    f_x, probs_x = smooth.evaluate(x_w, x_b)
    obj_x = f_x
    trace = [obj_x]

    y_w, y_b, f_y, probs_y = x_w, x_b, f_x, probs_x
    t = 1.0
    step = opts.initial_step
    mapping_norm = math.inf
    converged = False
    iterations = 0
    restarts = 0

    for iterations in range(1, opts.max_iters + 1):
        grad_w, grad_b = smooth.gradient(probs_y)
        step = min(opts.initial_step, STEP_GROWTH * step)
        while True:
            z_w = _soft_threshold(y_w - step * grad_w, step * lam)
            z_b = None if y_b is None else y_b - step * grad_b
            d_w = z_w - y_w
            d_b = _minus(z_b, y_b)
            f_z, probs_z = smooth.evaluate(z_w, z_b)
            norm_sq = _inner(d_w, d_b, d_w, d_b)
            if f_z <= f_y + _inner(grad_w, grad_b, d_w, d_b) + norm_sq / (2.0 * step) or step < MIN_STEP:
                break
            step *= 0.5

        mapping_norm = math.sqrt(norm_sq) / step
        obj_z = f_z + lam * float(np.abs(z_w).sum())
        improved = obj_z <= obj_x
        prev_w, prev_b = x_w, x_b
        if improved:
            x_w, x_b, f_x, probs_x, obj_x = z_w, z_b, f_z, probs_z, obj_z
        trace.append(obj_x)

        if mapping_norm / num_samples < opts.tol_per_sample:
            converged = True
            break
        if step < MIN_STEP or (not opts.accelerate and not improved):
            logger.debug("Line search stalled at iteration %d (step %g)", iterations, step)
            break

        if not opts.accelerate:
            y_w, y_b, f_y, probs_y = x_w, x_b, f_x, probs_x
            continue
        # Momentum restarts after a rejected step or when the new step points against the last move
        if not improved or _inner(_minus(y_w, z_w), _minus(y_b, z_b), _minus(z_w, prev_w), _minus(z_b, prev_b)) > 0.0:
            restarts += 1
            t = 1.0
            y_w, y_b, f_y, probs_y = x_w, x_b, f_x, probs_x
            continue
        t_next = (1.0 + math.sqrt(1.0 + 4.0 * t * t)) / 2.0
        beta = (t - 1.0) / t_next
        y_w = x_w + beta * (x_w - prev_w)
        if x_b is not None:
            y_b = x_b + beta * (x_b - prev_b)
        t = t_next
        f_y, probs_y = smooth.evaluate(y_w, y_b) if beta > 0.0 else (f_x, probs_x)

    logger.debug("Solver stopped after %d iterations with %d momentum restarts", iterations, restarts)
    report = TrainReport(obj_x, iterations, converged, tuple(trace), mapping_norm / num_samples, step)
    return x_w, x_b, report


def train(data: TrainingData, subset: Sequence[int], lam: float = DEFAULT_LAMBDA,
          opts: Optional[SolverOptions] = None, scheme: Optional[QuantizationScheme] = None,
          scaler: Optional[Scaler] = None, fit_intercept: bool = False,
          num_classes: Optional[int] = None) -> Tuple[MLRModel, TrainReport]:
    """
    Fit a group-l1 regularized softmax model on the subset features of scaled data

    The class count comes from the scheme, then num_classes, then the largest label.
    Training starts at W = 0 and is deterministic. A run that hits max_iters returns
    its report with converged=False, or raises DidNotConverge when opts.strict is set.
    """
    opts = opts or SolverOptions()
    labeled = as_labeled_set(data)
    if not lam > 0.0:
        raise ValueError(f"lambda must be positive, got {lam}")
    subset = tuple(sorted(int(i) for i in subset))
    _check_subset(subset, labeled.dimension)
    if scheme is not None:
        num_classes = scheme.num_classes
    elif num_classes is None:
        num_classes = int(labeled.labels.max()) if len(labeled) else 0
    _check_labels(labeled.labels, num_classes)
    if len(labeled) < num_classes:
        raise DegenerateData(f"{len(labeled)} training points for {num_classes} classes")

    smooth = _SmoothPart(labeled.features[:, list(subset)], labeled.labels, num_classes, fit_intercept)
    w, b, report = _solve(smooth, lam, opts)
    params = np.zeros((num_classes, labeled.dimension))
    params[:, list(subset)] = w
    model = MLRModel(params, subset, lam, scheme, scaler, b)

    if report.converged:
        logger.debug("Subset %s converged after %d iterations, objective %.6f",
                     list(subset), report.iterations, report.final_objective)
    else:
        message = (f"subset {list(subset)} stopped after {report.iterations} iterations, "
                   f"gradient mapping {report.gradient_mapping_norm:.3g} per sample "
                   f"(tolerance {opts.tol_per_sample:g})")
        if opts.strict:
            raise DidNotConverge(message, report)
        logger.warning("Solver did not converge: %s", message)
    return model, report
