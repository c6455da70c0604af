"""
Copyright 2026 pyWmlr contributors

WMLR library - Weighted ensemble of feature-subset MLR models

Every model votes a class on its own feature subset; the class centers are combined with
per-point weights formed from each model's distance to a reference altitude.
"""


import dataclasses
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from itertools import combinations
from math import comb
from typing import List, Optional, Sequence, Tuple
import numpy as np
from ._dataset import DEFAULT_SEED, feature_matrix
from ._mlr import (DEFAULT_LAMBDA, MLRModel, SolverOptions, TrainingData, TrainReport, as_labeled_set,
                   predict_classes, train)
from ._quantizer import predicted_altitudes
from .data_types import Dataset, OutlierVerdict, QuantizationScheme, Scaler, Trace
from .errors import BadCombination, EmptyEnsemble, IndexMismatch, MissingRequiredColumn
from .types import SubsetMode, WeightingMode

logger = logging.getLogger(__name__)

# Regularizes 1 / error in inverse weighting
INVERSE_EPSILON = 1e-9


@dataclass(frozen=True, eq=False)
class EnsembleModel:
    """L subset models sharing one quantization scheme and one scaler"""
    models: Tuple[MLRModel, ...]
    scheme: QuantizationScheme
    scaler: Optional[Scaler] = None
    weighting: WeightingMode = WeightingMode.PAPER
    subset_mode: SubsetMode = SubsetMode.ENUMERATE
    seed: int = DEFAULT_SEED
    reports: Tuple[TrainReport, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "models", tuple(self.models))
        if not self.models:
            raise EmptyEnsemble("ensemble has no models")
        sizes = {len(model.subset) for model in self.models}
        if len(sizes) != 1:
            raise ValueError(f"subset sizes differ: {sorted(sizes)}")
        for model in self.models:
            if model.scheme != self.scheme:
                raise ValueError("all models must share the ensemble's quantization scheme")
            if model.scaler != self.scaler:
                raise ValueError("all models must share the ensemble's scaler")

    @property
    def subsets(self) -> List[Tuple[int, ...]]:
        """S_l in training order"""
        return [model.subset for model in self.models]

    @property
    def size(self) -> int:
        """L"""
        return len(self.models)

    @property
    def subset_size(self) -> int:
        """r"""
        return len(self.models[0].subset)

    @property
    def lam(self) -> float:
        return self.models[0].lam

    def __repr__(self):
        return f"EnsembleModel (L: {self.size}, r: {self.subset_size}, K: {self.scheme.num_classes})"


@dataclass(frozen=True)
class WeightedPrediction:
    """Per-model votes and their weighted altitude for one point"""
    per_model_classes: Tuple[int, ...]
    per_model_altitudes: Tuple[float, ...]
    errors: Tuple[float, ...]
    weights: Tuple[float, ...]
    altitude: float


def make_subsets(dimension: int, r: int, count: Optional[int] = None, mode: SubsetMode = SubsetMode.ENUMERATE,
                 seed: int = DEFAULT_SEED) -> List[Tuple[int, ...]]:
    """
    Feature subsets of size r out of `dimension` features (0-based indices)

    Enumerate mode returns all C(dimension, r) subsets in lexicographic order and
    rejects any other count. Random mode draws `count` sorted subsets without
    repetition inside a draw; draws may repeat.
    """
    if not 1 <= r <= dimension:
        raise ValueError(f"subset size {r} outside [1, {dimension}]")
    mode = SubsetMode(mode)
    if mode == SubsetMode.ENUMERATE:
        subsets = list(combinations(range(dimension), r))
        if count is not None and count != len(subsets):
            raise BadCombination(f"L = {count} but C({dimension}, {r}) = {comb(dimension, r)}")
        return subsets

    if count is None or count < 1:
        raise ValueError(f"random subset mode needs a positive count, got {count}")
    rng = np.random.default_rng(seed)
    return [tuple(sorted(int(i) for i in rng.choice(dimension, size=r, replace=False))) for _ in range(count)]


def train_ensemble(train_set: TrainingData, scheme: QuantizationScheme, lam: float = DEFAULT_LAMBDA,
                   subsets: Optional[Sequence[Sequence[int]]] = None, opts: Optional[SolverOptions] = None,
                   scaler: Optional[Scaler] = None, fit_intercept: bool = False, workers: Optional[int] = None,
                   weighting: WeightingMode = WeightingMode.PAPER, subset_mode: SubsetMode = SubsetMode.ENUMERATE,
                   seed: int = DEFAULT_SEED) -> EnsembleModel:
    """
    Train one MLR model per subset on scaled training data

    Models are trained and stored in subset order; with workers > 1 they are fitted
    concurrently, which does not change the result.
    """
    labeled = as_labeled_set(train_set)
    if len(labeled) == 0:
        raise EmptyEnsemble("no training points")
    if subsets is None:
        subsets = make_subsets(labeled.dimension, labeled.dimension - 1)
    subsets = [tuple(s) for s in subsets]
    if not subsets:
        raise EmptyEnsemble("no feature subsets")

    def fit(subset):
        return train(labeled, subset, lam, opts, scheme, scaler, fit_intercept)

    if workers and workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as executor:
            results = list(executor.map(fit, subsets))
    else:
        results = [fit(subset) for subset in subsets]

    models = tuple(model for model, _ in results)
    reports = tuple(report for _, report in results)
    logger.info("Trained %d subset models (%d converged)", len(models), sum(r.converged for r in reports))
    return EnsembleModel(models, scheme, scaler, WeightingMode(weighting), SubsetMode(subset_mode), seed, reports)


def ensemble_weights(errors: np.ndarray, weighting: WeightingMode = WeightingMode.PAPER) -> np.ndarray:
    """
    Weights from L x N absolute errors, normalized per column

    WeightingMode.PAPER is proportional to the error and falls back to 1/L when all errors
    of a point are zero; inverse weighting is proportional to 1 / (error + 1e-9).
    """
    errors = np.atleast_2d(np.asarray(errors, dtype=np.float64))
    count = errors.shape[0]
    if WeightingMode(weighting) == WeightingMode.INVERSE:
        inverse = 1.0 / (errors + INVERSE_EPSILON)
        return inverse / inverse.sum(axis=0)
    totals = errors.sum(axis=0)
    weights = np.full_like(errors, 1.0 / count)
    nonzero = totals > 0.0
    weights[:, nonzero] = errors[:, nonzero] / totals[nonzero]
    return weights


def predict_weighted_batch(ensemble: EnsembleModel, features: np.ndarray,
                           h_observed: Sequence[float]) -> List[WeightedPrediction]:
    """predict_weighted for every row of a raw feature matrix"""
    if not ensemble.models:
        raise EmptyEnsemble("ensemble has no models")
    features = np.atleast_2d(np.asarray(features, dtype=np.float64))
    h_observed = np.asarray(h_observed, dtype=np.float64).reshape(-1)
    if len(h_observed) != len(features):
        raise ValueError(f"{len(h_observed)} reference altitudes for {len(features)} points")
    if not np.all(np.isfinite(h_observed)):
        raise ValueError("reference altitudes must be finite")

    scaled = ensemble.models[0].transform(features)
    classes = np.vstack([predict_classes(model, scaled) for model in ensemble.models])
    centers = predicted_altitudes(ensemble.scheme, classes.reshape(-1)).reshape(classes.shape)
    errors = np.abs(h_observed[None, :] - centers)
    weights = ensemble_weights(errors, ensemble.weighting)
    altitudes = np.clip((weights * centers).sum(axis=0), centers.min(axis=0), centers.max(axis=0))

    return [
        WeightedPrediction(
            tuple(int(k) for k in classes[:, n]),
            tuple(float(h) for h in centers[:, n]),
            tuple(float(e) for e in errors[:, n]),
            tuple(float(w) for w in weights[:, n]),
            float(altitudes[n]),
        )
        for n in range(len(features))
    ]


def predict_weighted(ensemble: EnsembleModel, x: Sequence[float], h_observed: float) -> WeightedPrediction:
    """
    Weighted altitude of one raw feature vector

    h_observed is the reference altitude the per-model errors are measured against:
    the true altitude when scoring a test set, the recorded altitude when correcting outliers.
    """
    return predict_weighted_batch(ensemble, np.asarray(x, dtype=np.float64).reshape(1, -1), [h_observed])[0]


def correct_outliers(ensemble: EnsembleModel, trace: Trace, verdicts: Sequence[OutlierVerdict]) -> Trace:
    """New trace with every flagged altitude replaced, the old value kept as original_altitude"""
    if len(verdicts) != len(trace) or any(v.index != i for i, v in enumerate(verdicts)):
        raise IndexMismatch(f"{len(verdicts)} verdicts do not line up with a trace of {len(trace)} points")
    flagged = [v.index for v in verdicts if v.is_outlier]
    if not flagged:
        return trace
    corrected = _corrected_observations(ensemble, [trace.observations[i] for i in flagged])
    observations = list(trace.observations)
    for position, obs in zip(flagged, corrected):
        observations[position] = obs
    return Trace(trace.device_id, tuple(observations))


def correct_dataset(ensemble: EnsembleModel, data: Dataset, outlier_indices: Sequence[int]) -> Dataset:
    """correct_outliers over a whole dataset given the flagged dataset indices"""
    indices = sorted(set(int(i) for i in outlier_indices))
    if indices and (indices[0] < 0 or indices[-1] >= len(data)):
        raise IndexMismatch(f"outlier index outside 0..{len(data) - 1}")
    if not indices:
        return data
    points = list(data)
    for index, obs in zip(indices, _corrected_observations(ensemble, [points[i] for i in indices])):
        points[index] = obs
    logger.info("Corrected %d outlier altitudes", len(indices))
    return data.with_points(points)


def _corrected_observations(ensemble: EnsembleModel, observations):
    missing = [obs for obs in observations if obs.altitude is None]
    if missing:
        raise MissingRequiredColumn(f"flagged record of {missing[0].device_id} at {missing[0].time} has no altitude")
    predictions = predict_weighted_batch(ensemble, feature_matrix(observations),
                                         [obs.altitude for obs in observations])
    return [
        dataclasses.replace(obs, altitude=prediction.altitude, original_altitude=obs.altitude)
        for obs, prediction in zip(observations, predictions)
    ]
