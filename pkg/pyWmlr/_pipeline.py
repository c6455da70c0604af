"""
Copyright 2026 pyWmlr contributors

WMLR library - Pipeline stages working on files

Every stage reads its inputs from disk and writes its artifacts back, so running the stages
one after another gives the same files as run_pipeline.
"""


import json
import logging
import os
from typing import Dict, List, Optional, Sequence, Tuple
import numpy as np
import pandas as pd
from ._config import RunConfig
from ._dataset import (accepted_rows, feature_matrix, load_dataset, split_indices, write_dataset,
                       write_rejections)
from ._evaluate import PREDICTION_COLUMNS, reports_from_predictions, write_predictions, write_report
from ._mlr import class_accuracy, predict_classes, train
from ._outlier import DEFAULT_WINDOW, detect_dataset, read_outlier_indices, write_verdicts
from ._preprocess import (DEFAULT_MONITORED, SIGMA_FACTOR, apply_scaler, apply_sigma_filter, drop_missing,
                          fit_scaler)
from ._quantizer import classes_of, fit_scheme, label_observations, predicted_altitudes
from ._serialization import load_model, save_model
from ._svm import LinearSVMModel, predict_svm_batch, train_svm_ovr
from ._synthetic import (PA_PER_HPA, SynthConfig, barometric_altitude, generate_dataset,
                         write_ground_truth)
from ._wmlr import EnsembleModel, correct_dataset, make_subsets, predict_weighted_batch, train_ensemble
from .data_types import Dataset, LabeledSet, Rejection
from .errors import IndexMismatch, MissingRequiredColumn, TooFewPoints
from .types import Algorithm, AltitudeSource, ErrorCode, Field, ReportFormat

logger = logging.getLogger(__name__)

DATA_FILE = "data.csv"
CLEANED_FILE = "cleaned.csv"
VERDICTS_FILE = "verdicts.csv"
SPLIT_FILE = "split.csv"
MODEL_DIR = "models"
PREDICTIONS_FILE = "predictions.csv"
CORRECTED_FILE = "corrected.csv"
MANIFEST_FILE = "manifest.json"
SPLIT_COLUMNS = ["index", "set"]

METHOD_NAMES = {Algorithm.MLR: "MLR", Algorithm.WMLR: "WMLR", Algorithm.SVM: "SVM"}


def _sibling(path: str, suffix: str) -> str:
    base, _ = os.path.splitext(path)
    return base + suffix


def truth_path(data_path: str) -> str:
    """Ground-truth file written next to a synthetic dataset"""
    return _sibling(data_path, ".truth.csv")


def rejections_path(cleaned_path: str) -> str:
    """Rejection log written next to a cleaned dataset"""
    return _sibling(cleaned_path, ".rejections.csv")


def model_path(train_dir: str, algorithm: Algorithm) -> str:
    """Model file of an algorithm inside a training directory"""
    return os.path.join(train_dir, MODEL_DIR, f"{Algorithm(algorithm).value}.model")


def report_path(out_dir: str, fmt: ReportFormat = ReportFormat.CSV) -> str:
    return os.path.join(out_dir, "report.csv" if ReportFormat(fmt) == ReportFormat.CSV else "report.txt")


def _ensure_parent(path: str) -> None:
    parent = os.path.dirname(os.path.abspath(path))
    os.makedirs(parent, exist_ok=True)


def synth_stage(out_path: str, synth_config: Optional[SynthConfig] = None) -> List[str]:
    """Generate a synthetic dataset and its ground truth"""
    data, truth = generate_dataset(synth_config)
    _ensure_parent(out_path)
    write_dataset(data, out_path)
    write_ground_truth(truth, truth_path(out_path))
    return [out_path, truth_path(out_path)]


def clean_stage(in_path: str, out_path: str, monitored: Sequence[str] = DEFAULT_MONITORED) -> List[str]:
    """
    Load a dataset, drop records without features or altitude, then apply the 3-sigma rule

    The rejection log lists every input row that did not make it into the cleaned file.
    """
    data, rejections = load_dataset(in_path)
    rows = accepted_rows(len(data), rejections)
    total = len(data) + len(rejections)
    required = Field.getFeatureFields() + [Field.ALTITUDE]

    complete_rows = []
    for row, obs in zip(rows, data):
        missing = [name for name in required if not obs.has(name)]
        if missing:
            rejections.append(Rejection(row, ErrorCode.MISSING_REQUIRED_COLUMN, f"lacks {', '.join(missing)}"))
        else:
            complete_rows.append(row)
    complete = drop_missing(data, required)

    cleaned, result = apply_sigma_filter(complete, monitored)
    for index in result.removed:
        obs = complete[index]
        fields = [name for name in result.stats
                  if abs(getattr(obs, name) - result.stats[name].mean) >= SIGMA_FACTOR * result.stats[name].std > 0.0]
        rejections.append(Rejection(complete_rows[index], ErrorCode.VALUE_OUT_OF_RANGE,
                                    f"3-sigma rule on {', '.join(fields)}"))

    _ensure_parent(out_path)
    write_dataset(cleaned, out_path)
    write_rejections(sorted(rejections, key=lambda rejection: rejection.row), rejections_path(out_path))
    logger.info("Kept %d of %d rows of %s", len(cleaned), total, in_path)
    return [out_path, rejections_path(out_path)]


def detect_stage(in_path: str, out_path: str, window: float = DEFAULT_WINDOW,
                 workers: Optional[int] = None) -> List[str]:
    """Flag outliers per trace and write the verdicts"""
    data, _ = load_dataset(in_path)
    results = detect_dataset(data, window, workers=workers)
    _ensure_parent(out_path)
    write_verdicts(results, out_path)
    return [out_path]


def _inlier_indices(data: Dataset, verdicts_path: Optional[str]) -> List[int]:
    if not verdicts_path:
        return list(range(len(data)))
    if not os.path.isfile(verdicts_path):
        raise FileNotFoundError(f"File does not exist: {verdicts_path}")
    outliers = set(read_outlier_indices(verdicts_path))
    if outliers and max(outliers) >= len(data):
        raise IndexMismatch(f"{verdicts_path} flags index {max(outliers)} of a {len(data)}-record dataset")
    return [i for i in range(len(data)) if i not in outliers]


def write_split(train: Sequence[int], test: Sequence[int], path: str) -> None:
    """Split CSV with columns index,set in dataset order"""
    rows = sorted([(int(i), "train") for i in train] + [(int(i), "test") for i in test])
    pd.DataFrame(rows, columns=SPLIT_COLUMNS).to_csv(path, index=False)


def read_split(path: str) -> Tuple[List[int], List[int]]:
    """Training and test dataset indices of a split CSV"""
    if not os.path.isfile(path):
        raise FileNotFoundError(f"File does not exist: {path}")
    frame = pd.read_csv(path, dtype={"set": str})
    train_rows = frame.loc[frame["set"] == "train", "index"]
    test_rows = frame.loc[frame["set"] == "test", "index"]
    return [int(i) for i in train_rows], [int(i) for i in test_rows]


def _scaled(labeled: LabeledSet, scaler) -> LabeledSet:
    return LabeledSet(apply_scaler(scaler, labeled.features), labeled.altitudes, labeled.labels)


def train_stage(in_path: str, out_dir: str, config: Optional[RunConfig] = None,
                verdicts_path: Optional[str] = None,
                algorithms: Optional[Sequence[Algorithm]] = None) -> List[str]:
    """
    Split the inliers, quantize and standardize on the training part, and fit the models

    Writes split.csv and one models/<algorithm>.model per requested algorithm. Flagged
    outliers of the verdicts file are left out of both parts.
    """
    config = config or RunConfig()
    algorithms = [Algorithm(a) for a in (algorithms or Algorithm.all())]
    data, _ = load_dataset(in_path)
    inliers = _inlier_indices(data, verdicts_path)
    train_positions, test_positions = split_indices(len(inliers), config.train_fraction, config.seed)
    train_indices = sorted(inliers[i] for i in train_positions)
    test_indices = sorted(inliers[i] for i in test_positions)

    train_points = [data[i] for i in train_indices]
    missing = [i for i in train_indices if not data[i].has(Field.ALTITUDE)]
    if missing:
        raise MissingRequiredColumn(f"training record {missing[0]} has no altitude")
    scheme = fit_scheme([obs.altitude for obs in train_points], config.delta)
    labeled = label_observations(train_points, scheme)
    scaler = fit_scaler(labeled.features, minmax=config.minmax)
    scaled = _scaled(labeled, scaler)
    logger.info("Training on %d of %d inliers, %d altitude classes", len(scaled), len(inliers), scheme.num_classes)

    os.makedirs(os.path.join(out_dir, MODEL_DIR), exist_ok=True)
    split_file = os.path.join(out_dir, SPLIT_FILE)
    write_split(train_indices, test_indices, split_file)
    written = [split_file]
    opts = config.solver_options
    for algorithm in algorithms:
        if algorithm == Algorithm.MLR:
            model, _ = train(scaled, range(scaled.dimension), config.lam, opts, scheme, scaler, config.fit_intercept)
            accuracy = class_accuracy(predict_classes(model, scaled.features), scaled.labels)
        elif algorithm == Algorithm.WMLR:
            subsets = make_subsets(scaled.dimension, config.r, config.L, config.subset_mode, config.seed)
            model = train_ensemble(scaled, scheme, config.lam, subsets, opts, scaler, config.fit_intercept,
                                   config.workers, config.weighting, config.subset_mode, config.seed)
            accuracy = float(np.mean([class_accuracy(predict_classes(m, scaled.features), scaled.labels)
                                      for m in model.models]))
        else:
            model = train_svm_ovr(scaled, config.svm_c, config.svm_epochs, config.seed, scheme, scaler)
            accuracy = class_accuracy(predict_svm_batch(model, scaled.features), scaled.labels)
        logger.info("%s training class accuracy %.4f", METHOD_NAMES[algorithm], accuracy)
        path = model_path(out_dir, algorithm)
        save_model(model, path)
        written.append(path)
    return written


def _reference_altitudes(points: Sequence, altitude_source: AltitudeSource) -> np.ndarray:
    if AltitudeSource(altitude_source) == AltitudeSource.GROUND_TRUTH:
        return np.array([obs.altitude for obs in points], dtype=np.float64)
    missing = [obs for obs in points if obs.pressure is None]
    if missing:
        raise MissingRequiredColumn(f"record of {missing[0].device_id} at {missing[0].time} has no pressure")
    return np.array([barometric_altitude(obs.pressure * PA_PER_HPA) for obs in points], dtype=np.float64)


def _available_algorithms(train_dir: str, algorithms: Optional[Sequence[Algorithm]]) -> List[Algorithm]:
    if algorithms:
        chosen = [Algorithm(a) for a in algorithms]
        for algorithm in chosen:
            if not os.path.isfile(model_path(train_dir, algorithm)):
                raise FileNotFoundError(f"File does not exist: {model_path(train_dir, algorithm)}")
        return chosen
    chosen = [a for a in Algorithm.all() if os.path.isfile(model_path(train_dir, a))]
    if not chosen:
        raise FileNotFoundError(f"No model files in {os.path.join(train_dir, MODEL_DIR)}")
    return chosen


def model_altitudes(model, features: np.ndarray, reference: np.ndarray) -> np.ndarray:
    """Altitudes predicted by any model kind for raw feature rows"""
    if model.scheme is None:
        raise ValueError("model carries no quantization scheme")
    if isinstance(model, EnsembleModel):
        return np.array([p.altitude for p in predict_weighted_batch(model, features, reference)])
    if isinstance(model, LinearSVMModel):
        classes = predict_svm_batch(model, model.transform(features))
    else:
        classes = predict_classes(model, model.transform(features))
    return predicted_altitudes(model.scheme, classes)


def predict_stage(in_path: str, train_dir: str, out_path: str,
                  altitude_source: AltitudeSource = AltitudeSource.GROUND_TRUTH,
                  algorithms: Optional[Sequence[Algorithm]] = None, verdicts_path: Optional[str] = None,
                  corrected_path: Optional[str] = None) -> List[str]:
    """
    Predict the test-point altitudes with every trained model

    Errors are taken against the recorded altitude of each test point. The reference
    altitude of the weighted ensemble is that recorded altitude for ground_truth, or the
    barometric altitude of the record's own pressure for observed. With a verdicts file and
    a corrected_path the flagged records of the dataset are corrected by the ensemble.
    """
    data, _ = load_dataset(in_path)
    _, test_indices = read_split(os.path.join(train_dir, SPLIT_FILE))
    if test_indices and max(test_indices) >= len(data):
        raise IndexMismatch(f"split refers to record {max(test_indices)} of a {len(data)}-record dataset")
    if not test_indices:
        raise TooFewPoints("split has no test records")
    chosen = _available_algorithms(train_dir, algorithms)

    points = [data[i] for i in test_indices]
    features = feature_matrix(points)
    recorded = _reference_altitudes(points, AltitudeSource.GROUND_TRUTH)
    reference = _reference_altitudes(points, altitude_source)
    frames = []
    models: Dict[Algorithm, object] = {}
    for algorithm in chosen:
        models[algorithm] = load_model(model_path(train_dir, algorithm))
        predicted = model_altitudes(models[algorithm], features, reference)
        frames.append(pd.DataFrame({
            "method": METHOD_NAMES[algorithm],
            "index": test_indices,
            "altitude": recorded,
            "predicted_altitude": predicted,
            "error_m": np.abs(predicted - recorded),
        }, columns=PREDICTION_COLUMNS))
        scheme = models[algorithm].scheme
        logger.info("%s test class accuracy %.4f", METHOD_NAMES[algorithm],
                    class_accuracy(classes_of(scheme, predicted, clip=True), classes_of(scheme, recorded, clip=True)))

    _ensure_parent(out_path)
    write_predictions(pd.concat(frames, ignore_index=True), out_path)
    written = [out_path]
    if verdicts_path and corrected_path:
        ensemble = models.get(Algorithm.WMLR)
        if ensemble is None:
            ensemble = load_model(model_path(train_dir, Algorithm.WMLR))
        corrected = correct_dataset(ensemble, data, read_outlier_indices(verdicts_path))
        write_dataset(corrected, corrected_path, Field.getDefaultSchema() + [Field.ORIGINAL_ALTITUDE])
        written.append(corrected_path)
    return written


def evaluate_stage(predictions_path: str, out_path: str, fmt: ReportFormat = ReportFormat.CSV,
                   altitude_source: AltitudeSource = AltitudeSource.GROUND_TRUTH) -> List[str]:
    """Error statistics and CDF files of a predictions file"""
    reports = reports_from_predictions(predictions_path, altitude_source)
    _ensure_parent(out_path)
    return write_report(reports, out_path, fmt)


def _manifest(config: RunConfig, source: str, artifacts: Sequence[str], out_dir: str) -> Dict:
    return {
        "input": source,
        "seed": config.seed,
        "lambda": config.lam,
        "delta": config.delta,
        "r": config.r,
        "L": config.model_count,
        "subset_mode": config.subset_mode.value,
        "weighting": config.weighting.value,
        "altitude_source": config.altitude_source.value,
        "fit_intercept": config.fit_intercept,
        "train_fraction": config.train_fraction,
        "window": config.window,
        "monitored": list(config.monitored),
        "artifacts": [os.path.relpath(path, out_dir).replace(os.sep, "/") for path in artifacts],
    }


def run_pipeline(config: Optional[RunConfig] = None, out_dir: str = ".", input_path: Optional[str] = None,
                 synth_config: Optional[SynthConfig] = None) -> List[str]:
    """
    Full run: synthesize or load, clean, detect, train, predict, correct and evaluate

    Without input_path a synthetic dataset seeded with config.seed is generated first.
    Returns every artifact path, the manifest last.
    """
    config = config or RunConfig()
    os.makedirs(out_dir, exist_ok=True)
    written: List[str] = []
    if input_path is None:
        synth_config = synth_config or SynthConfig(seed=config.seed)
        input_path = os.path.join(out_dir, DATA_FILE)
        written += synth_stage(input_path, synth_config)
        source = "synthetic"
    else:
        if not os.path.isfile(input_path):
            raise FileNotFoundError(f"File does not exist: {input_path}")
        source = os.path.basename(input_path)

    cleaned = os.path.join(out_dir, CLEANED_FILE)
    verdicts = os.path.join(out_dir, VERDICTS_FILE)
    predictions = os.path.join(out_dir, PREDICTIONS_FILE)
    written += clean_stage(input_path, cleaned, config.monitored)
    written += detect_stage(cleaned, verdicts, config.window, config.workers)
    written += train_stage(cleaned, out_dir, config, verdicts)
    written += predict_stage(cleaned, out_dir, predictions, config.altitude_source, None, verdicts,
                             os.path.join(out_dir, CORRECTED_FILE))
    written += evaluate_stage(predictions, report_path(out_dir, config.report_format), config.report_format,
                              config.altitude_source)

    manifest = os.path.join(out_dir, MANIFEST_FILE)
    with open(manifest, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(_manifest(config, source, written, out_dir), fh, indent=2, sort_keys=True)
        fh.write("\n")
    written.append(manifest)
    return written
