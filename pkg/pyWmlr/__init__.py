"""
Copyright 2026 pyWmlr contributors

Python module correcting GPS altitude outliers with weighted multinomial logistic regression

Example usage:
data, rejections = pyWmlr.load_dataset("records.csv")
verdicts = pyWmlr.detect_dataset(data)
paths = pyWmlr.run_pipeline(pyWmlr.RunConfig(), "out")
"""


__copyright__ = "Copyright 2026 pyWmlr contributors"
__version__ = "1.1.0"


__all__ = [
    "data_types",
    "errors",
    "types",
    "_config",
    "_dataset",
    "_evaluate",
    "_geo",
    "_mlr",
    "_outlier",
    "_pipeline",
    "_preprocess",
    "_quantizer",
    "_serialization",
    "_svm",
    "_synthetic",
    "_wmlr",
]


from ._config import RunConfig, build_config, load_config_file
from ._dataset import (accepted_rows, feature_matrix, feature_vector, load_dataset, parse_csv_record, split_indices,
                       split_train_test, write_dataset, write_rejections)
from ._evaluate import ErrorReport, ErrorStats, cdf_points, error_stats, make_report, percentile, write_report
from ._geo import chord_distances, diameter_threshold, haversine_distance, haversine_matrix
from ._mlr import (MLRModel, SolverOptions, TrainReport, class_accuracy, linear_scores, nll_gradient,
                   nll_objective, predict_class, softmax_probabilities, train)
from ._outlier import detect_dataset, detect_outliers, group_traces, pairwise_distance_matrix
from ._pipeline import (clean_stage, detect_stage, evaluate_stage, predict_stage, run_pipeline, synth_stage,
                        train_stage)
from ._preprocess import apply_scaler, apply_sigma_filter, drop_missing, fit_scaler, invert_scaler, three_sigma_filter
from ._quantizer import class_of, fit_scheme, label_observations, predicted_altitude
from ._serialization import load_model, save_model
from ._svm import LinearSVMModel, predict_svm, train_svm_ovr
from ._synthetic import SynthConfig, barometric_altitude, generate_dataset, inject_outliers
from ._wmlr import (EnsembleModel, WeightedPrediction, correct_dataset, correct_outliers, make_subsets,
                    predict_weighted, train_ensemble)
from .data_types import *
from .errors import *
from .types import *
