"""
Copyright 2026 pyWmlr contributors

WMLR library - Plain text model files

A file starts with "<kind> <version>" and continues with one "key value..." line per field.
Floats are written with repr and read back bit-exactly. Parameter matrices follow their
"params" line row by row. Ensemble files carry the shared settings first, then one
complete MLR block per model.
"""


import os
from typing import Iterator, List, Optional, Union
import numpy as np
from ._mlr import MLRModel
from ._svm import LinearSVMModel
from ._wmlr import EnsembleModel
from .data_types import QuantizationScheme, Scaler, Version
from .errors import ModelFormatError
from .types import SubsetMode, WeightingMode

FORMAT_VERSION = Version(1, 0)
MLR_KIND = "pywmlr-mlr"
ENSEMBLE_KIND = "pywmlr-ensemble"
SVM_KIND = "pywmlr-svm"

AnyModel = Union[MLRModel, EnsembleModel, LinearSVMModel]


def _floats(values) -> str:
    return " ".join(repr(float(v)) for v in np.asarray(values, dtype=np.float64).reshape(-1))


class _Reader:
    """Line cursor over a model file"""
    def __init__(self, text: str):
        self._lines: Iterator[str] = iter([line for line in text.splitlines() if line.strip()])

    def next_tokens(self) -> List[str]:
        try:
            return next(self._lines).split()
        except StopIteration:
            raise ModelFormatError("unexpected end of model file") from None

    def expect(self, key: str) -> List[str]:
        tokens = self.next_tokens()
        if not tokens or tokens[0] != key:
            raise ModelFormatError(f"expected '{key}', found '{' '.join(tokens)}'")
        return tokens[1:]

    def floats(self, key: str, count: Optional[int] = None) -> np.ndarray:
        values = self.expect(key)
        try:
            array = np.array([float(v) for v in values], dtype=np.float64)
        except ValueError:
            raise ModelFormatError(f"'{key}' holds a non-numeric value") from None
        if count is not None and len(array) != count:
            raise ModelFormatError(f"'{key}' has {len(array)} values, expected {count}")
        return array

    def integer(self, key: str) -> int:
        values = self.expect(key)
        if len(values) != 1:
            raise ModelFormatError(f"'{key}' needs exactly one value")
        try:
            return int(values[0])
        except ValueError:
            raise ModelFormatError(f"'{key}' is not an integer: {values[0]}") from None

    def word(self, key: str) -> str:
        values = self.expect(key)
        if len(values) != 1:
            raise ModelFormatError(f"'{key}' needs exactly one value")
        return values[0]

    def matrix(self, key: str, rows: int, cols: int) -> np.ndarray:
        self.expect(key)
        result = np.empty((rows, cols))
        for k in range(rows):
            tokens = self.next_tokens()
            if len(tokens) != cols:
                raise ModelFormatError(f"'{key}' row {k} has {len(tokens)} values, expected {cols}")
            try:
                result[k] = [float(v) for v in tokens]
            except ValueError:
                raise ModelFormatError(f"'{key}' row {k} holds a non-numeric value") from None
        return result

    def header(self, kind: str) -> Version:
        tokens = self.next_tokens()
        if len(tokens) != 2 or tokens[0] != kind:
            raise ModelFormatError(f"not a {kind} file")
        try:
            version = Version.parse(tokens[1])
        except ValueError:
            raise ModelFormatError(f"bad format version '{tokens[1]}'") from None
        if not version.supports(FORMAT_VERSION.major, 0):
            raise ModelFormatError(f"unsupported format version {version}, "
                                   f"this reader handles {FORMAT_VERSION.major}.x")
        return version


def _scheme_lines(scheme: Optional[QuantizationScheme]) -> List[str]:
    if scheme is None:
        return ["scheme none"]
    return [f"scheme {_floats([scheme.h_min, scheme.h_max, scheme.delta])} {scheme.num_classes}"]


def _read_scheme(reader: _Reader) -> Optional[QuantizationScheme]:
    values = reader.expect("scheme")
    if values == ["none"]:
        return None
    if len(values) != 4:
        raise ModelFormatError("scheme needs h_min h_max delta K")
    try:
        return QuantizationScheme(float(values[0]), float(values[1]), float(values[2]), int(values[3]))
    except ValueError as err:
        raise ModelFormatError(f"invalid scheme: {err}") from None


def _scaler_lines(scaler: Optional[Scaler]) -> List[str]:
    if scaler is None:
        return ["scaler none"]
    if any(not name or "," in name or len(name.split()) != 1 for name in scaler.names):
        raise ValueError(f"feature names must be single words without commas: {scaler.names}")
    lines = [
        f"scaler {scaler.dimension}",
        "names " + ",".join(scaler.names),
        f"mean {_floats(scaler.mean)}",
        f"std {_floats(scaler.std)}",
    ]
    if scaler.minmax:
        lines += [f"lower {_floats(scaler.lower)}", f"upper {_floats(scaler.upper)}"]
    else:
        lines.append("lower none")
    return lines


def _read_scaler(reader: _Reader) -> Optional[Scaler]:
    values = reader.expect("scaler")
    if values == ["none"]:
        return None
    try:
        dimension = int(values[0])
    except (ValueError, IndexError):
        raise ModelFormatError("scaler needs its dimension") from None
    names = tuple(" ".join(reader.expect("names")).split(","))
    mean = reader.floats("mean", dimension)
    std = reader.floats("std", dimension)
    lower = reader.expect("lower")
    bounds = None, None
    if lower != ["none"]:
        try:
            bounds = tuple(float(v) for v in lower), tuple(reader.floats("upper", dimension))
            if len(bounds[0]) != dimension:
                raise ValueError
        except ValueError:
            raise ModelFormatError("'lower' holds a non-numeric value") from None
    try:
        return Scaler(tuple(mean), tuple(std), names, bounds[0], bounds[1])
    except ValueError as err:
        raise ModelFormatError(f"invalid scaler: {err}") from None


def _mlr_lines(model: MLRModel) -> List[str]:
    lines = [
        f"{MLR_KIND} {FORMAT_VERSION}",
        f"classes {model.num_classes}",
        f"features {model.dimension}",
        "subset " + " ".join(str(i) for i in model.subset),
        f"lambda {repr(float(model.lam))}",
        "intercept none" if model.intercept is None else f"intercept {_floats(model.intercept)}",
    ]
    lines += _scheme_lines(model.scheme)
    lines += _scaler_lines(model.scaler)
    lines.append("params")
    lines += [_floats(row) for row in model.params]
    lines.append("end")
    return lines


def _read_mlr(reader: _Reader) -> MLRModel:
    reader.header(MLR_KIND)
    classes = reader.integer("classes")
    features = reader.integer("features")
    try:
        subset = tuple(int(i) for i in reader.expect("subset"))
    except ValueError:
        raise ModelFormatError("subset holds a non-integer") from None
    lam = float(reader.floats("lambda", 1)[0])
    intercept_tokens = reader.expect("intercept")
    intercept = None
    if intercept_tokens != ["none"]:
        try:
            intercept = np.array([float(v) for v in intercept_tokens])
        except ValueError:
            raise ModelFormatError("intercept holds a non-numeric value") from None
    scheme = _read_scheme(reader)
    scaler = _read_scaler(reader)
    params = reader.matrix("params", classes, features)
    reader.expect("end")
    try:
        return MLRModel(params, subset, lam, scheme, scaler, intercept)
    except ValueError as err:
        raise ModelFormatError(f"invalid model: {err}") from None


def dumps_model(model: MLRModel) -> str:
    """Text form of a single MLR model"""
    return "\n".join(_mlr_lines(model)) + "\n"


def loads_model(text: str) -> MLRModel:
    """Inverse of dumps_model"""
    return _read_mlr(_Reader(text))


def dumps_ensemble(ensemble: EnsembleModel) -> str:
    """Settings, subset table, scheme and scaler followed by the model blocks"""
    lines = [
        f"{ENSEMBLE_KIND} {FORMAT_VERSION}",
        f"models {ensemble.size}",
        f"subset_size {ensemble.subset_size}",
        f"weighting {ensemble.weighting.value}",
        f"subset_mode {ensemble.subset_mode.value}",
        f"seed {ensemble.seed}",
        f"lambda {repr(float(ensemble.lam))}",
    ]
    lines += ["subset " + " ".join(str(i) for i in subset) for subset in ensemble.subsets]
    lines += _scheme_lines(ensemble.scheme)
    lines += _scaler_lines(ensemble.scaler)
    for model in ensemble.models:
        lines += _mlr_lines(model)
    return "\n".join(lines) + "\n"


def loads_ensemble(text: str) -> EnsembleModel:
    """Inverse of dumps_ensemble"""
    reader = _Reader(text)
    reader.header(ENSEMBLE_KIND)
    count = reader.integer("models")
    reader.integer("subset_size")
    try:
        weighting = WeightingMode(reader.word("weighting"))
        subset_mode = SubsetMode(reader.word("subset_mode"))
    except ValueError as err:
        raise ModelFormatError(str(err)) from None
    seed = reader.integer("seed")
    reader.floats("lambda", 1)
    subsets = [tuple(int(i) for i in reader.expect("subset")) for _ in range(count)]
    scheme = _read_scheme(reader)
    scaler = _read_scaler(reader)
    models = tuple(_read_mlr(reader) for _ in range(count))
    if [model.subset for model in models] != subsets:
        raise ModelFormatError("subset table does not match the model blocks")
    try:
        return EnsembleModel(models, scheme, scaler, weighting, subset_mode, seed)
    except ValueError as err:
        raise ModelFormatError(f"invalid ensemble: {err}") from None


def dumps_svm(model: LinearSVMModel) -> str:
    """Text form of a one-vs-rest SVM"""
    lines = [
        f"{SVM_KIND} {FORMAT_VERSION}",
        f"classes {model.num_classes}",
        f"features {model.dimension}",
        f"c {repr(float(model.c))}",
        f"bias {_floats(model.bias)}",
    ]
    lines += _scheme_lines(model.scheme)
    lines += _scaler_lines(model.scaler)
    lines.append("weights")
    lines += [_floats(row) for row in model.weights]
    lines.append("end")
    return "\n".join(lines) + "\n"


def loads_svm(text: str) -> LinearSVMModel:
    """Inverse of dumps_svm"""
    reader = _Reader(text)
    reader.header(SVM_KIND)
    classes = reader.integer("classes")
    features = reader.integer("features")
    c = float(reader.floats("c", 1)[0])
    bias = reader.floats("bias", classes)
    scheme = _read_scheme(reader)
    scaler = _read_scaler(reader)
    weights = reader.matrix("weights", classes, features)
    reader.expect("end")
    try:
        return LinearSVMModel(weights, bias, c, scheme, scaler)
    except ValueError as err:
        raise ModelFormatError(f"invalid SVM: {err}") from None


_DUMPERS = {MLRModel: dumps_model, EnsembleModel: dumps_ensemble, LinearSVMModel: dumps_svm}
_LOADERS = {MLR_KIND: loads_model, ENSEMBLE_KIND: loads_ensemble, SVM_KIND: loads_svm}


def save_model(model: AnyModel, path: str) -> None:
    """Write any model kind to path"""
    dumper = _DUMPERS.get(type(model))
    if dumper is None:
        raise TypeError(f"cannot serialize {type(model).__name__}")
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(dumper(model))


def load_model(path: str) -> AnyModel:
    """Read a model file of any kind, dispatching on its header"""
    if not os.path.isfile(path):
        raise FileNotFoundError(f"File does not exist: {path}")
    with open(path, "r", encoding="utf-8") as fh:
        text = fh.read()
    kind = text.split(maxsplit=1)[0] if text.strip() else ""
    loader = _LOADERS.get(kind)
    if loader is None:
        raise ModelFormatError(f"{path} is not a model file")
    return loader(text)