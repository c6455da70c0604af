"""
Copyright 2026 pyWmlr contributors

WMLR library - Exceptions raised by the library
"""


from .types import ErrorCode


class WmlrError(RuntimeError):
    """Base class of all library errors"""
    code = ErrorCode.NO_ERROR
    module = "pyWmlr"

    def __init__(self, message: str = ""):
        super().__init__(message)
        self.message = message

    def __str__(self):
        name = self.__class__.__name__
        if self.message:
            return f"[{self.module}] {name}: {self.message}"
        return f"[{self.module}] {name}"


# data_model

class MalformedNumber(WmlrError):
    """A numeric CSV field could not be parsed as a finite number"""
    code = ErrorCode.MALFORMED_NUMBER
    module = "data_model"


class CoordinateOutOfRange(WmlrError):
    """Longitude or latitude outside the valid degree range"""
    code = ErrorCode.COORDINATE_OUT_OF_RANGE
    module = "data_model"


class MissingRequiredColumn(WmlrError):
    """A required field is missing or empty"""
    code = ErrorCode.MISSING_REQUIRED_COLUMN
    module = "data_model"


class MalformedRow(WmlrError):
    """A CSV row does not match the schema"""
    code = ErrorCode.MALFORMED_ROW
    module = "data_model"


class ValueOutOfRange(WmlrError):
    """Negative speed or non-positive pressure"""
    code = ErrorCode.VALUE_OUT_OF_RANGE
    module = "data_model"


class EmptyDataset(WmlrError):
    """No record survived loading or filtering"""
    code = ErrorCode.EMPTY_DATASET
    module = "data_model"


class TooFewPoints(WmlrError):
    """Not enough records for the requested operation"""
    code = ErrorCode.TOO_FEW_POINTS
    module = "data_model"


# preprocess

class ZeroVarianceFeature(WmlrError):
    """A feature column is constant and cannot be standardized"""
    code = ErrorCode.ZERO_VARIANCE_FEATURE
    module = "preprocess"


class DimensionMismatch(WmlrError):
    """A feature vector has the wrong dimension"""
    code = ErrorCode.DIMENSION_MISMATCH
    module = "preprocess"


# outlier

class TraceTooShort(WmlrError):
    """A trace has too few observations"""
    code = ErrorCode.TRACE_TOO_SHORT
    module = "outlier"


# quantizer

class AltitudeOutOfRange(WmlrError):
    """Altitude outside the class table of a quantization scheme"""
    code = ErrorCode.ALTITUDE_OUT_OF_RANGE
    module = "quantizer"


class ClassOutOfRange(WmlrError):
    """Class index outside 1..K"""
    code = ErrorCode.CLASS_OUT_OF_RANGE
    module = "quantizer"


# mlr_core

class LabelOutOfRange(WmlrError):
    """Training label outside 1..K"""
    code = ErrorCode.LABEL_OUT_OF_RANGE
    module = "mlr_core"


class DegenerateData(WmlrError):
    """Fewer training points than classes"""
    code = ErrorCode.DEGENERATE_DATA
    module = "mlr_core"


class DidNotConverge(WmlrError):
    """The solver hit its iteration limit"""
    code = ErrorCode.DID_NOT_CONVERGE
    module = "mlr_core"

    def __init__(self, message: str = "", report=None):
        super().__init__(message)
        self.report = report


# wmlr

class BadCombination(WmlrError):
    """Subset count does not match C(I, r) in enumerate mode"""
    code = ErrorCode.BAD_COMBINATION
    module = "wmlr"


class EmptyEnsemble(WmlrError):
    """An ensemble without models"""
    code = ErrorCode.EMPTY_ENSEMBLE
    module = "wmlr"


class IndexMismatch(WmlrError):
    """Outlier verdicts do not line up with the trace"""
    code = ErrorCode.INDEX_MISMATCH
    module = "wmlr"


# synthetic

class NonPositivePressure(WmlrError):
    """Pressure must be strictly positive"""
    code = ErrorCode.NON_POSITIVE_PRESSURE
    module = "synthetic"


class AltitudeAboveModelCeiling(WmlrError):
    """Altitude at or above the barometric formula's ceiling"""
    code = ErrorCode.ALTITUDE_ABOVE_MODEL_CEILING
    module = "synthetic"


# eval

class EmptySequence(WmlrError):
    """Statistics of an empty error sequence"""
    code = ErrorCode.EMPTY_SEQUENCE
    module = "eval"


class IoFailure(WmlrError):
    """A report or artifact could not be written"""
    code = ErrorCode.IO_FAILURE
    module = "eval"


# serialization

class ModelFormatError(WmlrError):
    """A model file is malformed or has an unsupported version"""
    code = ErrorCode.MODEL_FORMAT
    module = "serialization"
