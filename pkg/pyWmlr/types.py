"""
Copyright 2026 pyWmlr contributors

WMLR library - Module for all available enums
"""


from enum import Enum
from typing import List


class ErrorCode(Enum):
    """Specification of all the possible error codes raised or reported by the library."""
    NO_ERROR = 0
    # data_model
    MALFORMED_NUMBER = -1001
    COORDINATE_OUT_OF_RANGE = -1002
    MISSING_REQUIRED_COLUMN = -1003
    MALFORMED_ROW = -1004
    VALUE_OUT_OF_RANGE = -1005
    EMPTY_DATASET = -1006
    TOO_FEW_POINTS = -1007
    # preprocess
    ZERO_VARIANCE_FEATURE = -2001
    DIMENSION_MISMATCH = -2002
    # outlier
    TRACE_TOO_SHORT = -3001
    # quantizer
    ALTITUDE_OUT_OF_RANGE = -4001
    CLASS_OUT_OF_RANGE = -4002
    # mlr_core
    LABEL_OUT_OF_RANGE = -5001
    DEGENERATE_DATA = -5002
    DID_NOT_CONVERGE = -5003
    # wmlr
    BAD_COMBINATION = -6001
    EMPTY_ENSEMBLE = -6002
    INDEX_MISMATCH = -6003
    # synthetic
    NON_POSITIVE_PRESSURE = -7001
    ALTITUDE_ABOVE_MODEL_CEILING = -7002
    # eval
    EMPTY_SEQUENCE = -8001
    IO_FAILURE = -8002
    # serialization
    MODEL_FORMAT = -9001


class ExitCode(Enum):
    """Process exit codes of the command line front end"""
    SUCCESS = 0
    USAGE_ERROR = 1
    DATA_ERROR = 2
    CONVERGENCE_FAILURE = 3


class SubsetMode(Enum):
    """How the ensemble feature subsets are drawn"""
    ENUMERATE = "enumerate"
    RANDOM = "random"


class WeightingMode(Enum):
    """Weighting of the per-model altitudes of an ensemble prediction"""
    # w_l proportional to the absolute error of model l
    PAPER = "paper"
    # w_l proportional to 1 / (error + eps)
    INVERSE = "inverse"


class AltitudeSource(Enum):
    """Altitude used to form the per-model errors of a weighted prediction"""
    GROUND_TRUTH = "ground_truth"
    OBSERVED = "observed"


class ReportFormat(Enum):
    """Output format of error reports"""
    CSV = "csv"
    TEXT = "text"


class Algorithm(Enum):
    """Classifiers the pipeline can train"""
    MLR = "mlr"
    WMLR = "wmlr"
    SVM = "svm"

    @classmethod
    def all(cls) -> List["Algorithm"]:
        """All algorithms in report order"""
        return [cls.MLR, cls.WMLR, cls.SVM]


class Field:
    """Observation field names as used in CSV headers"""
    DEVICE_ID = "device_id"
    TIME = "time"
    LONGITUDE = "longitude"
    LATITUDE = "latitude"
    SPEED = "speed"
    ALTITUDE = "altitude"
    PRESSURE = "pressure"
    ORIGINAL_ALTITUDE = "original_altitude"

    @classmethod
    def getRequiredFields(cls) -> List[str]:
        """Fields every record must carry"""
        return [cls.DEVICE_ID, cls.TIME, cls.LONGITUDE, cls.LATITUDE]

    @classmethod
    def getOptionalFields(cls) -> List[str]:
        """Fields that may be absent from a record"""
        return [cls.SPEED, cls.PRESSURE, cls.ALTITUDE, cls.ORIGINAL_ALTITUDE]

    @classmethod
    def getDefaultSchema(cls) -> List[str]:
        """Default CSV column order"""
        return [cls.DEVICE_ID, cls.TIME, cls.LONGITUDE, cls.LATITUDE, cls.SPEED, cls.ALTITUDE, cls.PRESSURE]

    @classmethod
    def getFeatureFields(cls) -> List[str]:
        """Fields forming a feature vector, in feature-index order"""
        return [cls.TIME, cls.LONGITUDE, cls.LATITUDE, cls.PRESSURE, cls.SPEED]
