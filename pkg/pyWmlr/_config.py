"""
Copyright 2026 pyWmlr contributors

WMLR library - Run configuration
"""


import configparser
import dataclasses
import os
from dataclasses import dataclass
from math import comb
from typing import Any, Callable, Dict, Mapping, Optional, Tuple
from ._dataset import DEFAULT_SEED
from ._mlr import DEFAULT_LAMBDA, SolverOptions
from ._outlier import DEFAULT_WINDOW
from ._preprocess import DEFAULT_MONITORED
from ._quantizer import DEFAULT_DELTA
from ._svm import DEFAULT_C, DEFAULT_EPOCHS
from .types import AltitudeSource, Field, ReportFormat, SubsetMode, WeightingMode

CONFIG_SECTION = "pywmlr"


@dataclass(frozen=True)
class RunConfig:
    """Every pipeline setting; the defaults reproduce the evaluation protocol of the method"""
    lam: float = DEFAULT_LAMBDA
    delta: float = DEFAULT_DELTA
    r: int = 4
    # None means all C(I, r) subsets
    L: Optional[int] = None
    subset_mode: SubsetMode = SubsetMode.ENUMERATE
    train_fraction: float = 0.7
    seed: int = DEFAULT_SEED
    weighting: WeightingMode = WeightingMode.PAPER
    window: float = DEFAULT_WINDOW
    monitored: Tuple[str, ...] = DEFAULT_MONITORED
    tol_per_sample: float = 1e-6
    max_iters: int = 5000
    accelerate: bool = True
    strict: bool = False
    svm_c: float = DEFAULT_C
    svm_epochs: int = DEFAULT_EPOCHS
    workers: int = 1
    fit_intercept: bool = True
    minmax: bool = False
    report_format: ReportFormat = ReportFormat.CSV
    altitude_source: AltitudeSource = AltitudeSource.GROUND_TRUTH

    def __post_init__(self):
        for name, kind in (("subset_mode", SubsetMode), ("weighting", WeightingMode),
                           ("report_format", ReportFormat), ("altitude_source", AltitudeSource)):
            object.__setattr__(self, name, kind(getattr(self, name)))
        object.__setattr__(self, "monitored", tuple(self.monitored))
        if not self.lam > 0.0:
            raise ValueError(f"lam must be positive, got {self.lam}")
        if not self.delta > 0.0:
            raise ValueError(f"delta must be positive, got {self.delta}")
        if not 1 <= self.r <= self.dimension:
            raise ValueError(f"r must lie in [1, {self.dimension}], got {self.r}")
        if self.L is not None and self.L < 1:
            raise ValueError(f"L must be positive, got {self.L}")
        if not 0.0 < self.train_fraction < 1.0:
            raise ValueError(f"train_fraction must lie in (0, 1), got {self.train_fraction}")
        if not self.window > 0.0:
            raise ValueError(f"window must be positive, got {self.window}")
        if not self.svm_c > 0.0 or self.svm_epochs < 1:
            raise ValueError("svm_c must be positive and svm_epochs at least 1")
        if self.workers < 1:
            raise ValueError(f"workers must be at least 1, got {self.workers}")
        known = set(Field.getOptionalFields()) | set(Field.getRequiredFields())
        unknown = [name for name in self.monitored if name not in known]
        if unknown:
            raise ValueError(f"Unknown monitored fields: {unknown}")
        SolverOptions(self.tol_per_sample, self.max_iters, self.accelerate, self.strict)

    @property
    def dimension(self) -> int:
        """Feature dimension I"""
        return len(Field.getFeatureFields())

    @property
    def model_count(self) -> int:
        """L, defaulting to C(I, r)"""
        return self.L if self.L is not None else comb(self.dimension, self.r)

    @property
    def solver_options(self) -> SolverOptions:
        return SolverOptions(self.tol_per_sample, self.max_iters, self.accelerate, self.strict)

    def replace(self, **changes) -> "RunConfig":
        """Copy with some settings changed; None values keep the current setting"""
        return dataclasses.replace(self, **{key: value for key, value in changes.items() if value is not None})


def _boolean(text: str) -> bool:
    lowered = text.strip().lower()
    if lowered in ("1", "true", "yes", "on"):
        return True
    if lowered in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"not a boolean: {text}")


def _optional_int(text: str) -> Optional[int]:
    return None if text.strip().lower() in ("", "none") else int(text)


def _field_list(text: str) -> Tuple[str, ...]:
    return tuple(name.strip() for name in text.split(",") if name.strip())


_PARSERS: Dict[str, Callable[[str], Any]] = {
    "lam": float,
    "delta": float,
    "r": int,
    "L": _optional_int,
    "subset_mode": SubsetMode,
    "train_fraction": float,
    "seed": int,
    "weighting": WeightingMode,
    "window": float,
    "monitored": _field_list,
    "tol_per_sample": float,
    "max_iters": int,
    "accelerate": _boolean,
    "strict": _boolean,
    "svm_c": float,
    "svm_epochs": int,
    "workers": int,
    "fit_intercept": _boolean,
    "minmax": _boolean,
    "report_format": ReportFormat,
    "altitude_source": AltitudeSource,
}
# Spellings accepted in config files besides the field names
_ALIASES = {"lambda": "lam", "l": "L", "monitored_3sigma": "monitored", "tol": "tol_per_sample"}


def parse_settings(values: Mapping[str, str]) -> Dict[str, Any]:
    """Typed RunConfig settings from raw key = value strings"""
    settings = {}
    for key, text in values.items():
        name = _ALIASES.get(key.strip(), key.strip())
        parser = _PARSERS.get(name)
        if parser is None:
            raise ValueError(f"Unknown setting '{key}'")
        try:
            settings[name] = parser(text)
        except ValueError as err:
            raise ValueError(f"Invalid value for '{key}': {text} ({err})") from None
    return settings


def load_config_file(path: str) -> Dict[str, Any]:
    """
    Settings of a key = value file

    Keys may sit in a [pywmlr] section or above any section header.
    """
    if not os.path.isfile(path):
        raise FileNotFoundError(f"File does not exist: {path}")
    with open(path, "r", encoding="utf-8") as fh:
        text = fh.read()
    parser = configparser.ConfigParser(interpolation=None)
    # keep "L" distinct from "l"
    parser.optionxform = str
    try:
        parser.read_string(f"[{configparser.DEFAULTSECT}]\n" + text, source=path)
    except configparser.Error as err:
        raise ValueError(f"Malformed config file {path}: {err}") from None
    values = dict(parser.defaults())
    if parser.has_section(CONFIG_SECTION):
        values.update(parser.items(CONFIG_SECTION))
    return parse_settings(values)


def build_config(path: Optional[str] = None, **overrides) -> RunConfig:
    """Defaults, then the config file, then explicit overrides that are not None"""
    settings = load_config_file(path) if path else {}
    settings.update({key: value for key, value in overrides.items() if value is not None})
    return RunConfig(**settings)
