"""Threshold analysis for multi-class classifier outputs: Gaussian-model ROC
synthesis, threshold-driven score redistribution, and knee detection."""

from kneeroc.errors import InputError, InsufficientDataError, KneeRocError
from kneeroc.gaussian import GaussianModel, ScoreSet, cdf, erf, fit_gaussian, tail_mass
from kneeroc.knee import (
    KneePoint,
    KneeStatistics,
    KneeThresholdResult,
    SampleProbabilities,
    detected_classes,
    find_knee,
    knee_statistics,
    knee_to_threshold,
    method3_knee,
)
from kneeroc.roc import (
    RedistributedArrays,
    RocCurve,
    RocPoint,
    SweepConfig,
    auc,
    method1_roc,
    method2_sweep,
    redistribute,
    select_best,
)

__version__ = "0.1.0"

__all__ = [
    "GaussianModel", "InputError", "InsufficientDataError", "KneePoint", "KneeRocError",
    "KneeStatistics", "KneeThresholdResult", "RedistributedArrays", "RocCurve", "RocPoint",
    "SampleProbabilities", "ScoreSet", "SweepConfig", "auc", "cdf", "detected_classes", "erf",
    "find_knee", "fit_gaussian", "knee_statistics", "knee_to_threshold", "method1_roc",
    "method2_sweep", "method3_knee", "redistribute", "select_best", "tail_mass",
]
