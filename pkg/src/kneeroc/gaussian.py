"""Gaussian score models: fitting, erf, CDF and upper-tail mass."""

from __future__ import annotations

import math
import statistics
from dataclasses import dataclass, field
from typing import Sequence

from kneeroc.errors import InputError, InsufficientDataError

SIGMA_FLOOR = 1e-9

# Abramowitz & Stegun 7.1.26, |error| <= 1.5e-7
_P = 0.3275911
_A1 = 0.254829592
_A2 = -0.284496736
_A3 = 1.421413741
_A4 = -1.453152027
_A5 = 1.061405429


@dataclass(frozen=True)
class GaussianModel:
    mu: float
    sigma: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.mu) and math.isfinite(self.sigma)):
            raise InputError("non-finite model parameter")
        if self.sigma <= 0:
            raise InputError("sigma must be positive")


@dataclass(frozen=True)
class ScoreSet:
    """Scores whose ground truth is positive (P_arr) and negative (N_arr)."""

    positives: tuple[float, ...] = field(default_factory=tuple)
    negatives: tuple[float, ...] = field(default_factory=tuple)

    def __post_init__(self) -> None:
        object.__setattr__(self, "positives", tuple(float(v) for v in self.positives))
        object.__setattr__(self, "negatives", tuple(float(v) for v in self.negatives))
        for v in self.positives + self.negatives:
            if not math.isfinite(v):
                raise InputError("non-finite score")

    @property
    def size(self) -> int:
        return len(self.positives) + len(self.negatives)

    def all_scores(self) -> tuple[float, ...]:
        return self.positives + self.negatives


def fit_gaussian(scores: Sequence[float]) -> GaussianModel:
    """Mean and population standard deviation of ``scores``.

    Zero-variance input gets ``sigma = SIGMA_FLOOR`` so the CDF stays defined.
    """
    values = [float(v) for v in scores]
    if not values:
        raise InsufficientDataError("empty score collection")
    if not all(math.isfinite(v) for v in values):
        raise InputError("non-finite score")
    mu = statistics.fmean(values)
    sigma = statistics.pstdev(values, mu) if len(values) > 1 else 0.0
    return GaussianModel(mu=mu, sigma=max(sigma, SIGMA_FLOOR))


def erf(x: float) -> float:
    """Gauss error function, odd by construction."""
    if x == 0:
        return 0.0
    ax = abs(x)
    t = 1.0 / (1.0 + _P * ax)
    poly = t * (_A1 + t * (_A2 + t * (_A3 + t * (_A4 + t * _A5))))
    y = 1.0 - poly * math.exp(-ax * ax)
    return y if x > 0 else -y


def cdf(t: float, model: GaussianModel) -> float:
    z = (t - model.mu) / (model.sigma * math.sqrt(2.0))
    return min(1.0, max(0.0, 0.5 * (1.0 + erf(z))))


def tail_mass(t: float, model: GaussianModel) -> float:
    """Mass of ``model`` above ``t``; CDF at infinity is taken as exactly 1."""
    return 1.0 - cdf(t, model)
