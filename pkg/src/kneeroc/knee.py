"""Knee location (Kneedle), knee-to-diagonal threshold geometry, and the
per-sample knee analysis of sorted class-probability vectors."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Literal, Sequence

import numpy as np

from kneeroc.errors import InputError, InsufficientDataError

Shape = Literal["concave", "convex"]
Trend = Literal["increasing", "decreasing"]

DEFAULT_SENSITIVITY = 1.0
ZERO_TOL = 1e-12


@dataclass(frozen=True)
class KneePoint:
    found: bool
    index: int | None = None
    x: float | None = None
    y: float | None = None

    @classmethod
    def missing(cls) -> KneePoint:
        return cls(False)


@dataclass(frozen=True)
class KneeThresholdResult:
    knee: KneePoint
    foot: tuple[float, float]
    distance: float
    threshold: float


@dataclass(frozen=True)
class SampleProbabilities:
    probs: tuple[float, ...]
    labels: frozenset[int] | None = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "probs", tuple(float(p) for p in self.probs))
        if self.labels is not None:
            object.__setattr__(self, "labels", frozenset(int(c) for c in self.labels))
        for p in self.probs:
            if not (math.isfinite(p) and 0.0 <= p <= 1.0):
                raise InputError(f"probability {p!r} outside [0, 1]")

    @property
    def class_count(self) -> int:
        return len(self.probs)


@dataclass(frozen=True)
class KneeStatistics:
    sample_count: int
    prob_cutoff: float
    knee_lo: int
    knee_hi: int
    high_count: int
    high_fraction: float
    in_range_count: int
    # undefined when no sample reaches the cutoff
    in_range_fraction: float | None
    no_knee_count: int


def difference_curve(
    x: np.ndarray, y: np.ndarray, shape: Shape, direction: Trend
) -> np.ndarray:
    """Min-max normalize and measure each point's offset from the chord, signed
    so that the knee (or elbow) of the declared shape is a maximum."""
    xn = (x - x.min()) / (x.max() - x.min())
    yn = (y - y.min()) / (y.max() - y.min())
    if shape == "concave" and direction == "increasing":
        return yn - xn
    if shape == "concave" and direction == "decreasing":
        return yn - (1.0 - xn)
    if shape == "convex" and direction == "increasing":
        return xn - yn
    if shape == "convex" and direction == "decreasing":
        return (1.0 - xn) - yn
    raise InputError(f"unknown curve shape/direction {shape!r}/{direction!r}")


def find_knee(
    points: Sequence[tuple[float, float]],
    shape: Shape = "concave",
    direction: Trend = "increasing",
    sensitivity: float = DEFAULT_SENSITIVITY,
) -> KneePoint:
    """Locate the knee of a discrete curve with the Kneedle procedure.

    A local maximum of the difference curve becomes the knee once the
    difference curve later falls below ``max - sensitivity * mean_spacing``
    before a local minimum resets the threshold. The first such maximum wins.
    ``index`` refers to the position in ``points`` as given.
    """
    if len(points) < 3:
        raise InsufficientDataError("insufficient points")
    if sensitivity < 0 or not math.isfinite(sensitivity):
        raise InputError("sensitivity must be a non-negative finite number")
    xy = np.asarray(points, dtype=float)
    if xy.ndim != 2 or xy.shape[1] != 2 or not np.isfinite(xy).all():
        raise InputError("points must be finite (x, y) pairs")
    steps = np.diff(xy[:, 0])
    if not ((steps > 0).all() or (steps < 0).all()):
        raise InputError("x not monotone")
    order = np.argsort(xy[:, 0], kind="stable")
    x, y = xy[order, 0], xy[order, 1]
    if y.max() == y.min():
        return KneePoint.missing()

    d = difference_curve(x, y, shape, direction)
    # rounding noise on a straight line must not create extrema
    d[np.abs(d) < ZERO_TOL] = 0.0
    n = len(d)
    interior = np.arange(1, n - 1)
    maxima = set(interior[(d[1:-1] >= d[:-2]) & (d[1:-1] >= d[2:])].tolist())
    minima = set(interior[(d[1:-1] <= d[:-2]) & (d[1:-1] <= d[2:])].tolist())
    if not maxima:
        return KneePoint.missing()
    spacing = 1.0 / (n - 1)

    threshold = None
    candidate = None
    for i in range(min(maxima), n - 1):
        if i in maxima:
            threshold = d[i] - sensitivity * spacing
            candidate = i
        if i in minima:
            threshold = 0.0
        if d[i + 1] < threshold:
            k = int(order[candidate])
            return KneePoint(True, k, float(xy[k, 0]), float(xy[k, 1]))
    return KneePoint.missing()


def knee_to_threshold(knee: KneePoint | tuple[float, float]) -> KneeThresholdResult:
    """Threshold = 0.5 + perpendicular distance from the knee to TPR = FPR."""
    if isinstance(knee, KneePoint):
        if not knee.found:
            raise InsufficientDataError("no knee available")
        point = knee
    else:
        point = KneePoint(True, 0, float(knee[0]), float(knee[1]))
    x, y = point.x, point.y
    if not (math.isfinite(x) and math.isfinite(y)):
        raise InputError("non-finite knee coordinates")
    if y < x:
        raise InputError("knee below chance diagonal")
    m = (x + y) / 2.0
    distance = (y - x) / math.sqrt(2.0)
    return KneeThresholdResult(point, (m, m), distance, min(1.0, max(0.0, 0.5 + distance)))


def sorted_probability_curve(sample: SampleProbabilities) -> list[tuple[float, float]]:
    return [(float(i), p) for i, p in enumerate(sorted(sample.probs))]


def method3_knee(
    sample: SampleProbabilities, sensitivity: float = DEFAULT_SENSITIVITY
) -> KneePoint:
    """Elbow of the ascending-sorted probability vector plotted against rank."""
    if sample.class_count < 3:
        raise InsufficientDataError("insufficient classes")
    return find_knee(sorted_probability_curve(sample), "convex", "increasing", sensitivity)


def detected_classes(sample: SampleProbabilities, knee: KneePoint) -> frozenset[int]:
    """Classes whose probability lies strictly above the knee's value."""
    if not knee.found:
        raise InsufficientDataError("no knee available")
    return frozenset(c for c, p in enumerate(sample.probs) if p > knee.y)


def knee_statistics(
    samples: Sequence[SampleProbabilities],
    prob_cutoff: float = 0.35,
    knee_lo: int = 6,
    knee_hi: int = 8,
    knees: Iterable[KneePoint] | None = None,
    sensitivity: float = DEFAULT_SENSITIVITY,
) -> KneeStatistics:
    """Share of samples whose top probability reaches ``prob_cutoff`` and,
    among those, the share whose knee index falls in ``[knee_lo, knee_hi]``."""
    if not samples:
        raise InsufficientDataError("no samples")
    if not 0 <= knee_lo <= knee_hi:
        raise InputError("knee range must satisfy 0 <= lo <= hi")
    knees = list(knees) if knees is not None else [method3_knee(s, sensitivity) for s in samples]
    if len(knees) != len(samples):
        raise InputError("one knee per sample required")
    high = [k for s, k in zip(samples, knees) if max(s.probs) >= prob_cutoff]
    in_range = sum(1 for k in high if k.found and knee_lo <= k.index <= knee_hi)
    n = len(samples)
    return KneeStatistics(
        sample_count=n,
        prob_cutoff=prob_cutoff,
        knee_lo=knee_lo,
        knee_hi=knee_hi,
        high_count=len(high),
        high_fraction=len(high) / n,
        in_range_count=in_range,
        in_range_fraction=in_range / len(high) if high else None,
        no_knee_count=sum(1 for k in knees if not k.found),
    )
