"""ROC construction from Gaussian tail masses (Method 1) and from
threshold-driven redistribution of the score arrays (Method 2)."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Literal, Sequence

import numpy as np

from kneeroc.errors import InputError, InsufficientDataError
from kneeroc.gaussian import ScoreSet, fit_gaussian, tail_mass

Semantics = Literal["as-written", "conventional"]
Direction = Literal["ascending", "descending"]

MIN_PER_LIST = 2
DEFAULT_SWEEP_STEPS = 200
DEFAULT_T_INIT = 0.05
DEFAULT_STEP = 0.01
DEFAULT_T_STOP = 0.95


@dataclass(frozen=True)
class RocPoint:
    threshold: float
    fpr: float
    tpr: float


@dataclass(frozen=True)
class RocCurve:
    points: tuple[RocPoint, ...]
    auc: float
    source: str = "method1"
    iteration_threshold: float | None = None

    @property
    def label(self) -> str:
        if self.iteration_threshold is None:
            return self.source
        return f"{self.source}(t={self.iteration_threshold!r})"


@dataclass(frozen=True)
class SweepConfig:
    """Threshold grid for Method 1. ``lo``/``hi`` default to the data range
    padded by ``pad_sigmas`` times the wider of the two fitted sigmas."""

    steps: int = DEFAULT_SWEEP_STEPS
    lo: float | None = None
    hi: float | None = None
    pad_sigmas: float = 3.0

    def __post_init__(self) -> None:
        if self.steps < 2:
            raise InputError("sweep needs at least 2 steps")


@dataclass(frozen=True)
class RedistributedArrays:
    tp: tuple[float, ...]
    fn: tuple[float, ...]
    fp: tuple[float, ...]
    tn: tuple[float, ...]
    threshold: float
    semantics: Semantics = "as-written"

    def upper(self) -> ScoreSet:
        """Values at or above the threshold, split by original array."""
        if self.semantics == "as-written":
            return ScoreSet(self.tp, self.fn)
        return ScoreSet(self.tp, self.fp)


@dataclass(frozen=True)
class Method2Iteration:
    threshold: float
    arrays: RedistributedArrays
    curve: RocCurve | None
    transferred_fraction: float

    @property
    def skipped(self) -> bool:
        return self.curve is None


@dataclass(frozen=True)
class Method2Sweep:
    iterations: tuple[Method2Iteration, ...]

    @property
    def curves(self) -> list[RocCurve]:
        return [it.curve for it in self.iterations if it.curve is not None]

    @property
    def skipped_count(self) -> int:
        return sum(it.skipped for it in self.iterations)


def auc(points: Sequence[RocPoint]) -> float:
    """Trapezoidal area under tpr(fpr), clamped to [0, 1]."""
    if len(points) < 2:
        raise InsufficientDataError("insufficient points")
    ordered = sorted(points, key=lambda p: (p.fpr, p.tpr))
    area = math.fsum(
        (b.fpr - a.fpr) * (a.tpr + b.tpr) / 2.0 for a, b in zip(ordered, ordered[1:])
    )
    return min(1.0, max(0.0, area))


def sweep_thresholds(scores: ScoreSet, sweep: SweepConfig | None = None) -> np.ndarray:
    sweep = sweep or SweepConfig()
    values = scores.all_scores()
    pad = sweep.pad_sigmas * max(
        fit_gaussian(scores.positives).sigma, fit_gaussian(scores.negatives).sigma
    )
    lo = min(values) - pad if sweep.lo is None else sweep.lo
    hi = max(values) + pad if sweep.hi is None else sweep.hi
    if not hi > lo:
        raise InputError("sweep upper bound must exceed lower bound")
    return np.linspace(lo, hi, sweep.steps)


def method1_roc(
    scores: ScoreSet,
    sweep: SweepConfig | None = None,
    *,
    source: str = "method1",
    iteration_threshold: float | None = None,
) -> RocCurve:
    """ROC from two fitted Gaussians: at each threshold the positive model's
    tail mass is the TPR and the negative model's tail mass is the FPR."""
    if len(scores.positives) < MIN_PER_LIST or len(scores.negatives) < MIN_PER_LIST:
        raise InsufficientDataError("insufficient scores")
    tpr_model = fit_gaussian(scores.positives)
    fpr_model = fit_gaussian(scores.negatives)
    points = tuple(
        RocPoint(float(t), tail_mass(float(t), fpr_model), tail_mass(float(t), tpr_model))
        for t in sweep_thresholds(scores, sweep)
    )
    return RocCurve(points, auc(points), source, iteration_threshold)


def redistribute(
    scores: ScoreSet, t: float, semantics: Semantics = "as-written"
) -> RedistributedArrays:
    """Split both arrays at ``t``; values equal to ``t`` go to the upper holders.

    ``as-written`` follows the four assignment rules literally (P >= t -> TP,
    N >= t -> FN, P < t -> FP, N < t -> TN). ``conventional`` uses the usual
    confusion-matrix mapping (P < t -> FN, N >= t -> FP).
    """
    if not math.isfinite(t):
        raise InputError("non-finite threshold")
    p_hi = tuple(v for v in scores.positives if v >= t)
    p_lo = tuple(v for v in scores.positives if v < t)
    n_hi = tuple(v for v in scores.negatives if v >= t)
    n_lo = tuple(v for v in scores.negatives if v < t)
    if semantics == "as-written":
        return RedistributedArrays(p_hi, n_hi, p_lo, n_lo, t, semantics)
    if semantics == "conventional":
        return RedistributedArrays(p_hi, p_lo, n_hi, n_lo, t, semantics)
    raise InputError(f"unknown semantics {semantics!r}")


def iteration_thresholds(
    t_init: float, step: float, t_stop: float, direction: Direction = "ascending"
) -> list[float]:
    if not step > 0:
        raise InputError("non-positive step")
    for name, v in (("t_init", t_init), ("t_stop", t_stop)):
        if not 0.0 <= v <= 1.0:
            raise InputError(f"{name} outside [0, 1]")
    if direction == "ascending":
        sign = 1.0
    elif direction == "descending":
        sign = -1.0
    else:
        raise InputError(f"unknown direction {direction!r}")
    span = sign * (t_stop - t_init)
    if span < -1e-12:
        raise InputError(f"t_stop lies behind t_init for a {direction} sweep")
    # integer stepping avoids drift from repeated float addition
    count = int(math.floor(max(span, 0.0) / step + 1e-9)) + 1
    return [round(t_init + sign * k * step, 12) for k in range(count)]


def method2_sweep(
    scores: ScoreSet,
    t_init: float = DEFAULT_T_INIT,
    step: float = DEFAULT_STEP,
    t_stop: float = DEFAULT_T_STOP,
    direction: Direction = "ascending",
    semantics: Semantics = "as-written",
    sweep: SweepConfig | None = None,
) -> Method2Sweep:
    """Re-run Method 1 on the at-or-above-threshold values at each iteration.

    An iteration only yields a curve when both derived lists hold at least
    two values; otherwise it is kept as a skipped iteration.
    """
    total = scores.size
    iterations = []
    for t in iteration_thresholds(t_init, step, t_stop, direction):
        arrays = redistribute(scores, t, semantics)
        derived = arrays.upper()
        curve = None
        if len(derived.positives) >= MIN_PER_LIST and len(derived.negatives) >= MIN_PER_LIST:
            curve = method1_roc(derived, sweep, source="method2", iteration_threshold=t)
        fraction = derived.size / total if total else 0.0
        iterations.append(Method2Iteration(t, arrays, curve, fraction))
    return Method2Sweep(tuple(iterations))


def select_best(curves: Iterable[RocCurve]) -> RocCurve:
    """Curve farthest from AUC = 0.5; the first one wins ties."""
    best = None
    for curve in curves:
        if best is None or abs(curve.auc - 0.5) > abs(best.auc - 0.5):
            best = curve
    if best is None:
        raise InsufficientDataError("no curves")
    return best
