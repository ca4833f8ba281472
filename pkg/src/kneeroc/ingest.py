"""Reading, writing and synthesizing score files and probability files.

Score file::

    score,label
    0.9,pos
    0.1,neg

Probability file (``labels`` optional, semicolon separated class indices)::

    p0,p1,p2,labels
    0.700000000,0.200000000,0.100000000,0
"""

from __future__ import annotations

import csv
import io
import logging
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np

from kneeroc.errors import InputError
from kneeroc.gaussian import ScoreSet
from kneeroc.knee import SampleProbabilities

log = logging.getLogger(__name__)

SCORE_HEADER = ("score", "label")
LABELS_COLUMN = "labels"
PROB_DECIMALS = 9
# rows off the simplex by more than this are renormalized (with a warning)
EXACT_SUM_TOL = 1e-9
RENORMALIZE_TOL = 1e-3
HIGH_PROB_CUTOFF = 0.35
_NANO = 10**PROB_DECIMALS


@dataclass(frozen=True)
class DatasetFile:
    samples: tuple[SampleProbabilities, ...]
    class_count: int
    source_path: str = "<memory>"

    def __post_init__(self) -> None:
        if self.class_count < 3:
            raise InputError("class_count must be at least 3")
        for s in self.samples:
            if s.class_count != self.class_count:
                raise InputError("sample width does not match class_count")


@dataclass(frozen=True)
class GeneratorConfig:
    sample_count: int = 500
    class_count: int = 10
    active_classes: int = 4
    high_prob_fraction: float = 0.588
    noise_scale: float = 0.02
    seed: int = 0

    def __post_init__(self) -> None:
        if self.sample_count <= 0:
            raise InputError("sample_count must be > 0")
        if self.class_count < 3:
            raise InputError("class_count must be >= 3")
        if not 1 <= self.active_classes <= self.class_count:
            raise InputError("active_classes must lie in [1, class_count]")
        if not 0.0 <= self.high_prob_fraction <= 1.0:
            raise InputError("high_prob_fraction must lie in [0, 1]")
        if not (self.noise_scale >= 0 and math.isfinite(self.noise_scale)):
            raise InputError("noise_scale must be >= 0")
        if self.seed < 0:
            raise InputError("seed must be unsigned")


def _read_rows(path: str | Path) -> list[list[str]]:
    text = Path(path).read_text(encoding="utf-8")
    return list(csv.reader(io.StringIO(text, newline="")))


def parse_scores(path: str | Path) -> ScoreSet:
    rows = _read_rows(path)
    if not rows or tuple(c.strip() for c in rows[0]) != SCORE_HEADER:
        raise InputError(f"{path}: line 1: expected header 'score,label'")
    positives: list[float] = []
    negatives: list[float] = []
    for lineno, row in enumerate(rows[1:], start=2):
        if not row:
            continue
        if len(row) != 2:
            raise InputError(f"{path}: line {lineno}: expected 2 fields, got {len(row)}")
        raw, label = row[0].strip(), row[1].strip()
        try:
            score = float(raw)
        except ValueError:
            raise InputError(f"{path}: line {lineno}: non-numeric score {raw!r}") from None
        if not (math.isfinite(score) and 0.0 <= score <= 1.0):
            raise InputError(f"{path}: line {lineno}: score {raw!r} outside [0, 1]")
        if label == "pos":
            positives.append(score)
        elif label == "neg":
            negatives.append(score)
        else:
            raise InputError(f"{path}: line {lineno}: unknown label {label!r}")
    if not positives or not negatives:
        raise InputError(f"{path}: one-sided score file")
    return ScoreSet(tuple(positives), tuple(negatives))


def serialize_scores(scores: ScoreSet) -> str:
    lines = [",".join(SCORE_HEADER)]
    lines += [f"{v!r},pos" for v in scores.positives]
    lines += [f"{v!r},neg" for v in scores.negatives]
    return "\n".join(lines) + "\n"


def write_scores(scores: ScoreSet, path: str | Path) -> None:
    Path(path).write_text(serialize_scores(scores), encoding="utf-8", newline="\n")


def _parse_labels(field: str, k: int, where: str) -> frozenset[int]:
    labels = set()
    for part in field.split(";"):
        part = part.strip()
        if not part:
            continue
        try:
            c = int(part)
        except ValueError:
            raise InputError(f"{where}: bad class label {part!r}") from None
        if not 0 <= c < k:
            raise InputError(f"{where}: class label {c} outside [0, {k})")
        labels.add(c)
    return frozenset(labels)


def parse_probabilities(path: str | Path) -> DatasetFile:
    rows = _read_rows(path)
    if not rows:
        raise InputError(f"{path}: line 1: missing header")
    header = [c.strip() for c in rows[0]]
    has_labels = bool(header) and header[-1] == LABELS_COLUMN
    prob_cols = header[:-1] if has_labels else header
    k = len(prob_cols)
    if prob_cols != [f"p{i}" for i in range(k)] or k < 3:
        raise InputError(f"{path}: line 1: header must be p0..p{{k-1}} with k >= 3")
    width = len(header)
    samples = []
    for lineno, row in enumerate(rows[1:], start=2):
        if not row:
            continue
        where = f"{path}: line {lineno}"
        if len(row) != width:
            raise InputError(f"{where}: expected {width} fields, got {len(row)}")
        try:
            probs = [float(v) for v in row[:k]]
        except ValueError:
            raise InputError(f"{where}: non-numeric probability") from None
        for p in probs:
            if not (math.isfinite(p) and 0.0 <= p <= 1.0):
                raise InputError(f"{where}: probability {p!r} outside [0, 1]")
        total = math.fsum(probs)
        if abs(total - 1.0) > RENORMALIZE_TOL:
            raise InputError(f"{where}: probabilities sum to {total!r}, outside 1 +/- {RENORMALIZE_TOL}")
        if abs(total - 1.0) > EXACT_SUM_TOL:
            log.warning("%s: probabilities sum to %r; renormalized", where, total)
            probs = [p / total for p in probs]
        labels = _parse_labels(row[k], k, where) if has_labels else None
        samples.append(SampleProbabilities(tuple(probs), labels))
    return DatasetFile(tuple(samples), k, str(path))


def _format_prob(p: float) -> str:
    return f"{p:.{PROB_DECIMALS}f}"


def serialize_probabilities(dataset: DatasetFile) -> str:
    k = dataset.class_count
    with_labels = any(s.labels is not None for s in dataset.samples)
    header = [f"p{i}" for i in range(k)] + ([LABELS_COLUMN] if with_labels else [])
    lines = [",".join(header)]
    for s in dataset.samples:
        fields = [_format_prob(p) for p in s.probs]
        if with_labels:
            fields.append(";".join(str(c) for c in sorted(s.labels or ())))
        lines.append(",".join(fields))
    return "\n".join(lines) + "\n"


def write_probabilities(dataset: DatasetFile, path: str | Path) -> None:
    Path(path).write_text(serialize_probabilities(dataset), encoding="utf-8", newline="\n")


def quantize_simplex(weights: Sequence[float]) -> tuple[float, ...]:
    """Round a non-negative vector onto the simplex at PROB_DECIMALS digits so
    the printed values sum to exactly 1 (largest-remainder rounding)."""
    w = np.asarray(weights, dtype=float)
    scaled = w / w.sum() * _NANO
    units = np.floor(scaled).astype(np.int64)
    short = _NANO - int(units.sum())
    order = np.argsort(-(scaled - units), kind="stable")
    units[order[:short]] += 1
    return tuple(int(u) / _NANO for u in units)


def _high_vector(rng: np.random.Generator, cfg: GeneratorConfig) -> tuple[np.ndarray, list[int]]:
    k, a = cfg.class_count, cfg.active_classes
    active = [int(c) for c in rng.choice(k, size=a, replace=False)]
    lead = rng.uniform(HIGH_PROB_CUTOFF + 0.01, 0.8)
    rest = 1.0 - lead
    inactive = [c for c in range(k) if c not in active]
    active_share = rest if not inactive else (rest * rng.uniform(0.85, 0.95) if a > 1 else 0.0)
    vec = np.zeros(k)
    vec[active[0]] = lead
    if a > 1:
        w = rng.dirichlet(np.full(a - 1, 2.0)) + cfg.noise_scale * np.abs(rng.normal(size=a - 1))
        vec[active[1:]] = active_share * w / w.sum()
    if inactive:
        w = 1.0 + cfg.noise_scale * np.abs(rng.normal(size=len(inactive)))
        vec[inactive] = (rest - active_share) * w / w.sum()
    return vec, active


def _low_vector(rng: np.random.Generator, cfg: GeneratorConfig) -> np.ndarray:
    k = cfg.class_count
    jitter = np.clip(1.0 + cfg.noise_scale * rng.uniform(-1.0, 1.0, size=k), 0.0, None)
    if jitter.sum() == 0:
        jitter = np.ones(k)
    uniform = np.full(k, 1.0 / k)
    vec = jitter / jitter.sum()
    # shrink toward uniform until the top value sits safely under the cutoff
    while vec.max() >= HIGH_PROB_CUTOFF - 1e-3:
        vec = 0.5 * (vec + uniform)
    return vec


def generate_dataset(config: GeneratorConfig) -> DatasetFile:
    """Synthetic probability vectors with an exactly planted high-confidence share.

    ``round(sample_count * high_prob_fraction)`` samples (chosen by the seeded
    RNG) carry one probability >= 0.35 on a random set of ``active_classes``
    classes; the rest are jittered near-uniform vectors with every entry below
    0.35.
    """
    rng = np.random.default_rng(config.seed)
    n = config.sample_count
    n_high = int(round(n * config.high_prob_fraction))
    high = set(rng.permutation(n)[:n_high].tolist())
    samples = []
    for i in range(n):
        if i in high:
            vec, active = _high_vector(rng, config)
            labels = frozenset(active)
        else:
            vec, labels = _low_vector(rng, config), frozenset()
        samples.append(SampleProbabilities(quantize_simplex(vec), labels))
    return DatasetFile(tuple(samples), config.class_count, "<generated>")


def best_case_dataset(
    sample_count: int = 20,
    class_count: int = 10,
    active_classes: int = 4,
    seed: int = 0,
    floor: float = 1e-4,
) -> DatasetFile:
    """Vectors with equal mass on ``active_classes`` classes and near-zero mass
    (below ``floor``) elsewhere."""
    if not 1 <= active_classes < class_count:
        raise InputError("active_classes must lie in [1, class_count)")
    rng = np.random.default_rng(seed)
    samples = []
    for _ in range(sample_count):
        active = [int(c) for c in rng.choice(class_count, size=active_classes, replace=False)]
        vec = rng.uniform(0.0, floor, size=class_count)
        vec[active] = (1.0 - sum(v for c, v in enumerate(vec) if c not in active)) / active_classes
        samples.append(SampleProbabilities(quantize_simplex(vec), frozenset(active)))
    return DatasetFile(tuple(samples), class_count, "<best-case>")


def generate_scores(
    n_pos: int = 250,
    n_neg: int = 250,
    pos: tuple[float, float] = (0.75, 0.1),
    neg: tuple[float, float] = (0.25, 0.1),
    seed: int = 0,
) -> ScoreSet:
    """Normal draws for each class, clipped to [0, 1]."""
    if n_pos < 1 or n_neg < 1:
        raise InputError("both classes need at least one score")
    rng = np.random.default_rng(seed)
    p = np.clip(rng.normal(pos[0], pos[1], size=n_pos), 0.0, 1.0)
    q = np.clip(rng.normal(neg[0], neg[1], size=n_neg), 0.0, 1.0)
    return ScoreSet(tuple(p.tolist()), tuple(q.tolist()))
