"""End-to-end runs of the three methods and their on-disk artifacts.

Each ``run_*`` function computes everything in memory and returns a
:class:`Run` holding the JSON report plus named artifact payloads; nothing
touches the output directory until :func:`commit` writes the whole set.
"""

from __future__ import annotations

import csv
import hashlib
import io
import json
import logging
import os
import tempfile
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Sequence

from kneeroc import __version__
from kneeroc.errors import InsufficientDataError, InvariantError, KneeRocError
from kneeroc.gaussian import ScoreSet
from kneeroc.ingest import DatasetFile
from kneeroc.knee import (
    DEFAULT_SENSITIVITY,
    KneePoint,
    KneeStatistics,
    KneeThresholdResult,
    detected_classes,
    find_knee,
    knee_statistics,
    knee_to_threshold,
    method3_knee,
)
from kneeroc.roc import (
    DEFAULT_STEP,
    DEFAULT_T_INIT,
    DEFAULT_T_STOP,
    Direction,
    Method2Sweep,
    RocCurve,
    Semantics,
    SweepConfig,
    auc,
    method1_roc,
    method2_sweep,
    select_best,
)
from kneeroc.svg import knee_svg, roc_svg

log = logging.getLogger(__name__)

SCHEMA_VERSION = 1
DEFAULT_MAX_PLOTS = 20


@dataclass
class Run:
    report: dict[str, Any] = field(default_factory=dict)
    artifacts: dict[str, str] = field(default_factory=dict)
    warnings: list[str] = field(default_factory=list)

    def warn(self, message: str) -> None:
        log.warning(message)
        self.warnings.append(message)

    def merge(self, other: Run) -> None:
        self.report.update(other.report)
        self.artifacts.update(other.artifacts)
        self.warnings.extend(other.warnings)

    def finish(self, digest: str) -> str:
        body = {
            "schema_version": SCHEMA_VERSION,
            "toolkit_version": __version__,
            "input_digest": digest,
            **self.report,
            "warnings": list(self.warnings),
        }
        text = json.dumps(body, indent=2, sort_keys=True, allow_nan=False) + "\n"
        self.artifacts["report.json"] = text
        return text


def input_digest(*paths: str | Path) -> str:
    h = hashlib.sha256()
    for p in paths:
        data = Path(p).read_bytes()
        h.update(hashlib.sha256(data).digest())
    return h.hexdigest()


def threshold_tag(t: float) -> str:
    return f"{t:.6f}".rstrip("0").rstrip(".")


def _csv(header: Sequence[str], rows: Sequence[Sequence[Any]]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow(["" if v is None else repr(v) if isinstance(v, float) else v for v in row])
    return buf.getvalue()


def curve_csv(curve: RocCurve) -> str:
    return _csv(("threshold", "fpr", "tpr"), [(p.threshold, p.fpr, p.tpr) for p in curve.points])


def roc_knee(curve: RocCurve, sensitivity: float = DEFAULT_SENSITIVITY) -> KneePoint:
    """Knee of a ROC curve viewed as tpr over fpr (concave, increasing).

    Points sharing an fpr (saturated tails) collapse to the highest tpr so the
    x axis is strictly increasing.
    """
    best: dict[float, float] = {}
    for p in curve.points:
        best[p.fpr] = max(p.tpr, best.get(p.fpr, p.tpr))
    pts = sorted(best.items())
    if len(pts) < 3:
        return KneePoint.missing()
    return find_knee(pts, "concave", "increasing", sensitivity)


def derive_threshold(
    curve: RocCurve, sensitivity: float = DEFAULT_SENSITIVITY, run: Run | None = None
) -> tuple[KneePoint, KneeThresholdResult | None]:
    knee = roc_knee(curve, sensitivity)
    if not knee.found:
        if run:
            run.warn(f"no knee found on {curve.label} curve")
        return knee, None
    try:
        return knee, knee_to_threshold(knee)
    except KneeRocError as exc:
        if run:
            run.warn(f"{curve.label} knee unusable: {exc}")
        return knee, None


def knee_dict(knee: KneePoint) -> dict[str, Any]:
    return {"found": knee.found, "index": knee.index, "x": knee.x, "y": knee.y}


def threshold_dict(result: KneeThresholdResult | None) -> dict[str, Any] | None:
    if result is None:
        return None
    return {"foot": list(result.foot), "distance": result.distance, "threshold": result.threshold}


def curve_summary(curve: RocCurve) -> dict[str, Any]:
    return {
        "auc": curve.auc,
        "point_count": len(curve.points),
        "sweep_lo": curve.points[0].threshold,
        "sweep_hi": curve.points[-1].threshold,
    }


def _check_curve(curve: RocCurve) -> None:
    if not 0.0 <= curve.auc <= 1.0 or abs(auc(curve.points) - curve.auc) > 1e-12:
        raise InvariantError(f"{curve.label}: AUC inconsistent with its points")


def _roc_artifacts(run: Run, stem: str, curve: RocCurve, title: str,
                   knee: KneePoint | None = None) -> None:
    mark = (knee.x, knee.y) if knee is not None and knee.found else None
    run.artifacts[f"{stem}.csv"] = curve_csv(curve)
    run.artifacts[f"{stem}.svg"] = roc_svg(
        [p.fpr for p in curve.points], [p.tpr for p in curve.points], title, mark, curve.auc
    )


def run_method1(
    scores: ScoreSet,
    sweep: SweepConfig | None = None,
    sensitivity: float = DEFAULT_SENSITIVITY,
) -> tuple[Run, RocCurve]:
    run = Run()
    curve = method1_roc(scores, sweep)
    _check_curve(curve)
    knee, result = derive_threshold(curve, sensitivity, run)
    _roc_artifacts(run, "roc_method1", curve, "ROC (Gaussian CDF)", knee)
    run.report["method1"] = {
        **curve_summary(curve),
        "knee": knee_dict(knee),
        "threshold_result": threshold_dict(result),
    }
    return run, curve


def _best_curve_entry(curve: RocCurve) -> dict[str, Any]:
    return {"source": curve.source, "iteration_threshold": curve.iteration_threshold, "auc": curve.auc}


def check_best_curve(report: dict[str, Any]) -> None:
    """Recompute the winner from the curve summaries embedded in ``report``."""
    candidates = [("method1", None, report["method1"]["auc"])]
    candidates += [
        ("method2", it["threshold"], it["auc"])
        for it in report["method2"]["iterations"]
        if not it["skipped"]
    ]
    winner = candidates[0]
    for c in candidates[1:]:
        if abs(c[2] - 0.5) > abs(winner[2] - 0.5):
            winner = c
    best = report["best_curve"]
    if (best["source"], best["iteration_threshold"], best["auc"]) != winner:
        raise InvariantError("best_curve does not match the embedded curve summaries")


def run_method2(
    scores: ScoreSet,
    t_init: float = DEFAULT_T_INIT,
    step: float = DEFAULT_STEP,
    t_stop: float = DEFAULT_T_STOP,
    direction: Direction = "ascending",
    semantics: Semantics = "as-written",
    sweep: SweepConfig | None = None,
    sensitivity: float = DEFAULT_SENSITIVITY,
) -> Run:
    """Method 1 plus the Method 2 sweep, best-curve selection and T_max."""
    run, m1 = run_method1(scores, sweep, sensitivity)
    result: Method2Sweep = method2_sweep(scores, t_init, step, t_stop, direction, semantics, sweep)
    rows = []
    summaries = []
    for it in result.iterations:
        a = it.arrays
        value = it.curve.auc if it.curve is not None else None
        rows.append((it.threshold, value, len(a.tp), len(a.fn), len(a.fp), len(a.tn),
                     it.transferred_fraction, int(it.skipped)))
        summaries.append({
            "threshold": it.threshold,
            "auc": value,
            "skipped": it.skipped,
            "tp": len(a.tp), "fn": len(a.fn), "fp": len(a.fp), "tn": len(a.tn),
            "transferred_fraction": it.transferred_fraction,
        })
        if it.curve is not None:
            _check_curve(it.curve)
            tag = threshold_tag(it.threshold)
            _roc_artifacts(run, f"roc_method2_t{tag}", it.curve, f"ROC (redistributed, T = {tag})")
    run.artifacts["method2_summary.csv"] = _csv(
        ("threshold", "auc", "tp", "fn", "fp", "tn", "transferred_fraction", "skipped"), rows
    )
    if not result.curves:
        run.warn("no Method 2 curves generated: every iteration was skipped")

    best = select_best([m1, *result.curves])
    knee, threshold = derive_threshold(best, sensitivity, run)
    run.report["method2"] = {
        "semantics": semantics,
        "direction": direction,
        "t_init": t_init,
        "step": step,
        "t_stop": t_stop,
        "curve_count": len(result.curves),
        "skipped_count": result.skipped_count,
        "iterations": summaries,
    }
    run.report["best_curve"] = _best_curve_entry(best)
    run.report["knee"] = knee_dict(knee)
    run.report["threshold_result"] = threshold_dict(threshold)
    check_best_curve(run.report)
    return run


def statistics_dict(stats: KneeStatistics) -> dict[str, Any]:
    return {
        "sample_count": stats.sample_count,
        "prob_cutoff": stats.prob_cutoff,
        "knee_lo": stats.knee_lo,
        "knee_hi": stats.knee_hi,
        "high_count": stats.high_count,
        "high_fraction": stats.high_fraction,
        "in_range_count": stats.in_range_count,
        "in_range_fraction": stats.in_range_fraction,
        "no_knee_count": stats.no_knee_count,
    }


def run_method3(
    dataset: DatasetFile,
    prob_cutoff: float = 0.35,
    knee_range: tuple[int, int] = (6, 8),
    sensitivity: float = DEFAULT_SENSITIVITY,
    max_plots: int = DEFAULT_MAX_PLOTS,
) -> Run:
    run = Run()
    if not dataset.samples:
        raise InsufficientDataError("no samples")
    knees = [method3_knee(s, sensitivity) for s in dataset.samples]
    rows = []
    per_sample = []
    for i, (sample, knee) in enumerate(zip(dataset.samples, knees)):
        classes = sorted(detected_classes(sample, knee)) if knee.found else None
        rows.append((i, knee.index, knee.y, None if classes is None else ";".join(map(str, classes)),
                     max(sample.probs)))
        per_sample.append({"sample": i, "knee_index": knee.index, "knee_y": knee.y,
                           "detected_classes": classes})
        if i < max_plots:
            run.artifacts[f"method3_sample{i}.svg"] = knee_svg(
                sample.probs, f"Sample {i}: sorted probabilities", knee.index
            )
    run.artifacts["method3_knees.csv"] = _csv(
        ("sample", "knee_index", "knee_y", "detected_classes", "max_prob"), rows
    )
    stats = knee_statistics(dataset.samples, prob_cutoff, knee_range[0], knee_range[1], knees)
    if stats.high_count == 0:
        run.warn(f"no sample reaches probability {prob_cutoff}; knee-range fraction undefined")
    run.report["method3"] = {
        "class_count": dataset.class_count,
        "statistics": statistics_dict(stats),
        "samples": per_sample,
    }
    return run


def commit(artifacts: dict[str, str], out_dir: str | Path) -> list[Path]:
    """Write every artifact, each via a temporary file and an atomic rename.

    If any write fails the files already placed by this call are removed.
    """
    out = Path(out_dir)
    created_dir = not out.exists()
    out.mkdir(parents=True, exist_ok=True)
    written: list[Path] = []
    try:
        for name in sorted(artifacts):
            target = out / name
            fd, tmp = tempfile.mkstemp(dir=out, prefix=f".{name}.", suffix=".tmp")
            try:
                with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
                    fh.write(artifacts[name])
                os.replace(tmp, target)
            except BaseException:
                Path(tmp).unlink(missing_ok=True)
                raise
            written.append(target)
    except BaseException:
        for p in written:
            p.unlink(missing_ok=True)
        if created_dir:
            try:
                out.rmdir()
            except OSError:
                pass
        raise
    return written


def load_schema() -> dict[str, Any]:
    from importlib.resources import files

    return json.loads(files("kneeroc").joinpath("report_schema.json").read_text(encoding="utf-8"))
