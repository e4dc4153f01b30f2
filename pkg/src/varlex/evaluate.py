"""Cross-validated evaluation: confusion rates, ROC/AUC, ERR and CSI summaries."""

from __future__ import annotations

import json
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np
from scipy.integrate import trapezoid

from .classify import CCR, ClassifierConfig, Prediction, predict_from_dictionary
from .dataset import ExpressionDataset, FoldPlan, snr_rank
from .dictionary import build_dictionary

REPORT_SCHEMA = "report_v1"


class Confusion(NamedTuple):
    accuracy: float
    sensitivity: float
    specificity: float


def confusion_metrics(preds, truth, positive_class: int | None = None) -> Confusion:
    """Accuracy plus, for a given positive class, TP/(TP+FN) and TN/(TN+FP).

    A rate with an empty denominator comes back as NaN (with a warning).
    """
    preds = np.asarray(preds)
    truth = np.asarray(truth)
    if preds.shape != truth.shape:
        raise ValueError("predictions and truth differ in length")
    if truth.size == 0:
        raise ValueError("no samples")
    acc = float(np.mean(preds == truth))
    if positive_class is None:
        return Confusion(acc, float("nan"), float("nan"))
    pos = truth == positive_class
    hit = preds == positive_class
    tp, fn = np.sum(pos & hit), np.sum(pos & ~hit)
    tn, fp = np.sum(~pos & ~hit), np.sum(~pos & hit)
    rates = []
    for num, den, what in ((tp, tp + fn, "sensitivity"), (tn, tn + fp, "specificity")):
        if den == 0:
            warnings.warn(f"{what} undefined: no {'positive' if what == 'sensitivity' else 'negative'} "
                          "samples in truth", stacklevel=2)
            rates.append(float("nan"))
        else:
            rates.append(float(num / den))
    return Confusion(acc, *rates)


@dataclass
class RocCurve:
    fpr: np.ndarray
    tpr: np.ndarray
    thresholds: np.ndarray


def roc_curve(scores, truth, positive_class=1) -> RocCurve:
    """Sweep the threshold over every distinct score, highest first.

    Starts at (0, 0) with an infinite threshold and ends at (1, 1).
    """
    scores = np.asarray(scores, dtype=float)
    pos = np.asarray(truth) == positive_class
    n_pos, n_neg = int(pos.sum()), int((~pos).sum())
    if n_pos == 0 or n_neg == 0:
        raise ValueError("ROC needs both positive and negative samples")
    if not np.all(np.isfinite(scores)):
        raise ValueError("scores must be finite")
    order = np.argsort(-scores, kind="stable")
    s, p = scores[order], pos[order]
    # last index of each run of tied scores
    cut = np.r_[np.flatnonzero(np.diff(s) != 0), s.size - 1]
    tp = np.cumsum(p)[cut]
    fp = (cut + 1) - tp
    return RocCurve(np.r_[0.0, fp / n_neg], np.r_[0.0, tp / n_pos], np.r_[np.inf, s[cut]])


def roc_auc(scores, truth, positive_class=1) -> tuple[RocCurve, float]:
    """ROC curve and its trapezoidal area (ties contribute one half)."""
    curve = roc_curve(scores, truth, positive_class)
    return curve, float(trapezoid(curve.tpr, curve.fpr))


def err(er1: float, er2: float) -> float:
    """Error reduction rate ``(er1 - er2) / er1 * 100`` in percent."""
    if er1 == 0:
        raise ValueError("ERR undefined for er1 = 0")
    return (er1 - er2) / er1 * 100.0


def binary_score(pred: Prediction, positive_class: int) -> float:
    """Signed criterion margin for the positive class (higher = more positive).

    CCR: C_pos - C_neg. Reconstruction error: r_neg - r_pos.
    """
    if pred.scores.size != 2:
        raise ValueError("binary score needs exactly two classes")
    p = positive_class - 1
    q = 1 - p
    if pred.criterion == CCR:
        return float(pred.scores[p] - pred.scores[q])
    return float(pred.scores[q] - pred.scores[p])


def quartiles(x) -> dict:
    x = np.asarray(x, dtype=float)
    if x.size == 0:
        return {}
    q1, med, q3 = np.percentile(x, [25, 50, 75])
    return {"min": float(x.min()), "q1": float(q1), "median": float(med), "q3": float(q3),
            "max": float(x.max()), "mean": float(x.mean())}


@dataclass
class FoldResult:
    repeat: int
    fold: int
    test_idx: list[int]
    truth: list[int]
    predicted: list[int]
    scores: list[list[float]]
    csi: list[float]
    flags: list[str]
    solver_converged: bool
    solver_iterations: int
    criterion: str = CCR

    @property
    def accuracy(self) -> float:
        return float(np.mean(np.asarray(self.predicted) == np.asarray(self.truth)))

    def to_dict(self) -> dict:
        d = dict(self.__dict__)
        d["accuracy"] = self.accuracy
        return d


@dataclass
class EvaluationReport:
    name: str
    config: dict
    plan: dict
    per_fold: list[FoldResult]
    aggregate: dict
    roc: list[tuple[float, float]]
    csi_summary: dict
    box_stats: dict
    err_vs: dict = field(default_factory=dict)
    provenance: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "schema": REPORT_SCHEMA,
            "provenance": self.provenance,
            "name": self.name,
            "config": self.config,
            "plan": self.plan,
            "aggregate": self.aggregate,
            "box_stats": self.box_stats,
            "csi_summary": self.csi_summary,
            "err_vs": self.err_vs,
            "roc": [list(p) for p in self.roc],
            "per_fold": [f.to_dict() for f in self.per_fold],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=1, sort_keys=True)


def config_summary(config: ClassifierConfig) -> dict:
    return {
        "kind": config.kind, "mode": config.mode, "weighting": config.weighting,
        "per_sample": config.per_sample, "signed_ccr": config.signed_ccr,
        "rpca": dict(config.rpca.__dict__), "solver": dict(config.solver.__dict__),
    }


def _dict_key(config: ClassifierConfig):
    return (config.mode, config.rpca, config.per_sample)


def _run_cell(values, labels, n_classes, train_idx, test_idx, configs, top_k, genes):
    """One repeat x fold cell; shares dictionaries between configs where possible."""
    if genes is None and top_k:
        sub = ExpressionDataset([str(i) for i in range(values.shape[0])],
                                [str(j) for j in train_idx], values[:, train_idx],
                                labels[train_idx], [str(c) for c in range(1, n_classes + 1)])
        order, _ = snr_rank(sub, top_k)
        genes = order[:top_k]
    X = values[:, train_idx] if genes is None else values[np.ix_(genes, train_idx)]
    Y = values[:, test_idx] if genes is None else values[np.ix_(genes, test_idx)]
    cache = {}
    out = []
    for cfg in configs:
        key = _dict_key(cfg)
        if key not in cache:
            cache[key] = build_dictionary(X, labels[train_idx], Y, cfg.mode, cfg.rpca,
                                          n_classes, cfg.per_sample)
        run = predict_from_dictionary(cache[key], cfg)
        out.append((run.predictions, run.solution.converged, run.solution.iterations))
    return out


def _cell_job(args):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        return _run_cell(*args)


def cross_validate_many(ds: ExpressionDataset, configs: dict[str, ClassifierConfig],
                        plan: FoldPlan, top_k: int | None = None, prescreen: str = "fold",
                        positive_class: int | None = None, jobs: int = 1) -> dict[str, EvaluationReport]:
    """Evaluate several classifiers on the same folds.

    Configs that agree on dictionary settings reuse one dictionary per fold.
    ``prescreen="fold"`` ranks genes by SNR on each training split;
    ``"global"`` ranks once on the whole dataset. Any failing fold aborts.
    """
    if ds.has_missing():
        raise ValueError("impute missing values before cross-validation")
    if plan.assignments and sum(len(f) for f in plan.assignments[0]) != ds.n_samples:
        raise ValueError("fold plan does not match the dataset")
    if prescreen not in ("fold", "global"):
        raise ValueError("prescreen must be 'fold' or 'global'")
    binary = ds.n_classes == 2
    if positive_class is None:
        positive_class = ds.n_classes
    genes = None
    if top_k and prescreen == "global":
        order, _ = snr_rank(ds, top_k)
        genes = order[:top_k]

    names = list(configs)
    cfgs = [configs[k] for k in names]
    cells = list(plan.splits())
    jobs_args = [(ds.values, ds.labels, ds.n_classes, tr, te, cfgs, top_k, genes)
                 for _, _, tr, te in cells]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_cell_job, jobs_args))
    else:
        results = [_cell_job(a) for a in jobs_args]

    reports = {}
    for ci, name in enumerate(names):
        folds = []
        for (r, f, _, te), res in zip(cells, results):
            preds, conv, its = res[ci]
            folds.append(FoldResult(
                r, f, te.tolist(), ds.labels[te].tolist(), [p.label for p in preds],
                [p.scores.tolist() for p in preds], [p.csi for p in preds],
                [p.flags for p in preds], bool(conv), int(its),
                preds[0].criterion if preds else CCR))
        reports[name] = _assemble(name, cfgs[ci], plan, folds, binary, positive_class,
                                  top_k, prescreen)
    return reports


def cross_validate(ds: ExpressionDataset, config: ClassifierConfig, plan: FoldPlan,
                   top_k: int | None = None, prescreen: str = "fold",
                   positive_class: int | None = None, jobs: int = 1) -> EvaluationReport:
    return cross_validate_many(ds, {config.kind: config}, plan, top_k, prescreen,
                               positive_class, jobs)[config.kind]


def _assemble(name, config, plan, folds, binary, positive_class, top_k, prescreen) -> EvaluationReport:
    sizes = np.array([len(f.truth) for f in folds])
    accs = np.array([f.accuracy for f in folds])
    errs = 100.0 * (1.0 - accs)
    aggregate = {
        "accuracy_mean": float(np.sum(accs * sizes) / sizes.sum()),
        "accuracy_std": float(accs.std()),
        "error_rate_mean": float(np.sum(errs * sizes) / sizes.sum()),
        "n_cells": len(folds),
        "solver_nonconverged_cells": int(sum(not f.solver_converged for f in folds)),
    }
    roc_points: list[tuple[float, float]] = []
    if binary:
        per_rep = {}
        for f in folds:
            rep = per_rep.setdefault(f.repeat, ([], [], []))
            rep[0].extend(f.truth)
            rep[1].extend(f.predicted)
            rep[2].extend(_score(s, f, positive_class) for s in range(len(f.truth)))
        sens, spec, aucs = [], [], []
        all_truth, all_scores = [], []
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            for truth, pred, score in per_rep.values():
                cm = confusion_metrics(pred, truth, positive_class)
                sens.append(cm.sensitivity)
                spec.append(cm.specificity)
                try:
                    aucs.append(roc_auc(score, truth, positive_class)[1])
                except ValueError:
                    aucs.append(float("nan"))
                all_truth += truth
                all_scores += score
        for key, vals in (("sensitivity", sens), ("specificity", spec), ("auc", aucs)):
            aggregate[f"{key}_mean"] = float(np.nanmean(vals)) if not np.all(np.isnan(vals)) else None
            aggregate[f"{key}_std"] = float(np.nanstd(vals)) if not np.all(np.isnan(vals)) else None
        aggregate["positive_class"] = positive_class
        try:
            curve = roc_curve(all_scores, all_truth, positive_class)
            roc_points = list(zip(curve.fpr.tolist(), curve.tpr.tolist()))
        except ValueError:
            roc_points = []
    all_csi = [c for f in folds for c in f.csi]
    q1, med, q3 = np.percentile(errs, [25, 50, 75])
    box = {"median": float(med), "q1": float(q1), "q3": float(q3), "iqr": float(q3 - q1),
           "mean": float(errs.mean()), "min": float(errs.min()), "max": float(errs.max())}
    return EvaluationReport(
        name=name,
        config={**config_summary(config), "top_k": top_k, "prescreen": prescreen},
        plan={"k": plan.k, "repeats": plan.repeats, "seed": plan.seed},
        per_fold=folds,
        aggregate=aggregate,
        roc=roc_points,
        csi_summary={name: quartiles(all_csi)},
        box_stats=box,
    )


def _score(i: int, fold: FoldResult, positive_class: int) -> float:
    pred = Prediction(fold.predicted[i], np.asarray(fold.scores[i]), fold.csi[i], fold.criterion)
    return binary_score(pred, positive_class)


def compare(report: EvaluationReport, baselines: dict[str, EvaluationReport]) -> dict:
    """ERR of ``report`` against each baseline, from mean error rates (percent)."""
    out = {}
    er2 = report.aggregate["error_rate_mean"]
    for name, base in baselines.items():
        er1 = base.aggregate["error_rate_mean"]
        out[name] = err(er1, er2) if er1 > 0 else None
    report.err_vs = out
    return out
