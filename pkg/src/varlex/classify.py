"""Decision rules and the end-to-end representation classifiers.

Inverse-projection kinds (IPRC, IPGSRC) represent every training sample
over the test samples and vote with the category contribution rate (CCR).
Forward kinds (SRC, GSRC) represent each test sample over the training
samples and pick the class with the smallest reconstruction error.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .dataset import DataError, ExpressionDataset
from .dictionary import GroupStructure, VariationDictionary, build_dictionary
from .rpca import RpcaOptions
from .solver import COLS, ROWS, GroupSparseProblem, IpgsrSolution, SolverOptions, ipgsr_solve

KINDS = ("src", "gsrc", "iprc", "ipgsrc")
INVERSE_KINDS = ("iprc", "ipgsrc")
CCR = "ccr"
RE = "reconstruction_error"


def _check_kind(kind: str) -> str:
    kind = kind.lower()
    if kind not in KINDS:
        raise ValueError(f"unknown classifier kind {kind!r}; choose from {KINDS}")
    return kind


def group_weights(sizes, weighting: str = "sqrt") -> np.ndarray:
    sizes = np.asarray(sizes, dtype=float)
    if weighting == "sqrt":
        return np.sqrt(sizes)
    if weighting == "unit":
        return np.ones_like(sizes)
    raise ValueError(f"unknown weighting {weighting!r}")


def make_problem(kind: str, vd: VariationDictionary, weighting: str = "sqrt") -> GroupSparseProblem:
    """Set up the representation problem for one classifier kind.

    ipgsrc: S_Y M = S_X, class blocks over the columns of M (k x n)
    iprc:   S_Y M = S_X, one block per column of M
    gsrc:   S_X M = S_Y, class blocks over the rows of M (n x k), per test column
    src:    S_X M = S_Y, one block per entry of M
    """
    kind = _check_kind(kind)
    n = vd.train_sparse.shape[1]
    if kind in ("ipgsrc", "gsrc"):
        blocks = vd.groups.blocks
    else:
        blocks = GroupStructure.singletons(n).blocks
    weights = group_weights([b.size for b in blocks], weighting)
    if kind in INVERSE_KINDS:
        return GroupSparseProblem(vd.test_sparse, vd.train_sparse, blocks, weights, axis=COLS)
    return GroupSparseProblem(vd.train_sparse, vd.test_sparse, blocks, weights, axis=ROWS,
                              per_column=True)


@dataclass
class CcrMatrix:
    values: np.ndarray          # c x k
    degenerate: np.ndarray      # per test column: no coefficient mass at all
    normalized: bool = False

    def normalize(self) -> "CcrMatrix":
        """Rescale every column to sum to one (argmax and CSI unchanged)."""
        tot = self.values.sum(axis=0)
        safe = np.where(tot > 0, tot, 1.0)
        return CcrMatrix(self.values / safe, self.degenerate.copy(), True)


def compute_ccr(M, groups: GroupStructure, absolute: bool = True) -> CcrMatrix:
    """Category contribution rates from a k x n inverse-projection matrix.

    ``C[j, r] = (1/s_j) * sum_{i in G_j} |M[r, i]| / sum_i |M[r, i]|``.
    A test row with no mass gets the uniform value ``1/n`` for every class
    and is flagged degenerate. ``absolute=False`` uses signed coefficients.
    """
    M = np.atleast_2d(np.asarray(M, dtype=float))
    k, n = M.shape
    if groups.class_of.size != n:
        raise ValueError(f"M has {n} columns but the groups cover {groups.class_of.size} samples")
    W = np.abs(M) if absolute else M
    total = W.sum(axis=1)
    degenerate = np.abs(total) <= 0
    sizes = groups.sizes
    per_class = np.stack([W[:, b].sum(axis=1) for b in groups.blocks])   # c x k
    safe = np.where(degenerate, 1.0, total)
    values = per_class / safe / sizes[:, None]
    values[:, degenerate] = 1.0 / n
    return CcrMatrix(values, degenerate)


@dataclass
class Prediction:
    label: int                  # 1-based class index
    scores: np.ndarray
    csi: float
    criterion: str
    tie: bool = False
    degenerate: bool = False

    def __post_init__(self):
        if not 0.0 <= self.csi <= 1.0:
            raise ValueError(f"CSI out of [0, 1]: {self.csi!r}")

    @property
    def flags(self) -> str:
        return "|".join(f for f, on in (("tie", self.tie), ("degenerate", self.degenerate)) if on)


def compute_csi(scores, criterion: str) -> float:
    """Ratio of the runner-up criterion value to the winner's, in [0, 1].

    For CCR: second largest / largest. For reconstruction error: smallest /
    second smallest. ``0/0`` counts as 1 (no separation at all).
    """
    s = np.sort(np.asarray(scores, dtype=float))
    if s.size < 2:
        raise ValueError("CSI needs at least two classes")
    if criterion == CCR:
        num, den = s[-2], s[-1]
    elif criterion == RE:
        num, den = s[0], s[1]
    else:
        raise ValueError(f"unknown criterion {criterion!r}")
    if den == 0:
        return 1.0
    return float(min(max(num / den, 0.0), 1.0))


def _decide(scores: np.ndarray, criterion: str) -> tuple[int, bool]:
    best = scores.max() if criterion == CCR else scores.min()
    hits = np.flatnonzero(scores == best)
    return int(hits[0]) + 1, hits.size > 1


def classify_ccr(ccr: CcrMatrix) -> list[Prediction]:
    """Argmax over classes per test sample; ties go to the lowest class index."""
    preds = []
    for r in range(ccr.values.shape[1]):
        col = ccr.values[:, r].copy()
        label, tie = _decide(col, CCR)
        preds.append(Prediction(label, col, compute_csi(col, CCR), CCR, tie, bool(ccr.degenerate[r])))
    return preds


def reconstruction_error(D, alpha, y, groups: GroupStructure) -> np.ndarray:
    """Per-class residuals ``||y - D delta_j(alpha)||_2``.

    ``alpha`` and ``y`` may also be matrices (one column per test sample);
    the result is then c x k.
    """
    D = np.asarray(D, dtype=float)
    A = np.asarray(alpha, dtype=float)
    Y = np.asarray(y, dtype=float)
    vec = A.ndim == 1
    A = A[:, None] if vec else A
    Y = Y[:, None] if Y.ndim == 1 else Y
    res = np.stack([np.linalg.norm(Y - D[:, b] @ A[b], axis=0) for b in groups.blocks])
    return res[:, 0] if vec else res


def classify_residuals(residuals: np.ndarray) -> list[Prediction]:
    preds = []
    for r in range(residuals.shape[1]):
        col = residuals[:, r].copy()
        label, tie = _decide(col, RE)
        preds.append(Prediction(label, col, compute_csi(col, RE), RE, tie))
    return preds


@dataclass(frozen=True)
class ClassifierConfig:
    kind: str = "ipgsrc"
    mode: str = "fixed"
    rpca: RpcaOptions = field(default_factory=RpcaOptions)
    solver: SolverOptions = field(default_factory=SolverOptions)
    weighting: str = "sqrt"
    per_sample: bool = False
    signed_ccr: bool = False

    def __post_init__(self):
        object.__setattr__(self, "kind", _check_kind(self.kind))
        if self.mode not in ("fixed", "changing"):
            raise ValueError(f"unknown dictionary mode {self.mode!r}")


@dataclass
class ClassifierRun:
    predictions: list[Prediction]
    dictionary: VariationDictionary
    solution: IpgsrSolution


def predict_from_dictionary(vd: VariationDictionary, config: ClassifierConfig) -> ClassifierRun:
    problem = make_problem(config.kind, vd, config.weighting)
    sol = ipgsr_solve(problem, config.solver)
    if config.kind in INVERSE_KINDS:
        ccr = compute_ccr(sol.M, vd.groups, absolute=not config.signed_ccr).normalize()
        preds = classify_ccr(ccr)
    else:
        res = reconstruction_error(vd.train_sparse, sol.M, vd.test_sparse, vd.groups)
        preds = classify_residuals(res)
    return ClassifierRun(preds, vd, sol)


def run_classifier(kind: str, train: ExpressionDataset, test, mode: str = "fixed",
                   config: ClassifierConfig | None = None) -> list[Prediction]:
    """Dictionary -> problem -> ADMM -> decisions, for all test samples at once.

    ``test`` is an :class:`ExpressionDataset` (its labels are ignored) or an
    m x k matrix whose rows follow ``train``'s gene order.
    """
    return run_classifier_full(kind, train, test, mode, config).predictions


def run_classifier_full(kind, train, test, mode="fixed", config=None) -> ClassifierRun:
    config = config or ClassifierConfig()
    config = ClassifierConfig(kind, mode, config.rpca, config.solver, config.weighting,
                              config.per_sample, config.signed_ccr)
    if isinstance(test, ExpressionDataset):
        if test.gene_ids != train.gene_ids:
            raise DataError("train and test gene order differ")
        Y = test.values
    else:
        Y = np.asarray(test, dtype=float)
    if np.isnan(train.values).any() or np.isnan(Y).any():
        raise DataError("impute missing values before classification")
    vd = build_dictionary(train.values, train.labels, Y, config.mode, config.rpca,
                          train.n_classes, config.per_sample)
    return predict_from_dictionary(vd, config)
