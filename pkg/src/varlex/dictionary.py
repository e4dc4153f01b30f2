"""Low-rank variation dictionaries: sparse parts of RPCA decompositions.

In fixed mode the training block and the test block are decomposed on
their own. In changing mode each training class is decomposed separately,
and test samples are decomposed jointly with the whole training matrix so
the low-rank background is estimated from labelled data as well.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .rpca import RpcaOptions, rpca_decompose

DEGENERATE_RTOL = 1e-10


@dataclass
class GroupStructure:
    """Class blocks over the training columns (class indices are 1-based)."""

    class_of: np.ndarray
    blocks: list[np.ndarray]

    @classmethod
    def from_labels(cls, labels, n_classes: int | None = None) -> "GroupStructure":
        labels = np.asarray(labels, dtype=int)
        c = int(labels.max()) if n_classes is None else n_classes
        blocks = [np.flatnonzero(labels == j) for j in range(1, c + 1)]
        empty = [j + 1 for j, b in enumerate(blocks) if b.size == 0]
        if empty:
            raise ValueError(f"classes {empty} have no training samples")
        return cls(labels.copy(), blocks)

    @classmethod
    def singletons(cls, n: int) -> "GroupStructure":
        return cls(np.arange(1, n + 1), [np.array([i]) for i in range(n)])

    @property
    def sizes(self) -> np.ndarray:
        return np.array([b.size for b in self.blocks])

    @property
    def n_groups(self) -> int:
        return len(self.blocks)

    def to_dict(self) -> dict:
        return {"class_of": self.class_of.tolist(), "blocks": [b.tolist() for b in self.blocks]}

    @classmethod
    def from_dict(cls, d) -> "GroupStructure":
        return cls(np.asarray(d["class_of"], dtype=int),
                   [np.asarray(b, dtype=int) for b in d["blocks"]])


@dataclass
class VariationDictionary:
    train_sparse: np.ndarray   # S_X, m x n, unit-norm columns
    test_sparse: np.ndarray    # S_Y, m x k, unit-norm columns
    groups: GroupStructure
    mode: str
    train_norms: np.ndarray    # column norms before normalization
    test_norms: np.ndarray
    train_degenerate: np.ndarray
    test_degenerate: np.ndarray


def normalize_columns(A: np.ndarray, rtol: float = DEGENERATE_RTOL, scale: float | None = None):
    """Scale columns to unit l2 norm.

    Columns with norm at or below ``rtol * scale`` (``scale`` defaults to the
    largest column norm) are set to exactly zero and flagged. Returns
    ``(normalized, norms, degenerate)``.
    """
    norms = np.linalg.norm(A, axis=0)
    ref = norms.max(initial=0.0) if scale is None else scale
    degenerate = norms <= rtol * ref
    out = np.zeros_like(A)
    keep = ~degenerate
    out[:, keep] = A[:, keep] / norms[keep]
    return out, norms, degenerate


def _sparse_part(X: np.ndarray, opts: RpcaOptions) -> np.ndarray:
    # lambda is recomputed for each block's own shape unless fixed by the caller
    res = rpca_decompose(X, opts)
    if not res.converged:
        warnings.warn(f"RPCA did not converge on a {X.shape} block in {res.iterations} iterations",
                      stacklevel=3)
    return res.sparse


def _assemble(SX, SY, groups, mode, X, Y) -> VariationDictionary:
    # degeneracy is judged against the raw data scale, not the sparse part's
    scale = max(np.linalg.norm(X, axis=0).max(initial=0.0), np.linalg.norm(Y, axis=0).max(initial=0.0))
    SXn, xn, xd = normalize_columns(SX, scale=scale)
    SYn, yn, yd = normalize_columns(SY, scale=scale)
    if xd.any() or yd.any():
        warnings.warn(f"{int(xd.sum())} training and {int(yd.sum())} test dictionary column(s) "
                      "are all-zero (degenerate)", stacklevel=3)
    return VariationDictionary(SXn, SYn, groups, mode, xn, yn, xd, yd)


def _check(X, Y, train_labels):
    X = np.asarray(X, dtype=float)
    Y = np.asarray(Y, dtype=float)
    if Y.ndim == 1:
        Y = Y[:, None]
    if X.shape[0] != Y.shape[0]:
        raise ValueError(f"train has {X.shape[0]} genes, test has {Y.shape[0]}")
    if np.asarray(train_labels).shape != (X.shape[1],):
        raise ValueError("one label per training column required")
    return X, Y


def build_fixed_dictionary(X, train_labels, Y, opts: RpcaOptions | None = None,
                           n_classes: int | None = None) -> VariationDictionary:
    """Sparse parts of separate RPCA decompositions of ``X`` and ``Y``.

    ``X`` (m x n) holds training samples as columns, ``Y`` (m x k) test samples.
    """
    opts = opts or RpcaOptions()
    X, Y = _check(X, Y, train_labels)
    groups = GroupStructure.from_labels(train_labels, n_classes)
    return _assemble(_sparse_part(X, opts), _sparse_part(Y, opts), groups, "fixed", X, Y)


def build_changing_dictionary(X, train_labels, Y, opts: RpcaOptions | None = None,
                              n_classes: int | None = None,
                              per_sample: bool = False) -> VariationDictionary:
    """Per-class RPCA for the training side, joint ``[X | Y]`` RPCA for tests.

    With ``per_sample=True`` each test column is appended to ``X`` and
    decomposed on its own instead of all test columns at once.
    """
    opts = opts or RpcaOptions()
    X, Y = _check(X, Y, train_labels)
    groups = GroupStructure.from_labels(train_labels, n_classes)
    small = [j + 1 for j, b in enumerate(groups.blocks) if b.size < 2]
    if small:
        raise ValueError(f"changing mode needs >= 2 training samples per class; classes {small} have 1")

    SX = np.zeros_like(X)
    for block in groups.blocks:
        SX[:, block] = _sparse_part(X[:, block], opts)

    n = X.shape[1]
    if per_sample:
        SY = np.column_stack([_sparse_part(np.column_stack([X, y]), opts)[:, n] for y in Y.T])
    else:
        SY = _sparse_part(np.hstack([X, Y]), opts)[:, n:]
    return _assemble(SX, SY, groups, "changing", X, Y)


def build_dictionary(X, train_labels, Y, mode: str = "fixed", opts: RpcaOptions | None = None,
                     n_classes: int | None = None, per_sample: bool = False) -> VariationDictionary:
    if mode == "fixed":
        return build_fixed_dictionary(X, train_labels, Y, opts, n_classes)
    if mode == "changing":
        return build_changing_dictionary(X, train_labels, Y, opts, n_classes, per_sample)
    raise ValueError(f"unknown dictionary mode {mode!r}")
