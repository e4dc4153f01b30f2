"""Expression matrices: CSV I/O, imputation, SNR gene ranking, fold plans."""

from __future__ import annotations

import csv
import json
import math
import warnings
from dataclasses import dataclass, field

import numpy as np

MISSING_TOKENS = {"", "NA"}
LABEL_ROW = "LABEL"


class DataError(ValueError):
    """Malformed or inconsistent input data."""


@dataclass
class ExpressionDataset:
    """Genes x samples matrix with per-sample class labels.

    ``labels`` holds 1-based class indices into ``class_names``. Missing
    cells are NaN until :func:`impute_missing` is applied.
    """

    gene_ids: list[str]
    sample_ids: list[str]
    values: np.ndarray
    labels: np.ndarray
    class_names: list[str]

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=float)
        self.labels = np.asarray(self.labels, dtype=int)
        m, n = self.values.shape
        if len(self.gene_ids) != m:
            raise DataError(f"{len(self.gene_ids)} gene ids for {m} rows")
        if len(self.sample_ids) != n or self.labels.shape != (n,):
            raise DataError(f"sample ids/labels do not match {n} columns")
        c = len(self.class_names)
        if n and (self.labels.min() < 1 or self.labels.max() > c):
            raise DataError("labels must lie in 1..c")
        missing = [self.class_names[j] for j in range(c) if not np.any(self.labels == j + 1)]
        if missing:
            raise DataError(f"classes without samples: {missing}")

    @property
    def n_genes(self) -> int:
        return self.values.shape[0]

    @property
    def n_samples(self) -> int:
        return self.values.shape[1]

    @property
    def n_classes(self) -> int:
        return len(self.class_names)

    def has_missing(self) -> bool:
        return bool(np.isnan(self.values).any())

    def subset(self, samples=None, genes=None) -> "ExpressionDataset":
        """Columns/rows by index, keeping the full class list."""
        samples = np.arange(self.n_samples) if samples is None else np.asarray(samples, dtype=int)
        genes = np.arange(self.n_genes) if genes is None else np.asarray(genes, dtype=int)
        return _unchecked(
            [self.gene_ids[i] for i in genes],
            [self.sample_ids[i] for i in samples],
            self.values[np.ix_(genes, samples)],
            self.labels[samples],
            list(self.class_names),
        )


def _unchecked(gene_ids, sample_ids, values, labels, class_names) -> ExpressionDataset:
    # fold splits may legitimately miss a class; skip the coverage check
    ds = object.__new__(ExpressionDataset)
    ds.gene_ids, ds.sample_ids, ds.class_names = gene_ids, sample_ids, class_names
    ds.values = np.asarray(values, dtype=float)
    ds.labels = np.asarray(labels, dtype=int)
    return ds


def _parse_cell(text: str, where: str) -> float:
    text = text.strip()
    if text in MISSING_TOKENS:
        return math.nan
    try:
        return float(text)
    except ValueError:
        raise DataError(f"non-numeric cell {text!r} at {where}") from None


def _read_rows(path) -> list[list[str]]:
    with open(path, newline="", encoding="utf-8") as fh:
        return [row for row in csv.reader(fh) if row and not row[0].startswith("#")]


def read_matrix_csv(path):
    """Parse a matrix CSV; returns ``(gene_ids, sample_ids, values, label_row)``.

    ``label_row`` is the list of class names from a trailing ``LABEL`` row,
    or None when the file has none.
    """
    rows = _read_rows(path)
    if not rows:
        raise DataError(f"{path}: empty matrix file")
    header = [h.strip() for h in rows[0]]
    if header[0] != "gene_id":
        raise DataError(f"{path}: first header cell must be 'gene_id'")
    sample_ids = header[1:]
    if len(set(sample_ids)) != len(sample_ids):
        raise DataError(f"{path}: duplicate sample ids")
    n = len(sample_ids)

    label_row = None
    body = rows[1:]
    if body and body[-1][0].strip() == LABEL_ROW:
        label_row = [x.strip() for x in body[-1][1:]]
        body = body[:-1]
        if len(label_row) != n:
            raise DataError(f"{path}: LABEL row has {len(label_row)} cells, expected {n}")

    gene_ids = []
    values = np.empty((len(body), n))
    for i, row in enumerate(body):
        if len(row) != n + 1:
            raise DataError(
                f"{path}: dimension mismatch on line {i + 2}: {len(row) - 1} cells, header has {n}"
            )
        gene_ids.append(row[0].strip())
        for j, cell in enumerate(row[1:]):
            values[i, j] = _parse_cell(cell, f"{path}:{i + 2}:{j + 2}")
    if len(set(gene_ids)) != len(gene_ids):
        raise DataError(f"{path}: duplicate gene ids")
    return gene_ids, sample_ids, values, label_row


def read_labels_csv(path) -> dict[str, str]:
    """Two-column ``sample_id,label`` file, header row included."""
    rows = _read_rows(path)
    if rows and [c.strip() for c in rows[0][:2]] == ["sample_id", "label"]:
        rows = rows[1:]
    out = {}
    for row in rows:
        if len(row) < 2:
            raise DataError(f"{path}: malformed labels row {row!r}")
        sid, lab = row[0].strip(), row[1].strip()
        if sid in out:
            raise DataError(f"{path}: duplicate sample id {sid!r}")
        out[sid] = lab
    return out


def _index_classes(names) -> tuple[np.ndarray, list[str]]:
    class_names: list[str] = []
    for name in names:
        if name not in class_names:
            class_names.append(name)
    labels = np.array([class_names.index(x) + 1 for x in names], dtype=int)
    return labels, class_names


def load_expression_csv(matrix_path, labels_path=None, *, min_classes: int = 2) -> ExpressionDataset:
    """Load a matrix CSV plus labels (separate file or trailing LABEL row).

    Classes are numbered in order of first appearance in the labels file
    (or in the LABEL row).
    """
    gene_ids, sample_ids, values, label_row = read_matrix_csv(matrix_path)
    if labels_path is not None:
        mapping = read_labels_csv(labels_path)
        absent = [s for s in sample_ids if s not in mapping]
        if absent:
            raise DataError(
                f"label coverage: {len(absent)} sample(s) without labels, e.g. {absent[0]!r}"
            )
        # first-appearance order follows the labels file, not the matrix
        _, class_names = _index_classes([mapping[s] for s in mapping if s in set(sample_ids)])
        names = [mapping[s] for s in sample_ids]
        labels = np.array([class_names.index(x) + 1 for x in names], dtype=int)
    elif label_row is not None:
        labels, class_names = _index_classes(label_row)
    else:
        raise DataError(f"{matrix_path}: no labels file and no LABEL row")
    if len(class_names) < min_classes:
        raise DataError(f"need at least {min_classes} classes, found {len(class_names)}")
    return ExpressionDataset(gene_ids, sample_ids, values, labels, class_names)


def load_unlabeled_csv(matrix_path) -> tuple[list[str], list[str], np.ndarray]:
    gene_ids, sample_ids, values, _ = read_matrix_csv(matrix_path)
    return gene_ids, sample_ids, values


def _fmt(x: float) -> str:
    return "NA" if math.isnan(x) else repr(float(x))


def write_matrix_csv(path, gene_ids, sample_ids, values, *, header: str | None = None,
                     label_names=None) -> None:
    """Write a matrix CSV at full (``repr``) precision; NaN becomes ``NA``."""
    values = np.asarray(values, dtype=float)
    with open(path, "w", newline="", encoding="utf-8") as fh:
        if header:
            fh.write(f"# {header}\n")
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["gene_id", *sample_ids])
        for gid, row in zip(gene_ids, values):
            w.writerow([gid, *(_fmt(x) for x in row)])
        if label_names is not None:
            w.writerow([LABEL_ROW, *label_names])


def write_expression_csv(ds: ExpressionDataset, matrix_path, labels_path=None, *,
                         header: str | None = None) -> None:
    """Inverse of :func:`load_expression_csv`.

    Without ``labels_path`` the labels go into a trailing LABEL row.
    """
    names = [ds.class_names[i - 1] for i in ds.labels]
    write_matrix_csv(matrix_path, ds.gene_ids, ds.sample_ids, ds.values, header=header,
                     label_names=None if labels_path else names)
    if labels_path:
        with open(labels_path, "w", newline="", encoding="utf-8") as fh:
            if header:
                fh.write(f"# {header}\n")
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["sample_id", "label"])
            # reload numbers classes by first appearance: lead with one sample per class
            lead = [int(np.flatnonzero(ds.labels == c)[0]) for c in range(1, ds.n_classes + 1)]
            rest = [j for j in range(ds.n_samples) if j not in lead]
            for j in lead + rest:
                w.writerow([ds.sample_ids[j], names[j]])


IMPUTE_STRATEGIES = ("zero", "gene_mean", "sample_mean")


def impute_missing(ds: ExpressionDataset, strategy: str = "gene_mean") -> ExpressionDataset:
    """Fill NaN cells: with 0, the gene's observed mean, or the sample's."""
    if strategy not in IMPUTE_STRATEGIES:
        raise ValueError(f"unknown strategy {strategy!r}; choose from {IMPUTE_STRATEGIES}")
    X = ds.values.copy()
    holes = np.isnan(X)
    if holes.any():
        if strategy == "zero":
            X[holes] = 0.0
        else:
            axis = 1 if strategy == "gene_mean" else 0
            empty = holes.all(axis=axis)
            if empty.any():
                what = "gene" if axis == 1 else "sample"
                ids = ds.gene_ids if axis == 1 else ds.sample_ids
                bad = ids[int(np.flatnonzero(empty)[0])]
                raise DataError(
                    f"{what} {bad!r} has no observed values; drop it before {strategy} imputation"
                )
            means = np.nanmean(X, axis=axis, keepdims=True)
            X = np.where(holes, np.broadcast_to(means, X.shape), X)
    return _unchecked(list(ds.gene_ids), list(ds.sample_ids), X, ds.labels.copy(),
                      list(ds.class_names))


def snr_scores(values: np.ndarray, labels: np.ndarray) -> np.ndarray:
    """Signed two-class SNR ``(mu1 - mu2) / (sd1 + sd2)`` per gene.

    Standard deviations use 1/N. Genes with ``sd1 + sd2 == 0`` score 0.
    """
    labels = np.asarray(labels)
    classes = np.unique(labels)
    if classes.size != 2:
        raise DataError(f"SNR prescreen is binary-only; got {classes.size} classes")
    a = values[:, labels == classes[0]]
    b = values[:, labels == classes[1]]
    num = a.mean(axis=1) - b.mean(axis=1)
    den = a.std(axis=1) + b.std(axis=1)
    flat = den == 0
    if flat.any():
        warnings.warn(f"{int(flat.sum())} gene(s) with zero within-class spread; SNR set to 0",
                      stacklevel=2)
    with np.errstate(divide="ignore", invalid="ignore"):
        snr = np.where(flat, 0.0, num / np.where(flat, 1.0, den))
    return snr


def snr_rank(ds: ExpressionDataset, top_k: int) -> tuple[np.ndarray, ExpressionDataset]:
    """Rank genes by |SNR| (descending, stable) and keep the top ``top_k``."""
    if ds.n_classes != 2:
        raise DataError("SNR prescreen is binary-only")
    if not 1 <= top_k <= ds.n_genes:
        raise ValueError(f"top_k must be in 1..{ds.n_genes}")
    score = np.abs(snr_scores(ds.values, ds.labels))
    order = np.argsort(-score, kind="stable")
    return order, ds.subset(genes=order[:top_k])


@dataclass
class FoldPlan:
    k: int
    repeats: int
    seed: int
    # assignments[r][f] = sorted sample indices in fold f of repeat r
    assignments: list[list[list[int]]] = field(default_factory=list)

    def splits(self):
        """Yield ``(repeat, fold, train_idx, test_idx)`` in (repeat, fold) order."""
        for r, folds in enumerate(self.assignments):
            n = sum(len(f) for f in folds)
            for f, test in enumerate(folds):
                mask = np.ones(n, dtype=bool)
                mask[test] = False
                yield r, f, np.flatnonzero(mask), np.asarray(test, dtype=int)

    def to_json(self) -> str:
        return json.dumps({"k": self.k, "repeats": self.repeats, "seed": self.seed,
                           "assignments": self.assignments})

    @classmethod
    def from_json(cls, text: str) -> "FoldPlan":
        d = json.loads(text)
        return cls(d["k"], d["repeats"], d["seed"], d["assignments"])


def stratified_kfold(ds_or_labels, k: int, repeats: int = 1, seed: int = 0) -> FoldPlan:
    """Repeated stratified k-fold partition.

    Each class is shuffled and dealt round-robin over the folds, continuing
    from the fold where the previous class stopped, so fold sizes differ by
    at most one and each class count per fold differs by at most one.
    """
    labels = ds_or_labels.labels if isinstance(ds_or_labels, ExpressionDataset) else np.asarray(ds_or_labels)
    n = labels.size
    if k < 2:
        raise ValueError("k must be >= 2")
    if k > n:
        raise ValueError(f"k={k} exceeds the number of samples ({n})")
    classes = np.unique(labels)
    smallest = min(int(np.sum(labels == c)) for c in classes)
    if smallest < k and k != n:
        warnings.warn(f"smallest class has {smallest} samples; reducing k from {k} to {smallest}",
                      stacklevel=2)
        k = smallest
        if k < 2:
            raise ValueError("a class has fewer than 2 samples; cannot stratify")

    rng = np.random.default_rng(seed)
    assignments = []
    for _ in range(repeats):
        folds: list[list[int]] = [[] for _ in range(k)]
        start = 0
        for c in classes:
            members = rng.permutation(np.flatnonzero(labels == c))
            for i, idx in enumerate(members):
                folds[(start + i) % k].append(int(idx))
            start = (start + members.size) % k
        assignments.append([sorted(f) for f in folds])
    return FoldPlan(k, repeats, seed, assignments)
