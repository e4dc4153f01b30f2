"""Synthetic two-class expression data with planted sparse class signatures.

Each sample is a shared low-rank background plus, for its class, a random
subset of that class's signature genes shifted up, plus dense Gaussian noise.
The signature genes are disjoint across classes.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .dataset import ExpressionDataset


@dataclass
class Planted:
    background: np.ndarray     # m x n low-rank part
    spikes: np.ndarray         # m x n planted sparse part
    signature_genes: list[np.ndarray]


def make_benchmark(n_genes: int = 500, n_per_class=(30, 30), rank: int = 2,
                   n_signature: int = 25, activation: float = 0.6, spike: float = 3.0,
                   noise: float = 0.8, seed: int = 0, return_planted: bool = False):
    """Generate an :class:`ExpressionDataset` (and optionally its ground truth).

    Spike magnitudes are uniform in ``[spike / 2, spike]``; every signature
    gene of a sample's class is active with probability ``activation``.
    """
    rng = np.random.default_rng(seed)
    n_per_class = tuple(int(x) for x in n_per_class)
    c = len(n_per_class)
    n = sum(n_per_class)
    if c * n_signature > n_genes:
        raise ValueError("signature genes do not fit in n_genes")

    labels = np.repeat(np.arange(1, c + 1), n_per_class)
    U = rng.standard_normal((n_genes, rank))
    V = rng.standard_normal((rank, n))
    background = U @ V

    genes = rng.permutation(n_genes)[: c * n_signature].reshape(c, n_signature)
    spikes = np.zeros((n_genes, n))
    for j in range(n):
        sig = genes[labels[j] - 1]
        on = sig[rng.random(n_signature) < activation]
        spikes[on, j] = rng.uniform(spike / 2, spike, on.size)

    values = background + spikes + noise * rng.standard_normal((n_genes, n))
    ds = ExpressionDataset(
        gene_ids=[f"g{i:04d}" for i in range(n_genes)],
        sample_ids=[f"s{j:03d}" for j in range(n)],
        values=values,
        labels=labels,
        class_names=[f"class{j}" for j in range(1, c + 1)],
    )
    if return_planted:
        return ds, Planted(background, spikes, [np.sort(g) for g in genes])
    return ds
