"""Robust PCA by the inexact augmented Lagrange multiplier method.

Splits a matrix ``X`` into a low-rank part ``L`` and a sparse part ``S`` by
solving

    min ||L||_* + lam * ||S||_1   s.t.   X = L + S

with one singular-value-thresholding sweep and one soft-thresholding sweep
per outer iteration and a geometrically growing penalty ``mu``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import svd

RANK_RTOL = 1e-8
NNZ_ATOL = 1e-12


def default_lambda(m: int, n: int) -> float:
    """Sparsity weight ``1 / sqrt(max(m, n))``."""
    if m < 1 or n < 1:
        raise ValueError(f"matrix shape must be positive, got ({m}, {n})")
    return float(1.0 / np.sqrt(max(m, n)))


def soft_threshold(A, tau: float) -> np.ndarray:
    """Elementwise shrinkage ``sign(a) * max(|a| - tau, 0)``."""
    if tau < 0:
        raise ValueError("tau must be nonnegative")
    A = np.asarray(A, dtype=float)
    return A - np.clip(A, -tau, tau)


def _svt(A: np.ndarray, tau: float) -> tuple[np.ndarray, np.ndarray]:
    U, s, Vt = svd(A, full_matrices=False, check_finite=False)
    s = np.maximum(s - tau, 0.0)
    r = int(np.count_nonzero(s))
    return (U[:, :r] * s[:r]) @ Vt[:r], s


def svt(A, tau: float) -> np.ndarray:
    """Singular value thresholding, the proximal map of ``tau * ||.||_*``."""
    if tau < 0:
        raise ValueError("tau must be nonnegative")
    A = np.asarray(A, dtype=float)
    if A.size == 0:
        return A.copy()
    if tau == 0:
        # exact identity; the SVD round trip would add rounding noise
        return A.copy()
    return _svt(A, tau)[0]


@dataclass(frozen=True)
class RpcaOptions:
    """IALM settings.

    ``lam=None`` means :func:`default_lambda` of the input shape and
    ``mu0=None`` means ``1.25 / sigma_max(X)``.
    """

    lam: float | None = None
    mu0: float | None = None
    rho: float = 1.5
    mu_max_factor: float = 1e7
    tol: float = 1e-7
    max_iter: int = 1000

    def __post_init__(self):
        if self.lam is not None and not self.lam > 0:
            raise ValueError("lam must be positive")
        if self.mu0 is not None and not self.mu0 > 0:
            raise ValueError("mu0 must be positive")
        if not self.rho > 1:
            raise ValueError("rho must exceed 1")
        if not self.mu_max_factor >= 1:
            raise ValueError("mu_max_factor must be >= 1")
        if not self.tol > 0:
            raise ValueError("tol must be positive")
        if int(self.max_iter) != self.max_iter or self.max_iter < 1:
            raise ValueError("max_iter must be a positive integer")


@dataclass
class RpcaResult:
    low_rank: np.ndarray
    sparse: np.ndarray
    iterations: int
    converged: bool
    lam: float
    # one row per iteration: (relative residual, rank(L), nnz(S))
    trace: list[tuple[float, int, int]] = field(default_factory=list)

    @property
    def residuals(self) -> np.ndarray:
        return np.array([t[0] for t in self.trace])

    @property
    def ranks(self) -> np.ndarray:
        return np.array([t[1] for t in self.trace], dtype=int)

    @property
    def nnz(self) -> np.ndarray:
        return np.array([t[2] for t in self.trace], dtype=int)


def rpca_decompose(X, opts: RpcaOptions | None = None) -> RpcaResult:
    """Decompose ``X = L + S`` with L low-rank and S sparse.

    The multiplier starts at ``X / max(||X||_2, ||X||_inf / lam)`` (the
    usual dual-feasible start). Iteration stops when
    ``||X - L - S||_F / ||X||_F <= tol`` or after ``max_iter`` sweeps; in the
    latter case ``converged`` is False and the last iterate is returned.
    """
    opts = opts or RpcaOptions()
    X = np.asarray(X, dtype=float)
    if X.ndim != 2:
        raise ValueError("X must be a 2-D matrix")
    if not np.all(np.isfinite(X)):
        raise ValueError("X contains non-finite values")
    m, n = X.shape
    lam = float(opts.lam if opts.lam is not None else default_lambda(m, n))

    norm_x = np.linalg.norm(X)
    if norm_x == 0:
        zero = np.zeros_like(X)
        return RpcaResult(zero, zero.copy(), 1, True, lam, [(0.0, 0, 0)])

    spec = np.linalg.norm(X, 2)
    mu = opts.mu0 if opts.mu0 is not None else 1.25 / spec
    mu_max = opts.mu_max_factor * mu
    Y = X / max(spec, np.abs(X).max() / lam)

    S = np.zeros_like(X)
    L = np.zeros_like(X)
    trace = []
    converged = False
    it = 0
    while it < opts.max_iter:
        it += 1
        L, sig = _svt(X - S + Y / mu, 1.0 / mu)
        S = soft_threshold(X - L + Y / mu, lam / mu)
        R = X - L - S
        Y = Y + mu * R
        mu = min(mu * opts.rho, mu_max)

        res = np.linalg.norm(R) / norm_x
        rank = int(np.count_nonzero(sig > RANK_RTOL * sig[0])) if sig[0] > 0 else 0
        nnz = int(np.count_nonzero(np.abs(S) > NNZ_ATOL))
        trace.append((float(res), rank, nnz))
        if res <= opts.tol:
            converged = True
            break

    return RpcaResult(L, S, it, converged, lam, trace)
