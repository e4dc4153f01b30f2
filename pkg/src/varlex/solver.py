"""ADMM for equality-constrained weighted group-sparse representation.

Solves

    min_M  sum_j w_j ||M_{G_j}||_F   s.t.   D M = T

by splitting ``Z = M``. The groups ``G_j`` are blocks of rows of ``M`` (atoms
grouped, the forward SRC/GSRC direction) or blocks of columns of ``M``
(targets grouped, the inverse-projection IPRC/IPGSRC direction).

With ``per_column=True`` (rows axis only) every column of ``M`` carries its
own copy of the row blocks, so the penalty and the solution separate by
target column; this is how one solve serves a batch of SRC/GSRC test samples.

The equality can be relaxed to ``||D M - T||_F <= noise_eps``; this adds a
residual variable ``R`` projected onto the eps-ball next to the Z-step and
reduces to the plain scheme when ``noise_eps == 0``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import cho_factor, cho_solve

ROWS = "rows"
COLS = "cols"
GOLDEN = (1 + 5 ** 0.5) / 2


@dataclass
class GroupSparseProblem:
    dictionary: np.ndarray          # D, m x d
    targets: np.ndarray             # T, m x t
    groups: list[np.ndarray]        # index blocks along `axis` of M
    weights: np.ndarray
    axis: str = ROWS
    per_column: bool = False

    def __post_init__(self):
        self.dictionary = np.atleast_2d(np.asarray(self.dictionary, dtype=float))
        T = np.asarray(self.targets, dtype=float)
        self.targets = T[:, None] if T.ndim == 1 else T
        self.groups = [np.asarray(g, dtype=int) for g in self.groups]
        self.weights = np.asarray(self.weights, dtype=float)
        if self.axis not in (ROWS, COLS):
            raise ValueError(f"axis must be {ROWS!r} or {COLS!r}")
        if self.per_column and self.axis != ROWS:
            raise ValueError("per_column applies to row blocks only")
        m, d = self.dictionary.shape
        if self.targets.shape[0] != m:
            raise ValueError("dictionary and targets must share the row dimension")
        size = d if self.axis == ROWS else self.targets.shape[1]
        seen = np.sort(np.concatenate(self.groups)) if self.groups else np.array([], int)
        if not np.array_equal(seen, np.arange(size)):
            raise ValueError(f"groups must partition 0..{size - 1}")
        if self.weights.shape != (len(self.groups),) or np.any(self.weights < 0):
            raise ValueError("need one nonnegative weight per group")
        if not (np.all(np.isfinite(self.dictionary)) and np.all(np.isfinite(self.targets))):
            raise ValueError("non-finite values in dictionary or targets")

    @property
    def shape(self) -> tuple[int, int]:
        """Shape of the coefficient matrix M."""
        return self.dictionary.shape[1], self.targets.shape[1]

    def objective(self, M) -> float:
        return group_norm(M, self.groups, self.weights, self.axis, self.per_column)


@dataclass(frozen=True)
class SolverOptions:
    beta1: float = 1.0
    beta2: float = 1.0
    gamma1: float = 1.618
    gamma2: float = 1.618
    tol: float = 1e-6
    max_iter: int = 2000
    noise_eps: float = 0.0

    def __post_init__(self):
        if not (self.beta1 > 0 and self.beta2 > 0):
            raise ValueError("beta1 and beta2 must be positive")
        for g in (self.gamma1, self.gamma2):
            if not 0 < g < GOLDEN:
                raise ValueError("step lengths must lie in (0, (1 + sqrt 5) / 2)")
        if not self.tol > 0 or self.max_iter < 1 or self.noise_eps < 0:
            raise ValueError("invalid tol / max_iter / noise_eps")


@dataclass
class IpgsrSolution:
    M: np.ndarray
    Z: np.ndarray
    lambda1: np.ndarray
    lambda2: np.ndarray
    iterations: int
    converged: bool
    # False when D M = T has no solution and the iterates settled on the
    # least-squares-consistent problem (D^T (D M - T) = 0) instead
    consistent: bool = True
    history: list[tuple[float, float, float]] = field(default_factory=list)

    @property
    def objective(self) -> float:
        return self.history[-1][2] if self.history else 0.0


def _blocks(A: np.ndarray, axis: str):
    return A if axis == ROWS else A.T


class _BlockMap:
    """Block membership of the rows of a (possibly transposed) matrix."""

    def __init__(self, groups, size: int, per_column: bool = False):
        self.n_groups = len(groups)
        self.per_column = per_column
        self.singleton = self.n_groups == size and all(len(g) == 1 for g in groups)
        self.order = np.concatenate(groups).astype(int) if groups else np.array([], int)
        self.identity = self.singleton and np.array_equal(self.order, np.arange(size))
        self.onehot = None
        if not self.singleton:
            self.onehot = np.zeros((self.n_groups, size))
            for j, g in enumerate(groups):
                self.onehot[j, g] = 1.0

    def norms(self, B: np.ndarray) -> np.ndarray:
        """Per-block Frobenius norms; (n_groups,) or (n_groups, t) when per column."""
        sq = B * B
        if not self.per_column:
            sq = sq.sum(axis=1)
        if self.identity:
            return np.sqrt(sq)
        if self.singleton:
            return np.sqrt(sq[self.order])
        return np.sqrt(self.onehot @ sq)

    def expand(self, v: np.ndarray) -> np.ndarray:
        """Broadcast per-block values back onto rows."""
        if self.identity:
            out = v
        elif self.singleton:
            out = np.empty_like(v)
            out[self.order] = v
        else:
            out = self.onehot.T @ v
        return out if self.per_column else out[:, None]


def _shrink(B: np.ndarray, bmap: _BlockMap, tau: np.ndarray):
    if bmap.per_column:
        tau = tau[:, None]
    if bmap.identity and (bmap.per_column or B.shape[1] == 1):
        # one entry per block: plain soft thresholding
        t = tau.reshape(-1, 1)
        out = B - np.clip(B, -t, t)
        absout = np.abs(out)
        return out, absout if bmap.per_column else absout[:, 0]
    norms = bmap.norms(B)
    # zero blocks stay zero (the 0 * 0/0 = 0 convention)
    scale = np.maximum(1.0 - tau / np.maximum(norms, 1e-300), 0.0)
    # block norms after shrinkage are max(norm - tau, 0)
    return B * bmap.expand(scale), np.maximum(norms - tau, 0.0)


def group_norm(M, groups, weights, axis: str = ROWS, per_column: bool = False) -> float:
    B = _blocks(np.atleast_2d(np.asarray(M, dtype=float)), axis)
    norms = _BlockMap(groups, B.shape[0], per_column).norms(B)
    return float(np.sum(np.asarray(weights, dtype=float) @ norms))


def group_shrink(Gamma, groups, thresholds, axis: str = ROWS, per_column: bool = False) -> np.ndarray:
    """Block soft-thresholding, the prox of ``sum_j tau_j ||Z_{G_j}||_F``.

    Each block is scaled by ``max(1 - tau_j / ||block||_F, 0)``; a zero block
    stays zero.
    """
    Gamma = np.atleast_2d(np.asarray(Gamma, dtype=float))
    B = _blocks(Gamma, axis)
    out, _ = _shrink(B, _BlockMap(groups, B.shape[0], per_column),
                     np.asarray(thresholds, dtype=float))
    return out if axis == ROWS else out.T


def _project_ball(A: np.ndarray, radius: float) -> np.ndarray:
    nrm = np.linalg.norm(A)
    return A if nrm <= radius else A * (radius / nrm)


def ipgsr_solve(problem: GroupSparseProblem, opts: SolverOptions | None = None) -> IpgsrSolution:
    """ADMM iterations with M^0 = Z^0 = 0 and zero multipliers.

    Per sweep:
      M  <- (b1 I + b2 D'D)^-1 (-L1 + b1 Z + D' L2 + b2 D'(T + R))
      Z  <- group_shrink(M + L1 / b1, w / b1)
      R  <- proj_{||.|| <= eps}(D M - T - L2 / b2)          (R = 0 when eps = 0)
      L1 <- L1 - g1 b1 (Z - M)
      L2 <- L2 - g2 b2 (D M - T - R)

    Stops when ``||Z - M|| <= tol * max(1, ||M||)`` and the constraint
    residual ``||D M - T - R|| <= tol * max(1, ||T||)``. If the system is
    inconsistent the constraint residual cannot vanish; the run then stops
    once the normal-equation residual ``||D'(D M - T - R)||`` meets the same
    tolerance and the Z/M gap and M have settled, and reports
    ``consistent=False``.
    """
    opts = opts or SolverOptions()
    D, T = problem.dictionary, problem.targets
    b1, b2, g1, g2 = opts.beta1, opts.beta2, opts.gamma1, opts.gamma2
    d, t = problem.shape
    eps = opts.noise_eps
    cols = problem.axis == COLS

    # Tall D without relaxation: iterate on D = QR, i.e. (R, Q'T). M, Z and L1
    # follow the same sequence; the part of T outside range(D) only adds a
    # constant to the residual and a linear drift to L2, restored at exit.
    reduced = eps == 0 and D.shape[0] > d
    if reduced:
        Q, Dw = np.linalg.qr(D)
        Tw = Q.T @ T
        T_perp = T - Q @ Tw
        perp2 = float(np.sum(T_perp * T_perp))
    else:
        Dw, Tw, perp2 = D, T, 0.0

    DtD = Dw.T @ Dw
    # factor once; the explicit inverse is formed from the Cholesky factor
    K = cho_solve(cho_factor(b1 * np.eye(d) + b2 * DtD), np.eye(d))
    DtT = Dw.T @ Tw
    b2DtT = b2 * DtT
    tau = problem.weights / b1
    w = problem.weights
    bmap = _BlockMap(problem.groups, t if cols else d, problem.per_column)
    tol_t = opts.tol * max(1.0, np.linalg.norm(T))
    tol_dt = opts.tol * max(1.0, np.linalg.norm(DtT))
    # with full row rank every target is reachable; skip the fallback rule
    may_be_inconsistent = perp2 > tol_t ** 2 or np.linalg.matrix_rank(Dw) < Dw.shape[0]

    M = np.zeros((d, t))
    Z = np.zeros_like(M)
    R = np.zeros_like(Tw)
    L1 = np.zeros_like(M)
    L2 = np.zeros_like(Tw)
    DtL2 = np.zeros_like(M)
    history = []
    converged = False
    consistent = True
    it = 0
    g1b1, g2b2, inv_b1 = g1 * b1, g2 * b2, 1.0 / b1
    while it < opts.max_iter:
        it += 1
        M_old = M
        rhs = b1 * Z
        rhs -= L1
        rhs += DtL2
        rhs += b2DtT if eps == 0 else b2 * (Dw.T @ (Tw + R))
        M = K @ rhs
        V = L1 * inv_b1
        V += M
        if cols:
            Zt, znorms = _shrink(V.T, bmap, tau)
            Z = Zt.T
        else:
            Z, znorms = _shrink(V, bmap, tau)
        feas = Dw @ M
        feas -= Tw
        if eps > 0:
            R = _project_ball(feas - L2 / b2, eps)
            feas -= R
        gap = Z - M
        L1 -= g1b1 * gap
        L2 -= g2b2 * feas
        DtL2 = Dw.T @ L2

        g, f, mm = gap.ravel(), feas.ravel(), M.ravel()
        r_z = float(np.sqrt(g @ g))
        r_feas = float(np.sqrt(f @ f + perp2))
        history.append((r_z, r_feas, float(np.sum(w @ znorms))))

        tol_m = opts.tol * max(1.0, float(np.sqrt(mm @ mm)))
        if r_z <= tol_m:
            if r_feas <= tol_t:
                converged = True
                break
            # inconsistent system: the residual outside range(D) cannot shrink
            step = M - M_old
            if (may_be_inconsistent and np.linalg.norm(Dw.T @ feas) <= tol_dt
                    and np.sqrt(np.sum(step * step)) <= tol_m):
                converged = True
                consistent = False
                break

    if not converged and history and history[-1][1] > tol_t:
        consistent = False
    if reduced:
        L2 = Q @ L2 + (it * g2 * b2) * T_perp
    return IpgsrSolution(M, Z, L1, L2, it, converged, consistent, history)


def augmented_lagrangian_grad_M(problem: GroupSparseProblem, M, Z, L1, L2,
                                opts: SolverOptions, R=None) -> np.ndarray:
    """Gradient in M of the augmented Lagrangian (for checking the M-step)."""
    D, T = problem.dictionary, problem.targets
    R = np.zeros_like(T) if R is None else R
    return (L1 - opts.beta1 * (Z - M) - D.T @ L2
            + opts.beta2 * D.T @ (D @ M - T - R))
