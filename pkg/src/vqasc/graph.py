"""From points to an unnormalized graph Laplacian."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

import numpy as np

EDGE_EPS = 1e-15


@dataclass(frozen=True)
class AffinityMatrix:
    W: np.ndarray
    gamma: float
    k: int | None = None

    @property
    def n(self) -> int:
        return self.W.shape[0]


@dataclass(frozen=True)
class Laplacian:
    """``L = D - W`` together with the connectivity of the underlying graph."""

    matrix: np.ndarray
    connected: bool

    @property
    def n(self) -> int:
        return self.matrix.shape[0]

    def __array__(self, dtype=None, copy=None):
        return self.matrix if dtype is None else self.matrix.astype(dtype)


def as_matrix(L) -> np.ndarray:
    if isinstance(L, Laplacian):
        return L.matrix
    if isinstance(L, AffinityMatrix):
        return L.W
    return np.asarray(L, dtype=float)


def rescale_features(X: np.ndarray) -> np.ndarray:
    """Map every column affinely onto [-1, 1]; constant columns become 0."""
    X = np.asarray(X, dtype=float)
    if X.ndim != 2:
        raise ValueError("expected an (N, d) array")
    if not np.all(np.isfinite(X)):
        raise ValueError("features contain NaN or Inf")
    lo, hi = X.min(axis=0), X.max(axis=0)
    span = hi - lo
    out = np.zeros_like(X)
    ok = span > 0
    out[:, ok] = 2.0 * (X[:, ok] - lo[ok]) / span[ok] - 1.0
    return out


def squared_distances(X: np.ndarray) -> np.ndarray:
    X = np.asarray(X, dtype=float)
    diff = X[:, None, :] - X[None, :, :]
    return np.einsum("ijk,ijk->ij", diff, diff)


def gaussian_affinity(X: np.ndarray, gamma: float) -> AffinityMatrix:
    """``w_ij = exp(-gamma |x_i - x_j|^2)`` off the diagonal, 0 on it."""
    if not gamma > 0:
        raise ValueError(f"gamma must be positive, got {gamma}")
    W = np.exp(-gamma * squared_distances(X))
    np.fill_diagonal(W, 0.0)
    W = 0.5 * (W + W.T)
    return AffinityMatrix(W, float(gamma))


def knn_sparsify(aff: AffinityMatrix, k: int) -> AffinityMatrix:
    """Keep edge (i, j) if either endpoint has the other among its k strongest.

    Ties in affinity go to the lower vertex index.
    """
    W = aff.W
    n = W.shape[0]
    if not 1 <= k < n:
        raise ValueError(f"k must satisfy 1 <= k < N={n}, got {k}")
    keep = np.zeros_like(W, dtype=bool)
    idx = np.arange(n)
    for i in range(n):
        others = idx[idx != i]
        # primary key: descending weight, secondary: ascending index
        order = np.lexsort((others, -W[i, others]))
        keep[i, others[order[:k]]] = True
    keep |= keep.T
    return AffinityMatrix(np.where(keep, W, 0.0), aff.gamma, k)


def is_connected(W) -> bool:
    """Breadth-first search over edges heavier than ``EDGE_EPS``."""
    W = as_matrix(W)
    n = W.shape[0]
    if n <= 1:
        return True
    adj = W > EDGE_EPS
    seen = np.zeros(n, dtype=bool)
    seen[0] = True
    queue = deque([0])
    while queue:
        v = queue.popleft()
        for u in np.flatnonzero(adj[v] & ~seen):
            seen[u] = True
            queue.append(u)
    return bool(seen.all())


def build_laplacian(aff) -> Laplacian:
    W = as_matrix(aff)
    if W.ndim != 2 or W.shape[0] != W.shape[1]:
        raise ValueError("affinity must be square")
    if not np.array_equal(W, W.T) or np.any(np.diag(W) != 0) or np.any(W < 0):
        raise ValueError("affinity must be symmetric, nonnegative, zero on the diagonal")
    L = np.diag(W.sum(axis=1)) - W
    return Laplacian(L, is_connected(W))


def pca_reduce(X: np.ndarray, target_dims: int) -> np.ndarray:
    """Project mean-centred data on the leading covariance eigenvectors.

    Each component is signed so that its largest-magnitude loading is positive.
    """
    X = np.asarray(X, dtype=float)
    d = X.shape[1]
    if not 1 <= target_dims <= d:
        raise ValueError(f"target_dims must lie in [1, {d}], got {target_dims}")
    Xc = X - X.mean(axis=0)
    cov = Xc.T @ Xc / max(X.shape[0] - 1, 1)
    vals, vecs = np.linalg.eigh(cov)
    order = np.argsort(vals)[::-1][:target_dims]
    comps = vecs[:, order]
    pivot = np.argmax(np.abs(comps), axis=0)
    comps = comps * np.sign(comps[pivot, np.arange(target_dims)])
    return Xc @ comps


def explained_variance_ratio(X: np.ndarray) -> np.ndarray:
    Xc = np.asarray(X, dtype=float) - np.mean(X, axis=0)
    vals = np.linalg.eigvalsh(Xc.T @ Xc)[::-1]
    return vals / vals.sum()


def laplacian_from_points(X: np.ndarray, gamma: float, k: int | None = None,
                          rescale: bool = True) -> Laplacian:
    """Rescale, Gaussian affinity, optional k-NN sparsification, Laplacian."""
    if rescale:
        X = rescale_features(X)
    aff = gaussian_affinity(X, gamma)
    if k is not None:
        aff = knn_sparsify(aff, k)
    return build_laplacian(aff)
