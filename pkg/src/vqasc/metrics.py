"""Classical Fiedler oracle and binary clustering scores."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .graph import as_matrix

ZERO_TOL = 1e-12


@dataclass(frozen=True)
class OracleResult:
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    fiedler_value: float
    fiedler_vector: np.ndarray
    labels: np.ndarray

    def to_dict(self) -> dict:
        return {
            "eigenvalues": self.eigenvalues.tolist(),
            "fiedler_value": float(self.fiedler_value),
            "fiedler_vector": self.fiedler_vector.tolist(),
            "labels": self.labels.tolist(),
        }


def classical_fiedler(L) -> OracleResult:
    """Dense symmetric eigendecomposition; labels from the Fiedler vector signs.

    Components within 1e-12 of zero get label 1. The vector is signed so its first nonzero
    entry is positive, which makes the labels reproducible.
    """
    M = as_matrix(L)
    if M.shape[0] < 2:
        raise ValueError("need at least two vertices")
    if not np.allclose(M, M.T, atol=1e-10, rtol=0):
        raise ValueError("Laplacian must be symmetric")
    vals, vecs = np.linalg.eigh(M)
    v = vecs[:, 1].copy()
    zero = np.abs(v) <= ZERO_TOL
    nz = np.flatnonzero(~zero)
    if nz.size and v[nz[0]] < 0:
        v = -v
    labels = ((v > 0) | zero).astype(int)
    return OracleResult(vals, vecs, float(vals[1]), v, labels)


def _check_pair(pred, truth):
    pred, truth = np.asarray(pred).reshape(-1), np.asarray(truth).reshape(-1)
    if pred.shape != truth.shape:
        raise ValueError(f"length mismatch: {pred.size} vs {truth.size}")
    return pred, truth


def contingency(pred, truth) -> np.ndarray:
    pred, truth = _check_pair(pred, truth)
    _, p = np.unique(pred, return_inverse=True)
    _, t = np.unique(truth, return_inverse=True)
    table = np.zeros((p.max() + 1, t.max() + 1), dtype=np.int64)
    np.add.at(table, (p, t), 1)
    return table


def accuracy(pred, truth) -> float:
    """Best agreement over the two label assignments of a binary partition."""
    pred, truth = _check_pair(pred, truth)
    agree = float(np.mean(pred == truth))
    return max(agree, 1.0 - agree)


def _comb2(x):
    x = np.asarray(x, dtype=float)
    return x * (x - 1) / 2.0


def adjusted_rand_index(pred, truth) -> float:
    """Hubert-Arabie adjusted Rand index."""
    table = contingency(pred, truth)
    n = table.sum()
    if n < 2:
        raise ValueError("need at least two items")
    sum_cells = _comb2(table).sum()
    sum_rows = _comb2(table.sum(axis=1)).sum()
    sum_cols = _comb2(table.sum(axis=0)).sum()
    expected = sum_rows * sum_cols / _comb2(n)
    max_index = 0.5 * (sum_rows + sum_cols)
    if max_index == expected:
        return 1.0
    return float((sum_cells - expected) / (max_index - expected))


def _entropy(counts):
    p = counts[counts > 0] / counts.sum()
    return float(-np.sum(p * np.log(p)))


def normalized_mutual_info(pred, truth) -> float:
    """Mutual information over the arithmetic mean of the two entropies.

    Returns 0 when either partition has a single cluster.
    """
    table = contingency(pred, truth)
    if table.shape[0] < 2 or table.shape[1] < 2:
        return 0.0
    n = table.sum()
    pij = table / n
    pi, pj = pij.sum(axis=1), pij.sum(axis=0)
    nz = pij > 0
    mi = float(np.sum(pij[nz] * np.log(pij[nz] / np.outer(pi, pj)[nz])))
    denom = 0.5 * (_entropy(table.sum(axis=1)) + _entropy(table.sum(axis=0)))
    return max(0.0, mi / denom)


def cut_value(f, L) -> float:
    """``f^T L f`` for a sign vector ``f``."""
    M = as_matrix(L)
    f = np.asarray(f, dtype=float).reshape(-1)
    if f.size != M.shape[0]:
        raise ValueError(f"sign vector length {f.size} does not match N={M.shape[0]}")
    if not np.all(np.isin(f, (-1.0, 1.0))):
        raise ValueError("sign vector entries must be -1 or +1")
    return float(f @ M @ f)


def score(pred, truth) -> dict:
    return {"acc": accuracy(pred, truth), "ari": adjusted_rand_index(pred, truth),
            "nmi": normalized_mutual_info(pred, truth)}
