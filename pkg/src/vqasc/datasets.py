"""Point datasets: CSV round-trip, synthetic generators and the IRIS split.

CSV layout: a header row, feature columns ``f0 .. f{d-1}`` and an optional
trailing integer ``label`` column.
"""

from __future__ import annotations

import csv
import io
import os
import tempfile
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from sklearn import datasets as skd


@dataclass
class Dataset:
    points: np.ndarray
    labels: np.ndarray | None = None
    name: str = "dataset"

    def __len__(self):
        return self.points.shape[0]

    def subsample(self, n: int, seed: int) -> "Dataset":
        """Random subset of ``n`` rows (without replacement), order shuffled."""
        if not 1 <= n <= len(self):
            raise ValueError(f"cannot draw {n} of {len(self)} points")
        idx = np.random.default_rng(seed).permutation(len(self))[:n]
        labels = None if self.labels is None else self.labels[idx]
        return Dataset(self.points[idx], labels, f"{self.name}[{n}]")


def to_csv_text(ds: Dataset) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    d = ds.points.shape[1]
    header = [f"f{i}" for i in range(d)]
    if ds.labels is not None:
        header.append("label")
    w.writerow(header)
    for i, row in enumerate(ds.points):
        cells = [repr(float(x)) for x in row]
        if ds.labels is not None:
            cells.append(str(int(ds.labels[i])))
        w.writerow(cells)
    return buf.getvalue()


def atomic_write_text(path, text: str):
    """Write to a temporary sibling and rename, so readers never see partial files."""
    path = Path(path)
    fd, tmp = tempfile.mkstemp(dir=path.parent or ".", prefix=f".{path.name}.")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def save_csv(ds: Dataset, path):
    atomic_write_text(path, to_csv_text(ds))


def load_csv(path, name: str | None = None) -> Dataset:
    path = Path(path)
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    if not rows:
        raise ValueError(f"{path}: empty file")
    header = [h.strip() for h in rows[0]]
    has_label = header[-1] == "label"
    feats = header[:-1] if has_label else header
    if feats != [f"f{i}" for i in range(len(feats))] or not feats:
        raise ValueError(f"{path}: header must be f0..f{{d-1}} with optional trailing label")
    data = rows[1:]
    try:
        X = np.array([[float(c) for c in r[:len(feats)]] for r in data], dtype=float)
        y = np.array([int(r[-1]) for r in data]) if has_label else None
    except (ValueError, IndexError) as exc:
        raise ValueError(f"{path}: malformed row ({exc})") from None
    if X.ndim != 2 or X.shape[0] == 0:
        raise ValueError(f"{path}: no data rows")
    return Dataset(X, y, name or path.stem)


def generate(kind: str, n: int, noise: float = 0.05, seed: int = 0, **kw) -> Dataset:
    """Two-cluster synthetic data: ``blobs``, ``moons`` or ``circles``.

    ``blobs`` are unit-variance Gaussians centred at (-3, -3) and (3, 3)
    (``cluster_std`` overrides the spread); ``circles`` takes ``factor``
    (inner/outer radius ratio, default 0.5). Rows come out shuffled.
    """
    if n < 4:
        raise ValueError("need at least 4 points")
    rng = np.random.RandomState(seed)
    if kind == "blobs":
        X, y = skd.make_blobs(n_samples=n, centers=[(-3.0, -3.0), (3.0, 3.0)], cluster_std=kw.get("cluster_std", 1.0),
                              random_state=rng)
    elif kind == "moons":
        X, y = skd.make_moons(n_samples=n, noise=noise or None, random_state=rng)
    elif kind == "circles":
        X, y = skd.make_circles(n_samples=n, noise=noise or None,
                                factor=kw.get("factor", 0.5), random_state=rng)
    else:
        raise ValueError(f"unknown generator {kind!r}")
    return Dataset(X, y.astype(int), kind)


def iris_binary() -> Dataset:
    """IRIS with setosa as cluster 0 and versicolor + virginica as cluster 1."""
    iris = skd.load_iris()
    y = (iris.target != 0).astype(int)
    return Dataset(np.asarray(iris.data, dtype=float), y, "iris")


def path_graph_points(n: int) -> Dataset:
    """Points 0, 1, ..., n-1 on a line; with a k=1 nearest-neighbour graph and a
    tiny gamma their Laplacian approaches the unit path graph."""
    return Dataset(np.arange(n, dtype=float)[:, None], None, f"path{n}")
