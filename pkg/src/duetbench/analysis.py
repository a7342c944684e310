"""Representation probing: PCA, k-means, linear probes, majority baseline.

Operates on any per-sample feature matrix (e.g. target-minus-clue embedding
differences) supplied as arrays or CSV; it never computes the features
itself. Everything is implemented directly on numpy so the per-iteration
invariants (non-increasing k-means objective, non-increasing probe loss) are
inspectable in tests.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass

import numpy as np


class AnalysisError(ValueError):
    pass


@dataclass(frozen=True)
class FeatureMatrix:
    rows: np.ndarray
    labels: tuple | None = None
    label_name: str = "label"

    def __post_init__(self):
        if self.rows.ndim != 2:
            raise AnalysisError("feature rows must form a 2-D matrix")
        if self.labels is not None and len(self.labels) != len(self.rows):
            raise AnalysisError("labels must align with rows")


def load_features_csv(path, labeled: bool = True) -> FeatureMatrix:
    """CSV with a header row; when labeled, the last column is the class."""
    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None:
            raise AnalysisError(f"{path}: empty file")
        rows = []
        labels = []
        for record in reader:
            if not record:
                continue
            if labeled:
                rows.append([float(x) for x in record[:-1]])
                labels.append(record[-1])
            else:
                rows.append([float(x) for x in record])
    if not rows:
        raise AnalysisError(f"{path}: no data rows")
    return FeatureMatrix(
        rows=np.asarray(rows, dtype=np.float64),
        labels=tuple(labels) if labeled else None,
        label_name=header[-1] if labeled else "label",
    )


def pca_fit(X: np.ndarray, k: int) -> tuple[np.ndarray, np.ndarray]:
    """Top-k principal axes of the mean-centered data.

    Returns (components, explained_variance): components is k x d with
    orthonormal rows, variances are non-increasing. Zero-variance directions
    yield zero variances rather than an error. Component signs are fixed so
    the largest-magnitude entry of each row is positive.
    """
    X = np.asarray(X, dtype=np.float64)
    n, d = X.shape
    if n < 2:
        raise AnalysisError("need at least 2 rows")
    if not 1 <= k <= d:
        raise AnalysisError("k must be within [1, d]")
    centered = X - X.mean(axis=0)
    cov = (centered.T @ centered) / (n - 1)
    eigvals, eigvecs = np.linalg.eigh(cov)
    order = np.argsort(eigvals)[::-1][:k]
    comps = eigvecs[:, order].T.copy()
    var = np.maximum(eigvals[order], 0.0)
    for i in range(k):
        j = int(np.argmax(np.abs(comps[i])))
        if comps[i, j] < 0:
            comps[i] = -comps[i]
    return comps, var


def pca_project(X: np.ndarray, components: np.ndarray) -> np.ndarray:
    """Mean-centered data projected onto the given axes."""
    X = np.asarray(X, dtype=np.float64)
    if X.shape[1] != components.shape[1]:
        raise AnalysisError("dimension mismatch between data and components")
    return (X - X.mean(axis=0)) @ components.T


def _kmeans_pp_init(X, k, rng):
    n = len(X)
    centroids = [X[rng.integers(n)]]
    for _ in range(1, k):
        d2 = np.min(
            [((X - c) ** 2).sum(axis=1) for c in centroids], axis=0
        )
        total = d2.sum()
        if total == 0:
            centroids.append(X[rng.integers(n)])
            continue
        probs = d2 / total
        centroids.append(X[rng.choice(n, p=probs)])
    return np.array(centroids)


def kmeans(
    X: np.ndarray, k: int, seed: int = 0, max_iter: int = 300
) -> tuple[np.ndarray, np.ndarray, list]:
    """Lloyd's iterations from seeded k-means++ starts.

    Returns (assignments, centroids, objective_trace); the trace holds the
    within-cluster sum of squares after each assignment step and is
    non-increasing.
    """
    X = np.asarray(X, dtype=np.float64)
    if k < 1 or k > len(X):
        raise AnalysisError("k must be within [1, n_rows]")
    rng = np.random.default_rng(seed)
    centroids = _kmeans_pp_init(X, k, rng)
    assign = None
    trace: list[float] = []
    for _ in range(max_iter):
        d2 = ((X[:, None, :] - centroids[None, :, :]) ** 2).sum(axis=2)
        new_assign = d2.argmin(axis=1)
        trace.append(float(d2[np.arange(len(X)), new_assign].sum()))
        if assign is not None and np.array_equal(new_assign, assign):
            break
        assign = new_assign
        for j in range(k):
            members = X[assign == j]
            if len(members):
                centroids[j] = members.mean(axis=0)
    return assign, centroids, trace


def majority_baseline(labels) -> float:
    """Frequency of the most common class."""
    labels = list(labels)
    if not labels:
        raise AnalysisError("labels must be nonempty")
    counts: dict = {}
    for lab in labels:
        counts[lab] = counts.get(lab, 0) + 1
    return max(counts.values()) / len(labels)


def _softmax_rows(Z):
    m = Z.max(axis=1, keepdims=True)
    e = np.exp(Z - m)
    return e / e.sum(axis=1, keepdims=True)


def _fit_logistic(X, y, n_classes, l2=1e-4, lr=0.5, max_iter=2000, tol=1e-6):
    """Multinomial logistic regression by full-batch gradient descent."""
    n, d = X.shape
    W = np.zeros((n_classes, d))
    b = np.zeros(n_classes)
    onehot = np.zeros((n, n_classes))
    onehot[np.arange(n), y] = 1.0
    prev = np.inf
    for _ in range(max_iter):
        P = _softmax_rows(X @ W.T + b)
        loss = -np.log(P[np.arange(n), y] + 1e-300).mean() + 0.5 * l2 * (W**2).sum()
        if abs(prev - loss) < tol:
            break
        prev = loss
        G = (P - onehot) / n
        W -= lr * (G.T @ X + l2 * W)
        b -= lr * G.sum(axis=0)
    return W, b


def _stratified_split(y, test_frac, rng):
    train_idx, test_idx = [], []
    for cls in np.unique(y):
        idx = np.nonzero(y == cls)[0]
        idx = idx[rng.permutation(len(idx))]
        n_test = max(1, int(round(len(idx) * test_frac))) if len(idx) > 1 else 0
        test_idx.extend(idx[:n_test])
        train_idx.extend(idx[n_test:])
    return np.array(sorted(train_idx)), np.array(sorted(test_idx))


def logistic_probe(
    features: FeatureMatrix,
    seeds: int = 5,
    test_frac: float = 0.2,
    l2: float = 1e-4,
) -> dict:
    """Held-out accuracy of a linear classifier, averaged over seeded splits.

    Each seed draws its own stratified 80/20 split and trains to convergence.
    Returns {"mean_accuracy", "per_seed", "majority"}.
    """
    if features.labels is None:
        raise AnalysisError("features must carry labels")
    classes = sorted(set(features.labels))
    if len(classes) < 2:
        raise AnalysisError("need at least 2 classes to probe")
    class_index = {c: i for i, c in enumerate(classes)}
    y = np.array([class_index[lab] for lab in features.labels])
    X = features.rows

    per_seed = []
    for seed in range(seeds):
        rng = np.random.default_rng(seed)
        train_idx, test_idx = _stratified_split(y, test_frac, rng)
        if len(test_idx) == 0 or len(train_idx) == 0:
            raise AnalysisError("split produced an empty train or test set")
        mu = X[train_idx].mean(axis=0)
        sd = X[train_idx].std(axis=0)
        sd[sd == 0] = 1.0
        Xtr = (X[train_idx] - mu) / sd
        Xte = (X[test_idx] - mu) / sd
        W, b = _fit_logistic(Xtr, y[train_idx], len(classes), l2=l2)
        pred = (Xte @ W.T + b).argmax(axis=1)
        per_seed.append(float((pred == y[test_idx]).mean()))
    return {
        "mean_accuracy": float(np.mean(per_seed)),
        "per_seed": per_seed,
        "majority": majority_baseline(features.labels),
    }


def analysis_report(
    features: FeatureMatrix,
    pca_k: int | None = None,
    kmeans_k: int | None = None,
    probe_seeds: int = 5,
    kmeans_seed: int = 0,
) -> dict:
    """Bundle the standard analyses into one JSON-ready report."""
    out: dict = {"n_rows": len(features.rows), "dim": features.rows.shape[1]}
    if pca_k:
        comps, var = pca_fit(features.rows, pca_k)
        out["pca"] = {"explained_variance": [float(v) for v in var]}
    if kmeans_k:
        assign, _, trace = kmeans(features.rows, kmeans_k, seed=kmeans_seed)
        counts = [int((assign == j).sum()) for j in range(kmeans_k)]
        out["kmeans"] = {"k": kmeans_k, "cluster_sizes": counts, "objective": trace[-1]}
    if features.labels is not None and len(set(features.labels)) > 1:
        probe = logistic_probe(features, seeds=probe_seeds)
        out["probe_accuracy"] = probe["mean_accuracy"]
        out["per_seed"] = probe["per_seed"]
        out["majority_accuracy"] = probe["majority"]
    elif features.labels is not None:
        out["majority_accuracy"] = majority_baseline(features.labels)
    return out


def scatter_csv(features: FeatureMatrix, path) -> None:
    """First two principal coordinates plus the label, for external plotting."""
    comps, _ = pca_fit(features.rows, min(2, features.rows.shape[1]))
    proj = pca_project(features.rows, comps)
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["pc1", "pc2", features.label_name])
        for i in range(len(proj)):
            label = features.labels[i] if features.labels else ""
            pc2 = proj[i, 1] if proj.shape[1] > 1 else 0.0
            writer.writerow([f"{proj[i, 0]:.10g}", f"{pc2:.10g}", label])
