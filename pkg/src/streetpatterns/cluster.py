"""Clustering engines and the k-selection procedure.

Three engines (k-means with k-means++ seeding, Ward agglomerative,
flat-kernel mean-shift) fit a feature matrix into a ClusterModel with
cluster labels renumbered by first occurrence in row order, so identical
data and config always produce identical, stable labelings. Mean
silhouette scores drive the choice of k: either the largest relative
score drop (the k before the drop wins) or the plain maximum.

The cosine metric is realized by normalizing rows to unit length and
working with chordal distances on the sphere; for unit vectors the
euclidean distance is a monotone function of cosine distance, so nearest
neighbors and cluster structure are preserved.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from scipy.spatial.distance import cdist, pdist

from . import jsonio, vivf
from .features import FeatureKind, FeatureMatrix

SILHOUETTE_MAX_ROWS = 10_000
BANDWIDTH_SAMPLE_ROWS = 2_000


class Method(enum.Enum):
    KMEANS = "kmeans"
    AGGLOMERATIVE = "agglomerative"
    MEANSHIFT = "meanshift"


class Metric(enum.Enum):
    EUCLIDEAN = "euclidean"
    COSINE = "cosine"


class Strategy(enum.Enum):
    PRE_DROP = "predrop"
    MAX_SCORE = "maxscore"


@dataclass(frozen=True)
class ClusteringConfig:
    method: Method
    k: int = 1
    metric: Metric = Metric.EUCLIDEAN
    seed: int = 0
    max_iter: int = 300
    tol: float = 1e-6

    def __post_init__(self):
        if self.k < 1:
            raise ValueError("k must be >= 1")
        if self.max_iter < 1:
            raise ValueError("max_iter must be >= 1")
        if self.tol <= 0:
            raise ValueError("tol must be positive")


@dataclass(frozen=True)
class ClusterModel:
    """A fitted clustering: centroids, per-sample labels, and provenance."""

    method: Method
    k_effective: int
    centroids: np.ndarray
    assignments: np.ndarray
    inertia: float
    metric: Metric = Metric.EUCLIDEAN
    seed: int = 0
    kind: FeatureKind = FeatureKind.LATENT

    def __post_init__(self):
        centroids = np.asarray(self.centroids, dtype=np.float64)
        labels = np.asarray(self.assignments, dtype=np.int64)
        if centroids.shape[0] != self.k_effective:
            raise ValueError("centroid count does not match k_effective")
        if labels.size and (labels.min() < 0 or labels.max() >= self.k_effective):
            raise ValueError("assignment labels outside [0, k)")
        counts = np.bincount(labels, minlength=self.k_effective)
        if np.any(counts == 0):
            raise ValueError("every cluster must be non-empty")
        if self.inertia < 0:
            raise ValueError("inertia must be non-negative")
        object.__setattr__(self, "centroids", centroids)
        object.__setattr__(self, "assignments", labels)

    @property
    def dim(self) -> int:
        return self.centroids.shape[1]


@dataclass(frozen=True)
class SilhouetteReport:
    per_k: dict[int, float]
    chosen_k: int
    strategy: Strategy

    def __post_init__(self):
        if not self.per_k:
            raise ValueError("per_k must not be empty")
        if self.chosen_k not in self.per_k:
            raise ValueError("chosen_k must be one of the evaluated k values")


def _as_array(m: FeatureMatrix | np.ndarray) -> np.ndarray:
    data = m.data if isinstance(m, FeatureMatrix) else np.asarray(m)
    return np.asarray(data, dtype=np.float64)


def _kind_of(m: FeatureMatrix | np.ndarray) -> FeatureKind:
    return m.kind if isinstance(m, FeatureMatrix) else FeatureKind.LATENT


def _prepare(m: FeatureMatrix | np.ndarray, metric: Metric) -> np.ndarray:
    X = _as_array(m)
    if X.ndim != 2:
        raise ValueError("expected a 2-D feature matrix")
    if metric == Metric.COSINE:
        norms = np.linalg.norm(X, axis=1, keepdims=True)
        if np.any(norms == 0):
            raise ValueError("cosine metric undefined for zero vectors")
        X = X / norms
    return X


def _canonicalize(labels: np.ndarray, centroids: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Renumber clusters by first occurrence in row order; reorder centroids to match."""
    order = []
    remap = np.full(centroids.shape[0], -1, dtype=np.int64)
    for lab in labels:
        if remap[lab] < 0:
            remap[lab] = len(order)
            order.append(lab)
    return remap[labels], centroids[np.asarray(order)]


# ---------------------------------------------------------------------------
# k-means


def _kmeans_pp_seeds(X: np.ndarray, k: int, rng: np.random.Generator) -> np.ndarray:
    n = X.shape[0]
    centers = np.empty((k, X.shape[1]))
    first = int(rng.integers(n))
    centers[0] = X[first]
    d2 = np.sum((X - centers[0]) ** 2, axis=1)
    for j in range(1, k):
        total = d2.sum()
        if total <= 0:
            idx = int(rng.integers(n))
        else:
            idx = int(rng.choice(n, p=d2 / total))
        centers[j] = X[idx]
        d2 = np.minimum(d2, np.sum((X - centers[j]) ** 2, axis=1))
    return centers


def _repair_empty(
    X: np.ndarray, centers: np.ndarray, labels: np.ndarray, d2: np.ndarray
) -> tuple[np.ndarray, np.ndarray]:
    """Reseed each empty cluster from the point farthest from its own centroid."""
    counts = np.bincount(labels, minlength=centers.shape[0])
    for c in np.flatnonzero(counts == 0):
        far = int(np.argmax(d2))
        centers[c] = X[far]
        labels[far] = c
        d2[far] = 0.0
        counts = np.bincount(labels, minlength=centers.shape[0])
    return centers, labels


def kmeans(m: FeatureMatrix | np.ndarray, cfg: ClusteringConfig) -> ClusterModel:
    """Lloyd's iterations from k-means++ seeding, deterministic given the seed."""
    if cfg.method != Method.KMEANS:
        raise ValueError("config method must be KMeans")
    X = _prepare(m, cfg.metric)
    n = X.shape[0]
    if n < cfg.k:
        raise ValueError(f"need at least k={cfg.k} rows, got {n}")
    rng = np.random.default_rng(cfg.seed)
    centers = _kmeans_pp_seeds(X, cfg.k, rng)

    labels = np.zeros(n, dtype=np.int64)
    for _ in range(cfg.max_iter):
        dist2 = cdist(X, centers, "sqeuclidean")
        labels = np.argmin(dist2, axis=1)
        d2 = dist2[np.arange(n), labels]
        centers, labels = _repair_empty(X, centers, labels, d2)
        new_centers = np.empty_like(centers)
        for c in range(cfg.k):
            new_centers[c] = X[labels == c].mean(axis=0)
        shift = float(np.max(np.linalg.norm(new_centers - centers, axis=1)))
        centers = new_centers
        if shift < cfg.tol:
            break

    dist2 = cdist(X, centers, "sqeuclidean")
    labels = np.argmin(dist2, axis=1)
    d2 = dist2[np.arange(n), labels]
    centers, labels = _repair_empty(X, centers, labels, d2)
    for c in range(cfg.k):
        centers[c] = X[labels == c].mean(axis=0)
    inertia = float(np.sum(cdist(X, centers, "sqeuclidean")[np.arange(n), labels]))
    labels, centers = _canonicalize(labels, centers)
    return ClusterModel(
        method=Method.KMEANS,
        k_effective=cfg.k,
        centroids=centers,
        assignments=labels,
        inertia=inertia,
        metric=cfg.metric,
        seed=cfg.seed,
        kind=_kind_of(m),
    )


# ---------------------------------------------------------------------------
# agglomerative (Ward)


def ward_merge_history(X: np.ndarray) -> list[tuple[int, int, float]]:
    """Bottom-up Ward merges: (min-member of a, min-member of b, cost) per step.

    The merge cost is the within-cluster variance increase
    |A||B|/(|A|+|B|) * ||c_A - c_B||^2; ties resolve to the smallest
    (min-member, min-member) pair.
    """
    n = X.shape[0]
    sizes = [1] * n
    centroids = [X[i].astype(np.float64) for i in range(n)]
    reps = list(range(n))  # smallest member id per active cluster
    active = list(range(n))

    cost = np.full((n, n), np.inf)
    for i in range(n):
        for j in range(i + 1, n):
            d2 = float(np.sum((centroids[i] - centroids[j]) ** 2))
            cost[i, j] = 0.5 * d2

    history: list[tuple[int, int, float]] = []
    while len(active) > 1:
        # active is kept sorted by representative id, so a row-major argmin
        # over the masked cost matrix lands on the tie-rule winner.
        sub = cost[np.ix_(active, active)]
        flat = int(np.argmin(sub))
        ai, aj = divmod(flat, len(active))
        if ai > aj:
            ai, aj = aj, ai
        a, b = active[ai], active[aj]
        history.append((reps[a], reps[b], float(cost[a, b])))

        na, nb = sizes[a], sizes[b]
        merged = (na * centroids[a] + nb * centroids[b]) / (na + nb)
        centroids[a] = merged
        sizes[a] = na + nb
        reps[a] = min(reps[a], reps[b])
        active.remove(b)
        cost[b, :] = np.inf
        cost[:, b] = np.inf
        for c in active:
            if c == a:
                continue
            nc = sizes[c]
            d2 = float(np.sum((centroids[a] - centroids[c]) ** 2))
            w = (sizes[a] * nc) / (sizes[a] + nc) * d2
            lo, hi = (a, c) if a < c else (c, a)
            cost[lo, hi] = w
    return history


def agglomerative(m: FeatureMatrix | np.ndarray, cfg: ClusteringConfig) -> ClusterModel:
    """Ward-linkage hierarchical clustering cut at k clusters."""
    if cfg.method != Method.AGGLOMERATIVE:
        raise ValueError("config method must be Agglomerative")
    X = _prepare(m, cfg.metric)
    n = X.shape[0]
    if n < cfg.k:
        raise ValueError(f"need at least k={cfg.k} rows, got {n}")

    parent = list(range(n))

    def find(i: int) -> int:
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    history = ward_merge_history(X)
    for a, b, _ in history[: n - cfg.k]:
        ra, rb = find(a), find(b)
        parent[max(ra, rb)] = min(ra, rb)

    roots = np.array([find(i) for i in range(n)])
    _, labels = np.unique(roots, return_inverse=True)
    centroids = np.array([X[labels == c].mean(axis=0) for c in range(cfg.k)])
    inertia = float(
        np.sum(cdist(X, centroids, "sqeuclidean")[np.arange(n), labels])
    )
    labels, centroids = _canonicalize(labels, centroids)
    return ClusterModel(
        method=Method.AGGLOMERATIVE,
        k_effective=cfg.k,
        centroids=centroids,
        assignments=labels,
        inertia=inertia,
        metric=cfg.metric,
        seed=cfg.seed,
        kind=_kind_of(m),
    )


# ---------------------------------------------------------------------------
# mean-shift


def estimate_bandwidth(m: FeatureMatrix | np.ndarray, metric: Metric = Metric.EUCLIDEAN) -> float:
    """Median pairwise distance, on an evenly spaced subsample above 2000 rows."""
    X = _prepare(m, metric)
    n = X.shape[0]
    if n > BANDWIDTH_SAMPLE_ROWS:
        idx = np.unique(np.linspace(0, n - 1, BANDWIDTH_SAMPLE_ROWS).astype(np.int64))
        X = X[idx]
    if X.shape[0] < 2:
        return 1.0
    med = float(np.median(pdist(X)))
    return med if med > 0 else 1.0


def meanshift(
    m: FeatureMatrix | np.ndarray,
    bandwidth: float | None = None,
    metric: Metric = Metric.EUCLIDEAN,
    max_iter: int = 300,
    tol: float | None = None,
) -> ClusterModel:
    """Flat-kernel mean-shift; modes closer than bandwidth/2 are merged.

    The discovered mode count becomes k_effective. With bandwidth=None the
    median pairwise distance is used.
    """
    X = _prepare(m, metric)
    n = X.shape[0]
    if n < 1:
        raise ValueError("mean-shift needs at least one row")
    if bandwidth is None:
        bandwidth = estimate_bandwidth(X, Metric.EUCLIDEAN)
    if bandwidth <= 0:
        raise ValueError("bandwidth must be positive")
    if tol is None:
        tol = 1e-3 * bandwidth

    P = X.copy()
    for _ in range(max_iter):
        within = cdist(P, X) <= bandwidth
        counts = within.sum(axis=1)
        shifted = (within @ X) / counts[:, None]
        move = float(np.max(np.linalg.norm(shifted - P, axis=1)))
        P = shifted
        if move < tol:
            break

    modes: list[np.ndarray] = []
    labels = np.empty(n, dtype=np.int64)
    for i in range(n):
        for j, mode in enumerate(modes):
            if np.linalg.norm(P[i] - mode) < bandwidth / 2.0:
                labels[i] = j
                break
        else:
            labels[i] = len(modes)
            modes.append(P[i])
    centroids = np.array(modes)
    inertia = float(np.sum(cdist(X, centroids, "sqeuclidean")[np.arange(n), labels]))
    return ClusterModel(
        method=Method.MEANSHIFT,
        k_effective=len(modes),
        centroids=centroids,
        assignments=labels,
        inertia=inertia,
        metric=metric,
        kind=_kind_of(m),
    )


# ---------------------------------------------------------------------------
# silhouette and k selection


def silhouette(
    m: FeatureMatrix | np.ndarray,
    assignments,
    metric: Metric = Metric.EUCLIDEAN,
) -> float:
    """Mean silhouette score in [-1, 1].

    Per point: s = (b - a) / max(a, b), where a is the mean distance to the
    point's own cluster (excluding itself) and b the smallest mean distance
    to another cluster. Singleton-cluster points score 0. Above 10 000 rows
    an evenly spaced subsample keeps the O(n^2) cost bounded.
    """
    X = _prepare(m, metric)
    labels = np.asarray(assignments, dtype=np.int64)
    if labels.shape[0] != X.shape[0]:
        raise ValueError("assignment length does not match row count")
    uniq, labels = np.unique(labels, return_inverse=True)
    k = uniq.size
    if k < 2:
        raise ValueError("silhouette needs at least 2 clusters")

    n = X.shape[0]
    if n > SILHOUETTE_MAX_ROWS:
        idx = np.unique(np.linspace(0, n - 1, SILHOUETTE_MAX_ROWS).astype(np.int64))
        if np.unique(labels[idx]).size >= 2:
            X, labels = X[idx], labels[idx]
            uniq, labels = np.unique(labels, return_inverse=True)
            k = uniq.size
            n = X.shape[0]

    D = cdist(X, X)
    counts = np.bincount(labels, minlength=k)
    # sums[i, c] = total distance from point i to cluster c
    sums = np.zeros((n, k))
    for c in range(k):
        sums[:, c] = D[:, labels == c].sum(axis=1)

    own = counts[labels]
    scores = np.zeros(n)
    multi = own > 1
    a = np.zeros(n)
    a[multi] = sums[np.arange(n), labels][multi] / (own[multi] - 1)
    other = sums / counts[None, :]
    other[np.arange(n), labels] = np.inf
    b = other.min(axis=1)
    denom = np.maximum(a, b)
    valid = multi & (denom > 0)
    scores[valid] = (b[valid] - a[valid]) / denom[valid]
    return float(scores.mean())


def _fit_for_k(
    m: FeatureMatrix | np.ndarray, method: Method, k: int, metric: Metric, seed: int
) -> ClusterModel:
    cfg = ClusteringConfig(method=method, k=k, metric=metric, seed=seed)
    if method == Method.KMEANS:
        return kmeans(m, cfg)
    if method == Method.AGGLOMERATIVE:
        return agglomerative(m, cfg)
    raise ValueError(f"select_k requires a fixed-k method, not {method.value}")


def select_k(
    m: FeatureMatrix | np.ndarray,
    method: Method = Method.KMEANS,
    k_range: tuple[int, int] = (2, 8),
    strategy: Strategy = Strategy.PRE_DROP,
    metric: Metric = Metric.EUCLIDEAN,
    seed: int = 0,
) -> SilhouetteReport:
    """Fit every k in [k_min, k_max] and pick one from the silhouette profile.

    PRE_DROP picks the k with the largest relative drop to k+1 — the value
    before the score falls off a cliff. MAX_SCORE picks the plain argmax.
    Ties go to the smaller k.
    """
    k_min, k_max = k_range
    if k_min < 2:
        raise ValueError("k_min must be >= 2")
    if k_max < k_min + 1:
        raise ValueError("k_max must be >= k_min + 1")

    per_k: dict[int, float] = {}
    for k in range(k_min, k_max + 1):
        model = _fit_for_k(m, method, k, metric, seed)
        per_k[k] = silhouette(m, model.assignments, metric)
    chosen = choose_k(per_k, strategy)
    return SilhouetteReport(per_k=per_k, chosen_k=chosen, strategy=strategy)


def choose_k(per_k: dict[int, float], strategy: Strategy) -> int:
    """Apply a selection strategy to an already-computed silhouette profile.

    PRE_DROP considers only k values whose score is a running maximum of
    the profile: a "drastic drop" is read off the best score seen so far,
    not off the tail noise after the cliff, where splitting yet another
    cluster can produce a second, spurious cliff.
    """
    ks = sorted(per_k)
    if strategy == Strategy.MAX_SCORE:
        return max(ks, key=lambda k: (per_k[k], -k))
    if len(ks) < 2:
        raise ValueError("PreDrop needs scores for at least two k values")
    best_k, best_drop = ks[0], -math.inf
    running = -math.inf
    for k, k_next in zip(ks, ks[1:]):
        is_peak = per_k[k] >= running
        running = max(running, per_k[k])
        if not is_peak:
            continue
        denom = max(abs(per_k[k]), 1e-12)
        drop = (per_k[k] - per_k[k_next]) / denom
        if drop > best_drop:
            best_k, best_drop = k, drop
    return best_k


# ---------------------------------------------------------------------------
# labeling and evaluation


def assign(model: ClusterModel, v: np.ndarray) -> int:
    """Nearest-centroid label for a new vector; ties go to the smaller label."""
    vec = np.asarray(v, dtype=np.float64).ravel()
    if vec.shape[0] != model.dim:
        raise ValueError(f"vector has dim {vec.shape[0]}, model expects {model.dim}")
    if model.metric == Metric.COSINE:
        norm = np.linalg.norm(vec)
        if norm == 0:
            raise ValueError("cosine metric undefined for zero vectors")
        vec = vec / norm
    d2 = np.sum((model.centroids - vec) ** 2, axis=1)
    return int(np.argmin(d2))


def adjusted_rand_index(labels_a, labels_b) -> float:
    """Chance-adjusted agreement between two labelings, 1.0 for identical partitions."""
    a = np.asarray(labels_a).ravel()
    b = np.asarray(labels_b).ravel()
    if a.shape != b.shape:
        raise ValueError("labelings must have the same length")
    n = a.size
    _, ai = np.unique(a, return_inverse=True)
    _, bi = np.unique(b, return_inverse=True)
    ka, kb = ai.max() + 1, bi.max() + 1
    cont = np.zeros((ka, kb), dtype=np.int64)
    np.add.at(cont, (ai, bi), 1)

    def comb2(x):
        return x * (x - 1) / 2.0

    sum_ij = comb2(cont).sum()
    sum_a = comb2(cont.sum(axis=1)).sum()
    sum_b = comb2(cont.sum(axis=0)).sum()
    total = comb2(n)
    expected = sum_a * sum_b / total if total else 0.0
    max_index = 0.5 * (sum_a + sum_b)
    if max_index == expected:
        return 1.0
    return float((sum_ij - expected) / (max_index - expected))


# ---------------------------------------------------------------------------
# serialization

MODEL_MANIFEST = "model.json"
CENTROIDS_FILE = "centroids.vivf"
ASSIGNMENTS_FILE = "assignments.u32"


def save_model(model: ClusterModel, directory: str | Path) -> None:
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    vivf.write_matrix(
        directory / CENTROIDS_FILE,
        FeatureMatrix(kind=model.kind, data=model.centroids),
    )
    vivf.write_labels(directory / ASSIGNMENTS_FILE, model.assignments)
    jsonio.write_json(
        directory / MODEL_MANIFEST,
        {
            "method": model.method.value,
            "k": model.k_effective,
            "metric": model.metric.value,
            "seed": model.seed,
            "inertia": model.inertia,
            "kind": int(model.kind),
            "files": {"centroids": CENTROIDS_FILE, "assignments": ASSIGNMENTS_FILE},
        },
    )


def load_model(directory: str | Path) -> ClusterModel:
    directory = Path(directory)
    manifest = jsonio.read_json(directory / MODEL_MANIFEST)
    centroids = vivf.read_matrix(directory / manifest["files"]["centroids"])
    assignments = vivf.read_labels(directory / manifest["files"]["assignments"])
    return ClusterModel(
        method=Method(manifest["method"]),
        k_effective=int(manifest["k"]),
        centroids=centroids.data.astype(np.float64),
        assignments=assignments,
        inertia=float(manifest["inertia"]),
        metric=Metric(manifest["metric"]),
        seed=int(manifest["seed"]),
        kind=FeatureKind(manifest["kind"]),
    )
