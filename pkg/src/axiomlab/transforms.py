"""Distance and dataset transforms tied to clustering axioms.

A partition-aware transform takes a dataset (or distance table) together
with a reference partition and produces a new one.  The classic
"consistency" notion compares distance tables pair by pair: within-cluster
distances may only shrink, between-cluster distances may only grow
(:func:`is_gamma_transform` checks exactly that and reports every violating
pair).  The geometric transforms below (centric shrinks, rigid cluster
motions and their composites) deliberately do *not* all satisfy it — which
pairs survive and which break is what the verification suites measure.
"""

import json

import numpy as np

from .core import Dataset, DistanceMatrix

TRANSFORM_KINDS = (
    "scale",
    "kleinberg-gamma",
    "centric",
    "motion",
    "inner-proportional",
    "composite",
)

# relative slack when comparing distances before/after a transform, so that
# coordinate round-off is not mistaken for an axiom violation
_PAIR_RTOL = 1e-12


class TransformRecord:
    """Provenance record of one applied transform.

    Serialises to ``{"kind", "cluster", "lambda", "vector"}``; fields not
    applicable to the kind stay None.
    """

    __slots__ = ("kind", "cluster", "lam", "vector")

    def __init__(self, kind, cluster=None, lam=None, vector=None):
        if kind not in TRANSFORM_KINDS:
            raise ValueError("kind must be one of %s, got %r" % (TRANSFORM_KINDS, kind))
        object.__setattr__(self, "kind", kind)
        object.__setattr__(self, "cluster", None if cluster is None else int(cluster))
        object.__setattr__(self, "lam", None if lam is None else float(lam))
        object.__setattr__(
            self, "vector", None if vector is None else tuple(float(v) for v in vector)
        )

    def __setattr__(self, name, value):
        raise AttributeError("TransformRecord is immutable")

    def __repr__(self):
        return "TransformRecord(kind=%r, cluster=%s, lam=%s, vector=%s)" % (
            self.kind,
            self.cluster,
            self.lam,
            self.vector,
        )

    def __eq__(self, other):
        return isinstance(other, TransformRecord) and (
            self.kind,
            self.cluster,
            self.lam,
            self.vector,
        ) == (other.kind, other.cluster, other.lam, other.vector)

    def to_json(self):
        return json.dumps(
            {
                "kind": self.kind,
                "cluster": self.cluster,
                "lambda": self.lam,
                "vector": None if self.vector is None else list(self.vector),
            }
        )

    @classmethod
    def from_json(cls, text):
        raw = json.loads(text)
        return cls(raw["kind"], raw.get("cluster"), raw.get("lambda"), raw.get("vector"))


# ---------------------------------------------------------------------------
# helpers
# ---------------------------------------------------------------------------


def _pairwise(points):
    diff = points[:, None, :] - points[None, :, :]
    return np.sqrt(np.sum(diff * diff, axis=-1))


def _as_matrix(d):
    if isinstance(d, DistanceMatrix):
        return d.values
    return np.asarray(d, dtype=float)


def _check_cluster_id(gamma, cluster_id):
    if not 0 <= cluster_id < gamma.k:
        raise ValueError("cluster_id %d out of range for k=%d" % (cluster_id, gamma.k))


def _check_lambda(lam):
    if not 0.0 < lam <= 1.0:
        raise ValueError("lambda must lie in (0, 1], got %r" % (lam,))


def _cluster_means(dataset, gamma):
    return [dataset.points[list(b)].mean(axis=0) for b in gamma.clusters]


def _cluster_radii(points, gamma, means):
    radii = []
    for block, mu in zip(gamma.clusters, means):
        sub = points[list(block)]
        radii.append(float(np.max(np.sqrt(np.sum((sub - mu) ** 2, axis=1)))))
    return radii


# ---------------------------------------------------------------------------
# transforms
# ---------------------------------------------------------------------------


def scale(data, alpha):
    """Scale all distances by alpha > 0.

    Accepts a :class:`Dataset` (coordinates are multiplied, which scales
    every pairwise distance by alpha) or a :class:`DistanceMatrix`.
    """
    if alpha <= 0:
        raise ValueError("alpha must be positive, got %r" % (alpha,))
    if isinstance(data, Dataset):
        return Dataset(data.points * alpha)
    if isinstance(data, DistanceMatrix):
        return DistanceMatrix(data.values * alpha)
    raise TypeError("data must be Dataset or DistanceMatrix")


def is_gamma_transform(d_before, d_after, gamma):
    """Pairwise consistency check between two distance tables.

    The transform is admissible when every within-cluster distance is <=
    its original value and every between-cluster distance is >= its
    original value (relative slack 1e-12 to forgive round-off).

    Parameters
    ----------
    d_before, d_after : DistanceMatrix or (n, n) array_like
    gamma : Partition

    Returns
    -------
    (bool, tuple of dict)
        Verdict plus every violating pair, each as
        ``{"pair", "kind", "before", "after"}`` with kind ``"within"`` or
        ``"between"``.
    """
    before = _as_matrix(d_before)
    after = _as_matrix(d_after)
    if before.shape != after.shape:
        raise ValueError("distance tables differ in shape")
    n = before.shape[0]
    if gamma.n != n:
        raise ValueError("partition covers %d points, tables have %d" % (gamma.n, n))
    labels = gamma.labels()
    violations = []
    for i in range(n):
        for j in range(i + 1, n):
            same = labels[i] == labels[j]
            if same and after[i, j] > before[i, j] * (1.0 + _PAIR_RTOL):
                violations.append(
                    {
                        "pair": (i, j),
                        "kind": "within",
                        "before": float(before[i, j]),
                        "after": float(after[i, j]),
                    }
                )
            elif not same and after[i, j] < before[i, j] * (1.0 - _PAIR_RTOL):
                violations.append(
                    {
                        "pair": (i, j),
                        "kind": "between",
                        "before": float(before[i, j]),
                        "after": float(after[i, j]),
                    }
                )
    return len(violations) == 0, tuple(violations)


def centric_transform(dataset, gamma, cluster_id, lam):
    """Shrink one cluster towards its centroid: x' = mu + lam * (x - mu).

    Only the chosen cluster's points move; its centroid is preserved and
    its within-cluster distances scale by exactly lam.  Distances to other
    clusters change in whatever way the geometry dictates -- this is not
    generally admissible in the sense of :func:`is_gamma_transform`, and
    that is the point.

    Parameters
    ----------
    dataset : Dataset
    gamma : Partition
    cluster_id : int
    lam : float in (0, 1]

    Returns
    -------
    Dataset
    """
    _check_cluster_id(gamma, cluster_id)
    _check_lambda(lam)
    if gamma.n != dataset.n:
        raise ValueError("partition does not match dataset")
    pts = dataset.points.copy()
    idx = list(gamma.clusters[cluster_id])
    mu = pts[idx].mean(axis=0)
    pts[idx] = mu + lam * (pts[idx] - mu)
    return Dataset(pts)


def centric_matrix_transform(d, gamma, cluster_id, lam):
    """Distance-level centric shrink: one cluster's internal distances x lam.

    Works directly on a distance table, leaving every distance that
    touches the outside untouched, so the result is always admissible in
    the sense of :func:`is_gamma_transform`.

    Parameters
    ----------
    d : DistanceMatrix
    gamma : Partition
    cluster_id : int
    lam : float in (0, 1]

    Returns
    -------
    DistanceMatrix
    """
    _check_cluster_id(gamma, cluster_id)
    _check_lambda(lam)
    values = _as_matrix(d).copy()
    if gamma.n != values.shape[0]:
        raise ValueError("partition does not match table")
    idx = np.array(gamma.clusters[cluster_id], dtype=int)
    block = np.ix_(idx, idx)
    values[block] = values[block] * lam
    np.fill_diagonal(values, 0.0)
    return DistanceMatrix(values)


def motion_transform(dataset, gamma, cluster_id, vector):
    """Rigidly translate one cluster and judge the move's legality.

    The move is legal when (a) the moved cluster's centroid does not get
    closer to any other cluster's centroid, and (b) after the move the
    enclosing balls (centroid, max point distance) of all clusters are
    pairwise non-overlapping.

    Parameters
    ----------
    dataset : Dataset
    gamma : Partition
    cluster_id : int
    vector : (m,) array_like

    Returns
    -------
    (Dataset, bool)
        The moved dataset and the legality verdict.
    """
    _check_cluster_id(gamma, cluster_id)
    if gamma.n != dataset.n:
        raise ValueError("partition does not match dataset")
    vector = np.asarray(vector, dtype=float)
    if vector.shape != (dataset.m,):
        raise ValueError("vector must have shape (%d,)" % dataset.m)
    pts = dataset.points.copy()
    idx = list(gamma.clusters[cluster_id])
    before_means = _cluster_means(dataset, gamma)
    pts[idx] = pts[idx] + vector
    moved = Dataset(pts)

    after_means = [m.copy() for m in before_means]
    after_means[cluster_id] = before_means[cluster_id] + vector
    radii = _cluster_radii(pts, gamma, after_means)

    legal = True
    for j in range(gamma.k):
        if j == cluster_id:
            continue
        d_before = float(np.linalg.norm(before_means[cluster_id] - before_means[j]))
        d_after = float(np.linalg.norm(after_means[cluster_id] - after_means[j]))
        if d_after < d_before * (1.0 - _PAIR_RTOL):
            legal = False
    for i in range(gamma.k):
        for j in range(i + 1, gamma.k):
            gap = float(np.linalg.norm(after_means[i] - after_means[j]))
            if gap < (radii[i] + radii[j]) * (1.0 - _PAIR_RTOL):
                legal = False
    return moved, legal


def inner_proportional_transform(dataset, gamma, lams):
    """Shrink every cluster towards its own centroid, cluster j by lams[j].

    Parameters
    ----------
    dataset : Dataset
    gamma : Partition
    lams : sequence of float in (0, 1], one per cluster

    Returns
    -------
    Dataset
    """
    if gamma.n != dataset.n:
        raise ValueError("partition does not match dataset")
    lams = [float(l) for l in lams]
    if len(lams) != gamma.k:
        raise ValueError("need one lambda per cluster (%d), got %d" % (gamma.k, len(lams)))
    for lam in lams:
        _check_lambda(lam)
    pts = dataset.points.copy()
    for block, lam in zip(gamma.clusters, lams):
        idx = list(block)
        mu = pts[idx].mean(axis=0)
        pts[idx] = mu + lam * (pts[idx] - mu)
    return Dataset(pts)


def discrete_consistency_transform(dataset, gamma, motions, lam):
    """Shrink all clusters by lam, then translate each cluster rigidly.

    This composite is the discrete workhorse of consistency experiments:
    an inner shrink followed by per-cluster motions.  Alongside the
    transformed dataset it reports whether the net effect is admissible in
    the sense of :func:`is_gamma_transform` (within distances not grown,
    between distances not shrunk) -- computed directly on raw pairwise
    distances so that even degenerate intermediate configurations are
    handled.

    Parameters
    ----------
    dataset : Dataset
    gamma : Partition
    motions : sequence of (m,) array_like, one vector per cluster
    lam : float in (0, 1]
        Common shrink factor applied to every cluster first.

    Returns
    -------
    (Dataset, bool)
    """
    if gamma.n != dataset.n:
        raise ValueError("partition does not match dataset")
    motions = [np.asarray(v, dtype=float) for v in motions]
    if len(motions) != gamma.k:
        raise ValueError("need one motion per cluster (%d), got %d" % (gamma.k, len(motions)))
    for v in motions:
        if v.shape != (dataset.m,):
            raise ValueError("motion vectors must have shape (%d,)" % dataset.m)
    shrunk = inner_proportional_transform(dataset, gamma, [lam] * gamma.k)
    pts = shrunk.points.copy()
    for block, v in zip(gamma.clusters, motions):
        idx = list(block)
        pts[idx] = pts[idx] + v
    out = Dataset(pts)
    ok, _ = is_gamma_transform(
        _pairwise(dataset.points), _pairwise(pts), gamma
    )
    return out, ok
