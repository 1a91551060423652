"""Data model and combinatorial / spectral primitives.

This module defines the three value types everything else builds on
(:class:`Dataset`, :class:`DistanceMatrix`, :class:`Partition`), exhaustive
partition enumeration in canonical order, and the signed-embedding machinery
that turns an arbitrary symmetric dissimilarity table into coordinates with
per-axis signs (+1 for ordinary axes, -1 for "imaginary" ones coming from
negative eigenvalues of the doubly centred Gram matrix).

All types are immutable; all functions are pure.
"""

import json
import math
import os

import numpy as np

# Partition enumeration grows like the Bell numbers (B(12) = 4 213 597), so
# anything bigger than this is refused unless the caller raises the cap via
# the AXIOMLAB_ENUMERATION_CAP environment variable.
DEFAULT_ENUMERATION_CAP = 12

_ENUMERATION_CAP_ENV = "AXIOMLAB_ENUMERATION_CAP"


# ---------------------------------------------------------------------------
# value types
# ---------------------------------------------------------------------------


def _frozen_array(values, dtype=float):
    arr = np.array(values, dtype=dtype)
    arr.setflags(write=False)
    return arr


class Dataset:
    """An immutable set of n points in R^m.

    Parameters
    ----------
    points : (n, m) array_like
        Point coordinates, one row per point.  Requires n >= 2, m >= 1 and
        all entries finite.
    """

    __slots__ = ("points",)

    def __init__(self, points):
        arr = _frozen_array(points)
        if arr.ndim != 2:
            raise ValueError("points must be a 2-d array, got shape %s" % (arr.shape,))
        n, m = arr.shape
        if n < 2:
            raise ValueError("a dataset needs at least 2 points, got %d" % n)
        if m < 1:
            raise ValueError("a dataset needs at least 1 coordinate, got %d" % m)
        if not np.all(np.isfinite(arr)):
            raise ValueError("dataset coordinates must be finite")
        object.__setattr__(self, "points", arr)

    def __setattr__(self, name, value):
        raise AttributeError("Dataset is immutable")

    @property
    def n(self):
        return self.points.shape[0]

    @property
    def m(self):
        return self.points.shape[1]

    def __repr__(self):
        return "Dataset(n=%d, m=%d)" % (self.n, self.m)

    def __eq__(self, other):
        return isinstance(other, Dataset) and np.array_equal(self.points, other.points)

    def __hash__(self):
        return hash(self.points.tobytes())

    @classmethod
    def from_csv(cls, path):
        """Load a dataset from a CSV file with header ``x1,...,xm``."""
        arr = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
        return cls(arr)

    def to_csv(self, path):
        """Write the dataset as CSV with header ``x1,...,xm``."""
        header = ",".join("x%d" % (j + 1) for j in range(self.m))
        np.savetxt(path, self.points, delimiter=",", header=header, comments="")


class DistanceMatrix:
    """An immutable symmetric dissimilarity table.

    The diagonal must be exactly zero, off-diagonal entries strictly
    positive and finite, and the table symmetric.  Nothing metric is
    assumed; use :func:`validate_distance` to probe the triangle
    inequality.
    """

    __slots__ = ("values",)

    def __init__(self, values):
        arr = _frozen_array(values)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
            raise ValueError("distance matrix must be square, got shape %s" % (arr.shape,))
        if arr.shape[0] < 2:
            raise ValueError("distance matrix needs at least 2 points")
        if not np.all(np.isfinite(arr)):
            raise ValueError("distances must be finite")
        if np.any(np.diag(arr) != 0.0):
            raise ValueError("distance matrix diagonal must be zero")
        if not np.array_equal(arr, arr.T):
            raise ValueError("distance matrix must be symmetric")
        off = arr[~np.eye(arr.shape[0], dtype=bool)]
        if np.any(off <= 0.0):
            raise ValueError("off-diagonal distances must be strictly positive")
        object.__setattr__(self, "values", arr)

    def __setattr__(self, name, value):
        raise AttributeError("DistanceMatrix is immutable")

    @property
    def n(self):
        return self.values.shape[0]

    def __repr__(self):
        return "DistanceMatrix(n=%d)" % self.n

    def __eq__(self, other):
        return isinstance(other, DistanceMatrix) and np.array_equal(
            self.values, other.values
        )

    def __hash__(self):
        return hash(self.values.tobytes())

    @classmethod
    def from_csv(cls, path):
        """Load a distance matrix from a headerless CSV of raw rows."""
        return cls(np.loadtxt(path, delimiter=",", ndmin=2))

    def to_csv(self, path):
        np.savetxt(path, self.values, delimiter=",")


class Partition:
    """An immutable partition of {0, ..., n-1} into non-empty clusters.

    The canonical form orders members inside each cluster increasingly and
    orders clusters by their smallest member; the constructor canonicalises
    whatever it is given, so two partitions with the same blocks always
    compare equal.
    """

    __slots__ = ("clusters",)

    def __init__(self, clusters):
        canon = sorted(
            (tuple(sorted(int(i) for i in cluster)) for cluster in clusters),
            key=lambda block: block[0] if block else -1,
        )
        if any(len(block) == 0 for block in canon):
            raise ValueError("clusters must be non-empty")
        flat = sorted(i for block in canon for i in block)
        n = len(flat)
        if flat != list(range(n)):
            raise ValueError(
                "clusters must cover 0..n-1 exactly once, got %s" % (flat,)
            )
        object.__setattr__(self, "clusters", tuple(canon))

    def __setattr__(self, name, value):
        raise AttributeError("Partition is immutable")

    @property
    def n(self):
        return sum(len(block) for block in self.clusters)

    @property
    def k(self):
        return len(self.clusters)

    def labels(self):
        """Cluster index of every point, as an (n,) integer array."""
        out = np.empty(self.n, dtype=int)
        for j, block in enumerate(self.clusters):
            out[list(block)] = j
        return out

    @classmethod
    def from_labels(cls, labels):
        """Build a partition from an array of per-point cluster labels."""
        labels = np.asarray(labels)
        blocks = {}
        for i, lab in enumerate(labels):
            blocks.setdefault(int(lab), []).append(i)
        return cls(blocks.values())

    def __repr__(self):
        return "Partition(%s)" % (list(map(list, self.clusters)),)

    def __eq__(self, other):
        return isinstance(other, Partition) and self.clusters == other.clusters

    def __hash__(self):
        return hash(self.clusters)

    def to_json(self):
        return json.dumps({"clusters": [list(block) for block in self.clusters]})

    @classmethod
    def from_json(cls, text):
        return cls(json.loads(text)["clusters"])


class ValidationReport:
    """Outcome of :func:`validate_distance`: a verdict plus every violation.

    ``violations`` is a tuple of dicts with a ``kind`` key (``"symmetry"``,
    ``"diagonal"``, ``"positivity"``, ``"finiteness"`` or ``"triangle"``)
    and enough indices/values to reproduce the failure by hand.
    """

    __slots__ = ("ok", "violations")

    def __init__(self, ok, violations):
        object.__setattr__(self, "ok", bool(ok))
        object.__setattr__(self, "violations", tuple(violations))

    def __setattr__(self, name, value):
        raise AttributeError("ValidationReport is immutable")

    def __repr__(self):
        return "ValidationReport(ok=%s, violations=%d)" % (self.ok, len(self.violations))


class EmbeddingReport:
    """Outcome of :func:`embeddability_check`.

    Attributes
    ----------
    embeddable : bool
        True iff no significant negative eigenvalue shows up, i.e. the
        table embeds into ordinary Euclidean space (up to ``rel_tol``).
    eigenvalues : (n,) ndarray
        Full spectrum of the doubly centred Gram matrix, descending.
    coordinates : (n, r) ndarray
        One column per significant axis, ordered by |eigenvalue| descending.
    signs : (r,) ndarray of int
        +1 for real axes, -1 for imaginary ones (negative eigenvalues).
    axis_eigenvalues : (r,) ndarray
        The eigenvalue behind each retained axis.
    max_reconstruction_error : float
        max |d_reconstructed - d_original| over all pairs, using the signed
        distance formula on the retained axes.
    """

    __slots__ = (
        "embeddable",
        "eigenvalues",
        "coordinates",
        "signs",
        "axis_eigenvalues",
        "max_reconstruction_error",
    )

    def __init__(self, embeddable, eigenvalues, coordinates, signs,
                 axis_eigenvalues, max_reconstruction_error):
        object.__setattr__(self, "embeddable", bool(embeddable))
        object.__setattr__(self, "eigenvalues", _frozen_array(eigenvalues))
        object.__setattr__(self, "coordinates", _frozen_array(coordinates))
        object.__setattr__(self, "signs", _frozen_array(signs, dtype=int))
        object.__setattr__(self, "axis_eigenvalues", _frozen_array(axis_eigenvalues))
        object.__setattr__(
            self, "max_reconstruction_error", float(max_reconstruction_error)
        )

    def __setattr__(self, name, value):
        raise AttributeError("EmbeddingReport is immutable")

    @property
    def significant_axes(self):
        return self.coordinates.shape[1]

    def __repr__(self):
        return "EmbeddingReport(embeddable=%s, axes=%d, signs=%s)" % (
            self.embeddable,
            self.significant_axes,
            self.signs.tolist(),
        )


# ---------------------------------------------------------------------------
# distances
# ---------------------------------------------------------------------------


def distance_matrix(dataset):
    """Pairwise Euclidean distances of a dataset.

    Parameters
    ----------
    dataset : Dataset

    Returns
    -------
    DistanceMatrix

    Raises
    ------
    ValueError
        If two points coincide (a distance table requires strictly
        positive off-diagonal entries).
    """
    pts = dataset.points
    diff = pts[:, None, :] - pts[None, :, :]
    d = np.sqrt(np.sum(diff * diff, axis=-1))
    dup = np.argwhere((d == 0.0) & ~np.eye(dataset.n, dtype=bool))
    if dup.size:
        i, j = dup[0]
        raise ValueError("points %d and %d coincide" % (i, j))
    return DistanceMatrix(d)


def validate_distance(values, require_metric=False):
    """Check a raw square table against the distance-table contract.

    Unlike the :class:`DistanceMatrix` constructor this never raises on bad
    data: every violation is collected and returned, so the report can be
    used as a witness.

    Parameters
    ----------
    values : (n, n) array_like
        Candidate table.
    require_metric : bool
        Also check all ordered triangle inequalities
        d(i,k) + d(k,j) >= d(i,j).  A relative slack of 1e-12 absorbs
        round-off on exactly-tight triples (collinear points).

    Returns
    -------
    ValidationReport
    """
    arr = np.asarray(values, dtype=float)
    violations = []
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        return ValidationReport(False, [{"kind": "shape", "shape": arr.shape}])
    n = arr.shape[0]
    bad = np.argwhere(~np.isfinite(arr))
    for i, j in bad:
        violations.append(
            {"kind": "finiteness", "indices": (int(i), int(j)), "value": float(arr[i, j])}
        )
    for i in range(n):
        if arr[i, i] != 0.0:
            violations.append(
                {"kind": "diagonal", "indices": (i, i), "value": float(arr[i, i])}
            )
    for i in range(n):
        for j in range(i + 1, n):
            if arr[i, j] != arr[j, i]:
                violations.append(
                    {
                        "kind": "symmetry",
                        "indices": (i, j),
                        "values": (float(arr[i, j]), float(arr[j, i])),
                    }
                )
            elif arr[i, j] <= 0.0:
                violations.append(
                    {"kind": "positivity", "indices": (i, j), "value": float(arr[i, j])}
                )
    if require_metric and not violations:
        # d(i,k) + d(k,j) < d(i,j) is a triangle violation witnessed by the
        # ordered triple (i, k, j).
        for i in range(n):
            for j in range(n):
                if i == j:
                    continue
                for k in range(n):
                    if k == i or k == j:
                        continue
                    lhs = arr[i, k] + arr[k, j]
                    if lhs < arr[i, j] * (1.0 - 1e-12):
                        violations.append(
                            {
                                "kind": "triangle",
                                "indices": (i, k, j),
                                "lhs": float(lhs),
                                "rhs": float(arr[i, j]),
                            }
                        )
    return ValidationReport(len(violations) == 0, violations)


# ---------------------------------------------------------------------------
# partition counting and enumeration
# ---------------------------------------------------------------------------


def stirling2(n, k):
    """Number of partitions of an n-set into exactly k non-empty blocks.

    Exact integer arithmetic via the alternating-sum formula
    S(n, k) = (1/k!) * sum_{j=0}^{k} (-1)^j C(k, j) (k - j)^n.
    """
    if n < 0 or k < 0:
        raise ValueError("n and k must be non-negative")
    if k > n:
        return 0
    if k == 0:
        return 1 if n == 0 else 0
    total = sum(
        (-1) ** j * math.comb(k, j) * (k - j) ** n for j in range(k + 1)
    )
    return total // math.factorial(k)


def bell_number(n):
    """Number of partitions of an n-set: B(n) = sum_{k=1}^{n} S(n, k)."""
    if n < 0:
        raise ValueError("n must be non-negative")
    if n == 0:
        return 1
    return sum(stirling2(n, k) for k in range(1, n + 1))


def _enumeration_cap():
    raw = os.environ.get(_ENUMERATION_CAP_ENV)
    if raw is None:
        return DEFAULT_ENUMERATION_CAP
    return int(raw)


def enumerate_partitions(n, k=None):
    """Yield every partition of {0, ..., n-1} in canonical order.

    The canonical order is the lexicographic order of restricted growth
    strings: the all-in-one-cluster partition comes first, the
    all-singletons partition last.  With ``k`` given, only partitions into
    exactly k clusters are produced (same relative order).

    The enumeration is refused for n beyond a safety cap (default
    %(cap)d, override with the %(env)s environment variable) because the
    count grows like the Bell numbers.

    Parameters
    ----------
    n : int
        Number of points, 1 <= n <= cap.
    k : int, optional
        Exact number of clusters to keep.

    Yields
    ------
    Partition
    """
    cap = _enumeration_cap()
    if not 1 <= n <= cap:
        raise ValueError(
            "partition enumeration supports 1 <= n <= %d (n=%d); "
            "set %s to raise the cap" % (cap, n, _ENUMERATION_CAP_ENV)
        )
    if k is not None and not 1 <= k <= n:
        raise ValueError("k must satisfy 1 <= k <= n, got k=%s" % (k,))

    rgs = np.zeros(n, dtype=int)

    def rec(i, used):
        if i == n:
            if k is None or used == k:
                blocks = [[] for _ in range(used)]
                for p in range(n):
                    blocks[rgs[p]].append(p)
                yield Partition(blocks)
            return
        # value v < used reuses an existing block, v == used opens a new one
        for v in range(used + 1):
            # prune: remaining positions cannot open enough new blocks
            if k is not None:
                new_used = max(used, v + 1)
                if new_used > k or new_used + (n - 1 - i) < k:
                    continue
            rgs[i] = v
            yield from rec(i + 1, max(used, v + 1))

    yield from rec(0, 0)


enumerate_partitions.__doc__ = enumerate_partitions.__doc__ % {
    "cap": DEFAULT_ENUMERATION_CAP,
    "env": _ENUMERATION_CAP_ENV,
}


def partition_count(n, k=None):
    """How many partitions :func:`enumerate_partitions` would yield."""
    return bell_number(n) if k is None else stirling2(n, k)


# ---------------------------------------------------------------------------
# signed embeddings
# ---------------------------------------------------------------------------


def embeddability_check(dist, rel_tol=1e-8):
    """Embed a dissimilarity table, allowing imaginary axes if needed.

    Double-centres the squared table, diagonalises, and keeps every axis
    whose |eigenvalue| exceeds ``rel_tol`` times the largest |eigenvalue|.
    Positive eigenvalues give ordinary coordinates; negative ones give
    "imaginary" axes which enter the distance formula with a minus sign.
    The table is Euclidean-embeddable exactly when no significant negative
    eigenvalue occurs.

    Parameters
    ----------
    dist : DistanceMatrix
    rel_tol : float
        Relative eigenvalue cut-off.  The default suits exact input; tables
        printed with few decimals need a cut-off above their rounding noise
        (e.g. 1e-4 for three-decimal tables).

    Returns
    -------
    EmbeddingReport
    """
    d = dist.values
    n = dist.n
    j = np.eye(n) - np.ones((n, n)) / n
    b = -0.5 * j @ (d * d) @ j
    b = 0.5 * (b + b.T)  # kill asymmetric round-off before eigh
    evals, evecs = np.linalg.eigh(b)

    order = np.argsort(evals)[::-1]
    spectrum = evals[order]

    scale = np.max(np.abs(evals))
    keep = np.abs(evals) > rel_tol * scale
    axis_order = np.argsort(-np.abs(evals[keep]))
    axis_evals = evals[keep][axis_order]
    axis_vecs = evecs[:, keep][:, axis_order]

    signs = np.where(axis_evals >= 0.0, 1, -1)
    coords = axis_vecs * np.sqrt(np.abs(axis_evals))[None, :]

    recon = rigid_distance_matrix(coords, signs, clamp=True)
    err = float(np.max(np.abs(recon - d))) if coords.size else float(np.max(np.abs(d)))

    return EmbeddingReport(
        embeddable=not np.any(axis_evals < 0.0),
        eigenvalues=spectrum,
        coordinates=coords,
        signs=signs,
        axis_eigenvalues=axis_evals,
        max_reconstruction_error=err,
    )


def rigid_distance_matrix(coords, signs, clamp=False):
    """Distances induced by signed coordinates.

    The squared distance is sum_d signs[d] * (x_id - x_jd)^2: real axes
    add, imaginary axes subtract.

    Parameters
    ----------
    coords : (n, r) array_like
    signs : (r,) array_like of +1 / -1
    clamp : bool
        With ``clamp=False`` a materially negative squared distance raises;
        with ``clamp=True`` it is clipped to zero (useful when reconstructing
        from a truncated axis set).

    Returns
    -------
    (n, n) ndarray
    """
    coords = np.asarray(coords, dtype=float)
    signs = np.asarray(signs, dtype=float)
    if coords.ndim != 2 or signs.shape != (coords.shape[1],):
        raise ValueError("coords must be (n, r) and signs (r,)")
    diff = coords[:, None, :] - coords[None, :, :]
    sq = np.einsum("ijd,d->ij", diff * diff, signs)
    if not clamp and np.any(sq < -1e-9 * max(1.0, np.max(np.abs(sq)))):
        raise ValueError("signed geometry yields a negative squared distance")
    return np.sqrt(np.clip(sq, 0.0, None))


def complex_objective(coords, signs, partition, centers=None):
    """k-means objective in a signed geometry.

    Q = sum over clusters j and members i of
    sum_d signs[d] * (x_id - c_jd)^2, with c_j the cluster mean unless
    explicit ``centers`` are given.  Imaginary axes contribute negatively,
    so Q may be arbitrarily small or even negative -- which is precisely
    the pathology this function exists to exhibit.

    Parameters
    ----------
    coords : (n, r) array_like
    signs : (r,) array_like of +1 / -1
    partition : Partition
    centers : (k, r) array_like, optional
        Explicit cluster centers, in the order of ``partition.clusters``.

    Returns
    -------
    float
    """
    coords = np.asarray(coords, dtype=float)
    signs = np.asarray(signs, dtype=float)
    if centers is not None:
        centers = np.asarray(centers, dtype=float)
        if centers.shape != (partition.k, coords.shape[1]):
            raise ValueError(
                "centers must be (k, r) = (%d, %d), got %s"
                % (partition.k, coords.shape[1], centers.shape)
            )
    total = 0.0
    for j, block in enumerate(partition.clusters):
        pts = coords[list(block)]
        c = pts.mean(axis=0) if centers is None else centers[j]
        diff = pts - c
        total += float(np.sum((diff * diff) @ signs))
    return total
