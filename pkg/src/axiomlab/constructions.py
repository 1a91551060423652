"""Generators for datasets, fixtures and constructive proof objects.

Each function here builds a concrete geometry that makes some clustering
statement checkable: a line layout whose intended grouping is the exact
optimum of the k-means objective, two segment wings whose optimal
2-clustering flips under an admissible transform, a Gaussian mixture
calibrated to a known explained-variance ladder, and embeddings that
realise a given distance table as a well-separated point set.  The
verification suites drive these generators; none of them keeps state.
"""

import math

import numpy as np
from scipy.sparse.csgraph import connected_components

from .core import (
    Dataset,
    DistanceMatrix,
    Partition,
    _enumeration_cap,
    _frozen_array,
    distance_matrix,
    enumerate_partitions,
)
from .transforms import is_gamma_transform

# Minimum gap between consecutive line clusters.  The proportional rule in
# krich_line yields 0 while everything placed so far is a single point, and
# any value comfortably above the unit cluster width restores the recovery
# argument in that degenerate case.
_MIN_LINE_SPACING = 3.0

# Two wings of two open line segments each; rows are (segment, endpoint,
# xyz).  The right wing spreads in the (x, y) plane from its base point
# (1, 0, 0), the left wing in the (x, z) plane from (-1, 0, 0).
_SEGMENTS = np.array(
    [
        [[1.0, 0.0, 0.0], [33.0, 32.0, 0.0]],
        [[1.0, 0.0, 0.0], [33.0, -32.0, 0.0]],
        [[-1.0, 0.0, 0.0], [-33.0, 0.0, -32.0]],
        [[-1.0, 0.0, 0.0], [-33.0, 0.0, 32.0]],
    ]
)
_SEGMENTS.setflags(write=False)

# Angle (degrees) the right wing's segments make with the x-axis after the
# rotation; the unrotated wing opens at 45 degrees on either side.
_WING_ROTATION_DEG = 1.0

# Means of the bundled five-component mixture (unit variance, 200 points
# each).  Calibrated so that the population explained-variance ladder for
# k = 2..6 sits at about 54.3 / 72.2 / 83.5 / 90.2 / 90.8 per cent -- the
# regime the report grid pins with tolerance bands.
_MIXTURE_MEANS = np.array(
    [
        [-3.881085, -2.901218],
        [0.676571, -2.117253],
        [4.278207, -0.379281],
        [2.817042, 3.526093],
        [-3.890735, 1.871658],
    ]
)
_MIXTURE_MEANS.setflags(write=False)
_MIXTURE_POINTS_PER_COMPONENT = 200

# The bundled six-point fixture: a printed distance grid (three decimals)
# that is not a metric, and the signed coordinates that reproduce it
# rigidly once the third axis is taken imaginary.
_SIX_POINT_GRID = np.array(
    [
        [0.0, 10.0, 2.236, 20.0, 22.361, 20.125],
        [10.0, 0.0, 6.708, 22.361, 20.0, 21.095],
        [2.236, 6.708, 0.0, 20.125, 21.095, 20.0],
        [20.0, 22.361, 20.125, 0.0, 10.0, 2.236],
        [22.361, 20.0, 21.095, 10.0, 0.0, 6.708],
        [20.125, 21.095, 20.0, 2.236, 6.708, 0.0],
    ]
)
_SIX_POINT_GRID.setflags(write=False)
_SIX_POINT_COORDS = np.array(
    [
        [5.0 + 0.0j, 10.0 + 0.0j, 0.0 + 1.0j],
        [-5.0 + 0.0j, 10.0 + 0.0j, 0.0 + 1.0j],
        [2.0 + 0.0j, 10.0 + 0.0j, 0.0 - 1.0j],
        [5.0 + 0.0j, -10.0 + 0.0j, 0.0 + 1.0j],
        [-5.0 + 0.0j, -10.0 + 0.0j, 0.0 + 1.0j],
        [2.0 + 0.0j, -10.0 + 0.0j, 0.0 - 1.0j],
    ]
)
_SIX_POINT_COORDS.setflags(write=False)


# ---------------------------------------------------------------------------
# line layouts
# ---------------------------------------------------------------------------


def krich_line(cluster_sizes):
    """Lay clusters out on a line so the intended grouping is the exact
    k-means optimum.

    Clusters are placed left to right in non-increasing size order.  A
    cluster of size s occupies s equally spaced points spanning a unit
    interval (a single point for s = 1).  The gap before the next cluster
    of size s is

        max(2 * span * (placed + s) / s, 3)

    where ``span`` is the extreme-point distance of everything placed so
    far and ``placed`` its cardinality: far enough that grouping points
    across the intended boundary always costs more than any within-cluster
    saving, for every cluster count.

    Parameters
    ----------
    cluster_sizes : sequence of int
        One entry per intended cluster, each >= 1.  Order does not
        matter; sizes are sorted non-increasingly before placement.

    Returns
    -------
    (Dataset, Partition)
        One-dimensional points and the intended grouping, indexed left to
        right.
    """
    sizes = sorted((int(s) for s in cluster_sizes), reverse=True)
    if not sizes:
        raise ValueError("cluster_sizes must be non-empty")
    if sizes[-1] < 1:
        raise ValueError("cluster sizes must all be >= 1, got %s" % (sizes,))

    positions = []
    clusters = []
    for i, size in enumerate(sizes):
        if i == 0:
            start = 0.0
        else:
            span = positions[-1] - positions[0]
            placed = len(positions)
            spacing = max(2.0 * span * (placed + size) / size, _MIN_LINE_SPACING)
            start = positions[-1] + spacing
        first = len(positions)
        if size == 1:
            positions.append(start)
        else:
            positions.extend(start + j / (size - 1) for j in range(size))
        clusters.append(list(range(first, first + size)))
    data = Dataset(np.asarray(positions)[:, None])
    return data, Partition(clusters)


# ---------------------------------------------------------------------------
# segment wings
# ---------------------------------------------------------------------------


def _rotated_segments_endpoints():
    segs = np.array(_SEGMENTS)
    angle = math.radians(_WING_ROTATION_DEG)
    for row, side in ((0, 1.0), (1, -1.0)):
        base, tip = segs[row]
        length = float(np.linalg.norm(tip - base))
        segs[row, 1] = base + length * np.array(
            [math.cos(angle), side * math.sin(angle), 0.0]
        )
    return segs


def rotated_segments(rotated, points_per_segment=1000, rng=None):
    """Sample two wings of line segments, optionally with the right wing
    folded almost flat.

    Unrotated, the right wing's two segments open at +-45 degrees in the
    (x, y) plane while the left wing's open at +-90 degrees in the (x, z)
    plane; the best 2-clustering then separates the wings.  With
    ``rotated`` the right wing's segments are rigidly rotated about their
    shared base point down to +-1 degree off the x-axis -- a transform
    that only tightens within-wing distances and only stretches
    cross-wing ones, yet moves the optimal 2-clustering to a split
    through the folded wing.

    Points are drawn segment by segment (wing by wing), so rows
    ``[0, 2 * points_per_segment)`` are the right wing; see
    :func:`wing_partition`.  The curve parameters are drawn before the
    endpoint choice is applied, so two calls with identically seeded
    generators produce matched point identities -- the rotated cloud is a
    reparameterisation of the unrotated one, which is what makes pairwise
    before/after comparisons well-defined.

    Parameters
    ----------
    rotated : bool
        Fold the right wing.
    points_per_segment : int
        Samples per segment (4 segments in total).
    rng : numpy.random.Generator, int seed, or None
        Randomness source for the uniform draws.

    Returns
    -------
    Dataset
    """
    points_per_segment = int(points_per_segment)
    if points_per_segment < 1:
        raise ValueError("points_per_segment must be >= 1")
    rng = np.random.default_rng(rng)
    # (0, 1] keeps the two segments of a wing from colliding at the shared
    # base point
    t = 1.0 - rng.random((len(_SEGMENTS), points_per_segment))
    segs = _rotated_segments_endpoints() if rotated else _SEGMENTS
    base = segs[:, 0, None, :]
    span = segs[:, 1, None, :] - base
    pts = base + t[:, :, None] * span
    return Dataset(pts.reshape(len(_SEGMENTS) * points_per_segment, 3))


def wing_partition(points_per_segment):
    """The intended 2-grouping of :func:`rotated_segments` output: the two
    segments sharing the right base point versus the two sharing the left
    one."""
    points_per_segment = int(points_per_segment)
    if points_per_segment < 1:
        raise ValueError("points_per_segment must be >= 1")
    half = 2 * points_per_segment
    return Partition([range(half), range(half, 2 * half)])


# ---------------------------------------------------------------------------
# Gaussian mixtures
# ---------------------------------------------------------------------------


class MixtureSpec:
    """Sampling specification for a finite Gaussian mixture.

    Attributes
    ----------
    means : ndarray, shape (k, m)
    covariances : ndarray, shape (k, m, m)
        Symmetric positive semi-definite per component.  The constructor
        also accepts a length-k vector of variances as an isotropic
        shorthand.
    counts : ndarray of int, shape (k,)
        Points to draw per component, each >= 1.
    """

    __slots__ = ("means", "covariances", "counts")

    def __init__(self, means, covariances, counts):
        means = np.asarray(means, dtype=float)
        if means.ndim != 2 or means.shape[0] < 1:
            raise ValueError("means must have shape (k, m), got %s" % (means.shape,))
        k, m = means.shape
        covariances = np.asarray(covariances, dtype=float)
        if covariances.shape == (k,):
            covariances = covariances[:, None, None] * np.eye(m)[None, :, :]
        if covariances.shape != (k, m, m):
            raise ValueError(
                "covariances must have shape (k, m, m) or (k,), got %s"
                % (covariances.shape,)
            )
        for c in covariances:
            if not np.allclose(c, c.T, rtol=0.0, atol=1e-12):
                raise ValueError("covariance is not symmetric")
            eigs = np.linalg.eigvalsh((c + c.T) / 2.0)
            if eigs[0] < -1e-12 * max(1.0, eigs[-1]):
                raise ValueError("covariance is not positive semi-definite")
        counts = np.asarray(counts, dtype=int)
        if counts.shape != (k,) or (counts < 1).any():
            raise ValueError("counts must be k positive integers")
        object.__setattr__(self, "means", _frozen_array(means))
        object.__setattr__(self, "covariances", _frozen_array(covariances))
        object.__setattr__(self, "counts", _frozen_array(counts, dtype=int))

    def __setattr__(self, name, value):
        raise AttributeError("MixtureSpec is immutable")

    @property
    def k(self):
        return self.means.shape[0]

    @property
    def n(self):
        return int(self.counts.sum())

    def __repr__(self):
        return "MixtureSpec(k=%d, m=%d, n=%d)" % (
            self.k,
            self.means.shape[1],
            self.n,
        )

    def partition(self):
        """Intended grouping of a sample drawn from this spec.

        Points are emitted component by component, so component i owns the
        i-th contiguous index block.
        """
        edges = np.concatenate([[0], np.cumsum(self.counts)])
        return Partition(
            [range(int(edges[i]), int(edges[i + 1])) for i in range(self.k)]
        )


def default_mixture_spec():
    """The bundled five-component spec: isotropic unit variance in the
    plane, 200 points per component, means frozen by calibration (see the
    module constants)."""
    return MixtureSpec(
        _MIXTURE_MEANS,
        np.ones(len(_MIXTURE_MEANS)),
        np.full(len(_MIXTURE_MEANS), _MIXTURE_POINTS_PER_COMPONENT),
    )


def gaussian_mixture(spec, rng=None):
    """Draw a Dataset from a :class:`MixtureSpec`, component by component.

    A zero covariance is legal and puts every point of that component
    exactly at its mean.
    """
    if not isinstance(spec, MixtureSpec):
        raise TypeError("spec must be a MixtureSpec, got %r" % type(spec).__name__)
    rng = np.random.default_rng(rng)
    blocks = [
        rng.multivariate_normal(mean, cov, size=int(count))
        for mean, cov, count in zip(spec.means, spec.covariances, spec.counts)
    ]
    return Dataset(np.vstack(blocks))


def collapse_to_two_groups(dataset, gamma, lam=0.1, explained=0.98):
    """Shrink every cluster and relocate the shrunken clusters into two far
    groups along the first axis.

    The first half of gamma's clusters (canonical order) forms the left
    group, the rest the right group; within a group the cluster centers
    sit ``s`` apart, with ``s`` twice the largest original pairwise
    distance, and the gap between the group means is solved so that the
    two-group split explains exactly ``explained`` of the variance
    (between-SS = explained / (1 - explained) times the layout's
    within-SS).  Shrinking only tightens within-cluster distances and the
    relocation only stretches cross-cluster ones, so the result is an
    admissible transform of the input for gamma.  A target small enough
    to need a cross-group gap below the original spread cannot be
    realised that way and raises ValueError.

    Parameters
    ----------
    dataset : Dataset
    gamma : Partition
        At least two clusters, covering the dataset.
    lam : float
        Per-cluster shrink factor in (0, 1].
    explained : float
        Target explained-variance fraction of the two-group split,
        in (0, 1).

    Returns
    -------
    Dataset
    """
    if gamma.k < 2:
        raise ValueError("need at least two clusters to form two groups")
    if gamma.n != dataset.n:
        raise ValueError("partition covers %d points, dataset has %d" % (gamma.n, dataset.n))
    if not 0.0 < lam <= 1.0:
        raise ValueError("lam must be in (0, 1], got %s" % (lam,))
    if not 0.0 < explained < 1.0:
        raise ValueError("explained must be in (0, 1), got %s" % (explained,))

    pts = dataset.points
    n, m = pts.shape
    d_before = distance_matrix(dataset)
    s = 2.0 * float(d_before.values.max())

    half = gamma.k // 2
    groups = (gamma.clusters[:half], gamma.clusters[half:])
    out = np.zeros_like(pts)
    for clusters in groups:
        for j, members in enumerate(clusters):
            idx = np.fromiter(members, dtype=int)
            mu = pts[idx].mean(axis=0)
            out[idx] = lam * (pts[idx] - mu)
            out[idx, 0] += s * (j - (len(clusters) - 1) / 2.0)

    a_idx = np.concatenate([np.fromiter(c, dtype=int) for c in groups[0]])
    b_idx = np.concatenate([np.fromiter(c, dtype=int) for c in groups[1]])
    layout_ss = float(
        ((out[a_idx] - out[a_idx].mean(axis=0)) ** 2).sum()
        + ((out[b_idx] - out[b_idx].mean(axis=0)) ** 2).sum()
    )
    ratio = explained / (1.0 - explained)
    # between-SS of a 2-group split is (na * nb / n) * gap^2; solve the gap
    gap = math.sqrt(ratio * layout_ss * n / (len(a_idx) * len(b_idx)))
    out[b_idx, 0] += gap - (out[b_idx, 0].mean() - out[a_idx, 0].mean())

    result = Dataset(out)
    ok, violations = is_gamma_transform(d_before, distance_matrix(result), gamma)
    if not ok:
        raise ValueError(
            "explained=%g is too small to realise without pulling the groups "
            "closer than the original data (%d cross-cluster violations)"
            % (explained, len(violations))
        )
    return result


# ---------------------------------------------------------------------------
# bundled fixtures
# ---------------------------------------------------------------------------


def fixture_tables():
    """The bundled six-point fixture: its printed distance grid and the
    complex coordinates that reproduce it rigidly.

    The grid is not a metric (the triangle inequality fails through the
    grid's third point) and no real Euclidean embedding exists; making the
    third coordinate axis imaginary fixes that.  Reconstruction from the
    coordinates matches the grid only to about 1e-3 because the grid
    itself is printed rounded to three decimals.

    Returns
    -------
    (DistanceMatrix, ndarray)
        The 6x6 grid and the 6x3 complex coordinate table.
    """
    return DistanceMatrix(_SIX_POINT_GRID), np.array(_SIX_POINT_COORDS)


# ---------------------------------------------------------------------------
# distance-table embeddings
# ---------------------------------------------------------------------------


def embed_partition(d, gamma, m=1):
    """Realise a partition of a distance table as well-separated balls.

    Cluster i becomes a ball of radius r_i = half its smallest
    within-cluster distance (0 for a singleton) with its members equally
    spaced across the ball's diameter on the first axis; consecutive ball
    centers sit dmax + r_i + r_{i+1} apart, dmax being the largest input
    distance.  Any two points inside one ball end up at most 2 r_i apart
    (no farther than they started) and points of different balls at least
    dmax apart (no closer), so the embedded set is an admissible transform
    of the input for gamma -- asserted before returning.

    Parameters
    ----------
    d : DistanceMatrix
    gamma : Partition
        Must cover the table's points.
    m : int
        Embedding dimension; the construction lives on the first axis and
        pads the rest with zeros.

    Returns
    -------
    Dataset
    """
    if not isinstance(d, DistanceMatrix):
        raise TypeError("d must be a DistanceMatrix, got %r" % type(d).__name__)
    if gamma.n != d.n:
        raise ValueError("partition covers %d points, table has %d" % (gamma.n, d.n))
    m = int(m)
    if m < 1:
        raise ValueError("m must be >= 1")

    arr = d.values
    dmax = float(arr.max())
    radii = []
    for members in gamma.clusters:
        if len(members) == 1:
            radii.append(0.0)
        else:
            idx = np.fromiter(members, dtype=int)
            within = arr[np.ix_(idx, idx)]
            radii.append(0.5 * float(within[np.triu_indices(len(idx), 1)].min()))

    pts = np.zeros((d.n, m))
    center = 0.0
    for i, members in enumerate(gamma.clusters):
        if i > 0:
            center += dmax + radii[i - 1] + radii[i]
        if len(members) == 1:
            coords = [center]
        else:
            coords = center + np.linspace(-radii[i], radii[i], len(members))
        for slot, member in enumerate(members):
            pts[member, 0] = coords[slot]

    out = Dataset(pts)
    ok, violations = is_gamma_transform(d, distance_matrix(out), gamma)
    assert ok, "ball embedding must be admissible for its partition: %r" % (
        violations[:3],
    )
    return out


# ---------------------------------------------------------------------------
# threshold clustering
# ---------------------------------------------------------------------------


def threshold_clustering(data):
    """Axis-threshold clustering: link two points when they are strictly
    closer than spread / (n + 1) in every dimension, then close the links
    transitively.

    Each dimension contributes its own threshold -- that dimension's
    extreme spread divided by n + 1 -- so the function is scale-invariant
    by construction, and under the per-dimension maximum metric the
    minimum distance between clusters is at least the threshold.  The rule
    needs an unambiguous extreme pair per dimension: if any dimension with
    positive spread attains its maximum or minimum at more than one point,
    the function refuses (note a zero-spread dimension alongside spread
    ones also refuses -- every pair ties at distance 0 there).  All points
    identical is the one degenerate case with an answer: a single cluster.

    A :class:`DistanceMatrix` is accepted too; the table form uses one
    global threshold, the largest entry divided by n + 1, and needs no
    tie rule.

    Parameters
    ----------
    data : Dataset or DistanceMatrix

    Returns
    -------
    Partition
    """
    if isinstance(data, DistanceMatrix):
        arr = data.values
        n = arr.shape[0]
        linked = arr < arr.max() / (n + 1.0)
        _, labels = connected_components(linked, directed=False)
        return Partition.from_labels(labels)
    if not isinstance(data, Dataset):
        raise TypeError(
            "data must be a Dataset or DistanceMatrix, got %r" % type(data).__name__
        )

    pts = data.points
    n = pts.shape[0]
    lo = pts.min(axis=0)
    hi = pts.max(axis=0)
    spread = hi - lo
    if not spread.any():
        return Partition([range(n)])
    for j in range(pts.shape[1]):
        if (pts[:, j] == hi[j]).sum() != 1 or (pts[:, j] == lo[j]).sum() != 1:
            raise ValueError(
                "dimension %d has no unique extreme pair; "
                "the threshold rule refuses ties" % j
            )
    thresholds = spread / (n + 1.0)
    gaps = np.abs(pts[:, None, :] - pts[None, :, :])
    linked = (gaps < thresholds).all(axis=2)
    _, labels = connected_components(linked, directed=False)
    return Partition.from_labels(labels)


# ---------------------------------------------------------------------------
# prefix-optimal partitions
# ---------------------------------------------------------------------------


def parity_quality(dataset, partition):
    """Score a partition by block-size parity alone: 0 for a perfect
    pairing (every cluster exactly two points), otherwise one plus the
    number of odd-size clusters.

    Deliberately not a geometric objective: an even prefix is best served
    by a pairing while an odd prefix cannot have one (the canonical tie
    rule then favours one big block), so consecutive prefix optima cannot
    refine each other.  Exists to demonstrate that incremental clustering
    has no ground to stand on when the quality function is unconstrained.
    """
    sizes = [len(c) for c in partition.clusters]
    if all(s == 2 for s in sizes):
        return 0.0
    return 1.0 + sum(1 for s in sizes if s % 2)


def exhaustive_best_partition(dataset, quality):
    """Best partition of every prefix of the dataset, by exhaustive search.

    For each prefix length 2..n, scores every partition of the first
    points with ``quality(prefix_dataset, partition)`` and keeps the
    minimizer, earliest in canonical order on ties.  Prefix optima need
    not nest: the minimizer over n + 1 points may split what the
    minimizer over n points kept together.

    Parameters
    ----------
    dataset : Dataset
        n must be within the enumeration cap.
    quality : callable
        ``quality(Dataset, Partition) -> float``; lower is better.

    Returns
    -------
    list of Partition
        Entry i is the best partition of the first i + 2 points.
    """
    n = dataset.n
    cap = _enumeration_cap()
    if n > cap:
        raise ValueError(
            "prefix search enumerates every partition and needs n <= %d, got %d"
            % (cap, n)
        )
    pts = dataset.points
    best_per_prefix = []
    for size in range(2, n + 1):
        prefix = Dataset(pts[:size])
        best = None
        best_val = math.inf
        for part in enumerate_partitions(size):
            val = float(quality(prefix, part))
            if best is None or val < best_val:
                best, best_val = part, val
        best_per_prefix.append(best)
    return best_per_prefix
