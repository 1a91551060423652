"""Ball-separation certificates and closed-form gap / seeding bounds.

Clusters are summarised as enclosing balls (centroid, max member
distance).  On top of those summaries this module decides which separation
regimes a clustered dataset satisfies — nice, perfect, core, absolute —
and provides the analytic bounds that turn separation into guarantees:
the minimal gap that makes cluster takeover unprofitable, the gap that
certifies global optimality, the admissible off-core mass, and seeding
success probabilities with the restart count needed for a target
confidence.
"""

import json
import math

import numpy as np


class BallSummary:
    """Enclosing ball of one cluster: centroid, max radius, cardinality."""

    __slots__ = ("center", "radius", "size")

    def __init__(self, center, radius, size):
        center = np.asarray(center, dtype=float)
        center.setflags(write=False)
        if radius < 0:
            raise ValueError("radius must be >= 0")
        if size < 1:
            raise ValueError("size must be >= 1")
        object.__setattr__(self, "center", center)
        object.__setattr__(self, "radius", float(radius))
        object.__setattr__(self, "size", int(size))

    def __setattr__(self, name, value):
        raise AttributeError("BallSummary is immutable")

    def __repr__(self):
        return "BallSummary(center=%s, radius=%.6g, size=%d)" % (
            self.center.tolist(),
            self.radius,
            self.size,
        )


class SeparationCertificate:
    """Which separation regimes a clustered dataset satisfies.

    Attributes
    ----------
    nice_ball : bool
        Every pair of clusters has center distance >= 4 max(r_A, r_B).
    perfect_ball : bool
        Center distances >= 4 rho with the single rho = max_j r_j.
    rho : float
        The global radius used by the perfect-ball test.
    core : bool
        Every pair has positive gap g_AB = dist - 2 max(r_A, r_B).
    core_pairs : tuple of dict
        Per pair: ``{"pair", "gap", "core_radius"}`` (core radius g/2).
    absolute : bool
        Min pairwise ball gap (dist - r_A - r_B) meets the sufficient
        global-optimality bound.
    absolute_required, absolute_actual : float
    absolute_cases : dict
        The two bound cases itemized.
    pairwise_center_distances : (k, k) ndarray
    """

    __slots__ = (
        "nice_ball",
        "perfect_ball",
        "rho",
        "core",
        "core_pairs",
        "absolute",
        "absolute_required",
        "absolute_actual",
        "absolute_cases",
        "pairwise_center_distances",
    )

    def __init__(self, nice_ball, perfect_ball, rho, core, core_pairs, absolute,
                 absolute_required, absolute_actual, absolute_cases,
                 pairwise_center_distances):
        dist = np.asarray(pairwise_center_distances, dtype=float)
        dist.setflags(write=False)
        object.__setattr__(self, "nice_ball", bool(nice_ball))
        object.__setattr__(self, "perfect_ball", bool(perfect_ball))
        object.__setattr__(self, "rho", float(rho))
        object.__setattr__(self, "core", bool(core))
        object.__setattr__(self, "core_pairs", tuple(core_pairs))
        object.__setattr__(self, "absolute", bool(absolute))
        object.__setattr__(self, "absolute_required", float(absolute_required))
        object.__setattr__(self, "absolute_actual", float(absolute_actual))
        object.__setattr__(self, "absolute_cases", dict(absolute_cases))
        object.__setattr__(self, "pairwise_center_distances", dist)

    def __setattr__(self, name, value):
        raise AttributeError("SeparationCertificate is immutable")

    def __repr__(self):
        return (
            "SeparationCertificate(nice=%s, perfect=%s, core=%s, absolute=%s)"
            % (self.nice_ball, self.perfect_ball, self.core, self.absolute)
        )

    def to_json(self):
        return json.dumps(
            {
                "nice_ball": self.nice_ball,
                "perfect_ball": self.perfect_ball,
                "rho": self.rho,
                "core": self.core,
                "core_pairs": [
                    {"pair": list(p["pair"]), "gap": p["gap"],
                     "core_radius": p["core_radius"]}
                    for p in self.core_pairs
                ],
                "absolute": self.absolute,
                "absolute_required": self.absolute_required,
                "absolute_actual": self.absolute_actual,
                "absolute_cases": self.absolute_cases,
                "pairwise_center_distances": self.pairwise_center_distances.tolist(),
            }
        )


# ---------------------------------------------------------------------------
# summaries and certificates
# ---------------------------------------------------------------------------


def ball_summaries(dataset, gamma):
    """Enclosing-ball summary (centroid, max radius, size) per cluster.

    Parameters
    ----------
    dataset : Dataset
    gamma : Partition

    Returns
    -------
    tuple of BallSummary
    """
    if gamma.n != dataset.n:
        raise ValueError("partition does not match dataset")
    out = []
    for block in gamma.clusters:
        sub = dataset.points[list(block)]
        center = sub.mean(axis=0)
        radius = float(np.max(np.sqrt(np.sum((sub - center) ** 2, axis=1))))
        out.append(BallSummary(center, radius, len(block)))
    return tuple(out)


def certify(dataset, gamma):
    """Decide every separation regime for a clustered dataset.

    All comparisons are boundary-inclusive: a pair of unit balls with
    centers exactly 4 apart counts as nicely separated.

    Parameters
    ----------
    dataset : Dataset
    gamma : Partition
        Must have at least 2 clusters.

    Returns
    -------
    SeparationCertificate
    """
    summaries = ball_summaries(dataset, gamma)
    k = len(summaries)
    if k < 2:
        raise ValueError("certification needs at least 2 clusters")
    centers = np.stack([s.center for s in summaries])
    dist = np.sqrt(
        np.sum((centers[:, None, :] - centers[None, :, :]) ** 2, axis=-1)
    )

    nice = True
    core = True
    core_pairs = []
    min_ball_gap = np.inf
    for i in range(k):
        for j in range(i + 1, k):
            rho_pair = max(summaries[i].radius, summaries[j].radius)
            if dist[i, j] < 4.0 * rho_pair:
                nice = False
            gap = dist[i, j] - 2.0 * rho_pair
            core_pairs.append(
                {"pair": (i, j), "gap": float(gap), "core_radius": float(gap / 2.0)}
            )
            if gap <= 0.0:
                core = False
            ball_gap = dist[i, j] - summaries[i].radius - summaries[j].radius
            min_ball_gap = min(min_ball_gap, ball_gap)

    rho = max(s.radius for s in summaries)
    off_diag = dist[~np.eye(k, dtype=bool)]
    perfect = bool(np.min(off_diag) >= 4.0 * rho)

    bound = absolute_gap_bound(summaries, k, dataset.n)
    absolute = min_ball_gap >= bound["bound"]

    return SeparationCertificate(
        nice_ball=nice,
        perfect_ball=perfect,
        rho=rho,
        core=core,
        core_pairs=core_pairs,
        absolute=absolute,
        absolute_required=bound["bound"],
        absolute_actual=float(min_ball_gap),
        absolute_cases={"case1": bound["case1"], "case2": bound["case2"]},
        pairwise_center_distances=dist,
    )


# ---------------------------------------------------------------------------
# closed-form bounds
# ---------------------------------------------------------------------------


def motion_gap_bound(n1, r1, n2, r2):
    """Minimal inter-ball gap making cluster takeover unprofitable.

    For two clusters of sizes n1, n2 enclosed in balls of radii r1, r2,
    a gap of at least r2 * sqrt(2 (1 + 0.5 n2/n1)) - r1 (floored at zero)
    guarantees that re-assigning any part of cluster 2 to cluster 1's
    center never lowers the objective.

    Parameters
    ----------
    n1, n2 : int
        Positive cluster sizes.
    r1, r2 : float
        Positive ball radii.

    Returns
    -------
    float
    """
    if n1 <= 0 or n2 <= 0:
        raise ValueError("cluster sizes must be positive")
    if r1 <= 0 or r2 <= 0:
        raise ValueError("radii must be positive")
    bound = r2 * math.sqrt(2.0 * (1.0 + 0.5 * n2 / n1)) - r1
    return max(bound, 0.0)


def absolute_gap_bound(summaries, k, n):
    """Sufficient inter-ball gap for certified global optimality.

    Two independent sufficient conditions are evaluated and the stricter
    one returned:

    - case 1: for every pair p != q,
      k * sqrt(n_p + n_q + n) * sqrt(sum_i n_i r_i^2 / (n_p n_q));
    - case 2: for every cluster i, r_i * sqrt(k (M + n) / m), with M and m
      the largest and smallest cluster size.

    Parameters
    ----------
    summaries : sequence of BallSummary
    k : int
        Number of clusters (must match the summaries).
    n : int
        Total number of points.

    Returns
    -------
    dict
        ``{"bound", "case1", "case2"}``.
    """
    summaries = list(summaries)
    if k < 2 or len(summaries) != k:
        raise ValueError("need k >= 2 summaries, got %d for k=%d" % (len(summaries), k))
    sizes = [s.size for s in summaries]
    if any(sz == 0 for sz in sizes):
        raise ValueError("degenerate summary with zero size")
    if sum(sizes) != n:
        raise ValueError("summary sizes add to %d, not n=%d" % (sum(sizes), n))
    weighted = sum(s.size * s.radius ** 2 for s in summaries)
    case1 = 0.0
    for p in range(k):
        for q in range(k):
            if p == q:
                continue
            case1 = max(
                case1,
                k
                * math.sqrt(sizes[p] + sizes[q] + n)
                * math.sqrt(weighted / (sizes[p] * sizes[q])),
            )
    big, small = max(sizes), min(sizes)
    case2 = max(
        (s.radius * math.sqrt(k * (big + n) / small) for s in summaries),
        default=0.0,
    )
    return {"bound": max(case1, case2), "case1": case1, "case2": case2}


def off_core_fraction_bound(g, rho, n_c, n):
    """Maximal fraction of a cluster allowed to lie off its core.

    With core quality q = g / (2 rho), the returned value is
    (q n_c) / (q n_c - q (n - n_c) + n), clamped to [0, 1]: the share of
    the cluster's points that may sit outside the core ball without
    breaking core-preserving assignment.

    Parameters
    ----------
    g : float
        Positive core gap.
    rho : float
        Positive ball radius scale.
    n_c : int
        Size of the cluster in question.
    n : int
        Total number of points, n >= n_c.

    Returns
    -------
    float
    """
    if g <= 0 or rho <= 0:
        raise ValueError("g and rho must be positive")
    if n_c <= 0 or n <= 0 or n_c > n:
        raise ValueError("need 0 < n_c <= n")
    q = g / (2.0 * rho)
    value = (q * n_c) / (q * n_c - q * (n - n_c) + n)
    return min(max(value, 0.0), 1.0)


def seeding_success(p, k, strategy, rho=None, target_confidence=None):
    """Probability that one seed lands in every cluster, plus restarts.

    For the uniform-random strategy the success probability is
    q = prod_{j=1}^{k-1} (1 - (k-j) p), with p the smallest cluster's
    share of the points.  For plus-plus seeding on 4-rho-separated data
    the per-step odds improve to 9 (k-j) p : 4 (1 - (k-j) p); the ball
    radius rho cancels out of the ratio and is accepted only for
    interface symmetry.  When a target confidence is given, the smallest
    restart count m with 1 - (1-q)^m >= confidence is returned alongside.

    Parameters
    ----------
    p : float
        Smallest cluster share, 0 < p <= 1/k.
    k : int
        Number of clusters, >= 2.
    strategy : str
        ``"uniform-random"`` or ``"plus-plus"``.
    rho : float, optional
        Ignored in the value (cancels); must be positive if given.
    target_confidence : float, optional
        In (0, 1); enables the restart count.

    Returns
    -------
    (float, int or None)
        ``(q, m)``; m is None when no target confidence was requested.
    """
    if k < 2:
        raise ValueError("k must be >= 2")
    if p <= 0:
        raise ValueError("p must be positive")
    if p > 1.0 / k:
        raise ValueError("p=%r exceeds 1/k; no cluster share can" % (p,))
    if rho is not None and rho <= 0:
        raise ValueError("rho must be positive when given")
    q = 1.0
    for j in range(1, k):
        hit = (k - j) * p
        if strategy == "uniform-random":
            q *= 1.0 - hit
        elif strategy == "plus-plus":
            q *= 9.0 * hit / (9.0 * hit + 4.0 * (1.0 - hit))
        else:
            raise ValueError("unknown seeding strategy %r" % (strategy,))
    m = None
    if target_confidence is not None:
        if not 0.0 < target_confidence < 1.0:
            raise ValueError("target_confidence must lie in (0, 1)")
        if q >= 1.0:
            m = 1
        else:
            m = math.ceil(math.log(1.0 - target_confidence) / math.log(1.0 - q))
            m = max(m, 1)
    return q, m
