"""The k-means objective and its optimisers.

Contains the dual-form objective evaluator, seeding strategies, Lloyd
iteration with deterministic tie-breaking, an exhaustive branch-and-bound
global optimiser for small n, single-point-move local-minimum
certification, a bounded-memory streaming variant, and diagnostics that
decide whether a clustering is trustworthy (ball separation of the result,
candidate cluster trees).

Every objective evaluation that matters is computed along two independent
routes (centroid scatter vs. pairwise distances, incremental vs. direct)
and cross-checked; a disagreement raises immediately instead of producing
a quietly wrong number.
"""

import json
from dataclasses import dataclass

import numpy as np
from scipy.cluster.hierarchy import linkage
from scipy.spatial.distance import pdist

from .core import Dataset, Partition, _enumeration_cap, _ENUMERATION_CAP_ENV

SEEDING_STRATEGIES = ("uniform-random", "plus-plus", "explicit-centers")

# relative tolerance for the centroid-form vs pairwise-form identity
_DUAL_FORM_RTOL = 1e-9


@dataclass(frozen=True)
class KMeansConfig:
    """Configuration for :func:`kmeans`.

    Attributes
    ----------
    k : int
        Number of clusters, >= 2.
    seeding : str
        One of ``"uniform-random"``, ``"plus-plus"``,
        ``"explicit-centers"``.
    restarts : int
        Independent seedings to try; the best final objective wins.
    max_iterations : int
        Cap on Lloyd center updates per restart.
    rng_seed : int or None
        Master seed; restarts use spawned child generators, so the whole
        run is reproducible.
    """

    k: int
    seeding: str = "plus-plus"
    restarts: int = 1
    max_iterations: int = 100
    rng_seed: int | None = None

    def __post_init__(self):
        if self.k < 2:
            raise ValueError("k must be >= 2, got %d" % self.k)
        if self.seeding not in SEEDING_STRATEGIES:
            raise ValueError(
                "seeding must be one of %s, got %r" % (SEEDING_STRATEGIES, self.seeding)
            )
        if self.restarts < 1:
            raise ValueError("restarts must be >= 1")
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be >= 1")


class ClusteringResult:
    """Immutable outcome of a clustering run.

    ``centers`` are always the means of ``partition``'s clusters, in the
    partition's canonical cluster order.
    """

    __slots__ = ("partition", "centers", "q", "iterations",
                 "explained_variance", "converged")

    def __init__(self, partition, centers, q, iterations, explained_variance,
                 converged):
        centers = np.array(centers, dtype=float)
        centers.setflags(write=False)
        object.__setattr__(self, "partition", partition)
        object.__setattr__(self, "centers", centers)
        object.__setattr__(self, "q", float(q))
        object.__setattr__(self, "iterations", int(iterations))
        object.__setattr__(self, "explained_variance", float(explained_variance))
        object.__setattr__(self, "converged", bool(converged))

    def __setattr__(self, name, value):
        raise AttributeError("ClusteringResult is immutable")

    def __repr__(self):
        return "ClusteringResult(k=%d, q=%.6g, iterations=%d, converged=%s)" % (
            self.partition.k,
            self.q,
            self.iterations,
            self.converged,
        )

    def to_json(self):
        return json.dumps(
            {
                "clusters": [list(b) for b in self.partition.clusters],
                "centers": self.centers.tolist(),
                "q": self.q,
                "iterations": self.iterations,
                "explained_variance": self.explained_variance,
                "converged": self.converged,
            }
        )

    @classmethod
    def from_json(cls, text):
        raw = json.loads(text)
        return cls(
            Partition(raw["clusters"]),
            np.asarray(raw["centers"], dtype=float),
            raw["q"],
            raw["iterations"],
            raw["explained_variance"],
            raw["converged"],
        )


# ---------------------------------------------------------------------------
# objective
# ---------------------------------------------------------------------------


def _scatter(pts):
    """Sum of squared distances of rows to their mean."""
    if len(pts) == 0:
        return 0.0
    diff = pts - pts.mean(axis=0)
    return float(np.sum(diff * diff))


def objective_q(dataset, partition):
    """k-means objective of a partition, computed along both classic forms.

    The centroid form sums squared distances to cluster means; the pairwise
    form sums, per cluster, all squared point-point distances divided by the
    cluster size.  The two are equal by algebra, and this function verifies
    that numerically (relative tolerance 1e-9) on every call.

    Parameters
    ----------
    dataset : Dataset
    partition : Partition

    Returns
    -------
    float
        The centroid-form value.
    """
    pts = dataset.points
    if partition.n != dataset.n:
        raise ValueError(
            "partition covers %d points, dataset has %d" % (partition.n, dataset.n)
        )
    centroid_form = 0.0
    pairwise_form = 0.0
    for block in partition.clusters:
        sub = pts[list(block)]
        centroid_form += _scatter(sub)
        if len(sub) > 1:
            d2 = pdist(sub, metric="sqeuclidean")
            pairwise_form += float(np.sum(d2)) / len(sub)
    gap = abs(centroid_form - pairwise_form)
    assert gap <= _DUAL_FORM_RTOL * max(1.0, centroid_form, pairwise_form), (
        "centroid form %r and pairwise form %r disagree" % (centroid_form, pairwise_form)
    )
    return centroid_form


def explained_variance(dataset, result):
    """Fraction of total scatter explained: 1 - Q / TSS.

    ``result`` may be a :class:`ClusteringResult` (its ``q`` is used) or a
    :class:`~axiomlab.core.Partition` (Q is computed).  A dataset whose
    points all coincide has TSS = 0 and is fully explained by anything.
    """
    tss = _scatter(dataset.points)
    if isinstance(result, ClusteringResult):
        q = result.q
    elif isinstance(result, Partition):
        q = objective_q(dataset, result)
    else:
        raise TypeError("result must be ClusteringResult or Partition")
    if tss == 0.0:
        return 1.0
    return 1.0 - q / tss


# ---------------------------------------------------------------------------
# seeding
# ---------------------------------------------------------------------------


def seed(dataset, k, strategy, rng):
    """Draw k initial centers from the dataset's points.

    ``"uniform-random"`` picks k distinct point indices uniformly;
    ``"plus-plus"`` picks the first uniformly and each next point with
    probability proportional to its squared distance to the nearest center
    chosen so far.  With k equal to the number of points, every point is a
    center and no randomness is consumed.

    Parameters
    ----------
    dataset : Dataset
    k : int
        2 <= k <= n.
    strategy : str
        ``"uniform-random"`` or ``"plus-plus"``.
    rng : numpy.random.Generator

    Returns
    -------
    (k, m) ndarray
    """
    pts = dataset.points
    n = dataset.n
    if not 2 <= k <= n:
        raise ValueError("need 2 <= k <= n, got k=%d, n=%d" % (k, n))
    if strategy not in ("uniform-random", "plus-plus"):
        raise ValueError("unknown seeding strategy %r" % (strategy,))
    if k == n:
        return pts.copy()
    if strategy == "uniform-random":
        idx = rng.choice(n, size=k, replace=False)
        return pts[idx].copy()
    # plus-plus
    chosen = [int(rng.integers(n))]
    d2 = np.sum((pts - pts[chosen[0]]) ** 2, axis=1)
    while len(chosen) < k:
        total = float(d2.sum())
        if total == 0.0:
            # every remaining point coincides with a center; fall back to
            # a uniform pick among the unchosen indices
            mask = np.ones(n, dtype=bool)
            mask[chosen] = False
            nxt = int(rng.choice(np.flatnonzero(mask)))
        else:
            nxt = int(rng.choice(n, p=d2 / total))
        chosen.append(nxt)
        d2 = np.minimum(d2, np.sum((pts - pts[nxt]) ** 2, axis=1))
    return pts[chosen].copy()


# ---------------------------------------------------------------------------
# Lloyd iteration
# ---------------------------------------------------------------------------


def _assign(pts, centers):
    """Nearest-center labels; exact ties go to the lowest center index."""
    d2 = np.sum((pts[:, None, :] - centers[None, :, :]) ** 2, axis=-1)
    return np.argmin(d2, axis=1)


def _partition_scatter(pts, labels, k):
    total = 0.0
    for j in range(k):
        total += _scatter(pts[labels == j])
    return total


def _fix_empty_clusters(pts, centers, labels, k):
    """Re-home one point per empty cluster; returns number of events.

    The point moved into an empty slot is the one farthest from its
    currently assigned center, excluding points that are alone in their
    cluster (moving those would just shift the hole around).
    """
    events = 0
    for c in range(k):
        while not np.any(labels == c):
            counts = np.bincount(labels, minlength=k)
            eligible = counts[labels] > 1
            if not np.any(eligible):
                raise RuntimeError("cannot repopulate empty cluster %d" % c)
            dist2 = np.sum((pts - centers[labels]) ** 2, axis=1)
            dist2[~eligible] = -np.inf
            labels[int(np.argmax(dist2))] = c
            events += 1
    return events


def _lloyd_core(pts, centers, max_iterations):
    """Run Lloyd until membership stabilises; returns raw state.

    Returns
    -------
    labels, updates, converged, empty_events
    """
    k = centers.shape[0]
    centers = centers.astype(float).copy()
    prev = None
    updates = 0
    empty_events = 0
    q_prev = np.inf
    converged = False
    while True:
        labels = _assign(pts, centers)
        empty_events += _fix_empty_clusters(pts, centers, labels, k)
        if prev is not None and np.array_equal(labels, prev):
            converged = True
            break
        q_here = _partition_scatter(pts, labels, k)
        # Lloyd's objective never increases: the assignment step and the
        # empty-cluster fix both only remove scatter, the mean update is
        # optimal for fixed membership.
        assert q_here <= q_prev * (1.0 + 1e-9) + 1e-12, (
            "objective increased from %r to %r" % (q_prev, q_here)
        )
        q_prev = q_here
        if updates >= max_iterations:
            break
        for j in range(k):
            centers[j] = pts[labels == j].mean(axis=0)
        updates += 1
        prev = labels
    return labels, updates, converged, empty_events


def lloyd(dataset, initial_centers, config):
    """Lloyd iteration from explicit initial centers.

    Points are assigned to the nearest center (ties: lowest center index);
    an empty cluster is repopulated with the point farthest from its own
    center; convergence means an assignment pass changed no membership.
    ``iterations`` counts center updates, so a start that is already a
    fixed point reports 1.

    Parameters
    ----------
    dataset : Dataset
    initial_centers : (k, m) array_like
    config : KMeansConfig
        Only ``max_iterations`` (and the consistency of ``k``) matter here.

    Returns
    -------
    ClusteringResult
    """
    pts = dataset.points
    centers = np.asarray(initial_centers, dtype=float)
    if centers.ndim != 2 or centers.shape[1] != dataset.m:
        raise ValueError("initial_centers must be (k, %d)" % dataset.m)
    k = centers.shape[0]
    if k != config.k:
        raise ValueError("config.k=%d but %d centers given" % (config.k, k))
    if k > dataset.n:
        raise ValueError("more centers than points")
    labels, updates, converged, _ = _lloyd_core(pts, centers, config.max_iterations)
    return _result_from_labels(dataset, labels, k, updates, converged)


def _result_from_labels(dataset, labels, k, iterations, converged):
    partition = Partition.from_labels(labels)
    if partition.k != k:
        raise RuntimeError("expected %d clusters, got %d" % (k, partition.k))
    centers = np.stack(
        [dataset.points[list(b)].mean(axis=0) for b in partition.clusters]
    )
    q = objective_q(dataset, partition)
    ev = explained_variance(dataset, partition)
    return ClusteringResult(partition, centers, q, iterations, ev, converged)


def kmeans(dataset, config, initial_centers=None):
    """Full k-means driver: seed, run Lloyd, repeat, keep the best.

    With ``seeding="explicit-centers"`` the given ``initial_centers`` are
    used for a single run.  Otherwise ``config.restarts`` independent
    seedings are drawn from child generators spawned off
    ``config.rng_seed`` and the result with the smallest objective wins
    (first winner kept on exact ties).

    Parameters
    ----------
    dataset : Dataset
    config : KMeansConfig
    initial_centers : (k, m) array_like, required iff explicit-centers

    Returns
    -------
    ClusteringResult
    """
    if config.seeding == "explicit-centers":
        if initial_centers is None:
            raise ValueError("explicit-centers seeding requires initial_centers")
        return lloyd(dataset, initial_centers, config)
    if initial_centers is not None:
        raise ValueError("initial_centers only allowed with explicit-centers")
    children = np.random.SeedSequence(config.rng_seed).spawn(config.restarts)
    best = None
    for child in children:
        rng = np.random.default_rng(child)
        centers = seed(dataset, config.k, config.seeding, rng)
        result = lloyd(dataset, centers, config)
        if best is None or result.q < best.q:
            best = result
    return best


# ---------------------------------------------------------------------------
# exhaustive optimisation
# ---------------------------------------------------------------------------


def _check_exhaustive_size(n):
    cap = _enumeration_cap()
    if n > cap:
        raise ValueError(
            "exhaustive search supports n <= %d (n=%d); set %s to raise the cap"
            % (cap, n, _ENUMERATION_CAP_ENV)
        )


def kmeans_ideal(dataset, k):
    """Exhaustive global optimum of the k-means objective.

    Walks every partition of the points into exactly k clusters in
    canonical order, with branch-and-bound pruning (the within-cluster
    scatter of a partial partition can only grow as points are added, so a
    partial sum already at or above the incumbent is dead).  On objective
    ties the earliest partition in canonical order wins.

    Subject to the same size cap as partition enumeration.

    Parameters
    ----------
    dataset : Dataset
    k : int
        1 <= k <= n.

    Returns
    -------
    ClusteringResult
        ``iterations`` is the number of complete partitions evaluated.
    """
    best_rgs, _, leaves, _ = _ideal_search(dataset, k)
    labels = np.asarray(best_rgs)
    return _result_from_labels(dataset, labels, k, leaves, True)


def _ideal_search(dataset, k, collect_tol=None):
    """Shared search core; with collect_tol, also gather near-optima."""
    pts = dataset.points
    n = pts.shape[0]
    _check_exhaustive_size(n)
    if not 1 <= k <= n:
        raise ValueError("need 1 <= k <= n, got k=%d, n=%d" % (k, n))

    counts = [0] * k
    sums = [np.zeros(pts.shape[1]) for _ in range(k)]
    rgs = [0] * n
    state = {"best_q": np.inf, "best_rgs": None, "leaves": 0, "near": []}

    def rec(i, used, partial):
        if state["best_rgs"] is not None:
            bound = state["best_q"]
            if collect_tol is not None:
                bound += collect_tol * max(1.0, state["best_q"])
            if partial > bound:
                return
        if i == n:
            if used != k:
                return
            state["leaves"] += 1
            if partial < state["best_q"]:
                state["best_q"] = partial
                state["best_rgs"] = rgs.copy()
            if collect_tol is not None:
                state["near"].append((partial, rgs.copy()))
            return
        if used + (n - i) < k:
            return  # not enough points left to open the missing clusters
        top = min(used + 1, k)
        for j in range(top):
            opens = j == used
            x = pts[i]
            if counts[j] == 0:
                delta = 0.0
            else:
                mu = sums[j] / counts[j]
                delta = counts[j] / (counts[j] + 1) * float(np.sum((x - mu) ** 2))
            counts[j] += 1
            sums[j] += x
            rgs[i] = j
            rec(i + 1, used + 1 if opens else used, partial + delta)
            counts[j] -= 1
            sums[j] -= x

    rec(0, 0, 0.0)
    if state["best_rgs"] is None:
        raise RuntimeError("search found no partition")  # unreachable
    return state["best_rgs"], state["best_q"], state["leaves"], state["near"]


def kmeans_ideal_minima(dataset, k, rel_tol=1e-9):
    """All partitions whose objective is within rel_tol of the optimum.

    The walk keeps every partition with
    Q <= Q* + rel_tol * max(1, Q*), in canonical order.

    Returns
    -------
    list of Partition
    """
    _, best_q, _, near = _ideal_search(dataset, k, collect_tol=rel_tol)
    cut = best_q + rel_tol * max(1.0, best_q)
    return [
        Partition.from_labels(np.asarray(r)) for q, r in near if q <= cut
    ]


# ---------------------------------------------------------------------------
# local-minimum certification
# ---------------------------------------------------------------------------


def _removal_gain(block_pts, idx_in_block):
    """Objective drop when the given member leaves its cluster; two routes."""
    nb = len(block_pts)
    mu = block_pts.mean(axis=0)
    x = block_pts[idx_in_block]
    gain = nb / (nb - 1) * float(np.sum((x - mu) ** 2))
    direct = _scatter(block_pts) - _scatter(np.delete(block_pts, idx_in_block, axis=0))
    assert abs(gain - direct) <= 1e-9 * max(1.0, gain, abs(direct)), (
        "removal increment %r disagrees with direct recomputation %r" % (gain, direct)
    )
    return gain


def _addition_cost(block_pts, x):
    """Objective rise when x joins the cluster; two routes."""
    nb = len(block_pts)
    mu = block_pts.mean(axis=0)
    cost = nb / (nb + 1) * float(np.sum((x - mu) ** 2))
    direct = _scatter(np.vstack([block_pts, x])) - _scatter(block_pts)
    assert abs(cost - direct) <= 1e-9 * max(1.0, cost, abs(direct)), (
        "addition increment %r disagrees with direct recomputation %r" % (cost, direct)
    )
    return cost


def is_local_min(dataset, partition, rel_tol=1e-9):
    """Is the partition stable against every single-point move?

    A move takes one point from its cluster to another; it improves the
    objective iff the removal gain exceeds the addition cost.  Moves that
    would empty a cluster are skipped.  Scan order is deterministic:
    clusters canonically, members ascending, targets canonically.

    Both increments are evaluated via the closed-form size-weighted
    formulas and via direct subset recomputation, and cross-checked.

    Parameters
    ----------
    dataset : Dataset
    partition : Partition
    rel_tol : float
        A move counts as improving only if gain - cost exceeds
        rel_tol * max(1, gain, cost); keeps degenerate ties stable.

    Returns
    -------
    (bool, dict or None)
        ``(True, None)`` if no improving move exists; otherwise
        ``(False, witness)`` with the first improving move found:
        ``{"point", "source", "target", "delta_q"}``.
    """
    pts = dataset.points
    if partition.n != dataset.n:
        raise ValueError("partition does not match dataset")
    blocks = [np.array(b, dtype=int) for b in partition.clusters]
    block_pts = [pts[b] for b in blocks]
    for a, block in enumerate(blocks):
        if len(block) < 2:
            continue  # moving the only member would empty the cluster
        for pos, point_idx in enumerate(block):
            gain = _removal_gain(block_pts[a], pos)
            for b in range(len(blocks)):
                if b == a:
                    continue
                cost = _addition_cost(block_pts[b], pts[point_idx])
                if gain - cost > rel_tol * max(1.0, gain, cost):
                    witness = {
                        "point": int(point_idx),
                        "source": a,
                        "target": b,
                        "delta_q": cost - gain,
                    }
                    return False, witness
    return True, None


# ---------------------------------------------------------------------------
# streaming
# ---------------------------------------------------------------------------


def sequential_kmeans(stream, k):
    """Bounded-memory k-means over a point stream.

    Keeps k weighted centers.  The first k points become centers of weight
    one.  Each later point enters as a provisional extra center; the
    globally closest pair of the k+1 (ties: lexicographically smallest
    index pair) is merged into its weighted mean, which frees a slot for
    the newcomer unless the newcomer itself was merged.

    Parameters
    ----------
    stream : Dataset or (n, m) array_like
        Points in arrival order, n >= k.
    k : int

    Returns
    -------
    (centers, counts)
        ``centers`` is (k, m), ``counts`` the weight absorbed by each slot.
    """
    pts = stream.points if isinstance(stream, Dataset) else np.asarray(stream, float)
    if pts.ndim != 2:
        raise ValueError("stream must be 2-d")
    n = pts.shape[0]
    if not 2 <= k <= n:
        raise ValueError("need 2 <= k <= n, got k=%d, n=%d" % (k, n))
    centers = pts[:k].astype(float).copy()
    counts = np.ones(k, dtype=int)
    for t in range(k, n):
        cand = np.vstack([centers, pts[t]])
        weights = np.append(counts, 1)
        # globally closest candidate pair, lexicographic on ties
        best = None
        best_d2 = np.inf
        for a in range(k + 1):
            for b in range(a + 1, k + 1):
                d2 = float(np.sum((cand[a] - cand[b]) ** 2))
                if d2 < best_d2:
                    best_d2 = d2
                    best = (a, b)
        a, b = best
        merged = (cand[a] * weights[a] + cand[b] * weights[b]) / (
            weights[a] + weights[b]
        )
        centers[a] = merged
        counts[a] = weights[a] + weights[b]
        if b != k:
            # the merge happened among the old centers: slot b now holds
            # the newcomer
            centers[b] = pts[t]
            counts[b] = 1
    return centers, counts


# ---------------------------------------------------------------------------
# diagnostics
# ---------------------------------------------------------------------------


def second_pass_diagnose(dataset, centers):
    """Would a further assignment pass provably change nothing?

    Assigns every point to its nearest center and measures, per center,
    the radius of the ball of its points.  If every pair of centers is at
    least four times the largest radius apart, each ball is locked to its
    center and the clustering is self-confirming.

    Parameters
    ----------
    dataset : Dataset
    centers : (k, m) array_like

    Returns
    -------
    dict
        ``{"separated": bool, "min_center_distance": float,
        "max_radius": float, "radii": tuple}``
    """
    centers = np.asarray(centers, dtype=float)
    if centers.ndim != 2 or centers.shape[0] < 2 or centers.shape[1] != dataset.m:
        raise ValueError("centers must be (k >= 2, %d)" % dataset.m)
    pts = dataset.points
    labels = _assign(pts, centers)
    k = centers.shape[0]
    radii = []
    for j in range(k):
        mine = pts[labels == j]
        if len(mine) == 0:
            radii.append(0.0)
        else:
            radii.append(float(np.max(np.sqrt(np.sum((mine - centers[j]) ** 2, axis=1)))))
    cd = np.sqrt(np.sum((centers[:, None, :] - centers[None, :, :]) ** 2, axis=-1))
    min_cd = float(np.min(cd[~np.eye(k, dtype=bool)]))
    max_r = max(radii)
    return {
        "separated": bool(min_cd >= 4.0 * max_r),
        "min_center_distance": min_cd,
        "max_radius": max_r,
        "radii": tuple(radii),
    }


def candidates_tree(dataset, k):
    """Single-linkage candidate clusters and a separated-k-cut verdict.

    Builds the single-linkage merge tree, annotates every node of depth
    < k (counting the root as depth 0) with the mean and radius of its
    points, and searches for an antichain of exactly k nodes that
    partitions the points such that every pair of node centers t_u, t_v
    satisfies d(t_u, t_v) >= 4 max(r_u, r_v).  Any such cut certifies a
    well-separated k-clustering readable straight off the tree.

    Parameters
    ----------
    dataset : Dataset
    k : int
        2 <= k <= n.

    Returns
    -------
    dict
        ``{"verdict": bool, "cut": tuple or None, "candidates": tuple}``
        where candidates are dicts with node, depth, size, center, radius.
        Node ids follow the scipy convention: 0..n-1 are single points,
        n..2n-2 are merges in formation order (root is 2n-2).
    """
    pts = dataset.points
    n = dataset.n
    if not 2 <= k <= n:
        raise ValueError("need 2 <= k <= n, got k=%d, n=%d" % (k, n))
    merges = linkage(pdist(pts), method="single")

    children = {}
    members = {i: [i] for i in range(n)}
    for row, (left, right, _, _) in enumerate(merges):
        node = n + row
        left, right = int(left), int(right)
        children[node] = (left, right)
        members[node] = members[left] + members[right]
    root = n + len(merges) - 1 if len(merges) else 0

    depth = {root: 0}
    order = [root]
    while order:
        node = order.pop()
        if node in children:
            for ch in children[node]:
                depth[ch] = depth[node] + 1
                order.append(ch)

    def annotate(node):
        sub = pts[members[node]]
        center = sub.mean(axis=0)
        radius = float(np.max(np.sqrt(np.sum((sub - center) ** 2, axis=1))))
        return center, radius

    info = {}
    candidates = []
    for node in sorted(depth):
        if depth[node] < k:
            center, radius = annotate(node)
            info[node] = (center, radius)
            candidates.append(
                {
                    "node": node,
                    "depth": depth[node],
                    "size": len(members[node]),
                    "center": tuple(center.tolist()),
                    "radius": radius,
                }
            )

    def cuts(node, size):
        """All antichains of `size` nodes partitioning this subtree's points."""
        if size == 1:
            return [[node]]
        if node not in children:
            return []
        left, right = children[node]
        out = []
        for s in range(1, size):
            for lc in cuts(left, s):
                for rc in cuts(right, size - s):
                    out.append(lc + rc)
        return out

    verdict = False
    winning = None
    for cut in cuts(root, k):
        ok = True
        for i in range(k):
            for j in range(i + 1, k):
                ci, ri = info[cut[i]]
                cj, rj = info[cut[j]]
                dist = float(np.sqrt(np.sum((ci - cj) ** 2)))
                if dist < 4.0 * max(ri, rj):
                    ok = False
                    break
            if not ok:
                break
        if ok:
            verdict = True
            winning = tuple(sorted(cut))
            break
    return {"verdict": verdict, "cut": winning, "candidates": tuple(candidates)}
