"""Tests for dataset generators, fixtures, and the threshold method."""

import numpy as np
import pytest

from axiomlab.constructions import (
    MixtureSpec,
    collapse_to_two_groups,
    default_mixture_spec,
    embed_partition,
    exhaustive_best_partition,
    fixture_tables,
    gaussian_mixture,
    krich_line,
    parity_quality,
    rotated_segments,
    threshold_clustering,
    wing_partition,
)
from axiomlab.core import (
    Dataset,
    DistanceMatrix,
    Partition,
    distance_matrix,
    embeddability_check,
)
from axiomlab.kmeans import KMeansConfig, explained_variance, kmeans, kmeans_ideal
from axiomlab.transforms import (
    centric_matrix_transform,
    centric_transform,
    is_gamma_transform,
    scale,
)


def _line(*xs):
    return Dataset(np.array(xs, dtype=float)[:, None])


# ---------------------------------------------------------------------------
# k-rich line layouts
# ---------------------------------------------------------------------------


def test_krich_line_frozen_layouts():
    ds, part = krich_line([3, 2])
    assert np.allclose(ds.points[:, 0], [0.0, 0.5, 1.0, 6.0, 7.0])
    assert part == Partition([(0, 1, 2), (3, 4)])

    ds, part = krich_line([2, 2, 1])
    assert np.allclose(ds.points[:, 0], [0.0, 1.0, 5.0, 6.0, 66.0])
    assert part == Partition([(0, 1), (2, 3), (4,)])

    # singletons fall back to the minimum spacing
    ds, part = krich_line([1, 1])
    assert np.allclose(ds.points[:, 0], [0.0, 3.0])

    ds, part = krich_line([2, 2])
    assert np.allclose(ds.points[:, 0], [0.0, 1.0, 5.0, 6.0])


def test_krich_line_sorts_sizes_and_validates():
    ds, part = krich_line([2, 3])  # same layout as (3, 2)
    assert np.allclose(ds.points[:, 0], [0.0, 0.5, 1.0, 6.0, 7.0])
    with pytest.raises(ValueError):
        krich_line([])
    with pytest.raises(ValueError):
        krich_line([3, 0])


def test_krich_line_recovery_frozen_objectives():
    cases = [
        ((3, 2), 1.0),
        ((2, 2, 1), 1.0),
        ((3, 3, 2), 1.5),
        ((4, 3, 1, 1), 1.0555555555555556),
    ]
    for sizes, expected_q in cases:
        ds, part = krich_line(sizes)
        best = kmeans_ideal(ds, len(sizes))
        assert best.partition == part
        assert best.q == pytest.approx(expected_q, rel=1e-12)


def test_krich_line_recovery_all_small_compositions():
    # every multiset of cluster sizes with n <= 7 and k >= 2 is recovered
    # exactly by exhaustive k-means
    def compositions(n, max_part):
        if n == 0:
            yield ()
            return
        for first in range(min(n, max_part), 0, -1):
            for rest in compositions(n - first, first):
                yield (first,) + rest

    checked = 0
    for n in range(2, 8):
        for sizes in compositions(n, n - 1):
            if len(sizes) < 2:
                continue
            ds, part = krich_line(sizes)
            assert kmeans_ideal(ds, len(sizes)).partition == part
            checked += 1
    assert checked == 37


# ---------------------------------------------------------------------------
# segment cross and its wing rotation
# ---------------------------------------------------------------------------


def test_segment_endpoints():
    base_r = np.array([1.0, 0.0, 0.0])
    ds = rotated_segments(False, points_per_segment=50, rng=0)
    assert ds.points.shape == (200, 3)
    # right-wing points sit on segments towards (33, +-32, 0)
    for row in ds.points[:50]:
        v = row - base_r
        assert abs(v[0] - v[1]) < 1e-9 and abs(v[2]) < 1e-12

    # the rotated variant squeezes the right wing to +-1 degree off axis,
    # preserving segment lengths
    rot = rotated_segments(True, points_per_segment=50, rng=0)
    length = np.linalg.norm([32.0, 32.0, 0.0])
    tip = base_r + length * np.array(
        [np.cos(np.radians(1.0)), np.sin(np.radians(1.0)), 0.0]
    )
    top = rot.points[:50]
    t = (top[:, 0] - 1.0) / (tip[0] - 1.0)
    assert np.allclose(top, base_r + t[:, None] * (tip - base_r), atol=1e-9)


def test_rotated_segments_matched_identities():
    flat = rotated_segments(False, points_per_segment=10, rng=3)
    rot = rotated_segments(True, points_per_segment=10, rng=3)
    moved = np.abs(flat.points - rot.points).max(axis=1) > 1e-12
    # same draws: only the right wing moves
    assert np.where(moved)[0].tolist() == list(range(20))
    # no point collapses onto the shared base point
    gap = np.linalg.norm(flat.points[:20] - [1.0, 0.0, 0.0], axis=1).min()
    assert gap > 0.0

    part = wing_partition(10)
    assert [len(c) for c in part.clusters] == [20, 20]
    assert part.n == 40


def test_wing_rotation_is_admissible():
    # rotating the wing towards the axis only shrinks its internal
    # distances -- an inner-cluster change under the wing partition
    flat = rotated_segments(False, points_per_segment=10, rng=3)
    rot = rotated_segments(True, points_per_segment=10, rng=3)
    ok, violations = is_gamma_transform(
        distance_matrix(flat), distance_matrix(rot), wing_partition(10)
    )
    assert ok
    assert violations == ()


def test_wing_rotation_shifts_the_optimum():
    flat = rotated_segments(False, points_per_segment=200, rng=11)
    rot = rotated_segments(True, points_per_segment=200, rng=11)
    cfg = KMeansConfig(k=2, restarts=20, rng_seed=11)
    res_flat = kmeans(flat, cfg)
    res_rot = kmeans(rot, cfg)
    # the flat cross splits into wings; the rotated one pays to split the
    # dense right wing and explains more variance doing so
    assert res_flat.partition == wing_partition(200)
    assert res_rot.partition != wing_partition(200)
    assert res_rot.explained_variance > res_flat.explained_variance


# ---------------------------------------------------------------------------
# gaussian mixtures
# ---------------------------------------------------------------------------


def test_mixture_spec_validation():
    means = np.array([[0.0, 0.0], [4.0, 0.0]])
    with pytest.raises(ValueError):  # asymmetric covariance
        MixtureSpec(means, np.array([[[1.0, 0.5], [0.0, 1.0]]] * 2), [2, 2])
    with pytest.raises(ValueError):  # not positive semi-definite
        MixtureSpec(means, np.array([[[1.0, 2.0], [2.0, 1.0]]] * 2), [2, 2])
    with pytest.raises(ValueError):
        MixtureSpec(means, np.ones(2), [0, 2])
    with pytest.raises(ValueError):
        MixtureSpec(means, np.ones(3), [2, 2])
    spec = MixtureSpec(means, np.array([2.0, 3.0]), [1, 2])
    assert np.allclose(spec.covariances[0], 2.0 * np.eye(2))
    assert np.allclose(spec.covariances[1], 3.0 * np.eye(2))
    with pytest.raises(AttributeError):
        spec.counts = np.array([5, 5])


def test_default_mixture_spec_shape():
    spec = default_mixture_spec()
    assert spec.k == 5
    assert spec.n == 1000
    assert (spec.counts == 200).all()
    assert np.allclose(spec.covariances, np.eye(2)[None, :, :].repeat(5, axis=0))
    part = spec.partition()
    assert [len(c) for c in part.clusters] == [200] * 5
    assert part.clusters[1][0] == 200


def test_gaussian_mixture_degenerate_and_seeded():
    spec = MixtureSpec([[1.0, 2.0], [5.0, 5.0]], np.zeros(2), [3, 4])
    ds = gaussian_mixture(spec, rng=np.random.default_rng(0))
    assert np.array_equal(ds.points[:3], np.tile([1.0, 2.0], (3, 1)))
    assert np.array_equal(ds.points[3:], np.tile([5.0, 5.0], (4, 1)))

    spec = default_mixture_spec()
    a = gaussian_mixture(spec, rng=np.random.default_rng(7))
    b = gaussian_mixture(spec, rng=np.random.default_rng(7))
    c = gaussian_mixture(spec, rng=np.random.default_rng(8))
    assert np.array_equal(a.points, b.points)
    assert not np.array_equal(a.points, c.points)
    with pytest.raises(TypeError):
        gaussian_mixture(np.zeros((2, 2)))


def test_gaussian_mixture_moments():
    spec = MixtureSpec([[2.0, -1.0]], np.array([4.0]), [20000])
    ds = gaussian_mixture(spec, rng=np.random.default_rng(123))
    assert np.allclose(ds.points.mean(axis=0), [2.0, -1.0], atol=0.06)
    assert np.allclose(np.cov(ds.points.T), 4.0 * np.eye(2), atol=0.15)


# ---------------------------------------------------------------------------
# two-group collapse
# ---------------------------------------------------------------------------


def test_collapse_hits_requested_explained_variance():
    spec = default_mixture_spec()
    data = gaussian_mixture(spec, rng=np.random.default_rng(42))
    out = collapse_to_two_groups(data, spec.partition())
    two_groups = Partition([tuple(range(400)), tuple(range(400, 1000))])
    # the group layout is calibrated so the two-group split explains
    # exactly the requested fraction
    assert explained_variance(out, two_groups) == pytest.approx(0.98, rel=1e-12)
    res = kmeans(out, KMeansConfig(k=2, restarts=8, rng_seed=1))
    assert res.partition == two_groups

    # a lower target still calibrates exactly, as long as it stays
    # realisable without compressing cross-cluster distances
    lower = collapse_to_two_groups(data, spec.partition(), explained=0.9)
    assert explained_variance(lower, two_groups) == pytest.approx(0.9, rel=1e-12)
    # a target this small would need the groups closer than the original
    # data allows; the generator refuses instead of emitting an
    # inadmissible transform
    with pytest.raises(ValueError):
        collapse_to_two_groups(data, spec.partition(), explained=0.5)


def test_collapse_validation():
    spec = default_mixture_spec()
    data = gaussian_mixture(spec, rng=np.random.default_rng(1))
    gamma = spec.partition()
    with pytest.raises(ValueError):
        collapse_to_two_groups(data, Partition([tuple(range(1000))]))
    with pytest.raises(ValueError):
        collapse_to_two_groups(data, Partition([(0, 1), (2, 3)]))
    with pytest.raises(ValueError):
        collapse_to_two_groups(data, gamma, lam=0.0)
    with pytest.raises(ValueError):
        collapse_to_two_groups(data, gamma, explained=1.0)


# ---------------------------------------------------------------------------
# six-point fixture
# ---------------------------------------------------------------------------


def test_fixture_grid_values():
    grid, coords = fixture_tables()
    assert isinstance(grid, DistanceMatrix)
    v = grid.values
    assert v.shape == (6, 6)
    assert np.array_equal(v, v.T)
    assert v[0, 1] == 10.0
    assert v[0, 2] == 2.236
    assert v[1, 2] == 6.708
    assert v[0, 3] == 20.0
    assert v[3, 5] == 2.236
    assert v[0, 5] == 20.125
    # three-decimal table: judge the spectrum above rounding noise
    report = embeddability_check(grid, rel_tol=1e-4)
    assert not report.embeddable
    assert report.signs.tolist() == [1, 1, -1]
    assert report.max_reconstruction_error < 1e-2


def test_fixture_coordinates_reconstruct_grid():
    grid, coords = fixture_tables()
    assert coords.shape == (6, 3)
    assert coords[5, 0] == 2.0 and coords[5, 1] == -10.0 and coords[5, 2] == -1j
    from axiomlab.core import rigid_distance_matrix

    real = np.column_stack(
        [coords[:, 0].real, coords[:, 1].real, coords[:, 2].imag]
    )
    rec = rigid_distance_matrix(real, np.array([1.0, 1.0, -1.0]))
    assert np.abs(rec - grid.values).max() < 1e-2


# ---------------------------------------------------------------------------
# partition embedding
# ---------------------------------------------------------------------------


def test_embed_partition_singleton_layout():
    d = DistanceMatrix(np.array([[0.0, 3.0, 5.0], [3.0, 0.0, 4.0], [5.0, 4.0, 0.0]]))
    gamma = Partition([(0,), (1,), (2,)])
    ds = embed_partition(d, gamma)
    assert ds.m == 1
    emb = distance_matrix(ds).values
    # singleton clusters land exactly one diameter apart along a line
    assert emb[0, 1] == pytest.approx(5.0)
    assert emb[1, 2] == pytest.approx(5.0)
    assert emb[0, 2] == pytest.approx(10.0)
    with pytest.raises(TypeError):
        embed_partition(distance_matrix(ds).values, gamma)


def test_embed_partition_is_admissible_on_random_tables():
    rng = np.random.default_rng(31)
    for _ in range(30):
        n = int(rng.integers(4, 9))
        pts = rng.normal(size=(n, 2))
        d = distance_matrix(Dataset(pts))
        k = int(rng.integers(2, 4))
        labels = rng.integers(0, k, size=n)
        labels[:k] = np.arange(k)  # keep every cluster inhabited
        gamma = Partition.from_labels(labels)
        ds = embed_partition(d, gamma, m=int(rng.integers(1, 4)))
        assert ds.n == n
        ok, violations = is_gamma_transform(d, distance_matrix(ds), gamma)
        assert ok and violations == ()


def test_embed_partition_recovery_when_well_separated():
    # exhaustive k-means recovers the embedded partition whenever the
    # cluster diameter dominates the ball radii by the usual factor four
    rng = np.random.default_rng(5)
    tried = kept = 0
    for _ in range(400):
        n = int(rng.integers(4, 9))
        k = int(rng.integers(2, 4))
        pts = rng.normal(size=(n, 2))
        d = distance_matrix(Dataset(pts))
        labels = rng.integers(0, k, size=n)
        labels[:k] = np.arange(k)
        gamma = Partition.from_labels(labels)
        tried += 1
        radii = []
        arr = d.values
        for cluster in gamma.clusters:
            if len(cluster) == 1:
                radii.append(0.0)
                continue
            idx = np.array(cluster)
            sub = arr[np.ix_(idx, idx)]
            radii.append(0.5 * sub[np.triu_indices(len(idx), k=1)].min())
        if arr.max() < 4.0 * max(radii):
            continue
        kept += 1
        ds = embed_partition(d, gamma)
        assert kmeans_ideal(ds, gamma.k).partition == gamma
    assert tried == 400
    assert kept > 100


# ---------------------------------------------------------------------------
# threshold clustering
# ---------------------------------------------------------------------------


def test_threshold_line_examples():
    assert threshold_clustering(_line(0.0, 0.01, 1.0)) == Partition([(0, 1), (2,)])
    # a bare pair always separates: the only gap is the whole spread
    assert threshold_clustering(_line(0.0, 1.0)) == Partition([(0,), (1,)])


def test_threshold_requires_closeness_in_every_dimension():
    pts = np.array([[0.0, 0.0], [0.05, 9.0], [10.0, 0.05], [9.5, 0.8]])
    part = threshold_clustering(Dataset(pts))
    # points 0 and 2 are close along axis 1 only; points 2 and 3 are
    # close along both axes
    assert part == Partition([(0,), (1,), (2, 3)])


def test_threshold_matrix_input_uses_single_cutoff():
    x = _line(0.0, 2.19, 10.0, 11.0)
    part = threshold_clustering(distance_matrix(x))
    assert part == Partition([(0, 1), (2, 3)])
    # the dataset route agrees here
    assert threshold_clustering(x) == part


def test_threshold_scale_invariance_property():
    rng = np.random.default_rng(99)
    checked = 0
    for _ in range(200):
        n = int(rng.integers(4, 25))
        ds = Dataset(np.sort(rng.uniform(0.0, 1.0, n))[:, None])
        part = threshold_clustering(ds)
        for alpha in rng.uniform(0.1, 10.0, 3):
            assert threshold_clustering(scale(ds, float(alpha))) == part
            checked += 1
    assert checked == 600


def test_threshold_consistency_needs_distance_level_shrink():
    # shrinking a cluster in the embedded data can merge what the
    # per-dimension thresholds previously separated...
    x = _line(0.0, 2.19, 10.0, 11.0)
    part = threshold_clustering(x)
    assert part == Partition([(0, 1), (2, 3)])
    shrunk = centric_transform(x, part, 1, 0.9)
    assert threshold_clustering(shrunk) != part
    # ...while the same shrink applied to the distance table keeps the
    # global cut-off pair intact and the partition fixed
    d = distance_matrix(x)
    assert threshold_clustering(centric_matrix_transform(d, part, 1, 0.9)) == part

    rng = np.random.default_rng(99)
    checked = 0
    for _ in range(200):
        n = int(rng.integers(4, 25))
        ds = Dataset(np.sort(rng.uniform(0.0, 1.0, n))[:, None])
        part = threshold_clustering(ds)
        d = distance_matrix(ds)
        big = [i for i, c in enumerate(part.clusters) if len(c) >= 2]
        if not big:
            continue
        ci = big[int(rng.integers(len(big)))]
        for lam in (0.9, 0.5, 0.1):
            shrunk = centric_matrix_transform(d, part, ci, lam)
            assert threshold_clustering(shrunk) == part
            checked += 1
    assert checked > 300


def test_threshold_tie_refusals():
    with pytest.raises(ValueError):  # duplicated extreme along the axis
        threshold_clustering(_line(0.0, 0.5, 1.0, 1.0))
    pts = np.array([[0.0, 1.0], [1.0, 1.0], [2.0, 1.0]])
    with pytest.raises(ValueError):  # zero spread on one axis of several
        threshold_clustering(Dataset(pts))
    # fully coincident data has nothing to separate
    same = Dataset(np.ones((4, 2)))
    assert threshold_clustering(same) == Partition([(0, 1, 2, 3)])
    with pytest.raises(TypeError):
        threshold_clustering(np.eye(3))


# ---------------------------------------------------------------------------
# exhaustive prefix search
# ---------------------------------------------------------------------------

_DEMO_CLOUD = np.array(
    [
        [4.022346, 5.142886],
        [3.745942, 4.646777],
        [4.442992, 5.164956],
        [3.616975, 5.188107],
        [3.807503, 5.010183],
        [4.169602, 4.874328],
        [3.557578, 5.248182],
        [3.876208, 4.507264],
        [4.102748, 5.073515],
        [3.895329, 4.878176],
    ]
)


def test_parity_quality_values():
    ds = _line(0.0, 1.0, 2.0, 3.0)
    assert parity_quality(ds, Partition([(0, 1), (2, 3)])) == 0.0
    assert parity_quality(ds, Partition([(0, 1, 2), (3,)])) == 3.0
    assert parity_quality(_line(0.0, 1.0, 2.0), Partition([(0, 1), (2,)])) == 2.0


def test_prefix_best_is_non_nesting_for_parity_quality():
    best = exhaustive_best_partition(Dataset(_DEMO_CLOUD), parity_quality)
    assert len(best) == 9  # prefixes of size 2..10
    assert best[1] == Partition([(0, 1, 2)])
    assert best[2] == Partition([(0, 1), (2, 3)])
    # the optimum over a larger prefix never contains the smaller one:
    # parity flips with every added point
    nonnesting = []
    for i in range(1, len(best)):
        prev, cur = best[i - 1], best[i]
        restricted = [tuple(m for m in c if m < prev.n) for c in cur.clusters]
        if Partition([c for c in restricted if c]) != prev:
            nonnesting.append(i + 2)
    assert nonnesting == [4, 5, 6, 7, 8, 9, 10]


def test_prefix_best_agrees_with_exhaustive_kmeans():
    from axiomlab.kmeans import objective_q

    rng = np.random.default_rng(4)
    ds = Dataset(rng.normal(size=(4, 2)))

    def two_cluster_q(data, part):
        return objective_q(data, part) if part.k == 2 else np.inf

    best = exhaustive_best_partition(ds, two_cluster_q)
    for i, part in enumerate(best):
        prefix = Dataset(ds.points[: i + 2])
        assert part == kmeans_ideal(prefix, 2).partition


def test_prefix_best_respects_enumeration_cap():
    rng = np.random.default_rng(0)
    with pytest.raises(ValueError):
        exhaustive_best_partition(Dataset(rng.normal(size=(13, 2))), parity_quality)
