import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from bayesstat.errors import InputError
from bayesstat.partitioning import (
    _wcss,
    distance_bands,
    kmeans_partition,
    kmeans_plus_plus,
    lloyd,
    min_points_per_cell,
    sequential_blocks,
)


class TestSequential:
    def test_even_split(self):
        p = sequential_blocks(100, 10)
        assert p.K == 10 and np.all(p.sizes == 10)

    def test_short_tail_merges(self):
        p = sequential_blocks(101, 10)
        assert p.K == 10 and p.sizes[-1] == 11

    def test_tail_of_three_kept(self):
        p = sequential_blocks(103, 10)
        assert p.K == 11 and p.sizes[-1] == 3

    def test_large_design_count(self):
        assert sequential_blocks(2 * 10**6, 10**2).K == 2 * 10**4

    def test_oversized_block(self):
        with pytest.raises(InputError):
            sequential_blocks(5, 10)

    @given(st.integers(1, 3000), st.integers(1, 300))
    def test_exhaustive_and_contiguous(self, n, b):
        if b > n:
            return
        p = sequential_blocks(n, b)
        assert p.sizes.sum() == n
        assert np.all(np.diff(p.assignments) >= 0)
        assert sorted(np.concatenate(p.blocks).tolist()) == list(range(n))


class TestKmeans:
    def test_single_cluster(self):
        pts = np.random.default_rng(0).random((50, 2))
        assert np.all(kmeans_partition(pts, 1).assignments == 0)

    def test_minimum_size_respected(self):
        pts = np.random.default_rng(1).random((10_000, 2))
        p = kmeans_partition(pts, 250, min_size=15, seed=1)
        assert p.sizes.min() >= 15 and p.sizes.sum() == 10_000

    def test_deterministic(self):
        pts = np.random.default_rng(2).random((500, 2))
        a = kmeans_partition(pts, 20, min_size=5, seed=4)
        b = kmeans_partition(pts, 20, min_size=5, seed=4)
        assert np.array_equal(a.assignments, b.assignments)

    def test_infeasible(self):
        with pytest.raises(InputError):
            kmeans_partition(np.zeros((10, 2)), 5, min_size=3)

    def test_dissolves_small_clusters(self):
        rng = np.random.default_rng(5)
        pts = np.vstack([rng.normal(0, 0.1, (100, 2)), rng.normal(5, 0.1, (100, 2)), [[20, 20]]])
        p = kmeans_partition(pts, 3, min_size=2, seed=0)
        assert p.K == 2 and p.sizes.min() >= 2

    @settings(max_examples=20, deadline=None)
    @given(st.integers(0, 2**32 - 1), st.integers(2, 15))
    def test_wcss_non_increasing(self, seed, K):
        pts = np.random.default_rng(seed).random((300, 2))
        rng = np.random.default_rng(seed)
        history = []
        lloyd(pts, kmeans_plus_plus(pts, K, rng), history=history)
        assert all(b <= a + 1e-9 for a, b in zip(history, history[1:]))

    @settings(max_examples=20, deadline=None)
    @given(st.integers(0, 2**32 - 1))
    def test_partition_is_exhaustive(self, seed):
        pts = np.random.default_rng(seed).random((400, 3))
        p = kmeans_partition(pts, 12, min_size=10, seed=seed)
        assert sorted(np.concatenate(p.blocks).tolist()) == list(range(400))
        assert p.sizes.min() >= 10


class TestBands:
    def test_two_points(self):
        pts = np.array([[0.0, 0.0], [0.5, 0.0]])
        from bayesstat.partitioning import Partition

        layout = distance_bands(pts, Partition(np.zeros(2, dtype=int)), (0, 1))
        assert layout.bands[0][0].size == 1 and layout.valid == (True,)

    def test_all_too_far(self):
        from bayesstat.partitioning import Partition

        pts = np.array([[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]])
        layout = distance_bands(pts, Partition(np.zeros(3, dtype=int)), (0, 0.1, 0.2))
        assert layout.valid == (False, False)

    def test_bad_boundaries(self):
        from bayesstat.partitioning import Partition

        with pytest.raises(InputError):
            distance_bands(np.zeros((2, 2)), Partition(np.zeros(2, dtype=int)), (0.2, 0.1))

    @settings(max_examples=20, deadline=None)
    @given(st.integers(0, 2**32 - 1))
    def test_membership_matches_brute_force(self, seed):
        pts = np.random.default_rng(seed).random((120, 2))
        part = kmeans_partition(pts, 4, min_size=5, seed=seed)
        bnd = (0.0, 0.05, 0.1, 0.3)
        layout = distance_bands(pts, part, bnd)
        for c, members in enumerate(part.blocks):
            seen = set()
            for b, band in enumerate(layout.bands[c]):
                for i, j in band.pairs:
                    assert i < j and (i, j) not in seen
                    seen.add((i, j))
                    d = math.dist(pts[i], pts[j])
                    assert bnd[b] <= d < bnd[b + 1]
            expected = {(min(i, j), max(i, j)) for i in members for j in members
                        if i < j and math.dist(pts[i], pts[j]) < 0.3}
            assert seen == expected


@pytest.mark.parametrize("p,expected", [(1, 1.5), (2, 2.865), (3, 6.446)])
def test_min_points_per_cell(p, expected):
    eps = 0.1
    side = 3 * eps
    assert min_points_per_cell(side ** p, eps, p) == pytest.approx(expected, abs=1e-3)


def test_min_points_per_cell_domain():
    with pytest.raises(InputError):
        min_points_per_cell(1.0, 0.0, 2)
