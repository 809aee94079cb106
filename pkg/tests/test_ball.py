"""Ball sizes, exact LIS distribution, Monte Carlo, and sphere bounds."""

import math
import statistics
from fractions import Fraction

import pytest

from oracles import bfs_ball_sizes
from ulamcode.ball import (
    LisDistribution,
    ball_size,
    ball_table,
    clt_samples,
    lis_distribution_exact,
    lis_prob_mc,
    load_distribution,
    sample_lis_lengths,
    save_distribution,
    sphere_packing_bounds,
)
from ulamcode.bounds import CodeParams, gv_lower
from ulamcode.errors import CapacityError


class TestExactDistribution:
    def test_n1(self):
        dist = lis_distribution_exact(1)
        assert dist.counts == {1: 1}
        assert dist.total == 1

    def test_n3(self):
        dist = lis_distribution_exact(3)
        assert dist.counts == {1: 1, 2: 4, 3: 1}
        assert dist.total == 6

    def test_normalization_and_extremes(self):
        for n in range(2, 8):
            dist = lis_distribution_exact(n)
            assert sum(dist.counts.values()) == math.factorial(n)
            assert dist.counts[n] == 1
            assert dist.counts[1] == 1

    def test_capacity_error_advises_monte_carlo(self):
        with pytest.raises(CapacityError, match="Monte-Carlo"):
            lis_distribution_exact(10)

    def test_limit_override(self):
        lis_distribution_exact(7, limit=7)
        with pytest.raises(CapacityError):
            lis_distribution_exact(8, limit=7)

    def test_workers_do_not_change_counts(self):
        import ulamcode.ball as ball_mod

        seq = lis_distribution_exact(8, workers=1)
        ball_mod._EXACT_MEMO.pop(8, None)
        par = lis_distribution_exact(8, workers=2)
        assert par.counts == seq.counts

    def test_counts_must_sum(self):
        with pytest.raises(ValueError):
            LisDistribution(n=2, kind="exact", counts={1: 1, 2: 2}, total=2)


class TestCacheFile:
    def test_round_trip(self, tmp_path):
        dist = lis_distribution_exact(5)
        path = tmp_path / "d5.txt"
        save_distribution(dist, path)
        again = load_distribution(path)
        assert again.counts == dist.counts
        assert again.total == dist.total
        text = path.read_text().splitlines()
        assert text[0] == "5 120"
        assert text[1].startswith("1 ")

    def test_exact_with_cache_dir(self, tmp_path):
        import ulamcode.ball as ball_mod

        ball_mod._EXACT_MEMO.pop(4, None)
        first = lis_distribution_exact(4, cache_dir=tmp_path)
        assert (tmp_path / "lisdist_4.txt").exists()
        ball_mod._EXACT_MEMO.pop(4, None)
        second = lis_distribution_exact(4, cache_dir=tmp_path)
        assert second.counts == first.counts

    def test_malformed(self, tmp_path):
        path = tmp_path / "bad.txt"
        path.write_text("3\n")
        with pytest.raises(ValueError):
            load_distribution(path)


class TestBallSizes:
    def test_radius_zero_and_diameter(self):
        for n in range(2, 8):
            assert ball_size(n, 0) == 1
            assert ball_size(n, n - 1) == math.factorial(n)

    def test_small_example(self):
        # BFS over S_3: everything except the reversal is within one move.
        assert ball_size(3, 1) == 5

    def test_matches_bfs_oracle(self):
        for n in range(2, 7):
            assert ball_table(n).sizes == bfs_ball_sizes(n)

    def test_radius_one_shell_formula(self):
        for n in range(2, 8):
            assert ball_size(n, 1) == 1 + (n - 1) ** 2

    def test_identity_with_distribution(self):
        for n in range(2, 8):
            dist = lis_distribution_exact(n)
            for r in range(n):
                expected = sum(c for k, c in dist.counts.items() if k >= n - r)
                assert ball_size(n, r) == expected

    def test_strictly_increasing(self):
        for n in range(2, 8):
            sizes = ball_table(n).sizes
            for r in range(1, n):
                assert sizes[r] > sizes[r - 1]

    def test_radius_validation(self):
        with pytest.raises(ValueError):
            ball_size(5, 5)
        with pytest.raises(ValueError):
            ball_size(5, -1)


class TestSpherePacking:
    def test_d1(self):
        for n in (3, 5, 7):
            assert sphere_packing_bounds(CodeParams(n, 1)) == (
                math.factorial(n),
                math.factorial(n),
            )

    def test_5_3_frozen(self):
        lo, hi = sphere_packing_bounds(CodeParams(5, 3))
        assert ball_size(5, 1) == 17  # cross-checked against BFS above
        assert (lo, hi) == (2, 120 // 17)

    def test_dominates_gv_strictly(self):
        # Exact rational comparison of the two lower-bound ratios.
        for n in range(3, 9):
            nfact = math.factorial(n)
            for d in range(2, n):
                delta = d - 1
                if not 0 < delta < n - 1:
                    continue
                gv_ratio = Fraction(math.factorial(n - delta), math.comb(n, delta))
                sphere_ratio = Fraction(nfact, ball_size(n, delta))
                assert gv_ratio < sphere_ratio

    def test_integer_bounds_dominate_gv(self):
        for n in range(3, 9):
            for d in range(2, n):
                p = CodeParams(n, d)
                lo, hi = sphere_packing_bounds(p)
                assert lo >= gv_lower(p)
                assert lo <= hi


class TestProbabilityEstimates:
    def test_l2a_even_delta(self):
        # Both halves of the even-radius sandwich, exactly, for n <= 8.
        for n in range(2, 9):
            dist = lis_distribution_exact(n)
            for delta in range(0, n - 1, 2):
                bound = Fraction(math.comb(n, delta), math.factorial(n - delta))
                assert dist.prob_at_least(n - delta // 2) <= bound
                assert dist.prob_at_least(n - delta) >= Fraction(
                    1, math.factorial(n - delta)
                )


class TestMonteCarlo:
    def test_k1_exact(self):
        est, err = lis_prob_mc(6, 1, 1000, 0)
        assert est == 1.0 and err == 0.0

    def test_determinism(self):
        a = lis_prob_mc(6, 4, 50_000, 7)
        b = lis_prob_mc(6, 4, 50_000, 7)
        assert a == b

    def test_seed_changes_stream(self):
        a = lis_prob_mc(6, 4, 50_000, 1)
        b = lis_prob_mc(6, 4, 50_000, 2)
        assert a != b

    def test_calibration_n6_k4(self):
        exact = float(lis_distribution_exact(6).prob_at_least(4))
        est, err = lis_prob_mc(6, 4, 1_000_000, 0)
        assert abs(est - exact) <= 4 * err

    def test_pooled_over_disjoint_seeds(self):
        exact = float(lis_distribution_exact(6).prob_at_least(4))
        per_seed = 100_000
        hits = 0.0
        for seed in range(10):
            est, _ = lis_prob_mc(6, 4, per_seed, seed)
            hits += est * per_seed
        pooled = hits / (10 * per_seed)
        stderr = math.sqrt(pooled * (1 - pooled) / (10 * per_seed))
        assert abs(pooled - exact) <= 4 * stderr

    def test_workers_equivalence(self):
        a = sample_lis_lengths(6, 70_000, 3, workers=1)
        b = sample_lis_lengths(6, 70_000, 3, workers=2)
        assert (a == b).all()

    def test_large_n_uses_scalar_path(self):
        # n above the batch threshold takes the per-sample bisect loop.
        lengths = sample_lis_lengths(50, 64, 0)
        assert len(lengths) == 64
        assert all(1 <= v <= 50 for v in lengths)

    def test_validation(self):
        with pytest.raises(ValueError):
            lis_prob_mc(5, 6, 10, 0)
        with pytest.raises(ValueError):
            lis_prob_mc(5, 0, 10, 0)
        with pytest.raises(ValueError):
            sample_lis_lengths(5, 0, 0)


class TestCltSamples:
    def test_n1(self):
        assert clt_samples(1, 5, 0) == [-1.0, -1.0, -1.0, -1.0, -1.0]

    def test_length(self):
        assert len(clt_samples(9, 1234, 0)) == 1234

    def _mean_is_negative(self, samples):
        vals = clt_samples(10_000, samples, 0)
        mean = statistics.mean(vals)
        stderr = statistics.stdev(vals) / math.sqrt(len(vals))
        assert mean < 0
        assert mean + 5 * stderr < 0

    def test_mean_negative(self):
        self._mean_is_negative(1000)

    @pytest.mark.slow
    def test_mean_negative_full(self):
        self._mean_is_negative(100_000)

    def test_determinism(self):
        assert clt_samples(30, 100, 9) == clt_samples(30, 100, 9)
