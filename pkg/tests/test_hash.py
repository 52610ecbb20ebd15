import itertools
from collections import Counter

import numpy as np
import pytest

from rs2.hashing import (
    BudgetExceededError,
    HashFamilySpec,
    enumerate_family,
    evaluate,
    evaluate_many,
    sample_indicator,
    threshold_for_inv_sqrt,
    threshold_for_probability,
)


class TestSpec:
    def test_rejects_composite_p(self):
        with pytest.raises(ValueError):
            HashFamilySpec(k=2, p=9, domain_size=4)

    def test_rejects_small_field(self):
        with pytest.raises(ValueError):
            HashFamilySpec(k=2, p=5, domain_size=10)

    def test_family_size_and_seed_bits(self):
        spec = HashFamilySpec(k=3, p=5, domain_size=5)
        assert spec.family_size == 125
        assert spec.seed_bits == 3 * 3


class TestEvaluate:
    def test_zero_polynomial(self):
        spec = HashFamilySpec(k=2, p=7, domain_size=7)
        assert all(evaluate(spec, (0, 0), x) == 0 for x in range(7))

    def test_direct_example(self):
        spec = HashFamilySpec(k=2, p=7, domain_size=7)
        assert evaluate(spec, (2, 1), 3) == 5  # (2 + 1*3) mod 7

    def test_domain_guard(self):
        spec = HashFamilySpec(k=2, p=7, domain_size=3)
        with pytest.raises(ValueError):
            evaluate(spec, (0, 1), 5)

    def test_vandermonde_bijection(self):
        # p=5, k=2: over all 25 seeds, (h(1), h(2)) hits every pair once.
        spec = HashFamilySpec(k=2, p=5, domain_size=5)
        pairs = Counter(
            (evaluate(spec, s, 1), evaluate(spec, s, 2)) for s in enumerate_family(spec)
        )
        assert len(pairs) == 25 and set(pairs.values()) == {1}

    def test_evaluate_many_matches_scalar(self):
        for p in (1009, 2147483659, 2199023255579):  # plain, split, split paths
            spec = HashFamilySpec(k=3, p=p, domain_size=1000)
            seed = (p - 1, 12345 % p, p // 2)
            xs = np.arange(0, 1000, 37, dtype=np.int64)
            vec = evaluate_many(spec, seed, xs)
            for x, v in zip(xs, vec):
                assert int(v) == evaluate(spec, seed, int(x))

    def test_evaluate_many_huge_p_object_path(self):
        p = 2 ** 61 - 1
        spec = HashFamilySpec(k=2, p=p, domain_size=100)
        seed = (p - 2, p - 3)
        vec = evaluate_many(spec, seed, np.arange(10, dtype=np.int64))
        assert all(int(v) == evaluate(spec, seed, x) for x, v in enumerate(vec))


class TestThresholds:
    def test_boundaries(self):
        spec = HashFamilySpec(k=2, p=13, domain_size=13)
        assert not sample_indicator(spec, (5, 1), 0, 0)
        assert sample_indicator(spec, (5, 1), 0, 13)

    def test_marginal_uniformity(self):
        # p=101, T=10: exactly 10*101 of the 101^2 seeds sample a fixed x.
        spec = HashFamilySpec(k=2, p=101, domain_size=101)
        hits = sum(1 for s in enumerate_family(spec) if sample_indicator(spec, s, 7, 10))
        assert hits == 10 * 101

    def test_probability_threshold(self):
        spec = HashFamilySpec(k=2, p=10 ** 9 + 7, domain_size=100)
        assert threshold_for_probability(spec, 1, 1) == spec.p
        assert threshold_for_inv_sqrt(spec, 4) == spec.p // 2
        t = threshold_for_inv_sqrt(spec, 2)
        assert 2 * t * t <= spec.p * spec.p < 2 * (t + 1) * (t + 1)

    def test_probability_guard(self):
        spec = HashFamilySpec(k=2, p=13, domain_size=13)
        with pytest.raises(ValueError):
            threshold_for_probability(spec, 3, 2)


class TestEnumeration:
    def test_lexicographic(self):
        spec = HashFamilySpec(k=2, p=3, domain_size=3)
        seeds = list(enumerate_family(spec))
        assert len(seeds) == 9
        assert seeds == sorted(seeds)

    def test_cardinality(self):
        spec = HashFamilySpec(k=3, p=5, domain_size=5)
        assert sum(1 for _ in enumerate_family(spec)) == 125

    def test_budget_guard(self):
        spec = HashFamilySpec(k=4, p=(1 << 31) - 1, domain_size=100)
        with pytest.raises(BudgetExceededError):
            enumerate_family(spec, budget=1 << 20)


def test_exact_kwise_uniformity_small_specs():
    # Every <= k tuple of distinct points jointly uniform, p <= 31, k <= 3.
    for p, k in ((5, 2), (7, 3)):
        spec = HashFamilySpec(k=k, p=p, domain_size=p)
        values = {
            s: tuple(evaluate(spec, s, x) for x in range(p)) for s in enumerate_family(spec)
        }
        for t in range(1, k + 1):
            for points in itertools.permutations(range(p), t):
                counts = Counter(tuple(values[s][x] for x in points) for s in values)
                assert len(counts) == p ** t
                assert set(counts.values()) == {p ** (k - t)}
