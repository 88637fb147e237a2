import numpy as np
import pytest

from kbnorm import (
    DegenerateSampleError,
    InsufficientDataError,
    KernelSpec,
    NullMode,
    SeedScheme,
    hsic_independence_test,
    kb_normality_score,
    kb_normality_test,
    kb_split,
    parse_spec,
    sample,
    sums_and_differences,
)
from kbnorm.kb import SplitPair


def test_split_even():
    X = np.arange(8.0).reshape(4, 2)
    pair = kb_split(X)
    np.testing.assert_array_equal(pair.first, X[:2])
    np.testing.assert_array_equal(pair.second, X[2:])
    assert pair.dropped_tail == 0


def test_split_odd():
    pair = kb_split(np.arange(5.0))
    assert pair.first.shape == pair.second.shape == (2, 1)
    assert pair.dropped_tail == 1


def test_split_too_small():
    with pytest.raises(InsufficientDataError):
        kb_split(np.arange(3.0))


@pytest.mark.parametrize("m", [4, 9, 30, 31])
def test_split_reassembles(m, rng):
    X = rng.normal(size=(m, 3))
    pair = kb_split(X)
    rebuilt = np.vstack([pair.first, pair.second, X[2 * (m // 2):]])
    np.testing.assert_array_equal(rebuilt, X)
    assert len(X) - 2 * len(pair.first) == pair.dropped_tail


def test_sums_and_differences():
    pair = SplitPair(np.array([[1.0, 2.0]]), np.array([[3.0, -1.0]]), 0)
    diff, total = sums_and_differences(pair)
    np.testing.assert_array_equal(diff, [[-2.0, 3.0]])
    np.testing.assert_array_equal(total, [[4.0, 1.0]])


def test_identical_halves_give_zero_difference(rng):
    A = rng.normal(size=(5, 2))
    diff, _ = sums_and_differences(SplitPair(A, A.copy(), 0))
    assert not diff.any()


def test_reconstruction(rng):
    pair = kb_split(rng.integers(-50, 50, size=(20, 3)).astype(float))
    diff, total = sums_and_differences(pair)
    np.testing.assert_array_equal((diff + total) / 2, pair.first)
    np.testing.assert_array_equal((total - diff) / 2, pair.second)


def test_equals_hsic_on_pair(rng):
    X = rng.normal(size=(101, 3))
    out = kb_normality_test(X, 0.05)
    diff, total = sums_and_differences(kb_split(X))
    ref = hsic_independence_test(diff, total, 0.05)
    assert out.statistic == ref.statistic and out.threshold == ref.threshold
    assert out.info["dropped_tail"] == 1 and out.info["n"] == 50


def test_deterministic(rng):
    X = rng.exponential(size=(60, 2))
    assert kb_normality_test(X) == kb_normality_test(X)
    mode = NullMode.permutation(120, 4)
    assert kb_normality_test(X, null=mode) == kb_normality_test(X, null=mode)


def test_shuffle_before_split_changes_pairing(rng):
    X = rng.exponential(size=(60, 2))
    a = kb_normality_test(X, shuffle_seed=1)
    b = kb_normality_test(X, shuffle_seed=1)
    assert a == b and a.statistic != kb_normality_test(X).statistic


def test_minimum_rows(rng):
    with pytest.raises(InsufficientDataError):
        kb_normality_test(rng.normal(size=(11, 2)))


def test_constant_sample():
    with pytest.raises(DegenerateSampleError):
        kb_normality_test(np.ones((40, 3)))


def test_strong_alternative_rejected():
    spec = parse_spec("ChiSq(1)")
    hits = sum(
        kb_normality_test(sample(spec, 400, 3, SeedScheme(5).generator(r))).reject for r in range(10)
    )
    assert hits >= 9


def test_permutation_mode_agrees_on_strong_signal():
    X = sample(parse_spec("ChiSq(1)"), 300, 2, SeedScheme(1).generator(0))
    out = kb_normality_test(X, null=NullMode.permutation(200, 7))
    assert out.reject and out.p_value == 1 / 201


class TestScore:
    def test_nonnegative_and_larger_for_skewed(self):
        normal, skewed = [], []
        for r in range(20):
            normal.append(kb_normality_score(sample(parse_spec("NormalStdIso"), 400, 3, SeedScheme(8).generator(r))))
            skewed.append(kb_normality_score(sample(parse_spec("ChiSq(1)"), 400, 3, SeedScheme(9).generator(r))))
        assert min(normal + skewed) >= 0
        assert np.median(skewed) > np.median(normal)

    def test_equals_test_statistic(self, rng):
        X = rng.laplace(size=(80, 2))
        assert kb_normality_score(X) == kb_normality_test(X).statistic

    def test_invariant_to_permutation_within_halves(self, rng):
        X = rng.laplace(size=(60, 2))
        perm = rng.permutation(30)
        Xp = np.vstack([X[:30][perm], X[30:][perm]])
        assert kb_normality_score(Xp) == pytest.approx(kb_normality_score(X), abs=1e-12)

    def test_fixed_kernel(self, rng):
        X = rng.normal(size=(40, 2))
        assert kb_normality_score(X, KernelSpec.fixed(2.0)) >= 0
