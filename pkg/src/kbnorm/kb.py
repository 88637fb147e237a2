"""Kac-Bernstein normality test.

Two independent halves X1, X2 of an i.i.d. sample are normal exactly when
X1 - X2 and X1 + X2 are independent, so normality is tested by running an
independence test on the differences and sums.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Optional

import numpy as np

from .errors import InsufficientDataError, InvalidParameterError, ShapeError
from .hsic import _MEDIAN, hsic_b, hsic_independence_test, permutation_independence_test
from .kernels import KernelSpec, as_sample
from .outcome import TestOutcome

MIN_ROWS = 12


@dataclass(frozen=True)
class SplitPair:
    first: np.ndarray
    second: np.ndarray
    dropped_tail: int


@dataclass(frozen=True)
class NullMode:
    """``kind`` is "gamma" or "permutation"; the latter uses shuffles and seed."""

    kind: str = "gamma"
    shuffles: int = 500
    seed: Optional[int] = None

    def __post_init__(self):
        if self.kind not in ("gamma", "permutation"):
            raise InvalidParameterError(f"unknown null mode {self.kind!r}")

    @classmethod
    def permutation(cls, shuffles: int = 500, seed: Optional[int] = None) -> "NullMode":
        return cls("permutation", shuffles, seed)


GAMMA = NullMode()


def kb_split(sample) -> SplitPair:
    """First half / second half in sample order; an odd last row is dropped."""
    X = as_sample(sample)
    m = X.shape[0]
    if m < 4:
        raise InsufficientDataError(f"need at least 4 rows to split, got {m}")
    half = m // 2
    return SplitPair(first=X[:half], second=X[half : 2 * half], dropped_tail=m - 2 * half)


def sums_and_differences(pair: SplitPair):
    """Return (first - second, first + second)."""
    if pair.first.shape != pair.second.shape:
        raise ShapeError(f"halves differ in shape: {pair.first.shape} vs {pair.second.shape}")
    return pair.first - pair.second, pair.first + pair.second


def _prepare(sample, shuffle_seed):
    X = as_sample(sample)
    if shuffle_seed is not None:
        X = X[np.random.default_rng(shuffle_seed).permutation(X.shape[0])]
    return kb_split(X)


def kb_normality_test(
    sample,
    alpha: float = 0.05,
    kernel: KernelSpec = _MEDIAN,
    null: NullMode = GAMMA,
    shuffle_seed: Optional[int] = None,
) -> TestOutcome:
    """Test multivariate normality of ``sample`` (rows are observations).

    The kernel policy is applied separately to the difference and sum
    samples, so with the median heuristic each gets its own bandwidth.
    ``shuffle_seed`` permutes rows before splitting; by default the split
    follows sample order.
    """
    X = as_sample(sample)
    if X.shape[0] < MIN_ROWS:
        raise InsufficientDataError(f"need at least {MIN_ROWS} rows, got {X.shape[0]}")
    pair = _prepare(X, shuffle_seed)
    diff, total = sums_and_differences(pair)
    if null.kind == "gamma":
        out = hsic_independence_test(diff, total, alpha, kernel, kernel)
    else:
        out = permutation_independence_test(
            diff, total, alpha, kernel, kernel, shuffles=null.shuffles, seed=null.seed
        )
    info = dict(out.info)
    info.update(rows=X.shape[0], d=X.shape[1], dropped_tail=pair.dropped_tail)
    return replace(out, info=info)


def kb_normality_score(sample, kernel: KernelSpec = _MEDIAN, shuffle_seed: Optional[int] = None) -> float:
    """n * HSIC_b between differences and sums; larger means less normal.

    A descriptive score only, with no null calibration attached.
    """
    X = as_sample(sample)
    if X.shape[0] < MIN_ROWS:
        raise InsufficientDataError(f"need at least {MIN_ROWS} rows, got {X.shape[0]}")
    diff, total = sums_and_differences(_prepare(X, shuffle_seed))
    return diff.shape[0] * hsic_b(diff, total, kernel, kernel)
