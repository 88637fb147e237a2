"""Gaussian Gram matrices, double centering and the median-distance bandwidth."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.spatial.distance import pdist, squareform

from .errors import (
    DegenerateSampleError,
    InsufficientDataError,
    InvalidParameterError,
    ShapeError,
)


def as_sample(data, name: str = "sample") -> np.ndarray:
    """Validate ``data`` and return it as a float (n, d) array.

    A 1-D input is read as n scalar observations.
    """
    arr = np.asarray(data, dtype=float)
    if arr.ndim == 1:
        arr = arr[:, None]
    if arr.ndim != 2:
        raise ShapeError(f"{name} must be a 2-D (n, d) array, got ndim={arr.ndim}")
    n, d = arr.shape
    if n < 1 or d < 1:
        raise InsufficientDataError(f"{name} is empty (shape {arr.shape})")
    if not np.all(np.isfinite(arr)):
        raise InvalidParameterError(f"{name} contains NaN or infinite entries")
    return arr


@dataclass(frozen=True)
class KernelSpec:
    """Gaussian kernel with either a fixed bandwidth or the median heuristic.

    ``sigma=None`` selects the median heuristic, resolved per sample.
    """

    sigma: Optional[float] = None
    family: str = "gaussian"

    def __post_init__(self):
        if self.family != "gaussian":
            raise InvalidParameterError(f"unsupported kernel family {self.family!r}")
        if self.sigma is not None and not (np.isfinite(self.sigma) and self.sigma > 0):
            raise InvalidParameterError(f"bandwidth must be positive, got {self.sigma}")

    @classmethod
    def fixed(cls, sigma: float) -> "KernelSpec":
        return cls(sigma=float(sigma))

    @classmethod
    def median(cls) -> "KernelSpec":
        return cls(sigma=None)

    @property
    def is_median(self) -> bool:
        return self.sigma is None

    def bandwidth(self, sample) -> float:
        if self.sigma is None:
            return median_heuristic(sample)
        return self.sigma

    def describe(self) -> str:
        return "median" if self.sigma is None else repr(self.sigma)


def gaussian_kernel(x, y, sigma: float) -> float:
    """exp(-||x - y||^2 / (2 sigma^2)) for two points of equal dimension."""
    if not sigma > 0:
        raise InvalidParameterError(f"bandwidth must be positive, got {sigma}")
    x = np.atleast_1d(np.asarray(x, dtype=float))
    y = np.atleast_1d(np.asarray(y, dtype=float))
    if x.shape != y.shape:
        raise ShapeError(f"dimension mismatch: {x.shape} vs {y.shape}")
    diff = x - y
    return float(np.exp(-np.dot(diff, diff) / (2.0 * sigma * sigma)))


def median_heuristic(sample) -> float:
    """Median of the n(n-1)/2 pairwise Euclidean distances.

    With an even number of distances the two middle order statistics are
    averaged (``np.median`` semantics).
    """
    X = as_sample(sample)
    if X.shape[0] < 2:
        raise InsufficientDataError("median heuristic needs at least 2 observations")
    dists = pdist(X, "euclidean")
    if not np.any(dists > 0):
        raise DegenerateSampleError("all observations coincide; bandwidth undefined")
    sigma = float(np.median(dists))
    if sigma == 0.0:
        raise DegenerateSampleError("more than half of the pairwise distances are zero; bandwidth undefined")
    return sigma


def gram_matrix(sample, spec: KernelSpec = KernelSpec()) -> np.ndarray:
    X = as_sample(sample)
    sigma = spec.bandwidth(X)
    if X.shape[0] == 1:
        return np.ones((1, 1))
    sq = squareform(pdist(X, "sqeuclidean"))
    return np.exp(sq * (-0.5 / (sigma * sigma)))


def center_gram(K) -> np.ndarray:
    """Return HKH with H = I - 11^T/n, without forming H."""
    K = np.asarray(K, dtype=float)
    if K.ndim != 2 or K.shape[0] != K.shape[1]:
        raise ShapeError(f"Gram matrix must be square, got shape {K.shape}")
    row = K.mean(axis=1)
    # reuse the row means for symmetric input so the result stays exactly symmetric
    col = row if np.array_equal(K, K.T) else K.mean(axis=0)
    return K - (row[:, None] + col[None, :]) + row.mean()
