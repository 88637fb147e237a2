"""Result record shared by the independence and normality tests."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any, Optional, Union

from .special import GammaParams, LogNormalParams


@dataclass(frozen=True)
class PermutationNull:
    shuffles: int
    seed: Optional[int] = None


NullParams = Union[GammaParams, LogNormalParams, PermutationNull]


@dataclass(frozen=True)
class TestOutcome:
    """Verdict of one test at level ``alpha``.

    ``reject`` is ``statistic > threshold``; when a p-value is present the two
    are constructed to agree with ``p_value < alpha``.
    """

    __test__ = False  # not a pytest class

    statistic: float
    threshold: float
    p_value: Optional[float]
    reject: bool
    alpha: float
    null_params: NullParams
    info: dict = field(default_factory=dict)

    @property
    def indicator(self) -> int:
        return int(self.reject)

    def to_dict(self) -> dict[str, Any]:
        null = self.null_params
        if isinstance(null, GammaParams):
            null_rec = {"kind": "gamma", "shape": null.shape, "scale": null.scale}
        elif isinstance(null, LogNormalParams):
            null_rec = {"kind": "lognormal", "log_mean": null.log_mean, "log_sd": null.log_sd}
        else:
            null_rec = {"kind": "permutation", "shuffles": null.shuffles, "seed": null.seed}
        return {
            "statistic": self.statistic,
            "threshold": self.threshold if math.isfinite(self.threshold) else None,
            "p_value": self.p_value,
            "reject": self.reject,
            "alpha": self.alpha,
            "null": null_rec,
            **self.info,
        }
