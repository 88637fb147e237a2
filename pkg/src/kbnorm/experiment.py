"""Monte-Carlo power study: rejection rates per (test, distribution, n, d) cell.

Every repetition draws its sample from a generator keyed by the cell's
distribution, n, d and the repetition index, so results do not depend on
worker count, scheduling, or which other cells are in the config.
"""

from __future__ import annotations

import csv
import io
import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .distributions import DistributionSpec, SeedScheme, expand_specs, sample
from .errors import InvalidParameterError, KBNormError
from .hz import hz_normality_test
from .kb import MIN_ROWS, kb_normality_test
from .kernels import KernelSpec

log = logging.getLogger(__name__)

TESTS = ("kb", "hz")
CONVENTIONS = ("per_half", "total")
REPORT_COLUMNS = ("test", "distribution", "n", "d", "alpha", "n_E", "reject_rate", "std_dev", "status")
SUMMARY_COLUMNS = ("test", "group", "n", "d", "alpha", "n_E", "value", "std_dev", "n_distributions")


@dataclass
class ExperimentConfig:
    tests: tuple = TESTS
    distributions: list = field(default_factory=lambda: expand_specs(["normal", "non-normal"]))
    sizes: tuple = (1000,)
    dims: tuple = (50,)
    alpha: float = 0.05
    n_E: int = 50
    master_seed: int = 0
    size_convention: str = "per_half"
    kernel_sigma: Optional[float] = None
    workers: int = 1

    def __post_init__(self):
        self.tests = tuple(self.tests)
        self.distributions = expand_specs(self.distributions)
        self.sizes = tuple(int(n) for n in self.sizes)
        self.dims = tuple(int(d) for d in self.dims)
        bad = [t for t in self.tests if t not in TESTS]
        if bad or not self.tests:
            raise InvalidParameterError(f"tests must be a non-empty subset of {TESTS}, got {self.tests}")
        if not 0.0 < self.alpha < 1.0:
            raise InvalidParameterError(f"alpha must lie in (0, 1), got {self.alpha}")
        if self.n_E < 1:
            raise InvalidParameterError(f"n_E must be >= 1, got {self.n_E}")
        if self.size_convention not in CONVENTIONS:
            raise InvalidParameterError(f"size_convention must be one of {CONVENTIONS}")
        if not self.distributions or not self.sizes or not self.dims:
            raise InvalidParameterError("distributions, sizes and dims must be non-empty")
        if min(self.sizes) < 1 or min(self.dims) < 1:
            raise InvalidParameterError("sizes and dims must be positive")
        if self.workers < 1:
            raise InvalidParameterError(f"workers must be >= 1, got {self.workers}")

    @classmethod
    def from_mapping(cls, raw: dict) -> "ExperimentConfig":
        known = {
            "tests", "distributions", "sizes", "dims", "alpha", "n_E",
            "master_seed", "size_convention", "kernel_sigma", "workers",
        }
        extra = set(raw) - known - {"output"}
        if extra:
            raise InvalidParameterError(f"unknown config keys: {sorted(extra)}")
        return cls(**{k: v for k, v in raw.items() if k in known})

    def rows(self, n: int) -> int:
        return 2 * n if self.size_convention == "per_half" else n


def precondition_failure(test: str, rows: int, d: int) -> Optional[str]:
    if test == "kb" and rows < MIN_ROWS:
        return f"kb needs >= {MIN_ROWS} rows, got {rows}"
    if test == "hz" and rows <= d:
        return f"hz needs rows > d, got rows={rows}, d={d}"
    return None


def _run_one(task):
    """Worker: one repetition of one (distribution, n, d) cell for every test."""
    spec, n, d, rows, rep, tests, alpha, sigma, master_seed = task
    rng = SeedScheme(master_seed).generator(spec.stable_key(), n, d, rep)
    X = sample(spec, rows, d, rng)
    kernel = KernelSpec(sigma=sigma)
    result = {}
    for test in tests:
        try:
            if test == "kb":
                out = kb_normality_test(X, alpha, kernel)
            else:
                out = hz_normality_test(X, alpha)
            result[test] = (1 if out.reject else 0, None)
        except KBNormError as exc:
            result[test] = (None, f"{type(exc).__name__}: {exc}")
    return result


@dataclass(frozen=True)
class CellResult:
    test: str
    distribution: DistributionSpec
    n: int
    d: int
    alpha: float
    n_E: int
    rejections: Optional[int]
    status: str

    @property
    def applicable(self) -> bool:
        return self.rejections is not None

    @property
    def reject_rate(self) -> Optional[float]:
        return None if self.rejections is None else self.rejections / self.n_E

    @property
    def std_dev(self) -> Optional[float]:
        return indicator_std(self.rejections, self.n_E) if self.applicable else None


def indicator_std(rejections: int, n_E: int) -> float:
    """Sample standard deviation (ddof=1) of n_E 0/1 indicators with the given sum."""
    if n_E < 2:
        return 0.0
    p = rejections / n_E
    return math.sqrt(n_E * p * (1.0 - p) / (n_E - 1))


@dataclass
class PowerReport:
    cells: list
    config: ExperimentConfig

    def cell(self, test: str, distribution, n: int, d: int) -> CellResult:
        name = str(distribution)
        for c in self.cells:
            if c.test == test and c.distribution.name == name and c.n == n and c.d == d:
                return c
        raise KeyError((test, name, n, d))

    def summary(self) -> list[dict]:
        """Per (test, group, n, d) averages over applicable distributions.

        The normal group reports 1 - rejection rate, the non-normal group the
        rejection rate; ``std_dev`` is the mean per-distribution std dev.
        """
        rows = []
        cfg = self.config
        for test in cfg.tests:
            for group, is_normal in (("normal", True), ("non-normal", False)):
                for n in cfg.sizes:
                    for d in cfg.dims:
                        cells = [
                            c for c in self.cells
                            if c.test == test and c.n == n and c.d == d
                            and c.distribution.is_normal == is_normal and c.applicable
                        ]
                        if not any(
                            c.distribution.is_normal == is_normal for c in self.cells
                        ):
                            continue
                        if cells:
                            vals = [1.0 - c.reject_rate if is_normal else c.reject_rate for c in cells]
                            value = float(np.mean(vals))
                            spread = float(np.mean([c.std_dev for c in cells]))
                        else:
                            value = spread = None
                        rows.append(dict(
                            test=test, group=group, n=n, d=d, alpha=cfg.alpha, n_E=cfg.n_E,
                            value=value, std_dev=spread, n_distributions=len(cells),
                        ))
        return rows

    def average_power(self, test: str, n: int, d: int) -> Optional[float]:
        for row in self.summary():
            if row["test"] == test and row["group"] == "non-normal" and row["n"] == n and row["d"] == d:
                return row["value"]
        return None

    def report_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(REPORT_COLUMNS)
        for c in self.cells:
            w.writerow([
                c.test, c.distribution.name, c.n, c.d, _num(c.alpha), c.n_E,
                _num(c.reject_rate), _num(c.std_dev), c.status,
            ])
        return buf.getvalue()

    def summary_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(SUMMARY_COLUMNS)
        for r in self.summary():
            w.writerow([_num(r[k]) if isinstance(r[k], float) or r[k] is None else r[k] for k in SUMMARY_COLUMNS])
        return buf.getvalue()


def _num(x) -> str:
    return "" if x is None else repr(float(x))


def run_experiment(config: ExperimentConfig, workers: Optional[int] = None) -> PowerReport:
    workers = config.workers if workers is None else workers
    cells = []
    tasks = []
    index = []
    for spec in config.distributions:
        for n in config.sizes:
            for d in config.dims:
                rows = config.rows(n)
                live = []
                for test in config.tests:
                    reason = precondition_failure(test, rows, d)
                    if reason:
                        cells.append(((test, spec, n, d), None, f"inapplicable: {reason}"))
                    else:
                        live.append(test)
                if not live:
                    continue
                key = (spec, n, d)
                index.append((key, tuple(live)))
                for rep in range(config.n_E):
                    tasks.append((spec, n, d, rows, rep, tuple(live), config.alpha,
                                  config.kernel_sigma, config.master_seed))

    log.info("running %d repetitions over %d cells with %d worker(s)", len(tasks), len(index), workers)
    if workers == 1:
        results = [_run_one(t) for t in tasks]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_run_one, tasks, chunksize=max(1, len(tasks) // (8 * workers))))

    pos = 0
    for (spec, n, d), live in index:
        reps = results[pos : pos + config.n_E]
        pos += config.n_E
        for test in live:
            flags = [r[test][0] for r in reps]
            errors = [r[test][1] for r in reps if r[test][1] is not None]
            if errors:
                status = f"inapplicable: {len(errors)}/{config.n_E} repetitions failed ({errors[0]})"
                cells.append(((test, spec, n, d), None, status))
            else:
                cells.append(((test, spec, n, d), int(sum(flags)), "ok"))

    order = {s.name: i for i, s in enumerate(config.distributions)}
    cells.sort(key=lambda c: (config.tests.index(c[0][0]), order[c[0][1].name], c[0][2], c[0][3]))
    out = [
        CellResult(test, spec, n, d, config.alpha, config.n_E, rej, status)
        for (test, spec, n, d), rej, status in cells
    ]
    return PowerReport(cells=out, config=config)
