"""Seeded samplers for the normal families and the i.i.d.-component alternatives.

Specs are written as ``Tag`` or ``Tag(arg, ...)``, e.g. ``ChiSq(1)``,
``Uniform(-1,1)``, ``Beta(8,2)``; ``parse_spec`` reads that form and
``DistributionSpec.name`` writes it back.
"""

from __future__ import annotations

import re
import zlib
from dataclasses import dataclass

import numpy as np

from .errors import InvalidParameterError

NORMAL_TAGS = ("NormalStdIso", "NormalCov", "NormalMeanIso", "NormalMeanCov")

# tag -> (number of args, default args)
_SIGNATURES = {
    "NormalStdIso": (0, ()),
    "NormalCov": (0, ()),
    "NormalMeanIso": (0, ()),
    "NormalMeanCov": (0, ()),
    "ChiSq": (1, None),
    "Uniform": (2, (0.0, 1.0)),
    "Laplace": (2, (0.0, 1.0)),
    "Logistic": (2, (0.0, 1.0)),
    "Power": (1, (2.0,)),
    "Cauchy": (2, (0.0, 1.0)),
    "Beta": (2, None),
    "NormalMixture": (4, (0.5, 0.0, 0.5, 1.0)),
}


def _fmt(x: float) -> str:
    return f"{x:g}"


@dataclass(frozen=True)
class DistributionSpec:
    tag: str
    params: tuple = ()

    def __post_init__(self):
        if self.tag not in _SIGNATURES:
            raise InvalidParameterError(f"unknown distribution tag {self.tag!r}")
        nargs, default = _SIGNATURES[self.tag]
        params = tuple(float(p) for p in self.params)
        if not params and default is not None:
            params = tuple(float(p) for p in default)
        if len(params) != nargs:
            raise InvalidParameterError(f"{self.tag} takes {nargs} parameter(s), got {len(params)}")
        object.__setattr__(self, "params", params)
        self._validate()

    def _validate(self):
        p = self.params
        tag = self.tag
        bad = (
            (tag == "ChiSq" and p[0] not in (1.0, 2.0))
            or (tag == "Uniform" and not p[0] < p[1])
            or (tag in ("Laplace", "Logistic", "Cauchy") and not p[1] > 0)
            or (tag == "Power" and not p[0] > 0)
            or (tag == "Beta" and not (p[0] > 0 and p[1] > 0))
            or (tag == "NormalMixture" and not (0 < p[0] < 1 and p[3] > 0))
        )
        if bad:
            raise InvalidParameterError(f"invalid parameters for {tag}: {p}")

    @property
    def name(self) -> str:
        if not self.params:
            return self.tag
        return f"{self.tag}({','.join(_fmt(x) for x in self.params)})"

    @property
    def is_normal(self) -> bool:
        return self.tag in NORMAL_TAGS

    def stable_key(self) -> int:
        """Process-independent 32-bit key used in seed derivation."""
        return zlib.crc32(self.name.encode())

    def __str__(self):
        return self.name


_SPEC_RE = re.compile(r"^\s*([A-Za-z]+)\s*(?:\((.*)\))?\s*$")


def parse_spec(text: str) -> DistributionSpec:
    m = _SPEC_RE.match(text)
    if not m:
        raise InvalidParameterError(f"cannot parse distribution spec {text!r}")
    tag, args = m.group(1), m.group(2)
    params = ()
    if args is not None and args.strip():
        try:
            params = tuple(float(a) for a in args.split(","))
        except ValueError:
            raise InvalidParameterError(f"non-numeric parameter in {text!r}") from None
    return DistributionSpec(tag, params)


NORMAL_FAMILIES = tuple(DistributionSpec(t) for t in NORMAL_TAGS)

NON_NORMAL_LAWS = tuple(
    parse_spec(s)
    for s in (
        "ChiSq(1)",
        "ChiSq(2)",
        "Uniform(0,1)",
        "Uniform(-1,1)",
        "Laplace(0,1)",
        "Logistic(0,1)",
        "Logistic(0,2)",
        "Power(2)",
        "Cauchy(0,1)",
        "Beta(5,5)",
        "Beta(8,2)",
        "Beta(2,8)",
        "NormalMixture(0.5,0,0.5,1)",
    )
)

GROUPS = {"normal": NORMAL_FAMILIES, "non-normal": NON_NORMAL_LAWS}


def expand_specs(items) -> list[DistributionSpec]:
    """Parse a list of spec strings; the names ``normal`` and ``non-normal`` expand to groups."""
    out = []
    for item in items:
        if isinstance(item, DistributionSpec):
            out.append(item)
        elif item in GROUPS:
            out.extend(GROUPS[item])
        else:
            out.append(parse_spec(item))
    return out


class SeedScheme:
    """Derives an independent generator per (key..., repetition) from one master seed."""

    def __init__(self, master_seed: int):
        self.master_seed = int(master_seed)

    def seed_sequence(self, *key: int) -> np.random.SeedSequence:
        return np.random.SeedSequence(self.master_seed, spawn_key=tuple(int(k) for k in key))

    def generator(self, *key: int) -> np.random.Generator:
        return np.random.Generator(np.random.PCG64(self.seed_sequence(*key)))

    def stream_seed(self, *key: int) -> int:
        return int(self.seed_sequence(*key).generate_state(2, np.uint64)[0])


def random_mean_and_cov_factor(d: int, rng: np.random.Generator):
    """mu ~ U[-1, 1]^d and U with i.i.d. U[0, 1] entries; covariance is U U^T."""
    if d < 1:
        raise InvalidParameterError(f"d must be positive, got {d}")
    mu = rng.uniform(-1.0, 1.0, size=d)
    U = rng.uniform(0.0, 1.0, size=(d, d))
    return mu, U


def _normal(tag, n, d, rng):
    mu = np.zeros(d)
    U = None
    if tag in ("NormalCov", "NormalMeanCov", "NormalMeanIso"):
        mu_r, U_r = random_mean_and_cov_factor(d, rng)
        if tag in ("NormalMeanIso", "NormalMeanCov"):
            mu = mu_r
        if tag in ("NormalCov", "NormalMeanCov"):
            U = U_r
    z = rng.standard_normal((n, d))
    x = z if U is None else z @ U.T
    return x + mu


def sample(spec: DistributionSpec, n: int, d: int, rng: np.random.Generator) -> np.ndarray:
    """Draw an (n, d) sample; non-normal laws have i.i.d. components."""
    if n < 1 or d < 1:
        raise InvalidParameterError(f"n and d must be positive, got n={n}, d={d}")
    tag, p = spec.tag, spec.params
    if spec.is_normal:
        return _normal(tag, n, d, rng)
    shape = (n, d)
    if tag == "ChiSq":
        return np.sum(rng.standard_normal((int(p[0]),) + shape) ** 2, axis=0)
    if tag == "Uniform":
        return p[0] + (p[1] - p[0]) * rng.random(shape)
    if tag == "Laplace":
        u = rng.random(shape) - 0.5
        return p[0] - p[1] * np.sign(u) * np.log1p(-2.0 * np.abs(u))
    if tag == "Logistic":
        u = rng.random(shape)
        return p[0] + p[1] * (np.log(u) - np.log1p(-u))
    if tag == "Power":
        return rng.random(shape) ** (1.0 / p[0])
    if tag == "Cauchy":
        return p[0] + p[1] * np.tan(np.pi * (rng.random(shape) - 0.5))
    if tag == "Beta":
        g1 = rng.standard_gamma(p[0], shape)
        g2 = rng.standard_gamma(p[1], shape)
        return g1 / (g1 + g2)
    if tag == "NormalMixture":
        w, mu1, mu2, sd = p
        second = rng.random(shape) >= w
        return np.where(second, mu2, mu1) + sd * rng.standard_normal(shape)
    raise InvalidParameterError(f"no sampler for {tag}")
