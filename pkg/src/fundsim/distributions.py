"""Heavy-tailed return distributions for early-stage deals.

Three variants of a power-law law for per-deal return multiples:

* ``RAW`` -- density proportional to ``x**-alpha`` on ``[x_min, inf)``.
* ``SQUASHED_TO_ZERO`` -- the ``[x_min, 1)`` region is rescaled onto
  ``[0, 1)`` so that total losses are representable; the tail above 1 is
  unchanged (the density keeps a step at 1).
* ``BOUNDED`` -- like the squashed variant, but all tail mass above a cap
  ``x_max`` is concentrated in a point mass at ``x_max``.

Sampling is exact inverse transform, so output is reproducible
bit-for-bit from a :class:`RandomStream`.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .errors import ConfigurationError, DomainError

# Keeps 1/(alpha-1) finite in the quantile function.
MIN_ALPHA_MARGIN = 1e-9


@dataclass(frozen=True)
class PowerLawParams:
    """Tail exponent and support minimum of the raw power law.

    ``x_min`` is a return multiple in ``(0, 1]``: the squashing map that
    produces the simulation variants needs ``x_min < 1``, while the raw
    law and its closed-form statistics are also meaningful at ``x_min = 1``.
    """

    alpha: float
    x_min: float

    def __post_init__(self):
        if not self.alpha > 1.0 + MIN_ALPHA_MARGIN:
            raise ConfigurationError(
                f"alpha must be > 1 (got {self.alpha}); the tail exponent "
                "1/(alpha-1) is undefined otherwise"
            )
        if not 0.0 < self.x_min <= 1.0:
            raise ConfigurationError(
                f"x_min must be in (0, 1] (got {self.x_min})"
            )


class Variant(enum.Enum):
    RAW = "raw"
    SQUASHED_TO_ZERO = "squashed_to_zero"
    BOUNDED = "bounded"


@dataclass(frozen=True)
class DistributionSpec:
    """A power law plus the variant used to generate deal returns."""

    params: PowerLawParams
    variant: Variant
    x_max: float | None = None

    def __post_init__(self):
        if self.variant is Variant.BOUNDED:
            if self.x_max is None or not self.x_max > 1.0:
                raise ConfigurationError(
                    f"bounded variant requires x_max > 1 (got {self.x_max})"
                )
            if not math.isfinite(self.x_max):
                raise ConfigurationError("x_max must be finite; use the "
                                         "squashed variant for unbounded returns")
        elif self.x_max is not None:
            raise ConfigurationError(
                f"x_max only applies to the bounded variant (got {self.x_max})"
            )
        if self.variant is not Variant.RAW and self.params.x_min >= 1.0:
            raise ConfigurationError(
                "squashed and bounded variants require x_min < 1; the "
                "rescaling of [x_min, 1) onto [0, 1) is degenerate otherwise"
            )

    @classmethod
    def raw(cls, params: PowerLawParams) -> "DistributionSpec":
        return cls(params, Variant.RAW)

    @classmethod
    def squashed(cls, params: PowerLawParams) -> "DistributionSpec":
        return cls(params, Variant.SQUASHED_TO_ZERO)

    @classmethod
    def bounded(cls, params: PowerLawParams, x_max: float) -> "DistributionSpec":
        return cls(params, Variant.BOUNDED, x_max)


@dataclass(frozen=True)
class RandomStream:
    """A named substream of a master seed.

    Streams with the same ``(master_seed, path)`` yield identical draws;
    streams with different paths are independent for practical purposes.
    A stream is meant to be consumed by a single task: concurrent code
    must derive one child stream per task instead of sharing.
    """

    master_seed: int
    path: tuple[int, ...] = ()

    def __post_init__(self):
        if not 0 <= int(self.master_seed) < 2 ** 64:
            raise ConfigurationError(
                f"master_seed must be a 64-bit unsigned integer (got {self.master_seed})"
            )
        if any(p < 0 for p in self.path):
            raise ConfigurationError(f"stream path must be non-negative (got {self.path})")

    def child(self, *indices: int) -> "RandomStream":
        """Derive the substream named by appending ``indices`` to the path."""
        return RandomStream(self.master_seed, self.path + tuple(int(i) for i in indices))

    def generator(self) -> np.random.Generator:
        seq = np.random.SeedSequence(self.master_seed, spawn_key=self.path)
        return np.random.Generator(np.random.PCG64(seq))


@dataclass(frozen=True)
class ClosedFormStats:
    """Analytic statistics of the raw power law.

    Divergent quantities carry ``math.inf`` plus an explicit flag so that
    callers can tell "diverges" apart from "large".
    """

    alpha: float
    x_min: float
    mean: float
    mean_finite: bool
    median: float
    moment_order: int
    moment_value: float
    moment_finite: bool
    max_scaling_exponent: float

    def to_dict(self) -> dict:
        """JSON-safe form: divergent values become null, flags stay."""
        return {
            "alpha": self.alpha,
            "x_min": self.x_min,
            "mean": self.mean if self.mean_finite else None,
            "mean_finite": self.mean_finite,
            "median": self.median,
            "moment_k": self.moment_order,
            "moment_value": self.moment_value if self.moment_finite else None,
            "moment_finite": self.moment_finite,
            "max_exponent": self.max_scaling_exponent,
        }


def _as_float(x) -> tuple[np.ndarray, bool]:
    arr = np.asarray(x, dtype=float)
    return arr, arr.ndim == 0


def _ret(arr: np.ndarray, scalar: bool):
    return float(arr) if scalar else arr


def pdf_raw(params: PowerLawParams, x):
    """Density of the raw power law; defined for ``x >= x_min``."""
    arr, scalar = _as_float(x)
    if np.any(arr < params.x_min):
        raise DomainError(f"x must be >= x_min={params.x_min} (got {x})")
    out = (params.alpha - 1.0) / params.x_min * (arr / params.x_min) ** (-params.alpha)
    return _ret(out, scalar)


def cdf_raw(params: PowerLawParams, x):
    """Cumulative distribution of the raw power law; ``x >= x_min``."""
    arr, scalar = _as_float(x)
    if np.any(arr < params.x_min):
        raise DomainError(f"x must be >= x_min={params.x_min} (got {x})")
    out = 1.0 - (arr / params.x_min) ** (1.0 - params.alpha)
    return _ret(out, scalar)


def quantile_raw(params: PowerLawParams, u):
    """Inverse of :func:`cdf_raw` on ``u in [0, 1)``; used for sampling."""
    arr, scalar = _as_float(u)
    if np.any((arr < 0.0) | (arr >= 1.0)):
        raise DomainError(f"u must be in [0, 1) (got {u})")
    out = params.x_min * (1.0 - arr) ** (-1.0 / (params.alpha - 1.0))
    return _ret(out, scalar)


def pdf_squashed(params: PowerLawParams, x):
    """Density of the squashed-to-zero variant; ``x >= 0``.

    Below 1 this is the raw density pushed through the rescaling of
    ``[x_min, 1)`` onto ``[0, 1)``; at and above 1 it coincides with
    :func:`pdf_raw`. The step at 1 is intentional.
    """
    arr, scalar = _as_float(x)
    if np.any(arr < 0.0):
        raise DomainError(f"x must be >= 0 (got {x})")
    w = 1.0 - params.x_min
    inner = (w * arr + params.x_min) / params.x_min
    body = w * (params.alpha - 1.0) / params.x_min * inner ** (-params.alpha)
    # np.where evaluates both branches; mask the tail branch's domain.
    tail_x = np.maximum(arr, 1.0)
    tail = (params.alpha - 1.0) / params.x_min * (tail_x / params.x_min) ** (-params.alpha)
    out = np.where(arr < 1.0, body, tail)
    return _ret(out, scalar)


def cdf_squashed(params: PowerLawParams, x):
    """Cumulative distribution of the squashed variant; continuous."""
    arr, scalar = _as_float(x)
    if np.any(arr < 0.0):
        raise DomainError(f"x must be >= 0 (got {x})")
    w = 1.0 - params.x_min
    mapped = np.where(arr < 1.0, w * arr + params.x_min, np.maximum(arr, 1.0))
    out = 1.0 - (mapped / params.x_min) ** (1.0 - params.alpha)
    return _ret(out, scalar)


def point_mass_at_bound(params: PowerLawParams, x_max: float) -> float:
    """Probability lump that the bounded variant places at the cap.

    Equals the raw tail mass above ``x_max``: ``(x_max/x_min)**(1-alpha)``.
    """
    if not x_max > 1.0:
        raise DomainError(f"x_max must be > 1 (got {x_max})")
    return float((x_max / params.x_min) ** (1.0 - params.alpha))


def sample(spec: DistributionSpec, stream: RandomStream, n: int) -> np.ndarray:
    """Draw ``n`` returns from ``spec``, deterministically from ``stream``.

    One uniform is consumed per draw for every variant: squashing is a
    measurable map of the raw draw and the cap is a clamp, so a bounded
    pool generated from a given stream is the elementwise-clamped twin of
    the squashed pool from the same stream.
    """
    if n < 0:
        raise ConfigurationError(f"sample count must be >= 0 (got {n})")
    gen = stream.generator()
    u = gen.random(int(n))
    x = quantile_raw(spec.params, u)
    x = np.asarray(x, dtype=float)
    if spec.variant is Variant.RAW:
        return x
    w = 1.0 - spec.params.x_min
    x = np.where(x < 1.0, (x - spec.params.x_min) / w, x)
    if spec.variant is Variant.BOUNDED:
        np.minimum(x, spec.x_max, out=x)
    return x


def closed_form_stats(params: PowerLawParams, k: int = 1) -> ClosedFormStats:
    """Mean, median, k-th moment, and max-scaling exponent of the raw law.

    The mean diverges for ``alpha <= 2`` and the k-th moment for
    ``k >= alpha - 1``; the expected sample maximum grows like
    ``n ** (1/(alpha-1))``.
    """
    if k < 1:
        raise ConfigurationError(f"moment order must be >= 1 (got {k})")
    a, m = params.alpha, params.x_min
    mean_finite = a > 2.0
    mean = (a - 1.0) / (a - 2.0) * m if mean_finite else math.inf
    median = 2.0 ** (1.0 / (a - 1.0)) * m
    moment_finite = k < a - 1.0
    moment = (a - 1.0) / (a - k - 1.0) * m ** k if moment_finite else math.inf
    return ClosedFormStats(
        alpha=a,
        x_min=m,
        mean=mean,
        mean_finite=mean_finite,
        median=median,
        moment_order=int(k),
        moment_value=moment,
        moment_finite=moment_finite,
        max_scaling_exponent=1.0 / (a - 1.0),
    )
