"""Shared test helpers."""

from __future__ import annotations

import numpy as np


def ks_statistic(samples: np.ndarray, cdf, upper: float | None = None) -> float:
    """One-sample Kolmogorov-Smirnov statistic against a continuous CDF.

    With ``upper`` set, the supremum is taken over the continuous region
    strictly below it (ranks stay global), which is how a distribution
    with a point mass at ``upper`` is compared on its continuous part.
    """
    x = np.sort(np.asarray(samples, dtype=float))
    n = x.size
    ranks = np.arange(1, n + 1, dtype=float)
    if upper is not None:
        keep = x < upper
        x, ranks = x[keep], ranks[keep]
    fx = np.asarray(cdf(x), dtype=float)
    above = np.max(ranks / n - fx)
    below = np.max(fx - (ranks - 1.0) / n)
    return float(max(above, below))


def total_variation(p: dict, q: dict) -> float:
    """Total variation distance between two discrete distributions."""
    keys = set(p) | set(q)
    return 0.5 * sum(abs(p.get(k, 0.0) - q.get(k, 0.0)) for k in keys)
