"""Portfolio construction and fund-level return computation.

A :class:`DealPool` is the finite universe of deals available to every
fund in one replicate. Funds draw a portfolio from the pool (optionally
reweighted by manager skill), size their tickets, apply a follow-on
policy, and record a gross multiple.

Determinism contract: every random decision is derived from a
:class:`~fundsim.distributions.RandomStream` child named by structural
indices only (block number and stage), so a cohort is reproducible
bit-for-bit regardless of scheduling. Stages use separate substreams,
which makes a zero reserve bit-identical to not running the follow-on
stage at all.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

from .distributions import (
    DistributionSpec,
    PowerLawParams,
    RandomStream,
    Variant,
    pdf_squashed,
    sample,
)
from .errors import ConfigurationError

# Funds simulated per vectorized block. Fixed so that block boundaries
# (and therefore results) never depend on scheduling or worker count.
BLOCK_FUNDS = 4096

_STAGE_PORTFOLIO = 0
_STAGE_TICKETS = 1
_STAGE_FOLLOW_ON = 2


@dataclass(frozen=True)
class DealPool:
    """One replicate's universe of investable deal multiples."""

    multiples: np.ndarray
    spec: DistributionSpec
    seed_path: RandomStream
    _weight_cache: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        arr = np.asarray(self.multiples, dtype=float)
        if arr.ndim != 1 or arr.size < 1:
            raise ConfigurationError("pool must hold at least one deal multiple")
        if np.any(arr < 0.0):
            raise ConfigurationError("deal multiples must be >= 0")
        if self.spec.variant is Variant.BOUNDED and np.any(arr > self.spec.x_max):
            raise ConfigurationError(
                f"bounded pool holds a multiple above the cap {self.spec.x_max}"
            )
        arr.flags.writeable = False
        object.__setattr__(self, "multiples", arr)

    @property
    def size(self) -> int:
        return int(self.multiples.size)


@dataclass(frozen=True)
class SkillProfile:
    """The tail exponent a manager's picks effectively follow.

    Lower than the world's exponent means better deals are picked more
    often; higher means the opposite. Equal means an average manager.
    """

    effective_alpha: float

    def __post_init__(self):
        if not self.effective_alpha > 1.0 + 1e-9:
            raise ConfigurationError(
                f"skill alpha must be > 1 (got {self.effective_alpha})"
            )


class TicketKind(enum.Enum):
    UNIFORM = "uniform"
    RANDOM_RATIO = "random_ratio"
    QUALITY_PROPORTIONAL = "quality_proportional"


@dataclass(frozen=True)
class TicketPolicy:
    """How initial capital is split across the portfolio.

    ``max_min_ratio`` caps the largest-to-smallest raw ticket at the
    stated ratio, exactly. Quality-proportional sizing scales tickets
    linearly with a noisy estimate of each deal's multiple.
    """

    kind: TicketKind
    max_min_ratio: float = 1.0
    noise_halfwidth: float = 0.0

    def __post_init__(self):
        if self.max_min_ratio < 1.0:
            raise ConfigurationError(
                f"max_min_ratio must be >= 1 (got {self.max_min_ratio})"
            )
        if not 0.0 <= self.noise_halfwidth < 1.0:
            raise ConfigurationError(
                f"noise_halfwidth must be in [0, 1) (got {self.noise_halfwidth})"
            )

    @classmethod
    def uniform(cls) -> "TicketPolicy":
        return cls(TicketKind.UNIFORM)

    @classmethod
    def random_ratio(cls, max_min_ratio: float) -> "TicketPolicy":
        return cls(TicketKind.RANDOM_RATIO, max_min_ratio)

    @classmethod
    def quality_proportional(
        cls, max_min_ratio: float, noise_halfwidth: float = 0.25
    ) -> "TicketPolicy":
        return cls(TicketKind.QUALITY_PROPORTIONAL, max_min_ratio, noise_halfwidth)


@dataclass(frozen=True)
class FollowOnPolicy:
    """Reserve sizing and selection rule for follow-on investments.

    ``reserve_fraction`` is the share of the whole fund held back; the
    reserve is split equally over the followed deals, each entering at
    ``dilution_factor`` times the initial price. ``selectivity`` is
    ``None`` to follow every deal, or ``(p_follow_low, p_follow_high)``
    giving the follow probability for deals returning below / at least
    their cost.
    """

    reserve_fraction: float = 0.0
    dilution_factor: float = 3.0
    selectivity: tuple[float, float] | None = None

    def __post_init__(self):
        if not 0.0 <= self.reserve_fraction < 1.0:
            raise ConfigurationError(
                f"reserve_fraction must be in [0, 1) (got {self.reserve_fraction})"
            )
        if not self.dilution_factor > 0.0:
            raise ConfigurationError(
                f"dilution_factor must be > 0 (got {self.dilution_factor})"
            )
        if self.selectivity is not None:
            low, high = self.selectivity
            if not (0.0 <= low <= 1.0 and 0.0 <= high <= 1.0):
                raise ConfigurationError(
                    f"follow probabilities must be in [0, 1] (got {self.selectivity})"
                )
            object.__setattr__(self, "selectivity", (float(low), float(high)))

    @classmethod
    def none(cls) -> "FollowOnPolicy":
        return cls(0.0)

    @classmethod
    def follow_all(cls, reserve_fraction: float, dilution_factor: float = 3.0) -> "FollowOnPolicy":
        return cls(reserve_fraction, dilution_factor)

    @classmethod
    def selective(
        cls,
        reserve_fraction: float,
        p_follow_low: float,
        p_follow_high: float,
        dilution_factor: float = 3.0,
    ) -> "FollowOnPolicy":
        return cls(reserve_fraction, dilution_factor, (p_follow_low, p_follow_high))


@dataclass(frozen=True)
class FundSpec:
    """Everything that defines one simulated fund."""

    portfolio_size: int
    ticket_policy: TicketPolicy = field(default_factory=TicketPolicy.uniform)
    follow_on: FollowOnPolicy = field(default_factory=FollowOnPolicy.none)
    skill: SkillProfile | None = None

    def __post_init__(self):
        if self.portfolio_size < 1:
            raise ConfigurationError(
                f"portfolio size must be >= 1 (got {self.portfolio_size})"
            )


@dataclass(frozen=True)
class FundOutcome:
    """Gross multiple returned by one fund (fees excluded)."""

    gross_multiple: float

    def __post_init__(self):
        if self.gross_multiple < 0.0:
            raise ConfigurationError(
                f"gross multiple must be >= 0 (got {self.gross_multiple})"
            )


def generate_pool(spec: DistributionSpec, size: int, stream: RandomStream) -> DealPool:
    """Draw a deal pool of ``size`` multiples from ``spec``."""
    if size < 1:
        raise ConfigurationError(f"pool size must be >= 1 (got {size})")
    return DealPool(sample(spec, stream, size), spec, stream)


def skill_weights(pool: DealPool, skill: SkillProfile) -> np.ndarray:
    """Per-deal pick weights for a manager of the given skill.

    Each deal is weighted by the ratio of the skill law's density to the
    world law's density at the deal's multiple, normalized to sum to 1.
    Clamped deals in a bounded pool sit exactly at the cap, where the
    density is the tail value just below the cap. Equal exponents yield
    exactly uniform weights.
    """
    if pool.spec.variant is Variant.RAW:
        raise ConfigurationError(
            "skill weights need a squashed or bounded pool; raw pools have "
            "no loss region to reweight"
        )
    skill_params = PowerLawParams(skill.effective_alpha, pool.spec.params.x_min)
    ratio = pdf_squashed(skill_params, pool.multiples) / pdf_squashed(
        pool.spec.params, pool.multiples
    )
    return ratio / ratio.sum()


def draw_portfolio(
    pool: DealPool,
    n: int,
    weights: np.ndarray | None,
    stream: RandomStream,
) -> np.ndarray:
    """Draw ``n`` distinct pool indices, weighted, without replacement.

    Exponential-keys construction: index ``j`` receives the key
    ``E_j / w_j`` with ``E_j`` a unit exponential, and the ``n`` smallest
    keys win. Uniform weights therefore reduce to a uniform subset. The
    result is ordered by key, i.e. in sequential draw order.
    """
    p = pool.size
    if not 1 <= n <= p:
        raise ConfigurationError(
            f"portfolio size must be in [1, {p}] (got {n})"
        )
    if weights is None:
        w = np.full(p, 1.0 / p)
    else:
        w = np.asarray(weights, dtype=float)
        if w.shape != (p,):
            raise ConfigurationError(
                f"weights must have one entry per pool deal (got shape {w.shape})"
            )
        if np.any(w <= 0.0):
            raise ConfigurationError("weights must be strictly positive")
    gen = stream.generator()
    keys = gen.standard_exponential(p) / w
    chosen = np.argpartition(keys, n - 1)[:n]
    return chosen[np.argsort(keys[chosen], kind="stable")]


def allocate_tickets(
    policy: TicketPolicy,
    n: int,
    quality_estimates: np.ndarray | None,
    stream: RandomStream,
) -> np.ndarray:
    """Split the initial capital into ``n`` fractions summing to exactly 1.

    ``quality_estimates`` are the deals' (possibly clamped) multiples;
    quality-proportional sizing perturbs them multiplicatively by the
    policy's noise before mapping them affinely onto ``[1, ratio]`` raw
    weights.
    """
    if n < 1:
        raise ConfigurationError(f"ticket count must be >= 1 (got {n})")
    if policy.kind is TicketKind.UNIFORM:
        raw = np.full(n, 1.0)
    elif policy.kind is TicketKind.RANDOM_RATIO:
        raw = stream.generator().uniform(1.0, policy.max_min_ratio, n)
    else:
        if quality_estimates is None:
            raise ConfigurationError(
                "quality-proportional tickets require quality estimates"
            )
        est = np.asarray(quality_estimates, dtype=float)
        if est.shape != (n,):
            raise ConfigurationError(
                f"need one quality estimate per deal (got shape {est.shape})"
            )
        eps = stream.generator().uniform(-policy.noise_halfwidth, policy.noise_halfwidth, n)
        raw = _quality_raw_weights(est * (1.0 + eps), policy.max_min_ratio)
    frac = raw / raw.sum()
    return _close_rows(frac[None, :])[0]


def fund_multiple(
    deal_multiples: np.ndarray,
    fractions: np.ndarray,
    policy: FollowOnPolicy,
    stream: RandomStream,
) -> FundOutcome:
    """Gross multiple of one fund given its deals, tickets, and reserve.

    Initial capital per deal is ``(1-r) * fraction``; the reserve ``r``
    is split equally over the followed deals, whose follow-on capital
    returns the deal multiple divided by the dilution factor. If nothing
    is followed the reserve is returned as held cash at 1x.
    """
    m = np.asarray(deal_multiples, dtype=float)
    f = np.asarray(fractions, dtype=float)
    if m.shape != f.shape or m.ndim != 1:
        raise ConfigurationError("deal multiples and fractions must match 1:1")
    r = policy.reserve_fraction
    initial = ((1.0 - r) * f * m).sum()
    if r == 0.0:
        return FundOutcome(float(initial))
    if policy.selectivity is None:
        followed = np.ones(m.size, dtype=bool)
    else:
        low, high = policy.selectivity
        u = stream.generator().random(m.size)
        followed = u < np.where(m < 1.0, low, high)
    count = int(followed.sum())
    if count == 0:
        return FundOutcome(float(initial + r))
    follow_value = (r / count) * m[followed].sum() / policy.dilution_factor
    return FundOutcome(float(initial + follow_value))


def simulate_cohort(
    pool: DealPool,
    fund: FundSpec,
    n_funds: int,
    stream: RandomStream,
) -> np.ndarray:
    """Simulate ``n_funds`` independent funds and return their multiples.

    Skill weights are computed once per pool; each block of
    :data:`BLOCK_FUNDS` funds then draws portfolios, tickets, and
    follow-on decisions from block-and-stage substreams of ``stream``.
    Output is ordered by fund index and independent of scheduling.
    """
    if n_funds < 1:
        raise ConfigurationError(f"number of funds must be >= 1 (got {n_funds})")
    n = fund.portfolio_size
    if n > pool.size:
        raise ConfigurationError(
            f"portfolio size {n} exceeds pool size {pool.size}"
        )
    table = _pool_sampler(pool, fund.skill)
    out = np.empty(n_funds)
    for block, start in enumerate(range(0, n_funds, BLOCK_FUNDS)):
        b = min(BLOCK_FUNDS, n_funds - start)
        out[start : start + b] = _simulate_block(
            pool.multiples, table, fund, b, stream.child(block)
        )
    return out


# --- vectorized internals ---------------------------------------------------


class _AliasTable:
    """Alias table for O(1) draws from a discrete weight distribution.

    ``trivial`` marks an exactly-uniform table, for which a draw is a
    plain ``floor(u * size)`` with bit-identical results to the general
    path (the alias branch is never taken when every ``prob`` is 1).
    """

    __slots__ = ("prob", "alias", "size", "trivial")

    def __init__(self, weights: np.ndarray):
        size = weights.size
        scaled = weights * size
        prob = np.ones(size)
        alias = np.arange(size)
        if not np.all(weights == weights[0]):
            small = list(np.nonzero(scaled < 1.0)[0][::-1])
            large = list(np.nonzero(scaled >= 1.0)[0][::-1])
            scaled = scaled.copy()
            while small and large:
                s = small.pop()
                big = large.pop()
                prob[s] = scaled[s]
                alias[s] = big
                scaled[big] = (scaled[big] + scaled[s]) - 1.0
                (small if scaled[big] < 1.0 else large).append(big)
        self.prob = prob
        self.alias = alias
        self.size = size
        self.trivial = bool(np.all(prob >= 1.0))

    def draw(self, gen: np.random.Generator, shape) -> np.ndarray:
        u = gen.random(shape) * self.size
        # u*size can round up to exactly size when size is a power of two
        j = np.minimum(u.astype(np.int64), self.size - 1)
        if self.trivial:
            return j
        frac = u - j
        return np.where(frac < self.prob[j], j, self.alias[j])


def _pool_sampler(pool: DealPool, skill: SkillProfile | None) -> _AliasTable:
    """Alias table for the pool under the given skill, cached per pool."""
    neutral = skill is None or skill.effective_alpha == pool.spec.params.alpha
    key = None if neutral else skill.effective_alpha
    cached = pool._weight_cache.get(key)
    if cached is not None:
        return cached
    if neutral:
        weights = np.full(pool.size, 1.0 / pool.size)
    else:
        weights = skill_weights(pool, skill)
    table = _AliasTable(weights)
    pool._weight_cache[key] = table
    return table


def _draw_indices_block(
    gen: np.random.Generator, table: _AliasTable, b: int, n: int
) -> np.ndarray:
    """Draw a (b, n) block of distinct-per-row weighted pool indices.

    Rows start as iid weighted draws; colliding entries (keeping the
    earliest column of each repeated value) are redrawn until each row is
    duplicate-free. This is the sequential form of weighted sampling
    without replacement and matches the exponential-keys construction of
    :func:`draw_portfolio` in distribution.
    """
    idx = table.draw(gen, (b, n))
    if n == 1:
        return idx
    while True:
        sorted_rows = np.sort(idx, axis=1)
        adjacent = sorted_rows[:, 1:] == sorted_rows[:, :-1]
        if not adjacent.any():
            return idx
        dup_values = np.unique(sorted_rows[:, 1:][adjacent])
        lut = np.zeros(table.size, dtype=bool)
        lut[dup_values] = True
        rows, cols = np.nonzero(lut[idx])
        values = idx[rows, cols]
        # Stable sort by (row, value); ties keep ascending column order,
        # so the first entry of each group is the earliest column.
        order = np.argsort(rows * np.int64(table.size) + values, kind="stable")
        rs, vs = rows[order], values[order]
        first = np.ones(order.size, dtype=bool)
        first[1:] = (rs[1:] != rs[:-1]) | (vs[1:] != vs[:-1])
        redraw = order[~first]
        idx[rows[redraw], cols[redraw]] = table.draw(gen, redraw.size)


def _quality_raw_weights(estimates: np.ndarray, ratio: float) -> np.ndarray:
    """Affine map of estimates onto [1, ratio]; flat estimates map to 1."""
    lo = estimates.min(axis=-1, keepdims=True)
    span = estimates.max(axis=-1, keepdims=True) - lo
    with np.errstate(invalid="ignore", divide="ignore"):
        scaled = np.where(span > 0.0, (estimates - lo) / span, 0.0)
    return 1.0 + (ratio - 1.0) * scaled


def _close_rows(frac: np.ndarray) -> np.ndarray:
    """Force each row of fractions to sum to exactly 1.0 in floats."""
    frac[:, -1] = 1.0 - frac[:, :-1].sum(axis=1)
    for _ in range(4):
        residual = frac.sum(axis=1) - 1.0
        off = residual != 0.0
        if not off.any():
            break
        frac[off, -1] -= residual[off]
    return frac


def _ticket_fractions_block(
    policy: TicketPolicy,
    multiples: np.ndarray,
    stage_stream: RandomStream,
    b: int,
    n: int,
) -> np.ndarray:
    if policy.kind is TicketKind.UNIFORM:
        frac = np.full((b, n), 1.0 / n)
        return _close_rows(frac)
    gen = stage_stream.generator()
    if policy.kind is TicketKind.RANDOM_RATIO:
        raw = gen.uniform(1.0, policy.max_min_ratio, (b, n))
    else:
        eps = gen.uniform(-policy.noise_halfwidth, policy.noise_halfwidth, (b, n))
        raw = _quality_raw_weights(multiples * (1.0 + eps), policy.max_min_ratio)
    frac = raw / raw.sum(axis=1, keepdims=True)
    return _close_rows(frac)


def _simulate_block(
    pool_values: np.ndarray,
    table: _AliasTable,
    fund: FundSpec,
    b: int,
    block_stream: RandomStream,
) -> np.ndarray:
    n = fund.portfolio_size
    gen_draw = block_stream.child(_STAGE_PORTFOLIO).generator()
    idx = _draw_indices_block(gen_draw, table, b, n)
    m = pool_values[idx]
    frac = _ticket_fractions_block(
        fund.ticket_policy, m, block_stream.child(_STAGE_TICKETS), b, n
    )
    policy = fund.follow_on
    r = policy.reserve_fraction
    if r == 0.0:
        return (frac * m).sum(axis=1)
    initial = ((1.0 - r) * frac * m).sum(axis=1)
    if policy.selectivity is None:
        return initial + (r / policy.dilution_factor) * m.mean(axis=1)
    low, high = policy.selectivity
    gen_f = block_stream.child(_STAGE_FOLLOW_ON).generator()
    u = gen_f.random((b, n))
    followed = u < np.where(m < 1.0, low, high)
    count = followed.sum(axis=1)
    followed_sum = (m * followed).sum(axis=1)
    follow_value = np.where(
        count > 0,
        (r / np.maximum(count, 1)) * followed_sum / policy.dilution_factor,
        r,
    )
    return initial + follow_value
