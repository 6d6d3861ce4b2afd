"""Replicate-aggregated metrics, parameter sweeps, and presets.

A sweep runs one cohort per grid point per replicate, summarizes each
cohort into :class:`CohortMetrics`, and aggregates across replicates.
Substreams are keyed by parameter values rather than grid positions, so
the same setting produces bit-identical numbers no matter which sweep it
appears in; in particular a zero reserve column always matches a sweep
that never models follow-ons.
"""

from __future__ import annotations

import hashlib
import itertools
import json
import logging
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np

from . import __version__
from .distributions import DistributionSpec, PowerLawParams, RandomStream
from .engine import (
    DealPool,
    FollowOnPolicy,
    FundSpec,
    SkillProfile,
    TicketKind,
    TicketPolicy,
    generate_pool,
    simulate_cohort,
)
from .errors import ConfigurationError

logger = logging.getLogger(__name__)

FREQ_THRESHOLDS = tuple(range(2, 11))
METRIC_NAMES = ("p_loss", "min_return", "max_return", "mean_return") + tuple(
    f"freq_{k}x" for k in FREQ_THRESHOLDS
)

DEFAULT_SIZE_GRID = (1, 2, 3, 5, 7, 10, 15, 20, 30, 40, 50, 75, 100, 150, 200, 250, 300)
DEFAULT_BOUND_GRID = (50.0, 100.0, 200.0, 300.0, 500.0, 1000.0, None)
DEFAULT_RESERVE_GRID = (0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9)

_POOL_TAG = 0
_COHORT_TAG = 1


@dataclass(frozen=True)
class CohortMetrics:
    """Risk/return summary of one cohort of fund multiples.

    ``freq_kx[k]`` is the fraction of funds returning at least ``k`` times
    the committed capital (cumulative, so non-increasing in ``k``);
    ``p_loss`` counts funds strictly below 1x.
    """

    p_loss: float
    min_return: float
    max_return: float
    mean_return: float
    freq_kx: dict[int, float]

    def as_vector(self) -> np.ndarray:
        return np.array(
            [self.p_loss, self.min_return, self.max_return, self.mean_return]
            + [self.freq_kx[k] for k in FREQ_THRESHOLDS]
        )

    @classmethod
    def from_vector(cls, v: np.ndarray) -> "CohortMetrics":
        return cls(
            p_loss=float(v[0]),
            min_return=float(v[1]),
            max_return=float(v[2]),
            mean_return=float(v[3]),
            freq_kx={k: float(v[4 + i]) for i, k in enumerate(FREQ_THRESHOLDS)},
        )

    def value(self, metric: str) -> float:
        return float(self.as_vector()[METRIC_NAMES.index(metric)])

    def to_dict(self) -> dict:
        return {
            "p_loss": self.p_loss,
            "min_return": self.min_return,
            "max_return": self.max_return,
            "mean_return": self.mean_return,
            "freq_kx": {str(k): self.freq_kx[k] for k in FREQ_THRESHOLDS},
        }


@dataclass(frozen=True)
class ReplicateStats:
    """Field-wise mean and population standard deviation across replicates."""

    mean: CohortMetrics
    std: CohortMetrics
    n_replicates: int

    def to_dict(self) -> dict:
        return {
            name: {
                "mean": float(self.mean.as_vector()[i]),
                "std": float(self.std.as_vector()[i]),
            }
            for i, name in enumerate(METRIC_NAMES)
        }


def cohort_metrics(multiples: np.ndarray) -> CohortMetrics:
    """Summarize a cohort of gross multiples."""
    m = np.asarray(multiples, dtype=float)
    if m.size == 0:
        raise ConfigurationError("cannot summarize an empty cohort")
    return CohortMetrics(
        p_loss=float((m < 1.0).mean()),
        min_return=float(m.min()),
        max_return=float(m.max()),
        mean_return=float(m.mean()),
        freq_kx={k: float((m >= k).mean()) for k in FREQ_THRESHOLDS},
    )


def replicate_stats(metrics: list[CohortMetrics]) -> ReplicateStats:
    """Aggregate per-replicate metrics into mean and population std."""
    if not metrics:
        raise ConfigurationError("need at least one replicate")
    stacked = np.stack([m.as_vector() for m in metrics])
    return ReplicateStats(
        mean=CohortMetrics.from_vector(stacked.mean(axis=0)),
        std=CohortMetrics.from_vector(stacked.std(axis=0)),
        n_replicates=len(metrics),
    )


@dataclass(frozen=True)
class SweepPlan:
    """Full description of a sweep: the grid, the world, and the seed."""

    portfolio_sizes: tuple[int, ...] = DEFAULT_SIZE_GRID
    bounds: tuple[float | None, ...] = DEFAULT_BOUND_GRID
    reserve_fractions: tuple[float, ...] = DEFAULT_RESERVE_GRID
    world_alpha: float = 2.05
    x_min: float = 0.35
    skill_alphas: tuple[float, ...] | None = None
    ticket_policies: tuple[TicketPolicy, ...] = (TicketPolicy(TicketKind.UNIFORM),)
    selectivities: tuple[tuple[float, float] | None, ...] = (None,)
    dilution_factor: float = 3.0
    n_funds: int = 100_000
    n_replicates: int = 20
    pool_size: int = 60_000
    master_seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "portfolio_sizes", tuple(int(n) for n in self.portfolio_sizes))
        object.__setattr__(
            self,
            "bounds",
            tuple(None if b is None else float(b) for b in self.bounds),
        )
        object.__setattr__(self, "reserve_fractions", tuple(float(r) for r in self.reserve_fractions))
        if self.skill_alphas is None:
            object.__setattr__(self, "skill_alphas", (float(self.world_alpha),))
        else:
            object.__setattr__(self, "skill_alphas", tuple(float(a) for a in self.skill_alphas))
        object.__setattr__(self, "ticket_policies", tuple(self.ticket_policies))
        object.__setattr__(
            self,
            "selectivities",
            tuple(None if s is None else (float(s[0]), float(s[1])) for s in self.selectivities),
        )

    def validate(self) -> None:
        """Raise :class:`ConfigurationError` naming the violated invariant."""
        params = PowerLawParams(self.world_alpha, self.x_min)
        if self.x_min >= 1.0:
            raise ConfigurationError("x_min must be < 1 for the simulation variants")
        for lst, name in (
            (self.portfolio_sizes, "portfolio_sizes"),
            (self.bounds, "bounds"),
            (self.reserve_fractions, "reserve_fractions"),
            (self.skill_alphas, "skill_alphas"),
            (self.ticket_policies, "ticket_policies"),
            (self.selectivities, "selectivities"),
        ):
            if len(lst) == 0:
                raise ConfigurationError(f"{name} must be non-empty")
        for n in self.portfolio_sizes:
            if n < 1:
                raise ConfigurationError(f"portfolio sizes must be >= 1 (got {n})")
        for b in self.bounds:
            if b is not None:
                DistributionSpec.bounded(params, b)
        for r in self.reserve_fractions:
            for sel in self.selectivities:
                FollowOnPolicy(r, self.dilution_factor, sel)
        for a in self.skill_alphas:
            SkillProfile(a)
        if self.n_funds < 1:
            raise ConfigurationError(f"n_funds must be >= 1 (got {self.n_funds})")
        if self.n_replicates < 1:
            raise ConfigurationError(f"n_replicates must be >= 1 (got {self.n_replicates})")
        if self.pool_size < 1:
            raise ConfigurationError(f"pool_size must be >= 1 (got {self.pool_size})")
        RandomStream(self.master_seed)

    @property
    def grid_size(self) -> int:
        return (
            len(self.portfolio_sizes)
            * len(self.bounds)
            * len(self.reserve_fractions)
            * len(self.skill_alphas)
            * len(self.ticket_policies)
            * len(self.selectivities)
        )

    def cells(self) -> list["GridCell"]:
        return [
            GridCell(n, bound, r, skill, policy, sel)
            for n, bound, r, skill, policy, sel in itertools.product(
                self.portfolio_sizes,
                self.bounds,
                self.reserve_fractions,
                self.skill_alphas,
                self.ticket_policies,
                self.selectivities,
            )
        ]


@dataclass(frozen=True)
class GridCell:
    """One point of the sweep grid."""

    portfolio_size: int
    bound: float | None
    reserve_fraction: float
    skill_alpha: float
    ticket_policy: TicketPolicy
    selectivity: tuple[float, float] | None


@dataclass
class SweepRow:
    """Aggregated metrics (or an error) for one grid cell."""

    cell: GridCell
    stats: ReplicateStats | None = None
    replicates: list[CohortMetrics] = field(default_factory=list)
    error: str | None = None


@dataclass
class SweepResult:
    """Sweep output plus the provenance needed to regenerate it."""

    plan: SweepPlan
    rows: list[SweepRow]
    engine_version: str = __version__

    def to_csv(self) -> str:
        lines = ["N,bound,r,skill_alpha,policy,selectivity,metric,mean,std"]
        for row in self.rows:
            prefix = ",".join(
                [
                    str(row.cell.portfolio_size),
                    _format_bound(row.cell.bound),
                    _fmt(row.cell.reserve_fraction),
                    _fmt(row.cell.skill_alpha),
                    _format_policy(row.cell.ticket_policy),
                    _format_selectivity(row.cell.selectivity),
                ]
            )
            if row.error is not None:
                lines.append(f"{prefix},error,,")
                continue
            for i, name in enumerate(METRIC_NAMES):
                mean = row.stats.mean.as_vector()[i]
                std = row.stats.std.as_vector()[i]
                lines.append(f"{prefix},{name},{_fmt(mean)},{_fmt(std)}")
        return "\n".join(lines) + "\n"

    def to_json(self) -> str:
        payload = {
            "engine_version": self.engine_version,
            "plan": plan_to_dict(self.plan),
            "rows": [self._row_dict(row) for row in self.rows],
        }
        return json.dumps(payload, sort_keys=True, separators=(",", ":"))

    @staticmethod
    def _row_dict(row: SweepRow) -> dict:
        base = {
            "portfolio_size": row.cell.portfolio_size,
            "bound": row.cell.bound,
            "reserve_fraction": row.cell.reserve_fraction,
            "skill_alpha": row.cell.skill_alpha,
            "ticket_policy": _policy_to_dict(row.cell.ticket_policy),
            "selectivity": _selectivity_to_dict(row.cell.selectivity),
        }
        if row.error is not None:
            base["error"] = row.error
            return base
        base["metrics"] = row.stats.to_dict()
        base["replicates"] = [m.to_dict() for m in row.replicates]
        return base


def _fmt(value: float) -> str:
    return format(float(value), ".10g")


def _format_bound(bound: float | None) -> str:
    return "inf" if bound is None else _fmt(bound)


def _format_policy(policy: TicketPolicy) -> str:
    if policy.kind is TicketKind.UNIFORM:
        return "uniform"
    if policy.kind is TicketKind.RANDOM_RATIO:
        return f"random_ratio({_fmt(policy.max_min_ratio)})"
    return (
        f"quality_proportional({_fmt(policy.max_min_ratio)};"
        f"{_fmt(policy.noise_halfwidth)})"
    )


def _format_selectivity(sel: tuple[float, float] | None) -> str:
    if sel is None:
        return "all"
    return f"selective({_fmt(sel[0])};{_fmt(sel[1])})"


def _float_bits(x: float) -> int:
    return int(np.float64(x).view(np.uint64))


def _cell_stream(plan: SweepPlan, cell: GridCell, replicate: int) -> RandomStream:
    """Cohort substream keyed by parameter values, not grid indices.

    The bound, reserve fraction, and selectivity are deliberately left
    out of the key: cells that differ only in those reuse the same
    portfolio and ticket draws, which keeps comparisons along those axes
    free of independent sampling noise and makes a zero reserve
    bit-identical to a plan without follow-ons.
    """
    policy = cell.ticket_policy
    kind_code = list(TicketKind).index(policy.kind)
    return RandomStream(plan.master_seed).child(
        _COHORT_TAG,
        replicate,
        cell.portfolio_size,
        _float_bits(cell.skill_alpha),
        kind_code,
        _float_bits(policy.max_min_ratio),
        _float_bits(policy.noise_halfwidth),
    )


def _build_pools(plan: SweepPlan) -> dict[tuple[int, float | None], DealPool]:
    """One pool per (replicate, bound); bounds share draws per replicate."""
    params = PowerLawParams(plan.world_alpha, plan.x_min)
    root = RandomStream(plan.master_seed)
    pools: dict[tuple[int, float | None], DealPool] = {}
    for rep in range(plan.n_replicates):
        stream = root.child(_POOL_TAG, rep)
        for bound in set(plan.bounds):
            spec = (
                DistributionSpec.squashed(params)
                if bound is None
                else DistributionSpec.bounded(params, bound)
            )
            pools[(rep, bound)] = generate_pool(spec, plan.pool_size, stream)
    return pools


def run_sweep(plan: SweepPlan, max_workers: int | None = None) -> SweepResult:
    """Execute every grid cell of ``plan`` over all replicates.

    Cells that violate engine preconditions are reported as error rows;
    the rest of the sweep completes. Results are bit-identical for any
    ``max_workers``.
    """
    plan.validate()
    pools = _build_pools(plan)
    cells = plan.cells()
    rows = [SweepRow(cell) for cell in cells]

    def task(job: tuple[int, int]):
        cell_idx, rep = job
        cell = cells[cell_idx]
        pool = pools[(rep, cell.bound)]
        fund = FundSpec(
            portfolio_size=cell.portfolio_size,
            ticket_policy=cell.ticket_policy,
            follow_on=FollowOnPolicy(
                cell.reserve_fraction, plan.dilution_factor, cell.selectivity
            ),
            skill=SkillProfile(cell.skill_alpha),
        )
        stream = _cell_stream(plan, cell, rep)
        return cohort_metrics(simulate_cohort(pool, fund, plan.n_funds, stream))

    jobs = [(ci, rep) for ci in range(len(cells)) for rep in range(plan.n_replicates)]
    workers = max_workers or os.cpu_count() or 1
    outcomes: dict[tuple[int, int], CohortMetrics | Exception] = {}
    with ThreadPoolExecutor(max_workers=workers) as pool_exec:
        for job, outcome in zip(jobs, pool_exec.map(lambda j: _guard(task, j), jobs)):
            outcomes[job] = outcome

    for ci, row in enumerate(rows):
        per_rep = [outcomes[(ci, rep)] for rep in range(plan.n_replicates)]
        failures = [o for o in per_rep if isinstance(o, Exception)]
        if failures:
            row.error = str(failures[0])
            logger.warning("grid cell %s failed: %s", row.cell, row.error)
        else:
            row.replicates = per_rep
            row.stats = replicate_stats(per_rep)
    return SweepResult(plan, rows)


def _guard(fn, job):
    try:
        return fn(job)
    except Exception as exc:  # per-row errors must not kill the sweep
        return exc


# --- presets -----------------------------------------------------------------

_AVERAGE = dict(
    portfolio_sizes=DEFAULT_SIZE_GRID,
    bounds=(None,),
    reserve_fractions=(0.0,),
    world_alpha=2.05,
    x_min=0.35,
)


def _preset_plans() -> dict[str, tuple[str, SweepPlan]]:
    average = SweepPlan(**_AVERAGE)
    return {
        "average_world": (
            "Baseline market: tail exponent 2.05, uniform tickets, no reserve, "
            "uncapped deal returns.",
            average,
        ),
        "overperformer": (
            "Baseline market seen by a manager whose picks follow exponent 1.85.",
            replace(average, skill_alphas=(1.85,)),
        ),
        "underperformer": (
            "Baseline market seen by a manager whose picks follow exponent 2.5.",
            replace(average, skill_alphas=(2.5,)),
        ),
        "bad_world": (
            "Pessimistic market: world exponent 2.3 (losses more frequent).",
            replace(average, world_alpha=2.3, skill_alphas=(2.3,)),
        ),
        "bad_world_overperformer": (
            "Pessimistic market (exponent 2.3) with a manager picking at 2.05.",
            replace(average, world_alpha=2.3, skill_alphas=(2.05,)),
        ),
        "good_world": (
            "Optimistic market: world exponent 1.85 (losses less frequent).",
            replace(average, world_alpha=1.85, skill_alphas=(1.85,)),
        ),
        "bounds_grid": (
            "Baseline market with per-deal return caps at 50-1000x.",
            replace(average, bounds=(50.0, 100.0, 200.0, 300.0, 500.0, 1000.0)),
        ),
        "tickets_random": (
            "Baseline market with random ticket sizes (max/min ratio 10).",
            replace(average, ticket_policies=(TicketPolicy.random_ratio(10.0),)),
        ),
        "tickets_quality": (
            "Baseline market with quality-proportional tickets (ratio 2, "
            "25% estimate noise).",
            replace(
                average,
                ticket_policies=(TicketPolicy.quality_proportional(2.0, 0.25),),
            ),
        ),
        "follow_on_grid": (
            "Reserve fractions 0-0.9 crossed with return caps, following every "
            "deal at 3x dilution.",
            replace(
                average,
                reserve_fractions=DEFAULT_RESERVE_GRID,
                bounds=DEFAULT_BOUND_GRID,
            ),
        ),
        "follow_on_selective": (
            "Reserve grid with selective follow-ons: 70% of losers, 90% of "
            "winners.",
            replace(
                average,
                reserve_fractions=DEFAULT_RESERVE_GRID,
                bounds=DEFAULT_BOUND_GRID,
                selectivities=((0.7, 0.9),),
            ),
        ),
    }


PRESETS = _preset_plans()


def preset(name: str) -> SweepPlan:
    """Return the plan registered under ``name``."""
    try:
        return PRESETS[name][1]
    except KeyError:
        raise ConfigurationError(
            f"unknown preset {name!r}; valid presets: {', '.join(PRESETS)}"
        ) from None


def preset_descriptions() -> dict[str, str]:
    return {name: desc for name, (desc, _) in PRESETS.items()}


# --- heatmap -----------------------------------------------------------------


@dataclass(frozen=True)
class Heatmap:
    """Dense (reserve fraction x portfolio size) grid of one metric."""

    metric: str
    bound: float | None
    reserve_fractions: tuple[float, ...]
    portfolio_sizes: tuple[int, ...]
    values: np.ndarray  # shape (len(reserve_fractions), len(portfolio_sizes))


_AUTO = "auto"


def heatmap(
    result: SweepResult,
    metric: str,
    bound: float | None | str = _AUTO,
    skill_alpha: float | str = _AUTO,
    ticket_policy: TicketPolicy | str = _AUTO,
    selectivity: tuple[float, float] | None | str = _AUTO,
) -> Heatmap:
    """Pivot replicate-mean ``metric`` into an (r, N) grid for one bound.

    Dimensions other than ``r`` and ``N`` must be pinned, either
    explicitly or because the result only contains a single value.
    ``None`` pins the unbounded world / the follow-everything rule.
    """
    if metric not in METRIC_NAMES:
        raise ConfigurationError(
            f"unknown metric {metric!r}; valid metrics: {', '.join(METRIC_NAMES)}"
        )
    plan = result.plan
    bound = _pin("bound", bound, plan.bounds)
    skill_alpha = _pin("skill_alpha", skill_alpha, plan.skill_alphas)
    ticket_policy = _pin("ticket_policy", ticket_policy, plan.ticket_policies)
    selectivity = _pin("selectivity", selectivity, plan.selectivities)

    r_values = plan.reserve_fractions
    sizes = plan.portfolio_sizes
    grid = np.full((len(r_values), len(sizes)), np.nan)
    for row in result.rows:
        c = row.cell
        if (
            c.bound == bound
            and c.skill_alpha == skill_alpha
            and c.ticket_policy == ticket_policy
            and c.selectivity == selectivity
        ):
            if row.error is not None:
                raise ConfigurationError(
                    f"grid cell N={c.portfolio_size}, r={c.reserve_fraction} "
                    f"failed: {row.error}"
                )
            i = r_values.index(c.reserve_fraction)
            j = sizes.index(c.portfolio_size)
            grid[i, j] = row.stats.mean.value(metric)
    if np.isnan(grid).any():
        raise ConfigurationError(
            "sweep result does not cover the full (r, N) grid for the "
            "requested slice"
        )
    return Heatmap(metric, bound, r_values, sizes, grid)


def _pin(name, requested, available):
    if not (isinstance(requested, str) and requested == _AUTO):
        if requested not in available:
            raise ConfigurationError(
                f"{name}={requested!r} is not present in the sweep plan"
            )
        return requested
    distinct = list(dict.fromkeys(available))
    if len(distinct) == 1:
        return distinct[0]
    raise ConfigurationError(
        f"{name} is ambiguous; pick one of {distinct!r}"
    )


# --- plan (de)serialization ---------------------------------------------------


def _policy_to_dict(policy: TicketPolicy) -> dict:
    if policy.kind is TicketKind.UNIFORM:
        return {"kind": "uniform"}
    if policy.kind is TicketKind.RANDOM_RATIO:
        return {"kind": "random_ratio", "max_min_ratio": policy.max_min_ratio}
    return {
        "kind": "quality_proportional",
        "max_min_ratio": policy.max_min_ratio,
        "noise_halfwidth": policy.noise_halfwidth,
    }


def _policy_from_dict(d: dict) -> TicketPolicy:
    if not isinstance(d, dict) or "kind" not in d:
        raise ConfigurationError(f"ticket policy must be an object with a 'kind' (got {d!r})")
    kind = d["kind"]
    if kind == "uniform":
        return TicketPolicy.uniform()
    if kind == "random_ratio":
        return TicketPolicy.random_ratio(float(d["max_min_ratio"]))
    if kind == "quality_proportional":
        return TicketPolicy.quality_proportional(
            float(d["max_min_ratio"]), float(d.get("noise_halfwidth", 0.25))
        )
    raise ConfigurationError(f"unknown ticket policy kind {kind!r}")


def _selectivity_to_dict(sel: tuple[float, float] | None) -> dict:
    if sel is None:
        return {"kind": "all"}
    return {"kind": "selective", "p_follow_low": sel[0], "p_follow_high": sel[1]}


def _selectivity_from_dict(d: dict) -> tuple[float, float] | None:
    if not isinstance(d, dict) or "kind" not in d:
        raise ConfigurationError(f"selectivity must be an object with a 'kind' (got {d!r})")
    if d["kind"] == "all":
        return None
    if d["kind"] == "selective":
        return (float(d["p_follow_low"]), float(d["p_follow_high"]))
    raise ConfigurationError(f"unknown selectivity kind {d['kind']!r}")


_PLAN_KEYS = {
    "portfolio_sizes",
    "bounds",
    "reserve_fractions",
    "world_alpha",
    "x_min",
    "skill_alphas",
    "ticket_policies",
    "selectivities",
    "dilution_factor",
    "n_funds",
    "n_replicates",
    "pool_size",
    "master_seed",
}


def plan_to_dict(plan: SweepPlan) -> dict:
    return {
        "portfolio_sizes": list(plan.portfolio_sizes),
        "bounds": list(plan.bounds),
        "reserve_fractions": list(plan.reserve_fractions),
        "world_alpha": plan.world_alpha,
        "x_min": plan.x_min,
        "skill_alphas": list(plan.skill_alphas),
        "ticket_policies": [_policy_to_dict(p) for p in plan.ticket_policies],
        "selectivities": [_selectivity_to_dict(s) for s in plan.selectivities],
        "dilution_factor": plan.dilution_factor,
        "n_funds": plan.n_funds,
        "n_replicates": plan.n_replicates,
        "pool_size": plan.pool_size,
        "master_seed": plan.master_seed,
    }


def plan_from_dict(d: dict) -> SweepPlan:
    """Build and validate a plan from its JSON form."""
    if not isinstance(d, dict):
        raise ConfigurationError(f"plan must be a JSON object (got {type(d).__name__})")
    unknown = set(d) - _PLAN_KEYS
    if unknown:
        raise ConfigurationError(f"unknown plan fields: {', '.join(sorted(unknown))}")
    kwargs = dict(d)
    if "ticket_policies" in kwargs:
        kwargs["ticket_policies"] = tuple(
            _policy_from_dict(p) for p in kwargs["ticket_policies"]
        )
    if "selectivities" in kwargs:
        kwargs["selectivities"] = tuple(
            _selectivity_from_dict(s) for s in kwargs["selectivities"]
        )
    try:
        plan = SweepPlan(**kwargs)
    except TypeError as exc:
        raise ConfigurationError(f"invalid plan: {exc}") from None
    plan.validate()
    return plan


def canonical_plan_json(plan: SweepPlan) -> str:
    return json.dumps(plan_to_dict(plan), sort_keys=True, separators=(",", ":"))


def plan_hash(plan: SweepPlan) -> str:
    return hashlib.sha256(canonical_plan_json(plan).encode()).hexdigest()
