"""Deterministic Monte Carlo simulator for early-stage venture fund returns."""

__version__ = "0.1.0"

from .distributions import (  # noqa: E402
    ClosedFormStats,
    DistributionSpec,
    PowerLawParams,
    RandomStream,
    Variant,
    cdf_raw,
    cdf_squashed,
    closed_form_stats,
    pdf_raw,
    pdf_squashed,
    point_mass_at_bound,
    quantile_raw,
    sample,
)
from .engine import (  # noqa: E402
    DealPool,
    FollowOnPolicy,
    FundOutcome,
    FundSpec,
    SkillProfile,
    TicketKind,
    TicketPolicy,
    allocate_tickets,
    draw_portfolio,
    fund_multiple,
    generate_pool,
    simulate_cohort,
    skill_weights,
)
from .errors import ConfigurationError, DomainError, FundsimError  # noqa: E402
from .experiments import (  # noqa: E402
    CohortMetrics,
    Heatmap,
    ReplicateStats,
    SweepPlan,
    SweepResult,
    cohort_metrics,
    heatmap,
    plan_from_dict,
    plan_to_dict,
    preset,
    preset_descriptions,
    replicate_stats,
    run_sweep,
)

__all__ = [
    "__version__",
    "ClosedFormStats",
    "CohortMetrics",
    "ConfigurationError",
    "DealPool",
    "DistributionSpec",
    "DomainError",
    "FollowOnPolicy",
    "FundOutcome",
    "FundSpec",
    "FundsimError",
    "Heatmap",
    "PowerLawParams",
    "RandomStream",
    "ReplicateStats",
    "SkillProfile",
    "SweepPlan",
    "SweepResult",
    "TicketKind",
    "TicketPolicy",
    "Variant",
    "allocate_tickets",
    "cdf_raw",
    "cdf_squashed",
    "closed_form_stats",
    "cohort_metrics",
    "draw_portfolio",
    "fund_multiple",
    "generate_pool",
    "heatmap",
    "pdf_raw",
    "pdf_squashed",
    "plan_from_dict",
    "plan_to_dict",
    "point_mass_at_bound",
    "preset",
    "preset_descriptions",
    "quantile_raw",
    "replicate_stats",
    "run_sweep",
    "sample",
    "simulate_cohort",
    "skill_weights",
]
