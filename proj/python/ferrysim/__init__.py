"""UAV content-ferrying simulator with top-k multi-armed bandit caching."""

from ._core import (
    AnchorTotals,
    CommunityProfile,
    ContentCatalog,
    EpochMetrics,
    PreloadPlan,
    PreloadPolicy,
    RewardRecord,
    RewardWeights,
    RunResult,
    Strategy,
    SystemConfig,
    TopKAgent,
    benchmark_sequence,
    build_catalog,
    build_plan,
    build_profiles,
    composite_reward,
    content_value,
    jaro_winkler,
    plan_fd,
    plan_pbc,
    plan_sec,
    plan_vbc,
    simulate,
    smith_waterman_distance,
    smith_waterman_score,
    zipf_pmf,
)

__all__ = [
    "AnchorTotals",
    "CommunityProfile",
    "ContentCatalog",
    "EpochMetrics",
    "PreloadPlan",
    "PreloadPolicy",
    "RewardRecord",
    "RewardWeights",
    "RunResult",
    "Strategy",
    "SystemConfig",
    "TopKAgent",
    "benchmark_sequence",
    "build_catalog",
    "build_plan",
    "build_profiles",
    "composite_reward",
    "content_value",
    "jaro_winkler",
    "plan_fd",
    "plan_pbc",
    "plan_sec",
    "plan_vbc",
    "simulate",
    "smith_waterman_distance",
    "smith_waterman_score",
    "zipf_pmf",
]

__version__ = "0.1.0"
