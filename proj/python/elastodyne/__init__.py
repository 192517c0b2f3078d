"""Layered staggered-grid elastic wave solver with nonconforming interfaces."""

from ._core import (
    Config,
    CostReport,
    LayerPlan,
    __version__,
    config_errors,
    cost_ratios,
    load_config,
    plan_spacing,
    plan_timestep,
    ricker,
    run,
    run_1d,
    sbp_identity_residual,
    verify,
)

__all__ = [
    "Config",
    "CostReport",
    "LayerPlan",
    "__version__",
    "config_errors",
    "cost_ratios",
    "load_config",
    "plan_spacing",
    "plan_timestep",
    "ricker",
    "run",
    "run_1d",
    "sbp_identity_residual",
    "verify",
]
