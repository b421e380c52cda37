from .analytic import (
    FundamentalExpansion,
    SineNetSolution,
    TrigHyperbolicExpansion,
    draw_mad0,
    draw_mad1,
    draw_mad2,
    generate_dataset,
    sample_mad0,
    sample_mad1,
    sample_mad2,
)
from .grf import (
    GrfConfig,
    SmoothingConfig,
    generate_pinn_dataset,
    grf_boundary_values,
    sample_grf_boundary,
    sample_smoothed_source,
)

__all__ = [
    "FundamentalExpansion",
    "SineNetSolution",
    "TrigHyperbolicExpansion",
    "draw_mad0",
    "draw_mad1",
    "draw_mad2",
    "generate_dataset",
    "sample_mad0",
    "sample_mad1",
    "sample_mad2",
    "GrfConfig",
    "SmoothingConfig",
    "generate_pinn_dataset",
    "grf_boundary_values",
    "sample_grf_boundary",
    "sample_smoothed_source",
]
