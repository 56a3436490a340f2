"""Minkowski measure verification for fractal attractors and symbolic spaces."""

from ._core import (
    DEFAULT_BUDGET,
    STABLE_GROWTH,
    BudgetExceeded,
    Error,
    InvalidArgument,
    Model,
    RatioReport,
    RatioRow,
    TransportReport,
    ValidationError,
    beta_sequence,
    default_beta,
    default_weights,
    epsilon_components,
    fit_box_dimension,
    geometric_schedule,
    greedy_packing,
    load_model,
    natural_base,
    parse_model,
    ratio_report,
    run_cli,
    solve_similarity_dimension,
    spectrum,
    symbolic_beta,
    transport_check,
)

__all__ = [name for name in dir() if not name.startswith("_")]
