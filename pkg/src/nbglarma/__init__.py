"""Sparse variable selection for negative binomial GLARMA count series."""

from ._backend import backend_name
from .benchmark import EvalMetrics, run_benchmark, summarize, tpr_fpr
from .errors import (
    ConfigurationError,
    InputError,
    MetricsError,
    NbGlarmaError,
    NumericError,
    SimulationError,
)
from .glm import GlmFit, fit_nb_glm, reestimate
from .lasso import LassoPath, cross_validate, lambda_grid, lasso_path
from .model import (
    GlarmaParams,
    GlarmaState,
    compute_state,
    log_likelihood,
    nb_log_pmf,
    validate_counts,
    validate_design,
)
from .newton import NewtonConfig, NewtonResult, estimate_gamma
from .pipeline import IterationRecord, PipelineConfig, PipelineResult, run_pipeline
from .quadratic import QuadraticProblem, build_quadratic
from .simulate import SimConfig, default_gamma, draw_sparse_beta, fourier_design, simulate_series
from .stability import SelectionReport, selection_frequencies, stability_select

__version__ = "0.1.0"

__all__ = [
    "ConfigurationError", "EvalMetrics", "GlarmaParams", "GlarmaState", "GlmFit",
    "InputError", "IterationRecord", "LassoPath", "MetricsError", "NbGlarmaError",
    "NewtonConfig", "NewtonResult", "NumericError", "PipelineConfig", "PipelineResult",
    "QuadraticProblem", "SelectionReport", "SimConfig", "SimulationError",
    "backend_name", "build_quadratic", "compute_state", "cross_validate",
    "default_gamma", "draw_sparse_beta", "estimate_gamma", "fit_nb_glm",
    "fourier_design", "lambda_grid", "lasso_path", "log_likelihood", "nb_log_pmf",
    "reestimate", "run_benchmark", "run_pipeline", "selection_frequencies",
    "simulate_series", "stability_select", "summarize", "tpr_fpr",
    "validate_counts", "validate_design",
]
