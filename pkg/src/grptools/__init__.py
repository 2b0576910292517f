"""Generalized renewal process analysis for repairable systems."""

from .ce import BoxDomain, CeConfig, CeDiagnostics, DegenerateObjectiveError, ce_maximize
from .estimator import FitResult, FitSpace, evaluate, fit_mle
from .io import CsvFormatError, read_history, write_history
from .model import (
    Event,
    EventHistory,
    EventKind,
    InvalidInputError,
    NumericOverflowError,
    RestorationFactors,
    WeibullParams,
    event_log_likelihood,
    history_log_likelihood,
    history_log_likelihood_batch,
    trajectory,
    virtual_age_step,
)
from .sampler import GenerationConfig, conditional_quantile, generate, next_event

__all__ = [
    "BoxDomain",
    "CeConfig",
    "CeDiagnostics",
    "CsvFormatError",
    "DegenerateObjectiveError",
    "Event",
    "EventHistory",
    "EventKind",
    "FitResult",
    "FitSpace",
    "GenerationConfig",
    "InvalidInputError",
    "NumericOverflowError",
    "RestorationFactors",
    "WeibullParams",
    "ce_maximize",
    "conditional_quantile",
    "evaluate",
    "event_log_likelihood",
    "fit_mle",
    "generate",
    "history_log_likelihood",
    "history_log_likelihood_batch",
    "next_event",
    "read_history",
    "trajectory",
    "virtual_age_step",
    "write_history",
]
