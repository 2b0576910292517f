"""Maximum-likelihood estimation of GRP parameters via Cross-Entropy search.

The search vector is (ln a, b, q_pm, q_cm); the scale is optimized on the
log axis so magnitudes from around 1e-8 to 1e3 are reachable on equal
footing.  Several independent restarts guard against the multi-extremal
likelihood surface; the best restart wins.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .ce import BoxDomain, CeConfig, ce_maximize
from .model import (
    EventHistory,
    InvalidInputError,
    RestorationFactors,
    WeibullParams,
    history_log_likelihood,
    history_log_likelihood_batch,
)

EXTREME_THRESHOLD = 0.05


@dataclass(frozen=True)
class FitSpace:
    """Search region for the fit.

    Scale bounds are on ln(a).  A q interval may be degenerate (lower ==
    upper) to pin that factor at a fixed value; the coordinate is then
    dropped from the optimizer vector.
    """

    log_scale_bounds: tuple[float, float] = (math.log(1e-8), math.log(1e3))
    shape_bounds: tuple[float, float] = (0.1, 10.0)
    q_pm_bounds: tuple[float, float] = (0.0, 1.0)
    q_cm_bounds: tuple[float, float] = (0.0, 1.0)
    starts: int = 5

    def __post_init__(self):
        for name, (lo, up) in (
            ("log_scale_bounds", self.log_scale_bounds),
            ("shape_bounds", self.shape_bounds),
        ):
            if not (math.isfinite(lo) and math.isfinite(up) and lo < up):
                raise InvalidInputError(f"{name} must be finite and ordered, got ({lo}, {up})")
        for name, (lo, up) in (("q_pm_bounds", self.q_pm_bounds), ("q_cm_bounds", self.q_cm_bounds)):
            if not (0.0 <= lo <= up <= 1.0):
                raise InvalidInputError(f"{name} must satisfy 0 <= lower <= upper <= 1, got ({lo}, {up})")
        if self.starts < 1:
            raise InvalidInputError(f"starts must be >= 1, got {self.starts}")


@dataclass(frozen=True)
class FitResult:
    params: WeibullParams
    factors: RestorationFactors
    log_likelihood: float
    per_start: tuple[tuple[tuple[float, float, float, float], float], ...]
    q_pm_extreme: bool
    q_cm_extreme: bool

    @property
    def extreme(self) -> bool:
        return self.q_pm_extreme or self.q_cm_extreme


def _is_extreme(q: float) -> bool:
    return q <= EXTREME_THRESHOLD or q >= 1.0 - EXTREME_THRESHOLD


def fit_mle(history: EventHistory, space: FitSpace = FitSpace(), ce: CeConfig = CeConfig()) -> FitResult:
    """Fit (a, b, q_pm, q_cm) to a history by maximizing the log-likelihood.

    Runs ``space.starts`` independent Cross-Entropy searches (restart r uses
    seed ``ce.seed + r``) and keeps the best point found anywhere; ties go to
    the earliest restart.  Raises ``InvalidInputError`` on an empty history.
    """
    if history.n_events == 0:
        raise InvalidInputError("cannot fit an empty history")

    bounds = [space.log_scale_bounds, space.shape_bounds, space.q_pm_bounds, space.q_cm_bounds]
    free = [lo < up for lo, up in bounds]
    fixed = np.array([lo for lo, _ in bounds])
    free_idx = [i for i, f in enumerate(free) if f]
    domain = BoxDomain(
        lower=tuple(bounds[i][0] for i in free_idx),
        upper=tuple(bounds[i][1] for i in free_idx),
    )

    def objective(x: np.ndarray) -> np.ndarray:
        full = np.tile(fixed, (x.shape[0], 1))
        full[:, free_idx] = x
        return history_log_likelihood_batch(full[:, 0], full[:, 1], full[:, 2], full[:, 3], history)

    per_start = []
    best_vec: np.ndarray | None = None
    best_ll = -np.inf
    for r in range(space.starts):
        x, value, _ = ce_maximize(objective, domain, replace(ce, seed=ce.seed + r), batch=True)
        full = fixed.copy()
        full[free_idx] = x
        per_start.append((tuple(float(v) for v in full), float(value)))
        if value > best_ll:
            best_ll = value
            best_vec = full

    assert best_vec is not None
    log_a, b, q_pm, q_cm = (float(x) for x in best_vec)
    return FitResult(
        params=WeibullParams(a=math.exp(log_a), b=b),
        factors=RestorationFactors(q_pm=q_pm, q_cm=q_cm),
        log_likelihood=float(best_ll),
        per_start=tuple(per_start),
        q_pm_extreme=_is_extreme(q_pm),
        q_cm_extreme=_is_extreme(q_cm),
    )


def evaluate(history: EventHistory, params: WeibullParams, factors: RestorationFactors) -> float:
    """Log-likelihood of a fixed parameter set; lets external fits be scored."""
    return history_log_likelihood(params, factors, history)
