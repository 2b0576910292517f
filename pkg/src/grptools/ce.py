"""Cross-Entropy maximization over box-constrained parameter vectors.

Standard CE scheme for continuous optimization: sample a normal population
truncated to the box, keep the elite fraction with the highest objective
values, refit the sampling mean and standard deviation to the elite with
exponential smoothing, and repeat until the elite spread collapses or the
iteration budget runs out.  The best point ever evaluated is returned, not
the final mean.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

_SEED_MASK = 0xFFFFFFFFFFFFFFFF
_REJECTION_ROUNDS = 50


class DegenerateObjectiveError(RuntimeError):
    """Every sample of an iteration evaluated as invalid (NaN or -inf)."""


@dataclass(frozen=True)
class BoxDomain:
    """Per-coordinate bounds; lower[i] < upper[i] everywhere."""

    lower: tuple[float, ...]
    upper: tuple[float, ...]

    def __post_init__(self):
        lo, up = np.asarray(self.lower), np.asarray(self.upper)
        if lo.shape != up.shape or lo.ndim != 1 or lo.size == 0:
            raise ValueError("lower and upper must be equal-length nonempty vectors")
        if not np.all(lo < up):
            raise ValueError("every lower bound must be strictly below its upper bound")

    @property
    def dim(self) -> int:
        return len(self.lower)


@dataclass(frozen=True)
class CeConfig:
    population: int = 1000
    elite_fraction: float = 0.1
    smoothing: float = 0.7
    max_iterations: int = 200
    convergence_epsilon: float = 1e-6
    seed: int = 0

    def __post_init__(self):
        if not (0.0 < self.elite_fraction < 1.0):
            raise ValueError("elite_fraction must lie in (0, 1)")
        if not (0.0 < self.smoothing <= 1.0):
            raise ValueError("smoothing must lie in (0, 1]")
        if self.population * self.elite_fraction < 2:
            raise ValueError("population * elite_fraction must be at least 2")
        if self.max_iterations < 1 or self.convergence_epsilon <= 0:
            raise ValueError("max_iterations >= 1 and convergence_epsilon > 0 required")


@dataclass
class CeDiagnostics:
    iterations: int = 0
    evaluations: int = 0
    converged: bool = False
    best_trace: list[float] = field(default_factory=list)


def _sample_box(
    rng: np.random.Generator,
    mean: np.ndarray,
    std: np.ndarray,
    lower: np.ndarray,
    upper: np.ndarray,
    n: int,
) -> np.ndarray:
    x = rng.normal(mean, std, size=(n, mean.size))
    for _ in range(_REJECTION_ROUNDS):
        out = (x < lower) | (x > upper)
        if not out.any():
            break
        resampled = rng.normal(np.broadcast_to(mean, x.shape), np.broadcast_to(std, x.shape))
        x = np.where(out, resampled, x)
    # clamping lets estimates sit exactly on a bound
    return np.clip(x, lower, upper)


def ce_maximize(
    objective: Callable[[np.ndarray], float | np.ndarray],
    domain: BoxDomain,
    config: CeConfig = CeConfig(),
    batch: bool = False,
) -> tuple[np.ndarray, float, CeDiagnostics]:
    """Maximize ``objective`` over the box; returns (argmax, value, diagnostics).

    With ``batch=True`` the objective receives the whole (population, dim)
    sample matrix and must return a vector of values; otherwise it is called
    point by point.  Invalid evaluations (NaN) rank below every finite value.
    Deterministic for a fixed (objective, domain, config).
    """
    lower = np.asarray(domain.lower, dtype=float)
    upper = np.asarray(domain.upper, dtype=float)
    rng = np.random.default_rng(config.seed & _SEED_MASK)

    mean = (lower + upper) / 2.0
    std = (upper - lower) / 2.0
    n_elite = max(2, int(config.population * config.elite_fraction))

    best_x: np.ndarray | None = None
    best_f = -np.inf
    diag = CeDiagnostics()

    for iteration in range(1, config.max_iterations + 1):
        x = _sample_box(rng, mean, std, lower, upper, config.population)
        if batch:
            f = np.asarray(objective(x), dtype=float)
        else:
            f = np.array([objective(xi) for xi in x], dtype=float)
        f = np.where(np.isnan(f), -np.inf, f)
        diag.evaluations += config.population
        diag.iterations += 1

        if not np.any(f > -np.inf):
            raise DegenerateObjectiveError(
                f"all {config.population} samples evaluated as invalid in iteration {diag.iterations}"
            )

        order = np.argsort(-f, kind="stable")
        if f[order[0]] > best_f:
            best_f = float(f[order[0]])
            best_x = x[order[0]].copy()
        diag.best_trace.append(best_f)

        elite = x[order[:n_elite]]
        mean = config.smoothing * elite.mean(axis=0) + (1.0 - config.smoothing) * mean
        # dynamic smoothing on the spread: full weight early, decaying with
        # the iteration count so the sampling cloud cannot collapse before
        # the mean has settled
        beta = config.smoothing * (1.0 - (1.0 - 1.0 / iteration) ** 5)
        std = beta * elite.std(axis=0) + (1.0 - beta) * std

        if np.max(elite.std(axis=0)) < config.convergence_epsilon:
            diag.converged = True
            break

    assert best_x is not None
    return best_x, best_f, diag
