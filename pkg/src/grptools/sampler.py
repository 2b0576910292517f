"""Seedable Monte-Carlo generation of maintenance event histories.

Each step draws two candidate inter-arrival times by inverse-transform
sampling of the conditional Weibull remaining-life distribution at the
current virtual age: a CM candidate and a PM candidate scaled by ``k_cm``.
The smaller candidate becomes the next event, and the virtual age advances
with that kind's restoration factor.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .model import (
    Event,
    EventHistory,
    EventKind,
    InvalidInputError,
    RestorationFactors,
    WeibullParams,
    virtual_age_step,
)

_SEED_MASK = 0xFFFFFFFFFFFFFFFF


@dataclass(frozen=True)
class GenerationConfig:
    """Everything needed to regenerate a history bit-for-bit."""

    params: WeibullParams
    factors: RestorationFactors
    k_cm: float
    events_per_item: int
    n_items: int
    seed: int

    def __post_init__(self):
        if not (self.k_cm > 0):
            raise InvalidInputError(f"k_cm must be positive, got {self.k_cm}")
        if self.events_per_item < 1:
            raise InvalidInputError(f"events_per_item must be >= 1, got {self.events_per_item}")
        if self.n_items < 1:
            raise InvalidInputError(f"n_items must be >= 1, got {self.n_items}")


def conditional_quantile(p: WeibullParams, v: float, u: float) -> float:
    """u-quantile of the remaining life given survival to virtual age ``v``.

    Inverts the conditional CDF ``1 - exp(-a*((v+t)**b - v**b))``, giving
    ``(v**b - ln(1-u)/a)**(1/b) - v``.  Strictly positive for u > 0, zero at
    u = 0.
    """
    if not (v >= 0 and math.isfinite(v)):
        raise InvalidInputError(f"virtual age must be nonnegative and finite, got {v}")
    if not (0.0 <= u < 1.0):
        raise InvalidInputError(f"uniform variate must lie in [0, 1), got {u}")
    w = -math.log1p(-u) / p.a
    if v == 0.0:
        return w ** (1.0 / p.b)
    # v*(expm1(log1p(w/v**b)/b)) avoids the (big)**(1/b) - big cancellation
    return v * math.expm1(math.log1p(w / v ** p.b) / p.b)


def _positive_uniform(rng: np.random.Generator) -> float:
    # u = 0 would yield t = 0 and break the strict-positivity invariant
    u = rng.random()
    while u == 0.0:
        u = rng.random()
    return u


def next_event(
    p: WeibullParams,
    factors: RestorationFactors,
    k_cm: float,
    v: float,
    rng: np.random.Generator,
) -> tuple[Event, float]:
    """Draw the next event at virtual age ``v`` and return (event, new age).

    Consumes exactly two uniforms (CM candidate first, then PM), redrawing
    any zero.  CM wins only a strict comparison; ties go to PM.
    """
    t_cm = conditional_quantile(p, v, _positive_uniform(rng))
    t_pm = k_cm * conditional_quantile(p, v, _positive_uniform(rng))
    if t_cm < t_pm:
        event = Event(EventKind.CM, t_cm)
    else:
        event = Event(EventKind.PM, t_pm)
    return event, virtual_age_step(v, factors.for_kind(event.kind), event.t)


def _item_rng(seed: int, item_index: int) -> np.random.Generator:
    # Splitting rule: each item owns the stream seeded by the pair
    # (seed mod 2**64, item_index), so items can generate independently.
    return np.random.default_rng([seed & _SEED_MASK, item_index])


def generate(config: GenerationConfig) -> EventHistory:
    """Generate ``n_items`` independent items of ``events_per_item`` events.

    Deterministic: the same config always yields a bit-identical history.
    """
    items = []
    for item_index in range(config.n_items):
        rng = _item_rng(config.seed, item_index)
        v = 0.0
        events = []
        for _ in range(config.events_per_item):
            event, v = next_event(config.params, config.factors, config.k_cm, v, rng)
            events.append(event)
        items.append(events)
    return EventHistory.from_lists(items)
