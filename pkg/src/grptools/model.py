"""Virtual-age dynamics and exact log-likelihoods for Weibull repairable systems.

A repairable item experiences preventive (PM) and corrective (CM) maintenance
events separated by inter-arrival times.  Each event advances the item's
virtual age by ``q * t`` where ``q`` is the restoration factor of the event
kind.  Inter-arrival times follow a Weibull law conditioned on the current
virtual age, so a PM event contributes a log-survival term and a CM event a
log-density term.  Everything here is a pure function; all likelihood work is
done in log space.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Sequence

import numpy as np


class InvalidInputError(ValueError):
    """An argument violates a documented precondition."""


class NumericOverflowError(ArithmeticError):
    """A likelihood term overflowed to a non-finite value.

    Carries the item and event index of the offending contribution when the
    failure happened inside a history evaluation.
    """

    def __init__(self, message: str, item: int | None = None, event: int | None = None):
        super().__init__(message)
        self.item = item
        self.event = event


class EventKind(Enum):
    PM = "PM"
    CM = "CM"


@dataclass(frozen=True)
class WeibullParams:
    """Weibull scale/shape pair, CDF ``F(t) = 1 - exp(-a * t**b)``.

    ``a`` is the scale parameter (units time**-b) and ``b`` the dimensionless
    shape.  The alternate time-unit scale ``theta = (1/a)**(1/b)`` is exposed
    as a view; ``(a, b)`` is canonical everywhere internally.
    """

    a: float
    b: float

    def __post_init__(self):
        if not (self.a > 0 and math.isfinite(self.a)):
            raise InvalidInputError(f"scale parameter a must be positive and finite, got {self.a}")
        if not (self.b > 0 and math.isfinite(self.b)):
            raise InvalidInputError(f"shape parameter b must be positive and finite, got {self.b}")

    @property
    def theta(self) -> float:
        """Alternate scale in time units: ``(1/a)**(1/b)``."""
        return (1.0 / self.a) ** (1.0 / self.b)

    @classmethod
    def from_theta(cls, theta: float, b: float) -> "WeibullParams":
        """Build from the time-unit scale: ``a = theta**-b``."""
        if not (theta > 0 and math.isfinite(theta)):
            raise InvalidInputError(f"theta must be positive and finite, got {theta}")
        return cls(a=theta ** (-b), b=b)


@dataclass(frozen=True)
class RestorationFactors:
    """Per-kind restoration factors, each in [0, 1].

    0 means the event adds nothing to virtual age (as good as new under a
    constant factor); 1 means real elapsed time is added in full (as bad as
    old).
    """

    q_pm: float
    q_cm: float

    def __post_init__(self):
        for name, q in (("q_pm", self.q_pm), ("q_cm", self.q_cm)):
            if not (0.0 <= q <= 1.0):
                raise InvalidInputError(f"{name} must lie in [0, 1], got {q}")

    def for_kind(self, kind: EventKind) -> float:
        return self.q_pm if kind is EventKind.PM else self.q_cm


@dataclass(frozen=True)
class Event:
    """One maintenance event: its kind and the inter-arrival time before it."""

    kind: EventKind
    t: float

    def __post_init__(self):
        if not (self.t > 0 and math.isfinite(self.t)):
            raise InvalidInputError(f"inter-arrival time must be positive and finite, got {self.t}")


@dataclass(frozen=True)
class EventHistory:
    """Ordered event sequences for one or more independent items.

    Each item starts at virtual age 0; items share no state, so they
    contribute additively to the total log-likelihood.
    """

    items: tuple[tuple[Event, ...], ...]

    @classmethod
    def from_lists(cls, items: Iterable[Iterable[Event]]) -> "EventHistory":
        return cls(tuple(tuple(item) for item in items))

    @property
    def n_events(self) -> int:
        return sum(len(item) for item in self.items)


def virtual_age_step(v_prev: float, q: float, t: float) -> float:
    """Advance virtual age by one event: ``v_prev + q * t``."""
    if not (v_prev >= 0):
        raise InvalidInputError(f"virtual age must be nonnegative, got {v_prev}")
    if not (0.0 <= q <= 1.0):
        raise InvalidInputError(f"restoration factor must lie in [0, 1], got {q}")
    if not (t > 0):
        raise InvalidInputError(f"inter-arrival time must be positive, got {t}")
    return v_prev + q * t


def trajectory(events: Sequence[Event], factors: RestorationFactors) -> np.ndarray:
    """Virtual age after each event of one item, starting from V_0 = 0.

    The returned array is non-decreasing and nonnegative since every
    increment is ``q * t >= 0``.
    """
    ages = np.empty(len(events))
    v = 0.0
    for i, e in enumerate(events):
        v = virtual_age_step(v, factors.for_kind(e.kind), e.t)
        ages[i] = v
    return ages


def _age_power_increment(v: float, t: float, b: float) -> float:
    # (v+t)**b - v**b.  For t << v the direct difference cancels
    # catastrophically, so whenever t < v switch to the exact form
    # v**b * expm1(b * log1p(t/v)), which subtracts nothing.
    if v == 0.0:
        return t ** b
    if t < v:
        return v ** b * math.expm1(b * math.log1p(t / v))
    return (v + t) ** b - v ** b


def event_log_likelihood(p: WeibullParams, v_prev: float, e: Event) -> float:
    """Log-likelihood contribution of one event at virtual age ``v_prev``.

    PM contributes the conditional log-survival
    ``-a * ((v+t)**b - v**b)``; CM additionally carries the hazard factor,
    giving ``ln(a) + ln(b) + (b-1) * ln(v+t) - a * ((v+t)**b - v**b)``.
    """
    if not (v_prev >= 0 and math.isfinite(v_prev)):
        raise InvalidInputError(f"virtual age must be nonnegative and finite, got {v_prev}")
    try:
        inc = _age_power_increment(v_prev, e.t, p.b)
        if e.kind is EventKind.PM:
            ll = -p.a * inc
        else:
            ll = math.log(p.a) + math.log(p.b) + (p.b - 1.0) * math.log(v_prev + e.t) - p.a * inc
    except OverflowError:
        ll = math.inf
    if not math.isfinite(ll):
        raise NumericOverflowError(
            f"non-finite likelihood term for event (kind={e.kind.value}, t={e.t}) at virtual age {v_prev}"
        )
    return ll


def history_log_likelihood(
    p: WeibullParams, factors: RestorationFactors, history: EventHistory
) -> float:
    """Total log-likelihood of a multi-item history.

    Items are independent, so the total is the sum over items of the sum of
    per-event contributions along each item's virtual-age trajectory.  The
    empty history scores 0.
    """
    total = 0.0
    for item_idx, events in enumerate(history.items):
        v = 0.0
        for event_idx, e in enumerate(events):
            try:
                total += event_log_likelihood(p, v, e)
            except NumericOverflowError as exc:
                raise NumericOverflowError(str(exc), item=item_idx, event=event_idx) from None
            v = virtual_age_step(v, factors.for_kind(e.kind), e.t)
    return total


def _history_arrays(history: EventHistory) -> list[tuple[np.ndarray, np.ndarray]]:
    out = []
    for events in history.items:
        t = np.array([e.t for e in events])
        is_pm = np.array([e.kind is EventKind.PM for e in events])
        out.append((t, is_pm))
    return out


def _age_power_increment_vec(v: np.ndarray, t: np.ndarray, b: np.ndarray) -> np.ndarray:
    # Vectorized version of _age_power_increment, same branch rule.
    safe_v = np.where(v > 0, v, 1.0)
    with np.errstate(over="ignore", invalid="ignore"):
        stable = safe_v ** b * np.expm1(b * np.log1p(t / safe_v))
        direct = (v + t) ** b - np.where(v > 0, v ** b, 0.0)
    return np.where((v > 0) & (t < v), stable, direct)


def history_log_likelihood_batch(
    log_a: np.ndarray,
    b: np.ndarray,
    q_pm: np.ndarray,
    q_cm: np.ndarray,
    history: EventHistory,
) -> np.ndarray:
    """Log-likelihood of one history at many parameter points at once.

    All four arguments are 1-D arrays of equal length P; the result has
    shape (P,).  Parameter points whose likelihood overflows get ``-inf``
    instead of raising, which suits population-based optimizers.  Agrees
    with :func:`history_log_likelihood` to machine precision elsewhere.
    """
    log_a = np.asarray(log_a, dtype=float)
    b = np.asarray(b, dtype=float)
    q_pm = np.asarray(q_pm, dtype=float)
    q_cm = np.asarray(q_cm, dtype=float)
    a = np.exp(log_a)
    total = np.zeros_like(log_a)
    with np.errstate(over="ignore", invalid="ignore", divide="ignore"):
        for t, is_pm in _history_arrays(history):
            if t.size == 0:
                continue
            # (P, n) virtual ages before each event
            q = np.where(is_pm[None, :], q_pm[:, None], q_cm[:, None])
            steps = q * t[None, :]
            v_prev = np.cumsum(steps, axis=1) - steps
            inc = _age_power_increment_vec(v_prev, t[None, :], b[:, None])
            terms = -a[:, None] * inc
            cm = ~is_pm
            if cm.any():
                x_cm = v_prev[:, cm] + t[None, cm]
                terms[:, cm] += (
                    log_a[:, None] + np.log(b)[:, None] + (b[:, None] - 1.0) * np.log(x_cm)
                )
            total += terms.sum(axis=1)
    return np.where(np.isfinite(total), total, -np.inf)
