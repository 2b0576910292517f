import math

import numpy as np
import pytest
from scipy import stats

from grptools.model import EventKind, InvalidInputError, RestorationFactors, WeibullParams, trajectory
from grptools.sampler import (
    GenerationConfig,
    conditional_quantile,
    generate,
    next_event,
)


class _FixedUniforms:
    """Stands in for a Generator, yielding a scripted uniform stream."""

    def __init__(self, values):
        self._values = list(values)

    def random(self):
        return self._values.pop(0)


class TestConditionalQuantile:
    def test_trivial_examples(self):
        p = WeibullParams(1.0, 1.0)
        assert conditional_quantile(p, 0.0, 1.0 - math.exp(-1.0)) == pytest.approx(1.0)
        p = WeibullParams(1.0, 2.0)
        assert conditional_quantile(p, 1.0, 1.0 - math.exp(-3.0)) == pytest.approx(1.0)
        assert conditional_quantile(WeibullParams(0.3, 1.7), 2.5, 0.0) == 0.0

    def test_rejects_bad_uniform(self):
        p = WeibullParams(1.0, 2.0)
        with pytest.raises(InvalidInputError):
            conditional_quantile(p, 0.0, 1.0)
        with pytest.raises(InvalidInputError):
            conditional_quantile(p, 0.0, -0.1)

    def test_inverts_conditional_cdf(self):
        rng = np.random.default_rng(3)
        for _ in range(50):
            p = WeibullParams(float(rng.uniform(0.2, 3.0)), float(rng.uniform(0.5, 3.0)))
            v = float(rng.uniform(0.0, 5.0))
            u = float(rng.uniform(0.01, 0.99))
            t = conditional_quantile(p, v, u)
            cdf = -math.expm1(-p.a * ((v + t) ** p.b - v ** p.b))
            assert cdf == pytest.approx(u, rel=1e-9)

    def test_kolmogorov_smirnov(self):
        p = WeibullParams.from_theta(1.0, 2.2)
        v = 1.5
        rng = np.random.default_rng(11)
        draws = np.array([conditional_quantile(p, v, u) for u in rng.random(10_000)])
        cdf = lambda t: -np.expm1(-p.a * ((v + t) ** p.b - v ** p.b))
        assert stats.kstest(draws, cdf).pvalue > 0.01


class TestNextEvent:
    def test_comparison_rule(self):
        p = WeibullParams(1.0, 1.0)
        factors = RestorationFactors(q_pm=0.8, q_cm=0.3)
        # scripted draws give t_cm = 0.5 and a raw PM draw of 1.0
        rng = _FixedUniforms([1.0 - math.exp(-0.5), 1.0 - math.exp(-1.0)])
        event, v = next_event(p, factors, 1.0, 0.0, rng)
        assert event.kind is EventKind.CM
        assert event.t == pytest.approx(0.5)
        assert v == pytest.approx(0.3 * 0.5)

    def test_small_kcm_forces_pm(self):
        p = WeibullParams(1.0, 2.0)
        factors = RestorationFactors(0.5, 0.5)
        rng = np.random.default_rng(1)
        v = 0.0
        for _ in range(200):
            event, v = next_event(p, factors, 1e-9, v, rng)
            assert event.kind is EventKind.PM

    def test_balanced_kcm_halves_cm_fraction(self):
        config = GenerationConfig(
            params=WeibullParams.from_theta(1.0, 2.2),
            factors=RestorationFactors(0.8, 0.3),
            k_cm=1.0,
            events_per_item=10_000,
            n_items=1,
            seed=13,
        )
        history = generate(config)
        frac = sum(e.kind is EventKind.CM for e in history.items[0]) / 10_000
        assert frac == pytest.approx(0.5, abs=0.02)

    def test_low_kcm_fraction(self):
        config = GenerationConfig(
            params=WeibullParams.from_theta(1.0, 2.2),
            factors=RestorationFactors(0.8, 0.3),
            k_cm=0.1,
            events_per_item=100,
            n_items=1,
            seed=23,
        )
        history = generate(config)
        frac = sum(e.kind is EventKind.CM for e in history.items[0]) / 100
        assert frac == pytest.approx(0.10, abs=0.03)


class TestGenerate:
    def _config(self, **kw):
        base = dict(
            params=WeibullParams.from_theta(1.0, 2.2),
            factors=RestorationFactors(0.8, 0.3),
            k_cm=1.0,
            events_per_item=100,
            n_items=1,
            seed=42,
        )
        base.update(kw)
        return GenerationConfig(**base)

    def test_deterministic(self):
        assert generate(self._config()) == generate(self._config())

    def test_shape(self):
        history = generate(self._config(n_items=3))
        assert len(history.items) == 3
        assert all(len(item) == 100 for item in history.items)
        assert history.n_events == 300

    def test_min_of_two_draws_distribution(self):
        # with k_cm = 1 the first inter-arrival time of each item is the min
        # of two i.i.d. Weibull draws; compare against a direct oracle
        config = self._config(events_per_item=1, n_items=4000)
        realized = np.array([item[0].t for item in generate(config).items])
        rng = np.random.default_rng(99)
        p = config.params
        raw = (-np.log(rng.random((4000, 2))) / p.a) ** (1.0 / p.b)
        oracle = raw.min(axis=1)
        assert stats.ks_2samp(realized, oracle).pvalue > 0.01

    def test_internal_ages_match_trajectory(self):
        from grptools.sampler import _item_rng

        config = self._config(events_per_item=50)
        history = generate(config)
        rng = _item_rng(config.seed, 0)
        v = 0.0
        ages = []
        for _ in range(50):
            _, v = next_event(config.params, config.factors, config.k_cm, v, rng)
            ages.append(v)
        np.testing.assert_array_equal(
            ages, trajectory(history.items[0], config.factors)
        )

    def test_config_validation(self):
        with pytest.raises(InvalidInputError):
            self._config(k_cm=0.0)
        with pytest.raises(InvalidInputError):
            self._config(events_per_item=0)
        with pytest.raises(InvalidInputError):
            self._config(n_items=0)
