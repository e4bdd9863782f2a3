# SkiRental - Simulations of the sequential ski-rental problem with buy-cost experts and ski-day experts
# Copyright (C) 2026 The SkiRental developers
#
# This file is part of SkiRental.
#
# SkiRental is free software: you can redistribute it and/or modify it under the terms of the GNU General Public
# License as published by the Free Software Foundation, either version 3 of the License, or (at your option) any later
# version.
#
# SkiRental is distributed in the hope that it will be useful, but WITHOUT ANY WARRANTY; without even the implied
# warranty of MERCHANTABILITY or FITNESS FOR A PARTICULAR PURPOSE. See the GNU General Public License for more details.
#
# You should have received a copy of the GNU General Public License along with SkiRental in the LICENSE file.
# If not, see <https://www.gnu.org/licenses/>.
#
import math
from dataclasses import dataclass
from decimal import Decimal, getcontext
from typing import Tuple
import numpy as np
import pytest
from skirental import hedge
from skirental.experts import BuyExpertPanel, SkiExpertPanel
from skirental.learner import (LearnerConfig, RoundError, SequentialSkiRental, loss_bound, regret_bound,
                               regret_components, regret_x_bound, run, t_star)
from skirental.ski_core import SkiRentalInstance

LN_1_5 = math.log(1.5)


def make_config(horizon=200, buy_variances=(1.0, 5.75, 10.5, 15.25, 20.0), noise_bound=50.0, b_range=(200, 700),
                ski_variances=(1.0, 25.75, 50.5, 75.25, 100.0), x_range=(200, 700), lam=LN_1_5, **kwargs):
    return LearnerConfig(horizon, BuyExpertPanel(list(buy_variances), noise_bound, b_range),
                         SkiExpertPanel(list(ski_variances)), x_range, lam, **kwargs)


@dataclass(frozen=True)
class FixedBuyPanel(object):
    """Buy panel that always returns the same predictions."""
    predictions: Tuple[float, ...]
    noise_bound: float
    ground_truth_range: Tuple[int, int]

    @property
    def m(self):
        return len(self.predictions)

    @property
    def variances(self):
        return np.ones(self.m)

    def predict(self, truth, rng):
        return np.array(self.predictions)


def test_convex_combination_of_buy_predictions():
    config = LearnerConfig(1, FixedBuyPanel((99.0, 101.0), 1.0, (100, 100)), SkiExpertPanel([1.0, 4.0]), (50, 150),
                           LN_1_5)
    learner = SequentialSkiRental(config)
    record = learner.run_round(SkiRentalInstance(100, 120), np.random.default_rng(0))
    np.testing.assert_allclose(record.alpha, [0.5, 0.5])
    assert record.b_s == 100.0
    np.testing.assert_array_equal(record.buy_losses, [1.0, 1.0])
    np.testing.assert_array_equal(record.normalized_buy_losses, [0.25, 0.25])
    np.testing.assert_array_equal(record.loss_vector, record.hindsight_loss_vector)


def test_exact_single_buy_expert_has_no_buy_regret():
    trace = run(make_config(horizon=100, buy_variances=(1.0,), noise_bound=0.0), master_seed=3)
    for record in trace.records:
        assert record.b_s == record.instance.buy_cost
        np.testing.assert_array_equal(record.loss_vector, record.hindsight_loss_vector)
    np.testing.assert_array_equal(trace.regret_b, np.zeros(100))


def test_single_ski_expert_has_no_learning_regret():
    trace = run(make_config(horizon=100, ski_variances=(10.0,)), master_seed=4)
    np.testing.assert_array_equal(trace.regret_x, np.zeros(100))


@pytest.mark.parametrize("loss_mode", ["expected", "sampled"])
def test_regret_split_is_additive(loss_mode):
    trace = run(make_config(horizon=300, loss_mode=loss_mode), master_seed=5)
    regret_x, regret_b = regret_components(trace)
    np.testing.assert_allclose(regret_x + regret_b, trace.cumulative_regret, rtol=0.0, atol=1e-12)
    np.testing.assert_array_equal(regret_x, trace.regret_x)
    assert len(trace.records) == 300
    hindsight = np.array([record.hindsight_loss_vector for record in trace.records]).sum(axis=0)
    assert trace.best_expert == int(np.argmin(hindsight))


def test_invariants_of_round_records():
    config = make_config(horizon=500)
    trace = run(config, master_seed=6)
    for record in trace.records:
        assert record.buy_predictions.min() <= record.b_s <= record.buy_predictions.max()
        assert np.all(record.loss_vector >= 0.0) and np.all(record.loss_vector <= config.loss_bound)
        assert np.all(record.hindsight_loss_vector >= 0.0)
        assert record.beta.sum() == pytest.approx(1.0)
        assert record.mixture_loss == pytest.approx(float(record.beta @ record.loss_vector))


def test_weights_replay():
    config = make_config(horizon=150)
    trace = run(config, master_seed=7)
    ski_losses = np.sum([record.loss_vector for record in trace.records], axis=0)
    buy_losses = np.sum([record.buy_losses for record in trace.records], axis=0)
    ski_rate = math.sqrt(math.log(5) / 150)
    buy_rate = math.sqrt(math.log(5)) / math.sqrt(150)
    for losses, rate, state in ((ski_losses, ski_rate, trace.ski_state), (buy_losses, buy_rate, trace.buy_state)):
        shifted = losses - losses.min()
        expected = np.exp(-rate * shifted) / np.exp(-rate * shifted).sum()
        np.testing.assert_allclose(hedge.weights(state), expected, rtol=1e-9, atol=1e-12)


def test_rate_overrides():
    learner = SequentialSkiRental(make_config(ski_rate=0.25, buy_rate_scale=0.5))
    assert learner.ski_state.schedule == hedge.ConstantRate(0.25)
    assert learner.buy_state.schedule == hedge.DecreasingRate(0.5)
    scaled = SequentialSkiRental(make_config(horizon=100, scale_rates_by_loss_bound=True))
    assert scaled.ski_state.schedule.rate == pytest.approx(math.sqrt(math.log(5) / 100) / 700.0)
    assert scaled.buy_state.schedule.scale == pytest.approx(math.sqrt(math.log(5)) / 10000.0)


def test_determinism():
    config = make_config(horizon=100)
    first = run(config, master_seed=11)
    second = run(config, master_seed=11)
    other = run(config, master_seed=12)
    np.testing.assert_array_equal(first.cumulative_regret, second.cumulative_regret)
    assert [r.instance for r in first.records] == [r.instance for r in second.records]
    assert first.config_fingerprint == second.config_fingerprint
    assert not np.array_equal(first.cumulative_regret, other.cumulative_regret)


def test_empty_horizon():
    trace = run(make_config(horizon=0), master_seed=0)
    assert trace.records == ()
    assert len(trace.cumulative_regret) == 0


def test_buy_weights_concentrate():
    config = make_config(horizon=500)
    best_weights = [hedge.weights(run(config, master_seed=seed).buy_state)[0] for seed in range(3)]
    assert np.mean(best_weights) > 0.9


def test_round_error_names_buy_estimate():
    # lambda * b_s < 1 for b_s near 2.
    config = make_config(horizon=5, buy_variances=(1.0,), noise_bound=0.0, b_range=(2, 2), x_range=(1, 5), lam=0.4)
    with pytest.raises(RoundError) as info:
        run(config, master_seed=0)
    assert info.value.t == 1
    assert info.value.b_s == 2.0


def test_invalid_config():
    with pytest.raises(ValueError):
        make_config(loss_mode="median")
    with pytest.raises(ValueError):
        make_config(horizon=-1)


def test_loss_bound():
    assert loss_bound(200, 700, 700) == 700.0
    assert loss_bound(50) <= 51.0
    assert loss_bound(2, 2, 100) == 50.0
    with pytest.raises(ValueError):
        loss_bound(1)


def t_star_oracle(delta, epsilon, gap, m, c, horizon):
    getcontext().prec = 50
    delta, epsilon, gap, c = (Decimal(repr(v)) for v in (delta, epsilon, gap, c))
    log_term = ((2 * m / (c - 1)) * (1 + horizon * c * gap / (delta * epsilon ** 2))).ln()
    arms = (1 + 8 / gap ** 2 * log_term, 1 + log_term ** 2 / (2 * gap ** 2 * Decimal(m).ln()),
            1 + math.ceil(4 / gap ** 2))
    return int(Decimal(max(arms)).to_integral_value(rounding="ROUND_CEILING"))


def test_t_star():
    assert t_star(0.1, 0.15, 5.0, 5, 2.0, 10 ** 4) == t_star_oracle(0.1, 0.15, 5.0, 5, 2.0, 10 ** 4) == 8
    assert t_star(0.5, 1.0, 1000.0, 5, 2.0, 10) == 2
    for horizon in (10, 100, 1000, 10 ** 5):
        assert t_star(0.1, 0.15, 0.5, 5, 2.0, 2 * horizon) >= t_star(0.1, 0.15, 0.5, 5, 2.0, horizon)
        assert t_star(0.1, 0.15, 0.5, 5, 2.0, horizon) == t_star_oracle(0.1, 0.15, 0.5, 5, 2.0, horizon)


@pytest.mark.parametrize("arguments", [(0.1, 0.15, 0.0, 5, 2.0, 100), (0.1, 0.15, -1.0, 5, 2.0, 100)])
def test_t_star_rejects_nonpositive_gap(arguments):
    with pytest.raises(ValueError, match="sub-optimality gap must be positive"):
        t_star(*arguments)


@pytest.mark.parametrize("arguments", [(0.0, 0.15, 1.0, 5, 2.0, 100), (0.1, 0.0, 1.0, 5, 2.0, 100),
                                       (0.1, 0.15, 1.0, 1, 2.0, 100), (0.1, 0.15, 1.0, 5, 1.0, 100),
                                       (0.1, 0.15, 1.0, 5, 2.0, 0)])
def test_t_star_domain(arguments):
    with pytest.raises(ValueError):
        t_star(*arguments)


def test_regret_bound():
    assert regret_bound(3.0, 100, 1, 10) == 30.0
    assert regret_bound(1.0, 100, 4, 10) == pytest.approx(2.0 * math.sqrt(100 * math.log(4)) + 10.0)
    assert regret_bound(2.0, 200, 5, 0) == pytest.approx(math.sqrt(2.0) * regret_bound(2.0, 100, 5, 0))
    assert regret_x_bound(2.0, 100, 5) == pytest.approx(5.0 * math.sqrt(100 * math.log(5)))
    with pytest.raises(ValueError):
        regret_bound(1.0, 100, 4, -1)
