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
"""
Property checks of the buy-day rule and the forecaster on many random cases, and the desk-scale simulation runs
(marked slow, select them with pytest -m slow).
"""
import math
from dataclasses import replace
import numpy as np
import pytest
from skirental import hedge
from skirental.config import CompareScenario, RegretScenario, sweep_scenarios
from skirental.experiments import run_compare, run_regret_sweep
from skirental.experts import BuyExpertPanel, SkiExpertPanel, linspace_variances
from skirental.learner import LearnerConfig, regret_x_bound, run
from skirental.ski_core import (SkiRentalInstance, buy_day_distribution, competitive_ratio_bound, consistency_ratio,
                                expected_alg_cost, opt_cost, robustness_radius, robustness_ratio)

LN_1_5 = math.log(1.5)


@pytest.mark.parametrize("lam", [0.2, 0.5, LN_1_5, 1.0])
def test_competitive_ratio_bound_holds(lam):
    for b in range(2, 31):
        if lam * b < 1.0:
            continue
        predictions = np.unique(np.rint(np.linspace(0.0, 4.0 * b, 9)).astype(int))
        for y in predictions:
            dist = buy_day_distribution(b, int(y), lam)
            for x in range(1, 4 * b + 1):
                inst = SkiRentalInstance(b, x)
                opt = opt_cost(inst)
                ratio = expected_alg_cost(inst, dist) / opt
                assert ratio <= competitive_ratio_bound(b, lam, abs(int(y) - x), opt) + 1e-9, (b, int(y), x)


def test_distribution_is_constant_inside_robustness_radius():
    rng = np.random.default_rng(2024)
    changed = False
    checked = 0
    for _ in range(1000):
        b = int(rng.integers(2, 300, endpoint=True))
        lam = float(rng.uniform(2.0 / b, 1.0))
        eps = robustness_radius(b, lam).epsilon
        if eps < 1e-6:
            continue
        checked += 1
        shift = min(eps, 0.5) - 1e-9
        for y in (0, b, 4 * b):
            reference = buy_day_distribution(b, y, lam)
            assert buy_day_distribution(b - shift, y, lam) == reference
            assert buy_day_distribution(b + shift, y, lam) == reference
            outside = b + min(eps, 0.49) + 1e-3
            changed = changed or buy_day_distribution(outside, y, lam) != reference
    assert checked > 900
    assert changed


def test_hedge_weights_on_random_states():
    rng = np.random.default_rng(7)
    for _ in range(10000):
        n = int(rng.integers(1, 12))
        losses = rng.uniform(0.0, 1000.0, n)
        schedule = hedge.ConstantRate(float(rng.uniform(1e-3, 2.0)))
        state = hedge.HedgeState(losses, schedule)
        alpha = hedge.weights(state)
        assert alpha.sum() == pytest.approx(1.0, abs=1e-12)
        assert np.all(alpha >= 0.0)
        assert alpha[np.argmin(losses)] == alpha.max()
        shifted = hedge.weights(hedge.HedgeState(losses + float(rng.uniform(0.0, 1000.0)), schedule))
        np.testing.assert_allclose(shifted, alpha, rtol=1e-8, atol=1e-12)


@pytest.mark.slow
def test_default_comparison():
    scenario = CompareScenario()
    rows = run_compare(scenario, master_seed=0, threads=4)
    assert len(rows) == 21 * 3 * 2
    robust = [row for row in rows if row.algorithm == "cost_robust"]
    # For lambda = 1 both branches share one distribution, so the prediction does not matter.
    assert len({row.mean_cr for row in robust if row.lam == 1.0}) == 1
    for row in robust:
        assert row.mean_cr <= robustness_ratio(scenario.buy_cost, row.lam) + 3.0 * row.stderr
        if row.sigma == 0.0:
            assert row.mean_cr <= consistency_ratio(row.lam) + 3.0 * row.stderr


@pytest.mark.slow
def test_buy_weights_converge_to_most_accurate_expert():
    config = LearnerConfig(2000, BuyExpertPanel(linspace_variances(1.0, 20.0, 5), 50.0, (200, 700)),
                           SkiExpertPanel(linspace_variances(1.0, 100.0, 5)), (200, 700), LN_1_5)
    best_weights = [hedge.weights(run(config, 1, (0, seed)).buy_state)[0] for seed in range(100)]
    assert np.mean(best_weights) > 0.9


@pytest.mark.slow
def test_buy_cost_estimate_settles_inside_robustness_radius():
    # One almost exact buy expert and a single buy cost whose radius is about 0.044.
    assert robustness_radius(300, LN_1_5).epsilon < 0.05
    config = LearnerConfig(1000, BuyExpertPanel([1e-12, 5.0, 10.0, 15.0, 20.0], 50.0, (300, 300)),
                           SkiExpertPanel(linspace_variances(1.0, 100.0, 5)), (200, 700), LN_1_5)
    for seed in range(10):
        trace = run(config, 2, (0, seed))
        for record in trace.records[500:]:
            np.testing.assert_array_equal(record.loss_vector, record.hindsight_loss_vector)
        assert abs(trace.regret_b[-1] - trace.regret_b[499]) <= 1e-8


@pytest.mark.slow
def test_default_regret():
    summary, = run_regret_sweep((RegretScenario(),), master_seed=0, threads=4)
    horizon = summary.scenario.horizon
    assert summary.regret.shape == (horizon,)
    assert np.mean(summary.final_regrets) > 0.0
    assert summary.regret_x[-1] <= regret_x_bound(summary.max_loss, horizon, summary.scenario.n)


@pytest.mark.slow
def test_number_of_buy_experts_does_not_change_regret():
    summaries = run_regret_sweep(sweep_scenarios("buy_experts", RegretScenario(horizon=2000, seeds=50)), 3,
                                 threads=4)
    assert [summary.scenario.m for summary in summaries] == [2, 5, 10]
    means = [float(np.mean(summary.final_regrets)) for summary in summaries]
    stderrs = [float(np.std(summary.final_regrets, ddof=1)) / math.sqrt(len(summary.final_regrets))
               for summary in summaries]
    for i in range(3):
        for j in range(i + 1, 3):
            assert abs(means[i] - means[j]) <= 3.0 * (stderrs[i] + stderrs[j]), (i, j, means, stderrs)


@pytest.mark.slow
def test_small_lambda_lowers_algorithmic_cost():
    base = RegretScenario(horizon=2000, seeds=20, eta_range=(1.0, 100.0))
    small, large = run_regret_sweep((replace(base, lam=0.1), replace(base, lam=1.0)), 4, threads=4)
    assert np.mean(small.final_losses) < np.mean(large.final_losses)
