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
Simulation experiments.

The comparison experiment measures the average competitive ratio of the cost-robust buy-day rule, of the
prediction-based randomized rule without robust rounding, and of the deterministic break-even rule on single ski seasons
with a known buy cost and a noisy prediction y = x + sigma z of the number of ski days. Every trial draws the season
length x, the standard normal z and the uniform number u of the buy day once; all standard deviations and all rules use
them (common random numbers).

The regret sweep runs the sequential learner for several configurations and averages the regret sequences over seeds.
"""
import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Callable, Dict, Iterable, List, Sequence, Tuple
import numpy as np
from . import learner
from .config import CompareScenario, RegretScenario
from .experts import BuyExpertPanel, SkiExpertPanel, linspace_variances
from .ski_core import Branch, BuyDayDistribution, buy_day_distribution, buy_day_from_uniform, geometric_distribution
from .statistics import error_bar, mean_and_standard_error
from .streams import COMPARE_STREAM, REGRET_STREAM, generator

logger = logging.getLogger(__name__)

# Number of trials that share one random stream in the comparison experiment.
TRIAL_BLOCK_SIZE = 1000


def prediction_randomized_distribution(b: int, y: int, lam: float) -> BuyDayDistribution:
    """
    Return the buy-day distribution of the prediction-based randomized rule without robust rounding.

    The rule buys late over the first floor(lambda b) days if y >= b and early over the first ceil(b / lambda) days
    otherwise; both distributions are truncated geometric with the base 1 - 1 / b.
    """
    if y >= b:
        return geometric_distribution(Branch.BUY_LATE, math.floor(lam * b), 1.0 - 1.0 / b)
    return geometric_distribution(Branch.BUY_EARLY, math.ceil(b / lam), 1.0 - 1.0 / b)


def _randomized_days(distribution: Callable[[int, int, float], BuyDayDistribution], b: int, lam: float,
                     predictions: np.ndarray, uniforms: np.ndarray) -> np.ndarray:
    # The distributions only depend on the branch, so two inverse transforms cover all trials.
    late = distribution(b, b, lam)
    early = distribution(b, b - 1, lam)
    return np.where(predictions >= b, buy_day_from_uniform(late, uniforms), buy_day_from_uniform(early, uniforms))


def buy_days(algorithm: str, b: int, lam: float, predictions: np.ndarray, uniforms: np.ndarray) -> np.ndarray:
    """
    Return the buy days of a rule for many trials.

    Parameters
    ----------
    algorithm : str
        "cost_robust", "prediction_randomized" or "break_even".
    b : int
        The buy cost.
    lam : float
        The trade-off parameter (ignored by the break-even rule).
    predictions : np.ndarray
        The predicted numbers of ski days.
    uniforms : np.ndarray
        The uniform numbers that select the buy days.

    Returns
    -------
    np.ndarray
        The buy days.

    Raises
    ------
    ValueError
        If the rule is unknown.
    """
    if algorithm == "cost_robust":
        return _randomized_days(buy_day_distribution, b, lam, predictions, uniforms)
    if algorithm == "prediction_randomized":
        return _randomized_days(prediction_randomized_distribution, b, lam, predictions, uniforms)
    if algorithm == "break_even":
        return np.full(len(predictions), b, dtype=np.int64)
    raise ValueError(f"Unknown algorithm {algorithm}.")


def competitive_ratios(b: int, seasons: np.ndarray, days: np.ndarray) -> np.ndarray:
    """Return ALG / OPT for every season length and buy day."""
    costs = np.where(seasons >= days, b + days - 1, seasons)
    return costs / np.minimum(b, seasons)


@dataclass(frozen=True)
class CompareRow(object):
    """One row of the comparison table."""
    sigma: float
    algorithm: str
    lam: float
    mean_cr: float
    stderr: float
    trials: int


def _compare_block(scenario: CompareScenario, master_seed: int, block: int) -> Dict[Tuple[int, str, int], np.ndarray]:
    """Return the competitive ratios of one block of trials for every standard deviation, rule and lambda."""
    start = block * TRIAL_BLOCK_SIZE
    size = min(TRIAL_BLOCK_SIZE, scenario.trials - start)
    rng = generator(master_seed, COMPARE_STREAM, block)
    b = scenario.buy_cost
    seasons = rng.integers(1, scenario.season_factor * b, size=size, endpoint=True)
    normals = rng.standard_normal(size)
    uniforms = rng.random(size)
    ratios = {}
    for sigma_index, sigma in enumerate(scenario.sigma_grid):
        predictions = np.maximum(np.rint(seasons + sigma * normals), 0.0).astype(np.int64)
        for algorithm in scenario.algorithms:
            for lam_index, lam in enumerate(scenario.lambdas):
                days = buy_days(algorithm, b, lam, predictions, uniforms)
                ratios[(sigma_index, algorithm, lam_index)] = competitive_ratios(b, seasons, days)
    return ratios


def _map(function: Callable, arguments: Sequence[tuple], threads: int) -> List:
    """Evaluate the function on all arguments in order, with a process pool if threads > 1."""
    if threads > 1 and len(arguments) > 1:
        with ProcessPoolExecutor(max_workers=threads) as executor:
            return list(executor.map(function, *zip(*arguments)))
    return [function(*argument) for argument in arguments]


def run_compare(scenario: CompareScenario, master_seed: int, threads: int = 1) -> List[CompareRow]:
    """
    Run the competitive-ratio comparison.

    Parameters
    ----------
    scenario : CompareScenario
        The scenario.
    master_seed : int
        The master seed.
    threads : int, optional
        The number of worker processes.

    Returns
    -------
    List[CompareRow]
        One row per standard deviation, rule and lambda (in this nesting order).
    """
    scenario.validate()
    blocks = math.ceil(scenario.trials / TRIAL_BLOCK_SIZE)
    logger.info(f"Comparing {len(scenario.algorithms)} rules on {scenario.trials} trials for "
                f"{len(scenario.sigma_grid)} standard deviations (b={scenario.buy_cost}).")
    results = _map(_compare_block, [(scenario, master_seed, block) for block in range(blocks)], threads)
    rows = []
    for sigma_index, sigma in enumerate(scenario.sigma_grid):
        for algorithm in scenario.algorithms:
            for lam_index, lam in enumerate(scenario.lambdas):
                ratios = np.concatenate([result[(sigma_index, algorithm, lam_index)] for result in results])
                mean, stderr = mean_and_standard_error(ratios)
                rows.append(CompareRow(float(sigma), algorithm, float(lam), mean, stderr, len(ratios)))
        logger.debug(f"Finished sigma={sigma}.")
    return rows


def learner_config(scenario: RegretScenario, loss_mode: str) -> learner.LearnerConfig:
    """Build the learner parameters of a regret scenario."""
    buy_panel = BuyExpertPanel(linspace_variances(*scenario.gamma_range, scenario.m), scenario.noise_bound,
                               tuple(scenario.b_range))
    ski_panel = SkiExpertPanel(linspace_variances(*scenario.eta_range, scenario.n))
    return learner.LearnerConfig(scenario.horizon, buy_panel, ski_panel, tuple(scenario.x_range), scenario.lam,
                                 loss_mode, scenario.ski_rate, scenario.buy_rate_scale,
                                 scenario.scale_rates_by_loss_bound)


def _regret_run(config: learner.LearnerConfig, master_seed: int, config_id: int,
                seed_index: int) -> Tuple[np.ndarray, np.ndarray, np.ndarray, float, float]:
    trace = learner.run(config, master_seed, (REGRET_STREAM, config_id, seed_index))
    max_loss = max((float(np.max(record.loss_vector)) for record in trace.records), default=0.0)
    total_loss = math.fsum(record.mixture_loss for record in trace.records)
    return trace.cumulative_regret, trace.regret_x, trace.regret_b, max_loss, total_loss


@dataclass(frozen=True, eq=False)
class RegretSummary(object):
    """
    Seed-averaged regret of one learner configuration.

    Attributes
    ----------
    config_id : int
        The index of the configuration.
    scenario : RegretScenario
        The configuration.
    regret : np.ndarray
        The mean cumulative regret for t = 1, ..., T.
    regret_x : np.ndarray
        The mean of R^x.
    regret_b : np.ndarray
        The mean of R^b.
    final_regrets : np.ndarray
        The final cumulative regret of every seed.
    max_loss : float
        The largest ski-expert loss observed in any round of any seed.
    final_losses : np.ndarray
        The cumulative mixture loss (excess algorithmic cost relative to OPT) of every seed at the horizon.
    """
    config_id: int
    scenario: RegretScenario
    regret: np.ndarray
    regret_x: np.ndarray
    regret_b: np.ndarray
    final_regrets: np.ndarray
    max_loss: float
    final_losses: np.ndarray


def _seed_mean(sequences: Iterable[np.ndarray], horizon: int) -> np.ndarray:
    stacked = np.array(list(sequences), dtype=float)
    if horizon == 0:
        return np.zeros(0)
    return np.array([math.fsum(column) / len(column) for column in stacked.T])


def run_regret_sweep(scenarios: Sequence[RegretScenario], master_seed: int, loss_mode: str = "expected",
                     threads: int = 1) -> List[RegretSummary]:
    """
    Run the learner for every configuration and seed and average the regret sequences over the seeds.

    The random stream of a run is keyed by REGRET_STREAM, the index of the configuration and the index of the seed.

    Parameters
    ----------
    scenarios : Sequence[RegretScenario]
        The configurations.
    master_seed : int
        The master seed.
    loss_mode : str, optional
        The loss mode of the learner.
    threads : int, optional
        The number of worker processes.

    Returns
    -------
    List[RegretSummary]
        One summary per configuration.
    """
    summaries = []
    for config_id, scenario in enumerate(scenarios):
        scenario.validate()
        config = learner_config(scenario, loss_mode)
        logger.info(f"Configuration {config_id} ({scenario.label}): T={scenario.horizon}, m={scenario.m}, "
                    f"n={scenario.n}, lambda={scenario.lam}, {scenario.seeds} seeds, B={config.loss_bound}.")
        runs = _map(_regret_run, [(config, master_seed, config_id, seed) for seed in range(scenario.seeds)], threads)
        horizon = scenario.horizon
        regret_x = _seed_mean((run[1] for run in runs), horizon)
        regret_b = _seed_mean((run[2] for run in runs), horizon)
        regret = regret_x + regret_b
        final_regrets = np.array([run[0][-1] if horizon > 0 else 0.0 for run in runs])
        max_loss = max(run[3] for run in runs)
        final_losses = np.array([run[4] for run in runs])
        summaries.append(RegretSummary(config_id, scenario, regret, regret_x, regret_b, final_regrets, max_loss,
                                       final_losses))
        increments = np.diff(runs[0][0]) if horizon > 1 else np.zeros(0)
        if len(increments) > 1 and np.ptp(increments) > 0.0:
            # The per-round increments of a single run are correlated.
            mean, se = error_bar(increments)
            logger.info(f"Configuration {config_id}: mean regret increment of seed 0 {mean} +/- {se}.")
    return summaries
