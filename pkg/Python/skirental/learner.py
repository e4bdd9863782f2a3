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
The sequential ski-rental learner.

In every round, the learner combines the buy-cost predictions of m buy experts into the estimate b_s with the
Decreasing-Hedge weights alpha, hands b_s to the n ski experts which each run the cost-robust buy-day rule with their
own ski-day prediction, suffers the beta-weighted loss of the ski experts, and updates the ski weights beta with
Constant Hedge on the ski-expert losses and the buy weights alpha with Decreasing Hedge on the squared errors of the
buy experts.

The regret compares the learner against the best ski expert in hindsight that is given the true buy cost. It splits
into R^x (learning the best ski expert with the estimated buy cost) and R^b (the price of the estimated buy cost).

This module also provides the evaluators of the loss bound B, the convergence time t* of the buy weights and the
cumulative regret bound.
"""
import hashlib
import json
import logging
import math
from dataclasses import dataclass, field
from typing import Optional, Tuple
import numpy as np
from . import hedge
from .experts import BuyExpertPanel, SkiExpertPanel, draw_instance, predict_buy, predict_ski
from .ski_core import (InvalidHyperparameterError, SkiRentalInstance, alg_cost, buy_day_distribution,
                       buy_day_from_uniform, expected_expert_loss, opt_cost)
from .streams import generator

logger = logging.getLogger(__name__)

LOSS_MODES = ("expected", "sampled")


class RoundError(RuntimeError):
    """Raised when a round of the learner fails; carries the round index and the buy-cost estimate of the round."""

    def __init__(self, t: int, message: str, b_s: Optional[float] = None) -> None:
        super().__init__(f"Round {t} (b_s={b_s}): {message}")
        self.t = t
        self.b_s = b_s


@dataclass(frozen=True, eq=False)
class LearnerConfig(object):
    """
    Parameters of a run of the sequential ski-rental learner.

    Attributes
    ----------
    horizon : int
        The number of rounds T.
    buy_panel : BuyExpertPanel
        The buy experts (its ground-truth range is the range of the true buy costs).
    ski_panel : SkiExpertPanel
        The ski experts.
    x_range : Tuple[int, int]
        The range of the true number of ski days.
    lam : float
        The trade-off parameter of the cost-robust rule.
    loss_mode : str
        "expected" uses the expected loss over the buy day, "sampled" samples the buy day with common random numbers
        for the realized and the hindsight losses.
    ski_rate : float or None
        The Constant-Hedge rate of the ski weights (None for the default rule).
    buy_rate_scale : float or None
        The Decreasing-Hedge scale of the buy weights (None for the default rule).
    scale_rates_by_loss_bound : bool
        Divide the default rates by the loss bounds B and (2 noise_bound)^2.
    """
    horizon: int
    buy_panel: BuyExpertPanel
    ski_panel: SkiExpertPanel
    x_range: Tuple[int, int]
    lam: float
    loss_mode: str = "expected"
    ski_rate: Optional[float] = None
    buy_rate_scale: Optional[float] = None
    scale_rates_by_loss_bound: bool = False

    def __post_init__(self) -> None:
        if self.horizon < 0:
            raise ValueError(f"The horizon must be non-negative, got {self.horizon}.")
        if self.loss_mode not in LOSS_MODES:
            raise ValueError(f"Unknown loss mode {self.loss_mode}, expected one of {LOSS_MODES}.")
        if not 0.0 < self.lam <= 1.0:
            raise InvalidHyperparameterError(f"The trade-off parameter lambda must lie in (0, 1], got {self.lam}.")

    @property
    def loss_bound(self) -> float:
        """The bound B on the loss of a ski expert in a single round."""
        b_lo, b_hi = self.buy_panel.ground_truth_range
        return loss_bound(b_lo, b_hi, self.x_range[1])

    @property
    def buy_loss_bound(self) -> float:
        """The bound (2 noise_bound)^2 on the squared error of a buy expert."""
        return (2.0 * self.buy_panel.noise_bound) ** 2

    def fingerprint(self) -> str:
        """Return a short hash of all parameters."""
        description = {
            "horizon": self.horizon, "buy_variances": self.buy_panel.variances.tolist(),
            "noise_bound": self.buy_panel.noise_bound, "b_range": list(self.buy_panel.ground_truth_range),
            "ski_variances": self.ski_panel.variances.tolist(), "x_range": list(self.x_range), "lam": self.lam,
            "loss_mode": self.loss_mode, "ski_rate": self.ski_rate, "buy_rate_scale": self.buy_rate_scale,
            "scale_rates_by_loss_bound": self.scale_rates_by_loss_bound}
        return hashlib.sha256(json.dumps(description, sort_keys=True).encode("utf-8")).hexdigest()[:16]


@dataclass(frozen=True, eq=False)
class RoundRecord(object):
    """
    Log of a single round.

    Attributes
    ----------
    t : int
        The round index (starting at 1).
    instance : SkiRentalInstance
        The ground truth of the round.
    buy_predictions : np.ndarray
        The buy-cost predictions a^t.
    alpha : np.ndarray
        The weights of the buy experts used for b_s.
    b_s : float
        The weighted buy-cost estimate.
    ski_predictions : np.ndarray
        The ski-day predictions y^t.
    beta : np.ndarray
        The weights of the ski experts.
    loss_vector : np.ndarray
        The ski-expert losses with the estimate b_s.
    hindsight_loss_vector : np.ndarray
        The ski-expert losses with the true buy cost.
    mixture_loss : float
        The loss beta . loss_vector of the learner.
    buy_losses : np.ndarray
        The squared errors (a_i - b)^2 fed to the buy weights.
    normalized_buy_losses : np.ndarray
        The squared errors divided by (2 noise_bound)^2.
    """
    t: int
    instance: SkiRentalInstance
    buy_predictions: np.ndarray
    alpha: np.ndarray
    b_s: float
    ski_predictions: np.ndarray
    beta: np.ndarray
    loss_vector: np.ndarray
    hindsight_loss_vector: np.ndarray
    mixture_loss: float
    buy_losses: np.ndarray
    normalized_buy_losses: np.ndarray


@dataclass(frozen=True, eq=False)
class RunTrace(object):
    """
    Trace of a complete run.

    Attributes
    ----------
    records : Tuple[RoundRecord, ...]
        The log of every round.
    cumulative_regret : np.ndarray
        The cumulative regret R_t for t = 1, ..., T.
    regret_x : np.ndarray
        The component R^x_t.
    regret_b : np.ndarray
        The component R^b_t.
    best_expert : int
        The ski expert j* with the smallest cumulative hindsight loss at the horizon.
    config_fingerprint : str
        The fingerprint of the learner configuration.
    master_seed : int
        The master seed of the run.
    buy_state : hedge.HedgeState
        The final state of the buy weights.
    ski_state : hedge.HedgeState
        The final state of the ski weights.
    """
    records: Tuple[RoundRecord, ...]
    cumulative_regret: np.ndarray
    regret_x: np.ndarray
    regret_b: np.ndarray
    best_expert: int
    config_fingerprint: str
    master_seed: int
    buy_state: Optional[hedge.HedgeState] = field(default=None)
    ski_state: Optional[hedge.HedgeState] = field(default=None)


class SequentialSkiRental(object):
    """
    Class that runs the rounds of the sequential ski-rental learner.

    Attributes
    ----------
    config : LearnerConfig
        The parameters of the run.
    buy_state : hedge.HedgeState
        The Decreasing-Hedge state over the buy experts.
    ski_state : hedge.HedgeState
        The Constant-Hedge state over the ski experts.
    t : int
        The number of completed rounds.
    """
    def __init__(self, config: LearnerConfig) -> None:
        self.config = config
        m, n = config.buy_panel.m, config.ski_panel.n
        if config.scale_rates_by_loss_bound:
            ski_bound = config.loss_bound
            buy_bound = config.buy_loss_bound if config.buy_loss_bound > 0.0 else 1.0
        else:
            ski_bound = buy_bound = 1.0
        if config.ski_rate is not None:
            ski_schedule = hedge.ConstantRate(config.ski_rate)
        else:
            ski_schedule = hedge.constant_rate(n, max(config.horizon, 1), ski_bound)
        if config.buy_rate_scale is not None:
            buy_schedule = hedge.DecreasingRate(config.buy_rate_scale)
        else:
            buy_schedule = hedge.decreasing_scale(m, buy_bound)
        self.buy_state = hedge.HedgeState.initial(m, buy_schedule, config.buy_loss_bound)
        self.ski_state = hedge.HedgeState.initial(n, ski_schedule, config.loss_bound)
        self.t = 0
        self.b_s: Optional[float] = None
        logger.debug(f"Learner with B={config.loss_bound}, ski schedule {ski_schedule}, buy schedule {buy_schedule}.")

    def _losses(self, instance: SkiRentalInstance, b_s: float, predictions: np.ndarray,
                rng: np.random.Generator) -> Tuple[np.ndarray, np.ndarray]:
        """Return the ski-expert losses with the estimate b_s and with the true buy cost."""
        lam = self.config.lam
        b = instance.buy_cost
        if self.config.loss_mode == "expected":
            realized = [expected_expert_loss(instance, b_s, int(y), lam) for y in predictions]
            hindsight = [expected_expert_loss(instance, b, int(y), lam) for y in predictions]
            return np.array(realized), np.array(hindsight)
        opt = opt_cost(instance)
        uniforms = rng.random(len(predictions))
        realized = []
        hindsight = []
        for y, u in zip(predictions, uniforms):
            # The same uniform number selects the buy day with b_s and with b.
            d_realized = buy_day_from_uniform(buy_day_distribution(b_s, int(y), lam), u)
            d_hindsight = buy_day_from_uniform(buy_day_distribution(b, int(y), lam), u)
            realized.append((alg_cost(instance, d_realized) - opt) / opt)
            hindsight.append((alg_cost(instance, d_hindsight) - opt) / opt)
        return np.array(realized), np.array(hindsight)

    def run_round(self, instance: SkiRentalInstance, rng: np.random.Generator) -> RoundRecord:
        """
        Execute one round of the learner and update both weight vectors.

        Parameters
        ----------
        instance : SkiRentalInstance
            The ground truth of the round.
        rng : np.random.Generator
            The random stream of the run.

        Returns
        -------
        RoundRecord
            The log of the round.

        Raises
        ------
        InvalidHyperparameterError
            If lambda * b_s < 1 for the realized estimate b_s.
        """
        t = self.t + 1
        buy_predictions = predict_buy(self.config.buy_panel, instance.buy_cost, rng)
        alpha = hedge.weights(self.buy_state)
        # The clip removes rounding outside of the convex hull of the predictions.
        b_s = float(np.clip(alpha @ buy_predictions, np.min(buy_predictions), np.max(buy_predictions)))
        self.b_s = b_s
        ski_predictions = predict_ski(self.config.ski_panel, instance.season_length, rng)
        beta = hedge.weights(self.ski_state)
        try:
            loss_vector, hindsight_loss_vector = self._losses(instance, b_s, ski_predictions, rng)
        except InvalidHyperparameterError as error:
            raise InvalidHyperparameterError(
                f"Round {t}: the buy-cost estimate b_s={b_s} violates lambda * b_s >= 1 for "
                f"lambda={self.config.lam}.") from error
        mixture_loss = float(beta @ loss_vector)
        buy_losses = (buy_predictions - instance.buy_cost) ** 2
        buy_loss_bound = self.config.buy_loss_bound
        normalized_buy_losses = buy_losses / buy_loss_bound if buy_loss_bound > 0.0 else np.zeros_like(buy_losses)
        self.ski_state = hedge.update(self.ski_state, loss_vector)
        self.buy_state = hedge.update(self.buy_state, buy_losses)
        self.t = t
        logger.debug(f"Round {t}: b={instance.buy_cost}, x={instance.season_length}, b_s={b_s:.6f}, "
                     f"mixture loss {mixture_loss:.6f}.")
        return RoundRecord(t, instance, buy_predictions, alpha, b_s, ski_predictions, beta, loss_vector,
                           hindsight_loss_vector, mixture_loss, buy_losses, normalized_buy_losses)


def _regret_sequences(records: Tuple[RoundRecord, ...]) -> Tuple[np.ndarray, np.ndarray, int]:
    if not records:
        return np.zeros(0), np.zeros(0), 0
    realized = np.array([record.loss_vector for record in records])
    hindsight = np.array([record.hindsight_loss_vector for record in records])
    mixture = np.array([record.mixture_loss for record in records])
    # np.argmin breaks ties by the lowest index.
    best = int(np.argmin(np.sum(hindsight, axis=0)))
    realized_best = np.cumsum(realized[:, best])
    regret_x = np.cumsum(mixture) - realized_best
    regret_b = realized_best - np.cumsum(hindsight[:, best])
    return regret_x, regret_b, best


def regret_components(trace: RunTrace) -> Tuple[np.ndarray, np.ndarray]:
    """
    Return the sequences R^x_t and R^b_t of a complete trace recomputed from its realized and hindsight losses.

    R^x_t = sum_{s <= t} beta^s . l^s(b_s) - sum_{s <= t} l^s_{j*}(b_s) and
    R^b_t = sum_{s <= t} l^s_{j*}(b_s) - sum_{s <= t} l^s_{j*}(b), where j* is the best ski expert in hindsight at the
    horizon. Their sum is the cumulative regret of the trace.
    """
    regret_x, regret_b, _ = _regret_sequences(trace.records)
    return regret_x, regret_b


def run(config: LearnerConfig, master_seed: int, stream_key: Tuple[int, ...] = (0,)) -> RunTrace:
    """
    Run the learner for config.horizon rounds on instances drawn uniformly from the configured ranges.

    Parameters
    ----------
    config : LearnerConfig
        The parameters of the run.
    master_seed : int
        The master seed.
    stream_key : Tuple[int, ...], optional
        The spawn key of the random stream of the run (e.g. the configuration and the seed index).

    Returns
    -------
    RunTrace
        The trace.

    Raises
    ------
    RoundError
        If a round fails.
    """
    rng = generator(master_seed, *stream_key)
    learner = SequentialSkiRental(config)
    records = []
    for t in range(1, config.horizon + 1):
        learner.b_s = None
        try:
            instance = draw_instance(config.buy_panel.ground_truth_range, config.x_range, rng)
            records.append(learner.run_round(instance, rng))
        except (ValueError, RuntimeError) as error:
            raise RoundError(t, str(error), learner.b_s) from error
    records = tuple(records)
    regret_x, regret_b, best = _regret_sequences(records)
    return RunTrace(records, regret_x + regret_b, regret_x, regret_b, best, config.fingerprint(), master_seed,
                    learner.buy_state, learner.ski_state)


def loss_bound(b_min: int, b_max: Optional[int] = None, x_max: Optional[int] = None) -> float:
    """
    Return the bound B on the loss of any ski expert in a single round.

    The case bounds are: buying on a day d <= x when b <= x costs at most (d - 1) / b < b_min and, since d <= x, at most
    x_max / b_min; renting past the buy cost when b <= x < d costs at most b_min; buying when b > x costs at most
    b / x <= b_max; and renting through a short season costs nothing.

    Parameters
    ----------
    b_min : int
        The smallest buy cost over the rounds.
    b_max : int or None, optional
        The largest buy cost over the rounds (b_min if None).
    x_max : int or None, optional
        The largest number of ski days (ignored if None).

    Returns
    -------
    float
        The bound B.

    Raises
    ------
    ValueError
        If b_min < 2 or b_max < b_min.
    """
    b_max = b_min if b_max is None else b_max
    if b_min < 2 or b_max < b_min:
        raise ValueError(f"Invalid buy-cost range [{b_min}, {b_max}].")
    cases = [b_min - 1 + (b_min - 1) / b_min, float(b_min), float(b_max)]
    if x_max is not None:
        cases.append(x_max / b_min)
    return max(cases)


def t_star(delta: float, epsilon: float, gap: float, m: int, c: float, horizon: int) -> int:
    """
    Return the number of rounds t* after which the buy-cost estimate lies within the robustness radius of the true
    buy cost with probability at least 1 - delta.

    t* = max{1 + (8 / Delta^2) L, 1 + L^2 / (2 Delta^2 ln m), 1 + ceil(4 / Delta^2)} with
    L = ln((2 m / (c - 1)) (1 + T c Delta / (delta epsilon^2))), rounded up to an integer. The expression assumes that
    the best buy expert has the variance delta epsilon^2 / (T c); this is not checked.

    Parameters
    ----------
    delta : float
        The failure probability in (0, 1).
    epsilon : float
        The minimum robustness radius across rounds.
    gap : float
        The sub-optimality gap Delta of the buy experts.
    m : int
        The number of buy experts (at least 2).
    c : float
        The variance constant c > 1.
    horizon : int
        The horizon T.

    Returns
    -------
    int
        The round t*.

    Raises
    ------
    ValueError
        If any argument leaves its domain.
    """
    if gap <= 0.0:
        raise ValueError("sub-optimality gap must be positive")
    if not 0.0 < delta < 1.0:
        raise ValueError(f"The failure probability must lie in (0, 1), got {delta}.")
    if epsilon <= 0.0:
        raise ValueError(f"The robustness radius must be positive, got {epsilon}.")
    if m < 2:
        raise ValueError(f"At least two buy experts are required, got {m}.")
    if c <= 1.0:
        raise ValueError(f"The variance constant must exceed one, got {c}.")
    if horizon < 1:
        raise ValueError(f"The horizon must be positive, got {horizon}.")
    log_term = math.log((2.0 * m / (c - 1.0)) * (1.0 + horizon * c * gap / (delta * epsilon ** 2)))
    arms = (1.0 + 8.0 / gap ** 2 * log_term,
            1.0 + log_term ** 2 / (2.0 * gap ** 2 * math.log(m)),
            1.0 + math.ceil(4.0 / gap ** 2))
    return math.ceil(max(arms))


def regret_x_bound(loss_bound_value: float, horizon: int, n: int) -> float:
    """Return the bound (1 + B^2) sqrt(T ln n) on the component R^x."""
    if loss_bound_value <= 0.0 or horizon < 1 or n < 1:
        raise ValueError("The loss bound, the horizon, and the number of ski experts must be positive.")
    return (1.0 + loss_bound_value ** 2) * math.sqrt(horizon * math.log(n))


def regret_bound(loss_bound_value: float, horizon: int, n: int, t_star_value: int) -> float:
    """
    Return the cumulative regret bound (1 + B^2) sqrt(T ln n) + B t*.

    Parameters
    ----------
    loss_bound_value : float
        The loss bound B.
    horizon : int
        The horizon T.
    n : int
        The number of ski experts.
    t_star_value : int
        The convergence round t* of the buy weights.

    Returns
    -------
    float
        The bound.
    """
    if t_star_value < 0:
        raise ValueError(f"The convergence round must be non-negative, got {t_star_value}.")
    return regret_x_bound(loss_bound_value, horizon, n) + loss_bound_value * t_star_value
