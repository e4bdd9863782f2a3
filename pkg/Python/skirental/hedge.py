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
Exponential-weights (Hedge) forecasters over a finite set of experts.

A forecaster state stores the cumulative losses of the experts, the number of completed rounds, and the learning-rate
schedule. The weights are a pure function of the state: alpha_i = exp(-eta_t L_i) / sum_j exp(-eta_t L_j), where L_i is
the cumulative loss of expert i and eta_t is either constant (Constant Hedge, tuned to a known horizon) or decreases as
1 / sqrt(t) (Decreasing Hedge).
"""
import math
from dataclasses import dataclass, replace
from typing import Sequence, Union
import numpy as np


@dataclass(frozen=True)
class ConstantRate(object):
    """Constant learning rate."""
    rate: float

    def __call__(self, round_index: int) -> float:
        return self.rate


@dataclass(frozen=True)
class DecreasingRate(object):
    """Learning rate scale / sqrt(max(t, 1)) at round t."""
    scale: float

    def __call__(self, round_index: int) -> float:
        return self.scale / math.sqrt(max(round_index, 1))


Schedule = Union[ConstantRate, DecreasingRate]


@dataclass(frozen=True, eq=False)
class HedgeState(object):
    """
    State of an exponential-weights forecaster.

    Attributes
    ----------
    cumulative_losses : np.ndarray
        The cumulative loss of every expert.
    schedule : Schedule
        The learning-rate schedule.
    round : int
        The number of completed updates.
    loss_bound : float
        The declared upper bound on a single loss entry (used to validate updates).
    """
    cumulative_losses: np.ndarray
    schedule: Schedule
    round: int = 0
    loss_bound: float = math.inf

    def __post_init__(self) -> None:
        losses = np.array(self.cumulative_losses, dtype=float)
        if losses.ndim != 1 or len(losses) == 0:
            raise ValueError("A forecaster needs at least one expert.")
        losses.setflags(write=False)
        object.__setattr__(self, "cumulative_losses", losses)

    @classmethod
    def initial(cls, num_experts: int, schedule: Schedule, loss_bound: float = math.inf) -> "HedgeState":
        """Return the state with unit weights before the first round."""
        return cls(np.zeros(num_experts), schedule, 0, loss_bound)

    @property
    def num_experts(self) -> int:
        return len(self.cumulative_losses)

    @property
    def learning_rate(self) -> float:
        """The learning rate eta_t used by the current weights."""
        return self.schedule(self.round)


def weights(state: HedgeState) -> np.ndarray:
    """
    Return the probability vector over the experts.

    The minimum cumulative loss is subtracted before exponentiation so that the weights stay finite for arbitrarily
    large cumulative losses.

    Parameters
    ----------
    state : HedgeState
        The forecaster state.

    Returns
    -------
    np.ndarray
        The weights, non-negative and summing to one.
    """
    shifted = state.cumulative_losses - np.min(state.cumulative_losses)
    unnormalized = np.exp(-state.learning_rate * shifted)
    return unnormalized / np.sum(unnormalized)


def update(state: HedgeState, loss_vector: Sequence[float]) -> HedgeState:
    """
    Return the state after observing the loss vector of one round.

    Parameters
    ----------
    state : HedgeState
        The forecaster state.
    loss_vector : Sequence[float]
        The loss of every expert in this round.

    Returns
    -------
    HedgeState
        The new state.

    Raises
    ------
    ValueError
        If the loss vector has the wrong length, or contains negative, non-finite or out-of-bound entries.
    """
    losses = np.asarray(loss_vector, dtype=float)
    if losses.shape != state.cumulative_losses.shape:
        raise ValueError(f"Expected {state.num_experts} losses, got {losses.shape}.")
    if not np.all(np.isfinite(losses)) or np.any(losses < 0.0):
        raise ValueError(f"Losses must be finite and non-negative, got {losses}.")
    if np.any(losses > state.loss_bound * (1.0 + 1.0e-12)):
        raise ValueError(f"Losses {losses} exceed the declared loss bound {state.loss_bound}.")
    return replace(state, cumulative_losses=state.cumulative_losses + losses, round=state.round + 1)


def regret_to_best(state: HedgeState, realized_mixture_losses: Sequence[float]) -> float:
    """
    Return the regret sum_t alpha^t . l^t - min_i sum_t l_i^t against the best fixed expert.

    Parameters
    ----------
    state : HedgeState
        The forecaster state after all rounds.
    realized_mixture_losses : Sequence[float]
        The mixture loss alpha^t . l^t of every completed round.

    Returns
    -------
    float
        The regret.

    Raises
    ------
    ValueError
        If the number of mixture losses differs from the number of completed rounds.
    """
    if len(realized_mixture_losses) != state.round:
        raise ValueError(f"Got {len(realized_mixture_losses)} mixture losses for {state.round} rounds.")
    return math.fsum(realized_mixture_losses) - float(np.min(state.cumulative_losses))


def constant_rate(num_experts: int, horizon: int, loss_bound: float = 1.0) -> ConstantRate:
    """Return the Constant Hedge rate sqrt(ln N / T) / L."""
    if num_experts < 1 or horizon < 1 or loss_bound <= 0.0:
        raise ValueError("The number of experts, the horizon, and the loss bound must be positive.")
    return ConstantRate(math.sqrt(math.log(num_experts) / horizon) / loss_bound)


def decreasing_scale(num_experts: int, loss_bound: float = 1.0) -> DecreasingRate:
    """Return the Decreasing Hedge schedule with scale sqrt(ln N) / L."""
    if num_experts < 1 or loss_bound <= 0.0:
        raise ValueError("The number of experts and the loss bound must be positive.")
    return DecreasingRate(math.sqrt(math.log(num_experts)) / loss_bound)
