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
Simulated expert panels.

Buy experts predict the buy cost without bias, a_i = b + e_i, where e_i is normally distributed with the variance
gamma_i of expert i and truncated to [-noise_bound, noise_bound]. Ski experts predict the number of ski days,
y_j = max(0, nint(x + e_j)), with e_j normally distributed with the variance eta_j. The noise of different experts is
independent.

Any object with a predict(truth, rng) method can stand in for a panel in the learner.
"""
import logging
import math
from dataclasses import dataclass
from typing import Protocol, Sequence, Tuple
import numpy as np
from scipy.stats import truncnorm
from .ski_core import SkiRentalInstance

logger = logging.getLogger(__name__)

# Number of rejection sweeps before the truncated-normal sampler gives up.
MAX_REJECTION_SWEEPS = 10 ** 4


class TruncationError(RuntimeError):
    """Raised when the truncated-normal rejection sampler exhausts its retry cap."""


class Predictor(Protocol):
    def predict(self, truth: int, rng: np.random.Generator) -> np.ndarray:
        ...


def linspace_variances(lo: float, hi: float, count: int) -> np.ndarray:
    """
    Return count variances at uniform intervals from the range [lo, hi].

    Parameters
    ----------
    lo : float
        The smallest variance.
    hi : float
        The largest variance.
    count : int
        The number of experts.

    Returns
    -------
    np.ndarray
        The variances lo + (i - 1) (hi - lo) / (count - 1) for i = 1, ..., count ([lo] if count is 1).

    Raises
    ------
    ValueError
        If lo > hi, lo is not positive, or count < 1.
    """
    if lo > hi:
        raise ValueError(f"The lower variance {lo} exceeds the upper variance {hi}.")
    if lo <= 0.0 or count < 1:
        raise ValueError(f"Variances must be positive and the count must be at least one, got {lo} and {count}.")
    if count == 1:
        return np.array([float(lo)])
    return np.linspace(lo, hi, count)


def _check_interval(interval: Tuple[int, int], minimum: int, name: str) -> Tuple[int, int]:
    lo, hi = interval
    if int(lo) != lo or int(hi) != hi:
        raise ValueError(f"The {name} interval {interval} must have integer bounds.")
    if lo > hi:
        raise ValueError(f"The {name} interval {interval} is empty.")
    if lo < minimum:
        raise ValueError(f"The {name} interval {interval} must start at {minimum} or above.")
    return int(lo), int(hi)


@dataclass(frozen=True, eq=False)
class BuyExpertPanel(object):
    """
    Panel of m unbiased buy-cost experts.

    Attributes
    ----------
    variances : np.ndarray
        The variance gamma_i of the untruncated normal noise of every expert.
    noise_bound : float
        The noise is truncated to [-noise_bound, noise_bound] (0 yields exact predictions).
    ground_truth_range : Tuple[int, int]
        The integer interval [b_lo, b_hi] of the true buy costs.
    """
    variances: np.ndarray
    noise_bound: float
    ground_truth_range: Tuple[int, int]

    def __post_init__(self) -> None:
        variances = np.array(self.variances, dtype=float)
        if variances.ndim != 1 or len(variances) == 0 or np.any(variances <= 0.0):
            raise ValueError(f"Buy experts need positive variances, got {self.variances}.")
        if self.noise_bound < 0.0:
            raise ValueError(f"The noise bound must be non-negative, got {self.noise_bound}.")
        variances.setflags(write=False)
        object.__setattr__(self, "variances", variances)
        object.__setattr__(self, "ground_truth_range", _check_interval(self.ground_truth_range, 2, "buy-cost"))

    @property
    def m(self) -> int:
        return len(self.variances)

    @property
    def best_expert(self) -> int:
        """Index of the expert with the smallest variance (lowest index on ties)."""
        return int(np.argmin(self.variances))

    def effective_variances(self) -> np.ndarray:
        """Return the variances of the noise after truncation to [-noise_bound, noise_bound]."""
        if self.noise_bound == 0.0:
            return np.zeros(self.m)
        sigma = np.sqrt(self.variances)
        return truncnorm.var(-self.noise_bound / sigma, self.noise_bound / sigma, loc=0.0, scale=sigma)

    def gaps(self, effective: bool = False) -> Tuple[np.ndarray, float]:
        """
        Return the sub-optimality gaps Delta_i = gamma_i - gamma_min and Delta = min_{i != i*} Delta_i.

        Parameters
        ----------
        effective : bool, optional
            Use the post-truncation variances instead of the configured ones.

        Returns
        -------
        Tuple[np.ndarray, float]
            The gap of every expert and the minimum gap (math.inf for a single expert).
        """
        variances = self.effective_variances() if effective else self.variances
        best = int(np.argmin(variances))
        gaps = variances - variances[best]
        if self.m == 1:
            return gaps, math.inf
        delta = float(np.min(np.delete(gaps, best)))
        if delta == 0.0:
            logger.warning("Two buy experts share the smallest variance; the sub-optimality gap is zero.")
        return gaps, delta

    def predict(self, truth: int, rng: np.random.Generator) -> np.ndarray:
        """Return the buy-cost predictions a_i = truth + e_i of all experts."""
        lo, hi = self.ground_truth_range
        if not lo <= truth <= hi:
            raise ValueError(f"The buy cost {truth} lies outside of the ground-truth range {self.ground_truth_range}.")
        if self.noise_bound == 0.0:
            return np.full(self.m, float(truth))
        sigma = np.sqrt(self.variances)
        noise = rng.normal(0.0, sigma)
        rejected = np.abs(noise) > self.noise_bound
        sweeps = 0
        while np.any(rejected):
            sweeps += 1
            if sweeps > MAX_REJECTION_SWEEPS:
                raise TruncationError(
                    f"Rejection sampling of the buy noise failed {MAX_REJECTION_SWEEPS} times; the variances "
                    f"{self.variances} are too large for the noise bound {self.noise_bound}.")
            noise[rejected] = rng.normal(0.0, sigma[rejected])
            rejected = np.abs(noise) > self.noise_bound
        return truth + noise


@dataclass(frozen=True, eq=False)
class SkiExpertPanel(object):
    """
    Panel of n ski-day experts.

    Attributes
    ----------
    variances : np.ndarray
        The variance eta_j of the normal noise of every expert.
    """
    variances: np.ndarray

    def __post_init__(self) -> None:
        variances = np.array(self.variances, dtype=float)
        if variances.ndim != 1 or len(variances) == 0 or np.any(variances <= 0.0):
            raise ValueError(f"Ski experts need positive variances, got {self.variances}.")
        variances.setflags(write=False)
        object.__setattr__(self, "variances", variances)

    @property
    def n(self) -> int:
        return len(self.variances)

    def predict(self, truth: int, rng: np.random.Generator) -> np.ndarray:
        """Return the ski-day predictions y_j = max(0, nint(truth + e_j)) of all experts."""
        if truth < 1:
            raise ValueError(f"The number of ski days must be positive, got {truth}.")
        noise = rng.normal(0.0, np.sqrt(self.variances))
        # np.rint rounds half to even like nint.
        return np.maximum(np.rint(truth + noise), 0.0).astype(np.int64)


def predict_buy(panel: Predictor, b_true: int, rng: np.random.Generator) -> np.ndarray:
    """Return the predictions of the buy-expert panel for the true buy cost."""
    return panel.predict(b_true, rng)


def predict_ski(panel: Predictor, x_true: int, rng: np.random.Generator) -> np.ndarray:
    """Return the predictions of the ski-expert panel for the true number of ski days."""
    return panel.predict(x_true, rng)


def draw_instance(range_b: Sequence[int], range_x: Sequence[int], rng: np.random.Generator) -> SkiRentalInstance:
    """
    Draw the buy cost and the number of ski days independently and uniformly from the given integer intervals.

    Parameters
    ----------
    range_b : Sequence[int]
        The interval [b_lo, b_hi] with b_lo >= 2.
    range_x : Sequence[int]
        The interval [x_lo, x_hi] with x_lo >= 1.
    rng : np.random.Generator
        The random stream.

    Returns
    -------
    SkiRentalInstance
        The instance.

    Raises
    ------
    ValueError
        If an interval is empty or starts too low.
    """
    b_lo, b_hi = _check_interval(tuple(range_b), 2, "buy-cost")
    x_lo, x_hi = _check_interval(tuple(range_x), 1, "season-length")
    buy_cost = int(rng.integers(b_lo, b_hi, endpoint=True))
    season_length = int(rng.integers(x_lo, x_hi, endpoint=True))
    return SkiRentalInstance(buy_cost, season_length)
