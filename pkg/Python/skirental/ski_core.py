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
Functions for a single ski-rental instance.

The buy-day rule implemented here is the cost-robust randomized algorithm: depending on whether the ski-day prediction y
reaches the (rounded) buy-cost input, the buy day is sampled from a truncated geometric distribution over the first
floor(lambda * b) days (buy late) or over the first ceil(b / lambda) days (buy early). Because the support sizes only
depend on floor(lambda * b) and ceil(b / lambda), the distribution is unchanged for every buy-cost input within the
robustness radius of the true buy cost.

All functions are pure. The only stateful input is the numpy random generator which is owned by the caller.
"""
import enum
import functools
import math
from dataclasses import dataclass
from typing import Union
import numpy as np


class InvalidHyperparameterError(ValueError):
    """Raised when the trade-off parameter lambda or the buy-cost input leave the admissible domain."""


class DegenerateInstanceError(ValueError):
    """Raised for ski-rental instances whose optimal cost vanishes or whose buy cost is invalid."""


@dataclass(frozen=True)
class SkiRentalInstance(object):
    """
    Ground truth of a single ski-rental round.

    Attributes
    ----------
    buy_cost : int
        The buy cost in units of the daily rent (at least 2).
    season_length : int
        The number of ski days (at least 1, since the normalized loss divides by the optimal cost).
    """
    buy_cost: int
    season_length: int

    def __post_init__(self) -> None:
        if int(self.buy_cost) != self.buy_cost or self.buy_cost < 2:
            raise DegenerateInstanceError(f"The buy cost must be an integer of at least 2, got {self.buy_cost}.")
        if int(self.season_length) != self.season_length or self.season_length < 1:
            raise DegenerateInstanceError(
                f"The season length must be a positive integer, got {self.season_length}.")
        object.__setattr__(self, "buy_cost", int(self.buy_cost))
        object.__setattr__(self, "season_length", int(self.season_length))


class Branch(enum.Enum):
    """
    Enumeration class for the two branches of the buy-day rule.
    """
    BUY_LATE = "buy_late"  # Prediction y >= nint(b), support floor(lambda * b).
    BUY_EARLY = "buy_early"  # Prediction y < nint(b), support ceil(b / lambda).


@dataclass(frozen=True, eq=False)
class BuyDayDistribution(object):
    """
    Probability distribution over the buy days 1, ..., support_size.

    The cumulative distribution, the survival function and the partial first moments are precomputed so that sampling
    by inverse transform and the evaluation of the expected algorithmic cost are cheap. The arrays are read-only since
    distributions are shared through a cache.

    Attributes
    ----------
    branch : Branch
        The branch of the buy-day rule that produced the distribution.
    probabilities : np.ndarray
        The probability of buying at the beginning of day i + 1 is stored at index i.
    cdf : np.ndarray
        cdf[i] is the probability to buy on one of the days 1, ..., i + 1.
    survival : np.ndarray
        survival[i] is the probability to buy on one of the days i + 2, ..., support_size.
    partial_moments : np.ndarray
        partial_moments[i] is the sum of (j - 1) * p_j over the days j = 1, ..., i + 1.
    """
    branch: Branch
    probabilities: np.ndarray

    def __post_init__(self) -> None:
        probabilities = np.array(self.probabilities, dtype=float)
        if probabilities.ndim != 1 or len(probabilities) == 0:
            raise ValueError("The buy-day probabilities must be a non-empty vector.")
        if np.any(probabilities < 0.0):
            raise ValueError("The buy-day probabilities must be non-negative.")
        if abs(math.fsum(probabilities) - 1.0) > 1.0e-12:
            raise ValueError("The buy-day probabilities must sum to one.")
        cdf = np.cumsum(probabilities)
        survival = np.append(np.cumsum(probabilities[::-1])[::-1][1:], 0.0)
        partial_moments = np.cumsum(np.arange(len(probabilities)) * probabilities)
        for name, array in (("probabilities", probabilities), ("cdf", cdf), ("survival", survival),
                            ("partial_moments", partial_moments)):
            array.setflags(write=False)
            object.__setattr__(self, name, array)

    @property
    def support_size(self) -> int:
        """The number of possible buy days."""
        return len(self.probabilities)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, BuyDayDistribution):
            return NotImplemented
        return self.branch is other.branch and np.array_equal(self.probabilities, other.probabilities)

    def __hash__(self) -> int:
        return hash((self.branch, self.probabilities.tobytes()))


@dataclass(frozen=True)
class RobustnessRadius(object):
    """
    Radius around the true buy cost inside which the buy-day distribution does not change.

    Attributes
    ----------
    epsilon : float
        The radius in units of the buy cost.
    """
    epsilon: float


def nint(v: float) -> int:
    """
    Return the nearest integer to v where half integers are rounded to the even neighbor.

    Parameters
    ----------
    v : float
        The value to round.

    Returns
    -------
    int
        The rounded value.

    Raises
    ------
    ValueError
        If v is not finite.
    """
    if not math.isfinite(v):
        raise ValueError(f"Cannot round the non-finite value {v}.")
    # Python's round implements round-half-to-even.
    return int(round(v))


def check_lambda(lam: float, b_input: float) -> None:
    """
    Check that lambda lies in (0, 1] and that lambda * b_input >= 1.

    Raises
    ------
    InvalidHyperparameterError
        If any of the two conditions is violated.
    """
    if not 0.0 < lam <= 1.0:
        raise InvalidHyperparameterError(f"The trade-off parameter lambda must lie in (0, 1], got {lam}.")
    if not b_input > 0.0 or lam * b_input < 1.0:
        raise InvalidHyperparameterError(
            f"The buy-cost input {b_input} and lambda {lam} yield lambda * b < 1 (empty buy-late support).")


@functools.lru_cache(maxsize=8192)
def geometric_distribution(branch: Branch, support_size: int, base: float) -> BuyDayDistribution:
    """
    Return the truncated geometric buy-day distribution p_i = base^(S - i) (1 - base) / (1 - base^S) on i = 1, ..., S.

    Both branches of the cost-robust rule and the prediction-based baseline are of this form. The closed form sums to
    one analytically; the vector is renormalized to absorb floating-point drift.

    Parameters
    ----------
    branch : Branch
        The branch tag of the distribution.
    support_size : int
        The number S of possible buy days.
    base : float
        The geometric base in [0, 1).

    Returns
    -------
    BuyDayDistribution
        The distribution.

    Raises
    ------
    RuntimeError
        If the closed-form probabilities deviate from a normalized distribution by more than 1e-9.
    """
    if support_size < 1 or not 0.0 <= base < 1.0:
        raise ValueError(f"Invalid geometric distribution with support {support_size} and base {base}.")
    probabilities = (np.power(base, np.arange(support_size - 1, -1, -1, dtype=float))
                     * (1.0 - base) / (1.0 - base ** support_size))
    total = math.fsum(probabilities)
    if abs(total - 1.0) > 1.0e-9:
        raise RuntimeError(f"The buy-day probabilities sum to {total} before renormalization.")
    return BuyDayDistribution(branch, probabilities / total)


def buy_day_distribution(b_input: float, y: int, lam: float) -> BuyDayDistribution:
    """
    Return the buy-day distribution of the cost-robust randomized algorithm.

    If y >= nint(b_input), the algorithm buys late with k = floor(lambda * b_input) and
    q_i = (1 - lambda / k)^(k - i) lambda / (k (1 - (1 - lambda / k)^k)). Otherwise it buys early with
    l = ceil(b_input / lambda) and r_i = (1 - 1 / (lambda l))^(l - i) / (l lambda (1 - (1 - 1 / (lambda l))^l)).
    The support sizes are computed from the real-valued input; nint is only used for the branch test.

    Parameters
    ----------
    b_input : float
        The (possibly estimated) buy cost.
    y : int
        The predicted number of ski days.
    lam : float
        The trade-off parameter in (0, 1].

    Returns
    -------
    BuyDayDistribution
        The buy-day distribution.

    Raises
    ------
    InvalidHyperparameterError
        If lambda is outside of (0, 1] or lambda * b_input < 1.
    """
    check_lambda(lam, b_input)
    if y >= nint(b_input):
        k = math.floor(lam * b_input)
        return geometric_distribution(Branch.BUY_LATE, k, 1.0 - lam / k)
    support = math.ceil(b_input / lam)
    return geometric_distribution(Branch.BUY_EARLY, support, 1.0 - 1.0 / (lam * support))


def buy_day_from_uniform(dist: BuyDayDistribution, u: Union[float, np.ndarray]) -> Union[int, np.ndarray]:
    """
    Map uniform numbers in [0, 1) to buy days by inverse transform over the stored cumulative distribution.

    Parameters
    ----------
    dist : BuyDayDistribution
        The buy-day distribution.
    u : float or np.ndarray
        The uniform number(s).

    Returns
    -------
    int or np.ndarray
        The buy day(s) in 1, ..., dist.support_size.
    """
    index = np.minimum(np.searchsorted(dist.cdf, u, side="right"), dist.support_size - 1)
    if np.ndim(index) == 0:
        return int(index) + 1
    return index + 1


def sample_buy_day(dist: BuyDayDistribution, rng: np.random.Generator) -> int:
    """
    Sample a buy day from the distribution, consuming exactly one uniform number of the generator.

    Parameters
    ----------
    dist : BuyDayDistribution
        The buy-day distribution.
    rng : np.random.Generator
        The random stream.

    Returns
    -------
    int
        The sampled buy day.
    """
    return buy_day_from_uniform(dist, rng.random())


def _fractional_part(value: float) -> float:
    return value - math.floor(value)


def robustness_radius(b: int, lam: float) -> RobustnessRadius:
    """
    Return the robustness radius epsilon of the cost-robust algorithm for the buy cost b.

    epsilon = min((1 / lambda) min({lambda b}, 1 - {lambda b}), lambda min({b / lambda}, 1 - {b / lambda})) where {.}
    denotes the fractional part.

    Parameters
    ----------
    b : int
        The true buy cost.
    lam : float
        The trade-off parameter.

    Returns
    -------
    RobustnessRadius
        The radius.

    Raises
    ------
    InvalidHyperparameterError
        If lambda is outside of (0, 1] or lambda * b < 1.
    """
    check_lambda(lam, b)
    late = _fractional_part(lam * b)
    early = _fractional_part(b / lam)
    return RobustnessRadius(min(min(late, 1.0 - late) / lam, lam * min(early, 1.0 - early)))


def opt_cost(inst: SkiRentalInstance) -> int:
    """Return the optimal offline cost min(b, x)."""
    if inst.season_length < 1:
        raise DegenerateInstanceError("The optimal cost of an instance without ski days vanishes.")
    return min(inst.buy_cost, inst.season_length)


def alg_cost(inst: SkiRentalInstance, d: int) -> int:
    """
    Return the cost of renting until day d - 1 and buying at the beginning of day d.

    If the season ends before day d, only the rent for the season_length days is paid.
    """
    if d < 1:
        raise ValueError(f"The buy day must be positive, got {d}.")
    if inst.season_length >= d:
        return inst.buy_cost + d - 1
    return inst.season_length


def expert_loss(inst: SkiRentalInstance, b_s: float, y: int, lam: float, rng: np.random.Generator) -> float:
    """
    Return the normalized loss (ALG - OPT) / OPT of a ski expert with the prediction y that receives the buy-cost
    estimate b_s, for a buy day sampled from the cost-robust distribution.

    Parameters
    ----------
    inst : SkiRentalInstance
        The ground truth of the round.
    b_s : float
        The buy-cost estimate given to the expert.
    y : int
        The prediction of the expert on the number of ski days.
    lam : float
        The trade-off parameter.
    rng : np.random.Generator
        The random stream used to sample the buy day.

    Returns
    -------
    float
        The non-negative loss.
    """
    opt = opt_cost(inst)
    d = sample_buy_day(buy_day_distribution(b_s, y, lam), rng)
    return (alg_cost(inst, d) - opt) / opt


def expected_alg_cost(inst: SkiRentalInstance, dist: BuyDayDistribution) -> float:
    """
    Return E[ALG] = sum_{i <= min(x, S)} (b + i - 1) p_i + x sum_{x < i <= S} p_i exactly.
    """
    last = min(inst.season_length, dist.support_size) - 1
    return (inst.buy_cost * dist.cdf[last] + dist.partial_moments[last]
            + inst.season_length * dist.survival[last])


def expected_expert_loss(inst: SkiRentalInstance, b_s: float, y: int, lam: float) -> float:
    """
    Return the expected normalized loss (E[ALG] - OPT) / OPT of a ski expert, averaged over the buy day.

    Parameters
    ----------
    inst : SkiRentalInstance
        The ground truth of the round.
    b_s : float
        The buy-cost estimate given to the expert.
    y : int
        The prediction of the expert on the number of ski days.
    lam : float
        The trade-off parameter.

    Returns
    -------
    float
        The expected loss.
    """
    opt = opt_cost(inst)
    expected = expected_alg_cost(inst, buy_day_distribution(b_s, y, lam))
    # Rounding in the prefix sums must not produce negative losses.
    return max(expected - opt, 0.0) / opt


def robustness_ratio(b: int, lam: float) -> float:
    """Return the robustness arm (1 + 1 / floor(lambda b)) / (1 - e^(-lambda))."""
    check_lambda(lam, b)
    return (1.0 + 1.0 / math.floor(lam * b)) / -math.expm1(-lam)


def consistency_ratio(lam: float) -> float:
    """Return the consistency factor lambda / (1 - e^(-lambda))."""
    if not 0.0 < lam <= 1.0:
        raise InvalidHyperparameterError(f"The trade-off parameter lambda must lie in (0, 1], got {lam}.")
    return lam / -math.expm1(-lam)


def competitive_ratio_bound(b: int, lam: float, eta: float, opt: int) -> float:
    """
    Return the bound min{(1 + 1 / floor(lambda b)) / (1 - e^(-lambda)), lambda / (1 - e^(-lambda)) (1 + eta / OPT)} on
    the competitive ratio of the cost-robust algorithm.

    Parameters
    ----------
    b : int
        The buy cost.
    lam : float
        The trade-off parameter.
    eta : float
        The prediction error |y - x| (math.inf ignores the consistency arm).
    opt : int
        The optimal offline cost.

    Returns
    -------
    float
        The bound.

    Raises
    ------
    InvalidHyperparameterError
        If lambda is outside of (0, 1] or lambda * b < 1.
    ValueError
        If eta is negative or opt is not positive.
    """
    if eta < 0.0 or opt <= 0:
        raise ValueError(f"Invalid prediction error {eta} or optimal cost {opt}.")
    robust = robustness_ratio(b, lam)
    if math.isinf(eta):
        return robust
    return min(robust, consistency_ratio(lam) * (1.0 + eta / opt))
