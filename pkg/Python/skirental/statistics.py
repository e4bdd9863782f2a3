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
Means and error bars of simulation results.

Independent trials (e.g. competitive ratios of independent ski seasons) use the standard error of the mean. Correlated
time series (e.g. the regret increments of a single run) use the stationary bootstrap of the implementation
https://github.com/YoshihikoNishikawa/StationaryBootstrap.
"""
import math
from typing import Sequence, Tuple
import numpy as np
from stresampling import stationary_bootstrap as sbm


def mean_and_standard_error(values: Sequence[float]) -> Tuple[float, float]:
    """
    Find the mean and the standard error of the mean of independent samples.

    The mean uses an exactly rounded summation so that it does not depend on the order of the values.

    Parameters
    ----------
    values : Sequence[float]
        The samples.

    Returns
    -------
    Tuple[float, float]
        The mean and the standard error (sample standard deviation / sqrt(n), 0 for a single sample).

    Raises
    ------
    ValueError
        If there are no samples.
    """
    values = np.asarray(values, dtype=float)
    count = len(values)
    if count == 0:
        raise ValueError("Cannot average an empty set of samples.")
    mean = math.fsum(values) / count
    if count == 1:
        return mean, 0.0
    variance = math.fsum((values - mean) ** 2) / (count - 1)
    return mean, math.sqrt(variance / count)


def error_bar(time_series: np.ndarray, alpha: float = 0.68) -> Tuple[float, float]:
    """
    Find the error bar of a time series.

    Parameters
    ----------
    time_series : np.ndarray
        The series whose error bar is calculated.
    alpha : float
        Confidence level. Set to 0.68 by default.

    Returns
    -------
    Tuple[float, float]
        The average of the series and the standard error of the mean value of the series.
    """
    stat = sbm.conf_int(np.asarray(time_series, dtype=float), np.mean, alpha)
    return stat.mean, stat.se
