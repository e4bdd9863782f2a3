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
"""Static charts of the experiment tables."""
import logging
from typing import Sequence
import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np
from .experiments import CompareRow, RegretSummary
from .ski_core import consistency_ratio, robustness_ratio

logger = logging.getLogger(__name__)


def plot_compare(rows: Sequence[CompareRow], buy_cost: int, filename: str) -> None:
    """
    Plot the mean competitive ratio with its error bar against the standard deviation of the prediction error.

    Every rule and lambda gets one line. The robustness and consistency bounds of the cost-robust rule are drawn as
    dashed lines.

    Parameters
    ----------
    rows : Sequence[CompareRow]
        The comparison table.
    buy_cost : int
        The buy cost of the comparison.
    filename : str
        The output file.
    """
    fig, host = plt.subplots(figsize=(6.5, 5.5))
    host.set_xlabel(r"$\sigma$", fontsize=14)
    host.set_ylabel("mean competitive ratio", fontsize=14)
    lines = sorted({(row.algorithm, row.lam) for row in rows})
    for algorithm, lam in lines:
        selected = [row for row in rows if row.algorithm == algorithm and row.lam == lam]
        host.errorbar([row.sigma for row in selected], [row.mean_cr for row in selected],
                      yerr=[row.stderr for row in selected], label=f"{algorithm}, $\\lambda = {lam:.4f}$",
                      capsize=3.0, marker="x", markersize=5)
    for lam in sorted({row.lam for row in rows}):
        host.axhline(robustness_ratio(buy_cost, lam), linestyle="--", linewidth=0.8, color="gray")
        host.axhline(consistency_ratio(lam), linestyle=":", linewidth=0.8, color="gray")
    fig.legend()
    fig.savefig(filename)
    plt.close(fig)
    logger.info(f"Wrote {filename}.")


def plot_regret(summaries: Sequence[RegretSummary], filename: str) -> None:
    """
    Plot the mean cumulative regret and its components R^x and R^b against the round for every configuration.

    Parameters
    ----------
    summaries : Sequence[RegretSummary]
        The seed-averaged regrets.
    filename : str
        The output file.
    """
    fig, host = plt.subplots(figsize=(6.5, 5.5))
    host.set_xlabel(r"$t$", fontsize=14)
    host.set_ylabel("mean cumulative regret", fontsize=14)
    for summary in summaries:
        rounds = np.arange(1, len(summary.regret) + 1)
        line, = host.plot(rounds, summary.regret, label=summary.scenario.label)
        host.plot(rounds, summary.regret_x, linestyle="--", color=line.get_color(), linewidth=0.8)
        host.plot(rounds, summary.regret_b, linestyle=":", color=line.get_color(), linewidth=0.8)
    fig.legend()
    fig.savefig(filename)
    plt.close(fig)
    logger.info(f"Wrote {filename}.")
