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
Executable entry point of the ski-rental simulations.

Usage (from the Python directory):

    python3 -m skirental compare [--config FILE] [--seed SEED] [--out DIR] [--trials N] [--threads N] [--chart]
    python3 -m skirental regret [--config FILE] [--seed SEED] [--out DIR] [--horizon T] [--seeds N] [--sweep NAME]
                                [--loss-mode {expected,sampled}] [--threads N] [--chart] [--traces]
    python3 -m skirental bounds [--b B] [--lam LAMBDA] [--eta ETA] [--opt OPT] [--delta DELTA] [--epsilon EPSILON]
                                [--gap GAP] [--m M] [--n N] [--c C] [--horizon T]

The tables are written as csv files into the output directory. Bound values and summaries are printed as
"name: value" lines on stdout; log messages go to stderr.
"""
import argparse
import csv
import logging
import math
import os
import sys
from typing import List, Optional, Sequence
from . import experiments, learner
from .streams import REGRET_STREAM
from .config import Config, ConfigError, RegretScenario, SWEEPS, apply_overrides, load_config
from .ski_core import competitive_ratio_bound, consistency_ratio, robustness_radius, robustness_ratio
from .statistics import mean_and_standard_error

logger = logging.getLogger(__name__)

COMPARE_HEADER = ("sigma", "algorithm", "lambda", "mean_cr", "stderr", "trials")
REGRET_HEADER = ("config_id", "t", "regret", "regret_x", "regret_b")

# Failure probability and variance constant of the convergence round t* used for the regret-bound overlay.
OVERLAY_DELTA = 0.1
OVERLAY_VARIANCE_CONSTANT = 2.0


def _number(value: float) -> str:
    """Locale-independent shortest representation of a number."""
    return repr(float(value))


def write_csv(filename: str, header: Sequence[str], rows: Sequence[Sequence[object]]) -> None:
    """Write a csv file with a header, "\\n" line endings and UTF-8 encoding."""
    with open(filename, "w", newline="", encoding="utf-8") as csv_file:
        csv_writer = csv.writer(csv_file, delimiter=",", lineterminator="\n")
        csv_writer.writerow(header)
        csv_writer.writerows(rows)
    logger.info(f"Wrote {filename}.")


def cmd_compare(config: Config) -> int:
    """
    Run the competitive-ratio comparison, write compare.csv (and compare.svg), and print the bounds of the
    cost-robust rule.

    Returns
    -------
    int
        The exit status.
    """
    scenario = config.compare
    rows = experiments.run_compare(scenario, config.master_seed, config.threads)
    write_csv(os.path.join(config.output_dir, "compare.csv"), COMPARE_HEADER,
              [(_number(row.sigma), row.algorithm, _number(row.lam), _number(row.mean_cr), _number(row.stderr),
                str(row.trials)) for row in rows])
    if config.chart:
        from .chart import plot_compare
        plot_compare(rows, scenario.buy_cost, os.path.join(config.output_dir, "compare.svg"))
    for lam in scenario.lambdas:
        print(f"robustness_ratio(lambda={lam}): {robustness_ratio(scenario.buy_cost, lam)}")
        print(f"consistency_ratio(lambda={lam}): {consistency_ratio(lam)}")
    return 0


def regret_overlay(scenario: RegretScenario, config: learner.LearnerConfig) -> Optional[float]:
    """
    Return the cumulative regret bound of a configuration, or None (with a warning) if the configuration is outside of
    the regime of the bound.

    The regime requires at least two buy experts, a positive sub-optimality gap of the configured variances, a positive
    robustness radius for every buy cost of the range, and a horizon beyond the convergence round t*.
    """
    reason = None
    if config.buy_panel.m < 2:
        reason = "fewer than two buy experts"
    else:
        _, gap = config.buy_panel.gaps()
        b_lo, b_hi = config.buy_panel.ground_truth_range
        epsilon = min(robustness_radius(b, scenario.lam).epsilon for b in range(b_lo, b_hi + 1))
        if gap <= 0.0:
            reason = "the sub-optimality gap is zero"
        elif epsilon <= 0.0:
            reason = "the robustness radius vanishes for some buy cost"
        elif scenario.horizon < 1:
            reason = "the horizon is empty"
        else:
            rounds = learner.t_star(OVERLAY_DELTA, epsilon, gap, config.buy_panel.m, OVERLAY_VARIANCE_CONSTANT,
                                    scenario.horizon)
            if scenario.horizon <= rounds:
                reason = f"the horizon {scenario.horizon} does not exceed t* = {rounds}"
            else:
                return learner.regret_bound(config.loss_bound, scenario.horizon, config.ski_panel.n, rounds)
    logger.warning(f"Regret bound regime not satisfied: {reason}; bound overlay omitted")
    return None


def cmd_regret(config: Config, traces: bool = False) -> int:
    """
    Run the regret sweep, write regret.csv (and regret.svg, traces.h5), and print the regret summaries and bounds.

    Returns
    -------
    int
        The exit status.
    """
    scenarios = config.scenarios()
    summaries = experiments.run_regret_sweep(scenarios, config.master_seed, config.loss_mode, config.threads)
    rows = []
    for summary in summaries:
        for t in range(len(summary.regret)):
            rows.append((str(summary.config_id), str(t + 1), _number(summary.regret[t]),
                         _number(summary.regret_x[t]), _number(summary.regret_b[t])))
    write_csv(os.path.join(config.output_dir, "regret.csv"), REGRET_HEADER, rows)
    if config.chart:
        from .chart import plot_regret
        plot_regret(summaries, os.path.join(config.output_dir, "regret.svg"))
    for summary in summaries:
        scenario = summary.scenario
        learner_config = experiments.learner_config(scenario, config.loss_mode)
        mean, stderr = mean_and_standard_error(summary.final_regrets)
        print(f"final_regret[{summary.config_id}]: {mean} +/- {stderr}")
        mean, stderr = mean_and_standard_error(summary.final_losses)
        print(f"final_loss[{summary.config_id}]: {mean} +/- {stderr}")
        print(f"loss_bound[{summary.config_id}]: {learner_config.loss_bound}")
        print(f"max_loss[{summary.config_id}]: {summary.max_loss}")
        if summary.max_loss > 0.0 and scenario.horizon > 0:
            print(f"regret_x_bound[{summary.config_id}]: "
                  f"{learner.regret_x_bound(summary.max_loss, scenario.horizon, scenario.n)}")
        bound = regret_overlay(scenario, learner_config)
        if bound is not None:
            print(f"regret_bound[{summary.config_id}]: {bound}")
    if traces:
        from .trace_io import save_traces
        runs = {f"config-{config_id}": learner.run(experiments.learner_config(scenario, config.loss_mode),
                                                   config.master_seed, (REGRET_STREAM, config_id, 0))
                for config_id, scenario in enumerate(scenarios)}
        save_traces(os.path.join(config.output_dir, "traces.h5"), runs)
    return 0


def cmd_bounds(b: int, lam: float, eta: float, opt: int, delta: float, epsilon: Optional[float], gap: float, m: int,
               n: int, c: float, horizon: int) -> int:
    """
    Print the robustness radius, the competitive-ratio bounds, the convergence round t* and the regret bound.

    Parameters
    ----------
    b : int
        The buy cost.
    lam : float
        The trade-off parameter.
    eta : float
        The prediction error.
    opt : int
        The optimal offline cost.
    delta : float
        The failure probability of t*.
    epsilon : float or None
        The robustness radius used for t* (the radius of b if None).
    gap : float
        The sub-optimality gap of the buy experts.
    m : int
        The number of buy experts.
    n : int
        The number of ski experts.
    c : float
        The variance constant of t*.
    horizon : int
        The horizon.

    Returns
    -------
    int
        The exit status.

    Raises
    ------
    ValueError
        If an argument leaves its domain.
    """
    if gap <= 0.0:
        raise ValueError("sub-optimality gap must be positive")
    radius = robustness_radius(b, lam).epsilon
    bound = competitive_ratio_bound(b, lam, eta, opt)
    print(f"epsilon: {radius}")
    print(f"robustness_ratio: {robustness_ratio(b, lam)}")
    print(f"consistency_bound: {consistency_ratio(lam) * (1.0 + eta / opt)}")
    print(f"competitive_ratio_bound: {bound}")
    epsilon = radius if epsilon is None else epsilon
    if epsilon <= 0.0:
        logger.warning("The robustness radius is zero; t* and the regret bound are undefined.")
        return 0
    rounds = learner.t_star(delta, epsilon, gap, m, c, horizon)
    print(f"t_star: {rounds}")
    print(f"regret_bound: {learner.regret_bound(learner.loss_bound(b), horizon, n, rounds)}")
    return 0


def _add_run_arguments(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", help="JSON configuration file (default: built-in defaults)")
    parser.add_argument("--seed", help="64-bit master seed", type=int)
    parser.add_argument("--out", help="output directory")
    parser.add_argument("--threads", help="number of worker processes", type=int)
    parser.add_argument("--loss-mode", choices=["expected", "sampled"], help="loss mode of the learner")
    parser.add_argument("--chart", action="store_true", default=None, help="also render a svg chart")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="skirental",
                                     description="Simulations of the sequential ski-rental problem.")
    parser.add_argument("-v", "--verbose", action="store_true", help="print debug messages")
    parser.add_argument("-q", "--quiet", action="store_true", help="only print warnings and errors")
    subparsers = parser.add_subparsers(dest="command", required=True)

    compare = subparsers.add_parser("compare", help="compare the competitive ratios of the buy-day rules")
    _add_run_arguments(compare)
    compare.add_argument("--trials", help="number of trials per standard deviation", type=int)

    regret = subparsers.add_parser("regret", help="average the regret of the sequential learner over seeds")
    _add_run_arguments(regret)
    regret.add_argument("--horizon", help="number of rounds", type=int)
    regret.add_argument("--seeds", help="number of seeds per configuration", type=int)
    regret.add_argument("--sweep", choices=SWEEPS, help="parameter sweep preset")
    regret.add_argument("--traces", action="store_true", help="also store the seed-0 traces in traces.h5")

    bounds = subparsers.add_parser("bounds", help="evaluate the bounds")
    bounds.add_argument("--b", help="buy cost (default=100)", default=100, type=int)
    bounds.add_argument("--lam", help="trade-off parameter (default=ln 1.5)", default=math.log(1.5), type=float)
    bounds.add_argument("--eta", help="prediction error (default=0)", default=0.0, type=float)
    bounds.add_argument("--opt", help="optimal offline cost (default=b)", type=int)
    bounds.add_argument("--delta", help="failure probability (default=0.1)", default=0.1, type=float)
    bounds.add_argument("--epsilon", help="robustness radius (default=radius of b)", type=float)
    bounds.add_argument("--gap", help="sub-optimality gap (default=5)", default=5.0, type=float)
    bounds.add_argument("--m", help="number of buy experts (default=5)", default=5, type=int)
    bounds.add_argument("--n", help="number of ski experts (default=5)", default=5, type=int)
    bounds.add_argument("--c", help="variance constant (default=2)", default=2.0, type=float)
    bounds.add_argument("--horizon", help="number of rounds (default=10000)", default=10000, type=int)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    """
    Parse the command line, run the subcommand and return the exit status (0 on success, 2 for configuration errors,
    1 for other errors).
    """
    args = build_parser().parse_args(argv)
    level = logging.DEBUG if args.verbose else logging.WARNING if args.quiet else logging.INFO
    logging.basicConfig(level=level, format="%(asctime)s %(levelname)s %(name)s: %(message)s", stream=sys.stderr)

    if args.command == "bounds":
        try:
            return cmd_bounds(args.b, args.lam, args.eta, args.b if args.opt is None else args.opt, args.delta,
                              args.epsilon, args.gap, args.m, args.n, args.c, args.horizon)
        except ValueError as error:
            logger.error(str(error))
            return 1

    try:
        config = load_config(args.config)
        overrides = dict(kind=args.command, master_seed=args.seed, output_dir=args.out, threads=args.threads,
                         loss_mode=args.loss_mode, chart=args.chart)
        if args.command == "compare":
            overrides["trials"] = args.trials
        else:
            overrides.update(horizon=args.horizon, seeds=args.seeds, sweep=args.sweep)
        config = apply_overrides(config, **overrides)
    except ConfigError as error:
        logger.error(f"Invalid configuration: {error}")
        return 2
    logger.info(f"Configuration {config.fingerprint()} with master seed {config.master_seed}.")

    try:
        os.makedirs(config.output_dir, exist_ok=True)
        if args.command == "compare":
            return cmd_compare(config)
        return cmd_regret(config, args.traces)
    except OSError as error:
        logger.error(f"Cannot write the output: {error}")
        return 1
    except (ValueError, RuntimeError) as error:
        logger.error(str(error))
        return 1
