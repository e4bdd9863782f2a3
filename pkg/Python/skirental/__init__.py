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
Simulations of the sequential ski-rental problem with buy-cost experts and ski-day experts.

The modules are:
    ski_core: the cost-robust buy-day rule, costs, losses and competitive-ratio bounds of a single instance.
    hedge: exponential-weights forecasters with constant and decreasing learning rates.
    experts: simulated buy-cost and ski-day expert panels.
    learner: the sequential learner, its regret decomposition and the regret bounds.
    experiments: the competitive-ratio comparison and the regret sweep.
    config, streams, statistics, trace_io, chart, cli: configuration, random streams, error bars, hdf5 traces,
    charts and the command-line interface.
"""
