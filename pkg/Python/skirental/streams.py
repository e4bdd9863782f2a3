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
Deterministic random streams.

Every stream is derived from the master seed and a spawn key (e.g. scenario id and trial id) so that independent
trials can be run in any order or in parallel and still reproduce the same numbers.
"""
import numpy as np

MAX_SEED = 2 ** 64 - 1

# Leading spawn-key component of every experiment kind. Single learner runs without a key use (0,).
COMPARE_STREAM = 1
REGRET_STREAM = 2


def check_seed(master_seed: int) -> int:
    """Return the master seed if it is a 64-bit unsigned integer, raise a ValueError otherwise."""
    if isinstance(master_seed, bool) or int(master_seed) != master_seed or not 0 <= master_seed <= MAX_SEED:
        raise ValueError(f"The master seed must be a 64-bit unsigned integer, got {master_seed}.")
    return int(master_seed)


def generator(master_seed: int, *key: int) -> np.random.Generator:
    """
    Return the PCG64 generator of the stream with the given spawn key.

    Parameters
    ----------
    master_seed : int
        The master seed.
    *key : int
        The spawn key identifying the stream.

    Returns
    -------
    np.random.Generator
        The generator.
    """
    sequence = np.random.SeedSequence(entropy=check_seed(master_seed), spawn_key=tuple(int(k) for k in key))
    return np.random.Generator(np.random.PCG64(sequence))
