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
Functions involved in storing traces of the sequential learner in a hdf5 file and extracting them again.

Every trace is stored in its own group. The per-round quantities are stored as datasets with one row per round; the
best ski expert, the configuration fingerprint and the master seed are attributes of the group.
"""
import logging
from functools import partial
from typing import Any, Dict, Union
import h5py
import numpy as np
from .learner import RoundRecord, RunTrace
from .ski_core import SkiRentalInstance

logger = logging.getLogger(__name__)

_ROUND_FIELDS = ("buy_predictions", "alpha", "b_s", "ski_predictions", "beta", "loss_vector", "hindsight_loss_vector",
                 "mixture_loss", "buy_losses", "normalized_buy_losses")


def find_item(name: str, target: str) -> Union[str, None]:
    """
    Visitor for h5py.Group.visit() that stops at the first member called exactly target.

    Only the last path component is compared, so "loss_vector" does not match "hindsight_loss_vector".
    """
    if name.split("/")[-1] == target:
        return name


def extract_item(group: h5py.Group, target: str) -> Any:
    """
    Return the stored values of the trace dataset called target inside a trace group (or a whole file).

    Raises
    ------
    KeyError
        If no member of the group carries that name.
    """
    path = group.visit(partial(find_item, target=target))
    if path is None:
        raise KeyError(f"The hdf5 group {group.name} contains no dataset {target}.")
    return group[path][()]


def _write_trace(group: h5py.Group, trace: RunTrace) -> None:
    records = trace.records
    group.create_dataset("buy_cost", data=np.array([r.instance.buy_cost for r in records], dtype=np.int64))
    group.create_dataset("season_length", data=np.array([r.instance.season_length for r in records], dtype=np.int64))
    for name in _ROUND_FIELDS:
        group.create_dataset(name, data=np.array([getattr(r, name) for r in records]))
    group.create_dataset("cumulative_regret", data=trace.cumulative_regret)
    group.create_dataset("regret_x", data=trace.regret_x)
    group.create_dataset("regret_b", data=trace.regret_b)
    group.attrs["best_expert"] = trace.best_expert
    group.attrs["config_fingerprint"] = trace.config_fingerprint
    group.attrs["master_seed"] = np.uint64(trace.master_seed)


def _read_trace(group: h5py.Group) -> RunTrace:
    buy_costs = extract_item(group, "buy_cost")
    season_lengths = extract_item(group, "season_length")
    columns = {name: extract_item(group, name) for name in _ROUND_FIELDS}
    records = []
    for t, (b, x) in enumerate(zip(buy_costs, season_lengths), start=1):
        values = {name: columns[name][t - 1] for name in _ROUND_FIELDS}
        values["b_s"] = float(values["b_s"])
        values["mixture_loss"] = float(values["mixture_loss"])
        records.append(RoundRecord(t=t, instance=SkiRentalInstance(int(b), int(x)), **values))
    fingerprint = group.attrs["config_fingerprint"]
    if isinstance(fingerprint, bytes):
        fingerprint = fingerprint.decode("utf-8")
    return RunTrace(tuple(records), extract_item(group, "cumulative_regret"), extract_item(group, "regret_x"),
                    extract_item(group, "regret_b"), int(group.attrs["best_expert"]), str(fingerprint),
                    int(group.attrs["master_seed"]))


def save_trace(path: str, trace: RunTrace, name: str = "trace") -> None:
    """Store a single trace under the given group name (the file is overwritten)."""
    save_traces(path, {name: trace})


def save_traces(path: str, traces: Dict[str, RunTrace]) -> None:
    """
    Store several traces in one hdf5 file, one group per trace (the file is overwritten).

    Parameters
    ----------
    path : str
        The filename.
    traces : Dict[str, RunTrace]
        The traces by group name.
    """
    with h5py.File(path, "w") as file:
        for name, trace in traces.items():
            _write_trace(file.create_group(name), trace)
    logger.info(f"Wrote {len(traces)} trace(s) to {path}.")


def load_trace(path: str, name: str = "trace") -> RunTrace:
    """
    Extract a trace from a hdf5 file.

    The final weight states are not stored, so buy_state and ski_state of the returned trace are None.

    Parameters
    ----------
    path : str
        The filename.
    name : str, optional
        The group name of the trace.

    Returns
    -------
    RunTrace
        The trace.
    """
    with h5py.File(path, "r") as file:
        return _read_trace(file[name])
