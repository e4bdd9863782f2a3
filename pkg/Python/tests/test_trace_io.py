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
import math
import h5py
import numpy as np
import pytest
from skirental.experts import BuyExpertPanel, SkiExpertPanel
from skirental.learner import LearnerConfig, run
from skirental.trace_io import extract_item, find_item, load_trace, save_trace, save_traces


@pytest.fixture
def trace():
    config = LearnerConfig(20, BuyExpertPanel([1.0, 10.0], 50.0, (200, 300)), SkiExpertPanel([1.0, 50.0, 100.0]),
                           (150, 400), math.log(1.5))
    return run(config, master_seed=2 ** 63 + 5)


def test_save_and_load(tmp_path, trace):
    path = str(tmp_path / "trace.h5")
    save_trace(path, trace)
    loaded = load_trace(path)
    assert loaded.best_expert == trace.best_expert
    assert loaded.config_fingerprint == trace.config_fingerprint
    assert loaded.master_seed == trace.master_seed
    np.testing.assert_array_equal(loaded.cumulative_regret, trace.cumulative_regret)
    np.testing.assert_array_equal(loaded.regret_b, trace.regret_b)
    assert len(loaded.records) == 20
    for original, restored in zip(trace.records, loaded.records):
        assert restored.t == original.t
        assert restored.instance == original.instance
        assert restored.b_s == original.b_s
        np.testing.assert_array_equal(restored.hindsight_loss_vector, original.hindsight_loss_vector)
        np.testing.assert_array_equal(restored.loss_vector, original.loss_vector)
        np.testing.assert_array_equal(restored.ski_predictions, original.ski_predictions)
    assert loaded.buy_state is None


def test_several_traces_and_exact_dataset_names(tmp_path, trace):
    path = str(tmp_path / "traces.h5")
    save_traces(path, {"config-0": trace, "config-1": trace})
    with h5py.File(path, "r") as file:
        # "loss_vector" must not match "hindsight_loss_vector".
        np.testing.assert_array_equal(extract_item(file["config-1"], "loss_vector"),
                                      np.array([record.loss_vector for record in trace.records]))
        with pytest.raises(KeyError):
            extract_item(file["config-0"], "missing")
    assert load_trace(path, "config-1").best_expert == trace.best_expert


def test_find_item():
    assert find_item("config-0/b_s", "b_s") == "config-0/b_s"
    assert find_item("config-0/b_s", "s") is None
    assert find_item("config-0/hindsight_loss_vector", "loss_vector") is None
