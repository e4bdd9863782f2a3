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
import csv
import json
import logging
import math
import os
import pytest
from skirental.cli import COMPARE_HEADER, REGRET_HEADER, main
from skirental.trace_io import load_trace


def read_csv(filename):
    with open(filename, "r", encoding="utf-8", newline="") as csv_file:
        csv_reader = csv.reader(csv_file, delimiter=",")
        return [row for row in csv_reader]


def printed_values(text):
    values = {}
    for line in text.splitlines():
        name, value = line.split(": ", 1)
        values[name] = value
    return values


def test_compare(tmp_path, capsys):
    out = str(tmp_path / "out")
    assert main(["-q", "compare", "--trials", "10", "--out", out]) == 0
    rows = read_csv(os.path.join(out, "compare.csv"))
    assert tuple(rows[0]) == COMPARE_HEADER
    assert len(rows) == 1 + 21 * 3 * 2
    assert all(row[5] == "10" for row in rows[1:])
    values = printed_values(capsys.readouterr().out)
    assert float(values["robustness_ratio(lambda=1.0)"]) == pytest.approx(1.01 / (1.0 - math.exp(-1.0)))
    assert float(values[f"consistency_ratio(lambda={math.log(1.5)})"]) == pytest.approx(3.0 * math.log(1.5))


def test_compare_is_reproducible(tmp_path):
    contents = []
    for name in ("first", "second"):
        out = str(tmp_path / name)
        assert main(["-q", "compare", "--trials", "10", "--seed", "17", "--out", out]) == 0
        with open(os.path.join(out, "compare.csv"), "rb") as file:
            contents.append(file.read())
    assert contents[0] == contents[1]
    assert b"\r\n" not in contents[0]


def test_compare_chart(tmp_path):
    out = str(tmp_path)
    assert main(["-q", "compare", "--trials", "10", "--chart", "--out", out]) == 0
    assert os.path.getsize(os.path.join(out, "compare.svg")) > 0


def test_regret(tmp_path, capsys, caplog):
    out = str(tmp_path)
    with caplog.at_level(logging.WARNING):
        assert main(["regret", "--horizon", "10", "--seeds", "1", "--out", out, "--traces"]) == 0
    rows = read_csv(os.path.join(out, "regret.csv"))
    assert tuple(rows[0]) == REGRET_HEADER
    assert len(rows) == 11
    assert [row[1] for row in rows[1:]] == [str(t) for t in range(1, 11)]
    for row in rows[1:]:
        assert float(row[2]) == float(row[3]) + float(row[4])
    values = printed_values(capsys.readouterr().out)
    assert float(values["loss_bound[0]"]) == 700.0
    assert "regret_bound[0]" not in values
    assert float(values["final_loss[0]"].split(" +/- ")[0]) >= 0.0
    assert "Regret bound regime not satisfied" in caplog.text
    trace = load_trace(os.path.join(out, "traces.h5"), "config-0")
    assert len(trace.records) == 10


def test_regret_sweep_preset(tmp_path):
    out = str(tmp_path)
    assert main(["-q", "regret", "--horizon", "3", "--seeds", "1", "--sweep", "ski_experts", "--out", out,
                 "--chart"]) == 0
    rows = read_csv(os.path.join(out, "regret.csv"))
    assert sorted({row[0] for row in rows[1:]}) == ["0", "1", "2"]
    assert os.path.exists(os.path.join(out, "regret.svg"))


def test_regret_is_reproducible_with_processes(tmp_path):
    contents = []
    for name, threads in (("serial", "1"), ("parallel", "2")):
        out = str(tmp_path / name)
        assert main(["-q", "regret", "--horizon", "5", "--seeds", "3", "--seed", "4", "--threads", threads,
                     "--loss-mode", "sampled", "--out", out]) == 0
        with open(os.path.join(out, "regret.csv"), "rb") as file:
            contents.append(file.read())
    assert contents[0] == contents[1]


def test_config_file(tmp_path):
    config = tmp_path / "config.json"
    config.write_text(json.dumps({"compare": {"sigma_grid": [0.0, 5.0], "trials": 4}}), encoding="utf-8")
    out = str(tmp_path / "out")
    assert main(["-q", "compare", "--config", str(config), "--out", out]) == 0
    assert len(read_csv(os.path.join(out, "compare.csv"))) == 1 + 2 * 3 * 2


def test_bounds(capsys):
    assert main(["bounds", "--lam", "1"]) == 0
    values = printed_values(capsys.readouterr().out)
    assert float(values["robustness_ratio"]) == pytest.approx(1.01 / (1.0 - math.exp(-1.0)))
    assert float(values["epsilon"]) == 0.0
    assert "t_star" not in values
    assert main(["bounds"]) == 0
    values = printed_values(capsys.readouterr().out)
    assert float(values["epsilon"]) == pytest.approx(0.15, abs=0.005)
    assert int(values["t_star"]) >= 2
    assert float(values["competitive_ratio_bound"]) == pytest.approx(3.0 * math.log(1.5))


def test_bounds_errors(caplog):
    with caplog.at_level(logging.ERROR):
        assert main(["bounds", "--gap", "0"]) == 1
    assert "sub-optimality gap must be positive" in caplog.text
    assert main(["bounds", "--lam", "0.001"]) == 1


def test_invalid_configuration(tmp_path):
    config = tmp_path / "config.json"
    config.write_text(json.dumps({"compare": {"trials": 0}}), encoding="utf-8")
    assert main(["-q", "compare", "--config", str(config)]) == 2
    assert main(["-q", "compare", "--config", str(tmp_path / "missing.json")]) == 2
    assert main(["-q", "regret", "--seeds", "0"]) == 2


def test_unwritable_output(tmp_path):
    blocker = tmp_path / "file"
    blocker.write_text("", encoding="utf-8")
    assert main(["-q", "compare", "--trials", "2", "--out", str(blocker)]) == 1
