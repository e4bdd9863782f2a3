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
Configuration of the experiments.

A configuration is a single JSON object:

    {
      "kind": "compare" | "regret",
      "master_seed": 0,
      "output_dir": "output",
      "loss_mode": "expected" | "sampled",
      "threads": 1,
      "chart": false,
      "compare": {"buy_cost": 100, "season_factor": 4, "sigma_grid": [...], "lambdas": [...], "trials": 10000,
                  "algorithms": ["cost_robust", "prediction_randomized", "break_even"]},
      "regret": [{"label": "default", "horizon": 5000, "m": 5, "n": 5, "b_range": [200, 700],
                  "x_range": [200, 700], "gamma_range": [1, 20], "eta_range": [1, 100], "noise_bound": 50,
                  "lam": 0.405..., "seeds": 100, "ski_rate": null, "buy_rate_scale": null,
                  "scale_rates_by_loss_bound": false}],
      "sweep": null | "lambda" | "ski_experts" | "buy_experts"
    }

Every key is optional and defaults to the values of the dataclasses below. Unknown keys are rejected.
"""
import dataclasses
import hashlib
import json
import logging
import math
from dataclasses import dataclass, field, replace
from typing import Any, Dict, Optional, Tuple, Union, get_args, get_origin, get_type_hints
from .streams import check_seed

logger = logging.getLogger(__name__)

KINDS = ("compare", "regret")
ALGORITHMS = ("cost_robust", "prediction_randomized", "break_even")
SWEEPS = ("lambda", "ski_experts", "buy_experts")


class ConfigError(ValueError):
    """Raised for unknown keys, wrong types and invalid values in a configuration; the message names the key."""


def _default_sigma_grid() -> Tuple[float, ...]:
    return tuple(2.5 * i for i in range(21))


@dataclass(frozen=True)
class CompareScenario(object):
    """
    Competitive-ratio comparison of the buy-day rules on single ski seasons.

    Attributes
    ----------
    buy_cost : int
        The buy cost b.
    season_factor : int
        The season length is drawn uniformly from 1, ..., season_factor * b.
    sigma_grid : Tuple[float, ...]
        The standard deviations of the prediction error y - x.
    lambdas : Tuple[float, ...]
        The trade-off parameters.
    trials : int
        The number of independent seasons per standard deviation.
    algorithms : Tuple[str, ...]
        The compared buy-day rules.
    """
    buy_cost: int = 100
    season_factor: int = 4
    sigma_grid: Tuple[float, ...] = field(default_factory=_default_sigma_grid)
    lambdas: Tuple[float, ...] = (1.0, math.log(1.5))
    trials: int = 10000
    algorithms: Tuple[str, ...] = ALGORITHMS

    def validate(self) -> None:
        if self.buy_cost < 2:
            raise ConfigError(f"compare.buy_cost must be at least 2, got {self.buy_cost}.")
        if self.season_factor < 1:
            raise ConfigError(f"compare.season_factor must be positive, got {self.season_factor}.")
        if not self.sigma_grid or any(sigma < 0.0 for sigma in self.sigma_grid):
            raise ConfigError("compare.sigma_grid must be a non-empty list of non-negative values.")
        if not self.lambdas or any(not 0.0 < lam <= 1.0 or lam * self.buy_cost < 1.0 for lam in self.lambdas):
            raise ConfigError(f"compare.lambdas must lie in (0, 1] with lambda * buy_cost >= 1, got {self.lambdas}.")
        if self.trials < 1:
            raise ConfigError(f"compare.trials must be positive, got {self.trials}.")
        unknown = [algorithm for algorithm in self.algorithms if algorithm not in ALGORITHMS]
        if not self.algorithms or unknown:
            raise ConfigError(f"compare.algorithms must be a non-empty subset of {ALGORITHMS}, got {unknown}.")


@dataclass(frozen=True)
class RegretScenario(object):
    """
    One configuration of the sequential learner whose regret is averaged over several seeds.

    Attributes
    ----------
    label : str
        The name of the configuration in logs and charts.
    horizon : int
        The number of rounds T.
    m : int
        The number of buy experts.
    n : int
        The number of ski experts.
    b_range : Tuple[int, int]
        The range of the true buy costs.
    x_range : Tuple[int, int]
        The range of the true numbers of ski days.
    gamma_range : Tuple[float, float]
        The range of the buy-expert variances (spaced uniformly).
    eta_range : Tuple[float, float]
        The range of the ski-expert variances (spaced uniformly).
    noise_bound : float
        The truncation of the buy-expert noise.
    lam : float
        The trade-off parameter.
    seeds : int
        The number of independent runs.
    ski_rate : float or None
        Overrides the Constant-Hedge rate of the ski weights.
    buy_rate_scale : float or None
        Overrides the Decreasing-Hedge scale of the buy weights.
    scale_rates_by_loss_bound : bool
        Divide the default rates by the loss bounds.
    """
    label: str = "default"
    horizon: int = 5000
    m: int = 5
    n: int = 5
    b_range: Tuple[int, int] = (200, 700)
    x_range: Tuple[int, int] = (200, 700)
    gamma_range: Tuple[float, float] = (1.0, 20.0)
    eta_range: Tuple[float, float] = (1.0, 100.0)
    noise_bound: float = 50.0
    lam: float = math.log(1.5)
    seeds: int = 100
    ski_rate: Optional[float] = None
    buy_rate_scale: Optional[float] = None
    scale_rates_by_loss_bound: bool = False

    def validate(self) -> None:
        prefix = f"regret[{self.label}]"
        if self.horizon < 0:
            raise ConfigError(f"{prefix}.horizon must be non-negative, got {self.horizon}.")
        if self.m < 1 or self.n < 1:
            raise ConfigError(f"{prefix}.m and {prefix}.n must be positive, got {self.m} and {self.n}.")
        if len(self.b_range) != 2 or not 2 <= self.b_range[0] <= self.b_range[1]:
            raise ConfigError(f"{prefix}.b_range must be an interval starting at 2 or above, got {self.b_range}.")
        if len(self.x_range) != 2 or not 1 <= self.x_range[0] <= self.x_range[1]:
            raise ConfigError(f"{prefix}.x_range must be an interval starting at 1 or above, got {self.x_range}.")
        for name in ("gamma_range", "eta_range"):
            lo, hi = getattr(self, name)
            if not 0.0 < lo <= hi:
                raise ConfigError(f"{prefix}.{name} must be an interval of positive variances, got {(lo, hi)}.")
        if self.noise_bound < 0.0:
            raise ConfigError(f"{prefix}.noise_bound must be non-negative, got {self.noise_bound}.")
        if not 0.0 < self.lam <= 1.0:
            raise ConfigError(f"{prefix}.lam must lie in (0, 1], got {self.lam}.")
        if self.lam * (self.b_range[0] - self.noise_bound) < 1.0:
            raise ConfigError(f"{prefix}.lam is too small: lambda * (b_min - noise_bound) < 1 for {self.lam}.")
        if self.seeds < 1:
            raise ConfigError(f"{prefix}.seeds must be positive, got {self.seeds}.")
        for name in ("ski_rate", "buy_rate_scale"):
            value = getattr(self, name)
            if value is not None and value < 0.0:
                raise ConfigError(f"{prefix}.{name} must be non-negative, got {value}.")


@dataclass(frozen=True)
class Config(object):
    """
    Complete configuration of a command-line run.

    Attributes
    ----------
    kind : str
        The experiment ("compare" or "regret").
    master_seed : int
        The 64-bit master seed of all random streams.
    output_dir : str
        The directory of the output files.
    loss_mode : str
        The loss mode of the learner ("expected" or "sampled").
    threads : int
        The number of worker processes.
    chart : bool
        Whether to render charts next to the tables.
    compare : CompareScenario
        The comparison scenario.
    regret : Tuple[RegretScenario, ...]
        The learner configurations.
    sweep : str or None
        A preset that expands the first learner configuration into a parameter sweep.
    """
    kind: str = "compare"
    master_seed: int = 0
    output_dir: str = "output"
    loss_mode: str = "expected"
    threads: int = 1
    chart: bool = False
    compare: CompareScenario = field(default_factory=CompareScenario)
    regret: Tuple[RegretScenario, ...] = (RegretScenario(),)
    sweep: Optional[str] = None

    def validate(self) -> None:
        if self.kind not in KINDS:
            raise ConfigError(f"kind must be one of {KINDS}, got {self.kind}.")
        try:
            check_seed(self.master_seed)
        except ValueError as error:
            raise ConfigError(f"master_seed: {error}") from error
        if self.loss_mode not in ("expected", "sampled"):
            raise ConfigError(f"loss_mode must be 'expected' or 'sampled', got {self.loss_mode}.")
        if self.threads < 1:
            raise ConfigError(f"threads must be positive, got {self.threads}.")
        if self.sweep is not None and self.sweep not in SWEEPS:
            raise ConfigError(f"sweep must be one of {SWEEPS}, got {self.sweep}.")
        if not self.regret:
            raise ConfigError("regret must contain at least one configuration.")
        self.compare.validate()
        for scenario in self.scenarios():
            scenario.validate()

    def scenarios(self) -> Tuple[RegretScenario, ...]:
        """Return the learner configurations, expanded by the sweep preset if one is set."""
        if self.sweep is None:
            return self.regret
        return sweep_scenarios(self.sweep, self.regret[0])

    def to_dict(self) -> Dict[str, Any]:
        """Return the configuration as a JSON-compatible dictionary."""
        return {"kind": self.kind, "master_seed": self.master_seed, "output_dir": self.output_dir,
                "loss_mode": self.loss_mode, "threads": self.threads, "chart": self.chart,
                "compare": _scenario_to_dict(self.compare),
                "regret": [_scenario_to_dict(scenario) for scenario in self.regret], "sweep": self.sweep}

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "Config":
        """
        Build and validate a configuration from a dictionary.

        Parameters
        ----------
        data : Dict[str, Any]
            The parsed JSON object.

        Returns
        -------
        Config
            The configuration.

        Raises
        ------
        ConfigError
            If a key is unknown or a value has the wrong type or is invalid.
        """
        if not isinstance(data, dict):
            raise ConfigError("The configuration must be a JSON object.")
        _check_keys(data, cls, "")
        values = {}
        for key, value in data.items():
            if key == "compare":
                values[key] = _scenario_from_dict(CompareScenario, value, "compare.")
            elif key == "regret":
                if not isinstance(value, list):
                    raise ConfigError("regret must be a list of objects.")
                values[key] = tuple(_scenario_from_dict(RegretScenario, item, f"regret[{index}].")
                                    for index, item in enumerate(value))
            else:
                values[key] = _convert(key, value, _field_types(cls)[key])
        config = cls(**values)
        config.validate()
        return config

    def fingerprint(self) -> str:
        """Return the first 16 hex digits of the SHA-256 of the canonical JSON form."""
        canonical = json.dumps(self.to_dict(), sort_keys=True)
        return hashlib.sha256(canonical.encode("utf-8")).hexdigest()[:16]


def _field_types(cls: type) -> Dict[str, Any]:
    return get_type_hints(cls)


def _check_keys(data: Dict[str, Any], cls: type, prefix: str) -> None:
    known = _field_types(cls)
    for key in data:
        if key not in known:
            raise ConfigError(f"Unknown configuration key '{prefix}{key}'.")


def _convert(key: str, value: Any, annotation: Any) -> Any:
    """Convert a JSON value to the type of the dataclass field, or raise a ConfigError naming the key."""
    origin = get_origin(annotation)
    if origin is Union:
        if value is None:
            return None
        annotation = next(arg for arg in get_args(annotation) if arg is not type(None))
        return _convert(key, value, annotation)
    if value is None:
        raise ConfigError(f"'{key}' must not be null.")
    if origin is tuple:
        if not isinstance(value, list):
            raise ConfigError(f"'{key}' must be a list, got {value!r}.")
        element = get_args(annotation)[0]
        return tuple(_convert(key, item, element) for item in value)
    if annotation is bool:
        if not isinstance(value, bool):
            raise ConfigError(f"'{key}' must be a boolean, got {value!r}.")
        return value
    if annotation is str:
        if not isinstance(value, str):
            raise ConfigError(f"'{key}' must be a string, got {value!r}.")
        return value
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"'{key}' must be a number, got {value!r}.")
    if annotation is int:
        if not math.isfinite(value) or int(value) != value:
            raise ConfigError(f"'{key}' must be an integer, got {value!r}.")
        return int(value)
    return float(value)


def _scenario_to_dict(scenario: Any) -> Dict[str, Any]:
    return {key: list(value) if isinstance(value, tuple) else value
            for key, value in dataclasses.asdict(scenario).items()}


def _scenario_from_dict(cls: type, data: Any, prefix: str) -> Any:
    if not isinstance(data, dict):
        raise ConfigError(f"'{prefix[:-1]}' must be a JSON object.")
    _check_keys(data, cls, prefix)
    types = _field_types(cls)
    return cls(**{key: _convert(prefix + key, value, types[key]) for key, value in data.items()})


def sweep_scenarios(name: str, base: RegretScenario) -> Tuple[RegretScenario, ...]:
    """
    Expand a learner configuration into one of the parameter sweeps.

    "lambda" varies lambda over 0.1, ln 1.5 and 1 for the ski-expert variance ranges [1, 100] and [100, 150].
    "ski_experts" varies n over 2, 5 and 10, "buy_experts" varies m over 2, 5 and 10, both with the ski-expert
    variance range [1, 50].

    Parameters
    ----------
    name : str
        The name of the sweep.
    base : RegretScenario
        The configuration that provides all other parameters.

    Returns
    -------
    Tuple[RegretScenario, ...]
        The configurations of the sweep.

    Raises
    ------
    ConfigError
        If the name is unknown.
    """
    if name == "lambda":
        return tuple(replace(base, label=f"lambda={lam_label},eta={eta[0]:g}-{eta[1]:g}", lam=lam, eta_range=eta)
                     for eta in ((1.0, 100.0), (100.0, 150.0))
                     for lam_label, lam in (("0.1", 0.1), ("ln1.5", math.log(1.5)), ("1", 1.0)))
    if name == "ski_experts":
        return tuple(replace(base, label=f"n={n}", n=n, eta_range=(1.0, 50.0)) for n in (2, 5, 10))
    if name == "buy_experts":
        return tuple(replace(base, label=f"m={m}", m=m, eta_range=(1.0, 50.0)) for m in (2, 5, 10))
    raise ConfigError(f"sweep must be one of {SWEEPS}, got {name}.")


def load_config(path: Optional[str]) -> Config:
    """
    Read the configuration file (or return the default configuration if the path is None).

    Raises
    ------
    ConfigError
        If the file cannot be read, is not valid JSON, or contains invalid entries.
    """
    if path is None:
        return Config()
    try:
        with open(path, "r", encoding="utf-8") as file:
            data = json.load(file)
    except OSError as error:
        raise ConfigError(f"Cannot read the configuration file {path}: {error}") from error
    except json.JSONDecodeError as error:
        raise ConfigError(f"The configuration file {path} is not valid JSON: {error}") from error
    logger.debug(f"Read configuration file {path}.")
    return Config.from_dict(data)


def apply_overrides(config: Config, **overrides: Any) -> Config:
    """
    Return the configuration with the given command-line values replacing the file values.

    Recognized keywords are kind, master_seed, output_dir, trials, threads, loss_mode, chart, horizon, seeds and
    sweep; None values are ignored.
    """
    overrides = {key: value for key, value in overrides.items() if value is not None}
    top_level = {key: overrides.pop(key) for key in ("kind", "master_seed", "output_dir", "threads", "loss_mode",
                                                     "chart", "sweep") if key in overrides}
    compare = config.compare
    if "trials" in overrides:
        compare = replace(compare, trials=overrides.pop("trials"))
    scenario_overrides = {key: overrides.pop(key) for key in ("horizon", "seeds") if key in overrides}
    if overrides:
        raise ConfigError(f"Unknown override(s) {sorted(overrides)}.")
    regret = tuple(replace(scenario, **scenario_overrides) for scenario in config.regret)
    config = replace(config, compare=compare, regret=regret, **top_level)
    config.validate()
    return config
